//! Linear-congruential random number generation and per-site streams.
//!
//! The generator is the classic recurrence `R(n) = (a*R(n-1) + b) mod N`
//! with a power-of-two modulus, so the reduction is a mask. Each lattice
//! site owns an independent stream seeded through an integer mixer, which
//! keeps whole-lattice passes reproducible and order-free.

use crate::error::{Error, Result};
use std::io::Write;

/// Constants of the recurrence `R(n) = (a*R(n-1) + b) mod N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcgParams {
    pub a: u64,
    pub b: u64,
    pub n_mod: u64,
}

impl LcgParams {
    /// Validated constructor. Requires a power-of-two modulus, `a % 8 == 5`
    /// and odd `b` (full-period conditions for power-of-two moduli).
    pub fn new(a: u64, b: u64, n_mod: u64) -> Result<Self> {
        if n_mod == 0 || !n_mod.is_power_of_two() {
            return Err(Error::InvalidLcgParams(format!(
                "modulus {n_mod} is not a power of two"
            )));
        }
        if a % 8 != 5 {
            return Err(Error::InvalidLcgParams(format!(
                "multiplier {a} must satisfy a mod 8 == 5"
            )));
        }
        if b % 2 != 1 {
            return Err(Error::InvalidLcgParams(format!(
                "increment {b} must be odd"
            )));
        }
        Ok(Self { a, b, n_mod })
    }

    /// Numerical Recipes constants over a 2^32 modulus.
    pub fn default_params() -> Self {
        Self {
            a: 1664525,
            b: 1013904223,
            n_mod: 1 << 32,
        }
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.n_mod - 1
    }
}

impl Default for LcgParams {
    fn default() -> Self {
        Self::default_params()
    }
}

/// One generator stream. The whole sequence is fixed by `(params, seed)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LcgState {
    pub params: LcgParams,
    state: u64,
}

impl LcgState {
    pub fn new(params: LcgParams, seed: u64) -> Self {
        Self {
            params,
            state: seed & params.mask(),
        }
    }

    /// Current value `R(n)`, always below the modulus.
    #[inline]
    pub fn state(&self) -> u64 {
        self.state
    }

    /// Advance once and return the new raw value in `[0, n_mod)`.
    #[inline]
    pub fn next_raw(&mut self) -> u64 {
        self.state = self
            .params
            .a
            .wrapping_mul(self.state)
            .wrapping_add(self.params.b)
            & self.params.mask();
        self.state
    }

    /// Advance once and map into `[0, 1)`.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        let raw = self.next_raw();
        raw as f64 / self.params.n_mod as f64
    }

    /// Map a raw value into `[0, 1)` by dividing by the modulus.
    /// The result is strictly below 1 and order-preserving.
    pub fn to_unit(&self, raw: u64) -> Result<f64> {
        if raw >= self.params.n_mod {
            return Err(Error::RawOutOfRange {
                raw,
                n_mod: self.params.n_mod,
            });
        }
        Ok(raw as f64 / self.params.n_mod as f64)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Per-site seed for stream `index` under `master_seed`.
///
/// For a fixed master seed this is a bijection of the site index on
/// `[0, n_mod)`: xor-shift and odd-multiply steps are invertible modulo a
/// power of two, so streams get pairwise distinct seeds for any count up
/// to the modulus. Raw consecutive seeds would start LCG streams in
/// nearly identical phases; the mixing decorrelates them.
pub fn site_seed(master_seed: u64, index: u64, params: &LcgParams) -> u64 {
    let mask = params.mask();
    let bits = params.n_mod.trailing_zeros();
    let shift = (bits / 2).max(1);
    let key = splitmix64(master_seed);
    let mut x = (index ^ key) & mask;
    const MULS: [u64; 3] = [0xFF51AFD7ED558CCD, 0xC4CEB9FE1A85EC53, 0x9E3779B97F4A7C15];
    for (round, m) in MULS.iter().enumerate() {
        x ^= x >> shift;
        x = x.wrapping_mul(*m) & mask;
        x ^= (key >> (8 * round as u32)) & mask;
    }
    x ^ (x >> shift)
}

/// One LCG stream per lattice site, row-major site order.
#[derive(Debug, Clone)]
pub struct StreamSet {
    pub master_seed: u64,
    pub params: LcgParams,
    streams: Vec<LcgState>,
}

impl StreamSet {
    /// Spawn `count` streams from a master seed. Reconstruction from
    /// `(params, master_seed, count)` is deterministic.
    pub fn spawn(master_seed: u64, count: usize, params: LcgParams) -> Result<Self> {
        if count == 0 {
            return Err(Error::EmptyStreamSet);
        }
        let streams = (0..count)
            .map(|i| LcgState::new(params, site_seed(master_seed, i as u64, &params)))
            .collect();
        Ok(Self {
            master_seed,
            params,
            streams,
        })
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }

    #[inline]
    pub fn stream_mut(&mut self, site: usize) -> &mut LcgState {
        &mut self.streams[site]
    }

    pub fn streams_mut(&mut self) -> &mut [LcgState] {
        &mut self.streams
    }
}

/// Fraction of `samples` points of the unit square falling inside the
/// unit quarter circle. Converges to pi/4.
pub fn estimate_circle_ratio(stream: &mut LcgState, samples: u64) -> f64 {
    assert!(samples >= 1, "samples must be positive");
    let mut inside = 0u64;
    for _ in 0..samples {
        let x = stream.next_unit();
        let y = stream.next_unit();
        if x * x + y * y <= 1.0 {
            inside += 1;
        }
    }
    inside as f64 / samples as f64
}

/// Pearson chi-square statistic of `samples` unit draws against equal-width
/// bins of [0, 1). Requires at least 10 samples per bin.
pub fn chi_square_uniformity(stream: &mut LcgState, samples: u64, bins: usize) -> Result<f64> {
    chi_square_from_draws((0..samples).map(|_| stream.next_unit()), samples, bins)
}

/// Same statistic over an arbitrary draw source; used to test degenerate
/// generators against the closed form.
pub fn chi_square_from_draws<I>(draws: I, samples: u64, bins: usize) -> Result<f64>
where
    I: IntoIterator<Item = f64>,
{
    let needed = 10 * bins as u64;
    if samples < needed {
        return Err(Error::InsufficientSamples {
            needed,
            got: samples,
        });
    }
    let mut observed = vec![0u64; bins];
    for u in draws {
        let bin = ((u * bins as f64) as usize).min(bins - 1);
        observed[bin] += 1;
    }
    let expected = samples as f64 / bins as f64;
    Ok(observed
        .iter()
        .map(|&o| {
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum())
}

/// Write `pairs` consecutive (u_{2k}, u_{2k+1}) draws as `x y` lines for
/// manual inspection of the lattice structure of LCG tuples.
pub fn write_pair_scatter<W: Write>(stream: &mut LcgState, pairs: u64, out: &mut W) -> Result<()> {
    for _ in 0..pairs {
        let x = stream.next_unit();
        let y = stream.next_unit();
        writeln!(out, "{x} {y}")?;
    }
    Ok(())
}

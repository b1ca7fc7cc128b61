//! Site percolation: porous-medium generation, deterministic wavefront
//! invasion, spanning detection and porosity-threshold estimation.
//!
//! All randomness lives in the medium; invasion itself is a synchronous
//! breadth-first wavefront, so the invaded set is exactly the 4-connected
//! pore component of the source. Boundaries are clamped: spanning across
//! a wrap seam would be meaningless.

use crate::error::{Error, Result};
use crate::lattice::{neighbors, BoundaryMode, Grid, GridDims};
use crate::rng::{site_seed, LcgParams, StreamSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellKind {
    Pore,
    Solid,
}

/// Random medium: each site is a pore with probability `porosity`.
#[derive(Debug, Clone)]
pub struct PorousMedium {
    pub grid: Grid<CellKind>,
    pub porosity: f64,
    pub seed: u64,
}

impl PorousMedium {
    pub fn dims(&self) -> GridDims {
        self.grid.dims()
    }

    pub fn is_pore(&self, x: usize, y: usize) -> bool {
        *self.grid.get(x, y) == CellKind::Pore
    }

    pub fn pore_fraction(&self) -> f64 {
        let pores = self
            .grid
            .cells()
            .iter()
            .filter(|&&c| c == CellKind::Pore)
            .count();
        pores as f64 / self.dims().sites() as f64
    }
}

/// Site is a pore iff its stream draw is at most `porosity`; the 0 and 1
/// endpoints short-circuit to all-solid / all-pore.
pub fn generate_medium(dims: GridDims, porosity: f64, seed: u64) -> Result<PorousMedium> {
    if !(0.0..=1.0).contains(&porosity) {
        return Err(Error::InvalidPorosity(porosity));
    }
    let mut streams = StreamSet::spawn(seed, dims.sites(), LcgParams::default_params())?;
    let cells = (0..dims.sites())
        .map(|site| {
            let u = streams.stream_mut(site).next_unit();
            let pore = if porosity == 0.0 {
                false
            } else if porosity == 1.0 {
                true
            } else {
                u <= porosity
            };
            if pore {
                CellKind::Pore
            } else {
                CellKind::Solid
            }
        })
        .collect();
    Ok(PorousMedium {
        grid: Grid::from_cells(dims, cells),
        porosity,
        seed,
    })
}

/// Invasion cluster grown from a source pore.
#[derive(Debug, Clone)]
pub struct Cluster {
    pub invaded: Grid<bool>,
    frontier: Vec<(usize, usize)>,
    pub source: (usize, usize),
    pub steps_taken: u64,
}

impl Cluster {
    /// Seed the cluster with the invasion point, which must be a pore.
    pub fn new(medium: &PorousMedium, source: (usize, usize)) -> Result<Self> {
        let (x, y) = source;
        if !medium.dims().contains(x, y) {
            return Err(Error::OutOfRange {
                x,
                y,
                width: medium.dims().width,
                height: medium.dims().height,
            });
        }
        if !medium.is_pore(x, y) {
            return Err(Error::SourceBlocked { x, y });
        }
        let mut invaded = Grid::new(medium.dims(), false);
        invaded.set(x, y, true);
        Ok(Self {
            invaded,
            frontier: vec![source],
            source,
            steps_taken: 0,
        })
    }

    pub fn invaded_count(&self) -> usize {
        self.invaded.cells().iter().filter(|&&v| v).count()
    }
}

/// One synchronous wavefront step: invade every uninvaded pore that is a
/// 4-neighbor of the current frontier. Returns false once the frontier
/// produces no new sites.
pub fn invade_step(medium: &PorousMedium, cluster: &mut Cluster) -> bool {
    let dims = medium.dims();
    let mut next = Vec::new();
    for &(x, y) in &cluster.frontier {
        for (nx, ny) in neighbors(x, y, dims, BoundaryMode::Clamped).expect("frontier in range") {
            if medium.is_pore(nx, ny) && !*cluster.invaded.get(nx, ny) {
                cluster.invaded.set(nx, ny, true);
                next.push((nx, ny));
            }
        }
    }
    cluster.frontier = next;
    let grew = !cluster.frontier.is_empty();
    if grew {
        cluster.steps_taken += 1;
    }
    grew
}

/// Grow the cluster to steady state. Returns the cluster, the number of
/// growth steps, and whether it spans top to bottom.
pub fn run_invasion(
    medium: &PorousMedium,
    source: (usize, usize),
) -> Result<(Cluster, u64, bool)> {
    run_invasion_with_observer(medium, source, |_, _| {})
}

/// `run_invasion` with a callback after every growth step; used for
/// snapshot emission.
pub fn run_invasion_with_observer<F>(
    medium: &PorousMedium,
    source: (usize, usize),
    mut observer: F,
) -> Result<(Cluster, u64, bool)>
where
    F: FnMut(u64, &Cluster),
{
    let mut cluster = Cluster::new(medium, source)?;
    observer(0, &cluster);
    while invade_step(medium, &mut cluster) {
        observer(cluster.steps_taken, &cluster);
    }
    let steps = cluster.steps_taken;
    let spanned = spans(&cluster, Axis::Vertical);
    Ok((cluster, steps, spanned))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Left edge to right edge.
    Horizontal,
    /// Top edge to bottom edge.
    Vertical,
}

/// True iff the invaded set touches both opposite edges along `axis`.
pub fn spans(cluster: &Cluster, axis: Axis) -> bool {
    let dims = cluster.invaded.dims();
    match axis {
        Axis::Vertical => {
            let top = (0..dims.width).any(|x| *cluster.invaded.get(x, 0));
            let bottom = (0..dims.width).any(|x| *cluster.invaded.get(x, dims.height - 1));
            top && bottom
        }
        Axis::Horizontal => {
            let left = (0..dims.height).any(|y| *cluster.invaded.get(0, y));
            let right = (0..dims.height).any(|y| *cluster.invaded.get(dims.width - 1, y));
            left && right
        }
    }
}

/// Top-to-bottom spanning test with a virtual source covering every pore
/// on the top edge. A single-point source often misses the spanning
/// component and would bias the threshold upward.
pub fn spans_top_to_bottom(medium: &PorousMedium) -> bool {
    let dims = medium.dims();
    let mut seen = vec![false; dims.sites()];
    let mut stack: Vec<(usize, usize)> = (0..dims.width)
        .filter(|&x| medium.is_pore(x, 0))
        .map(|x| (x, 0))
        .collect();
    for &(x, y) in &stack {
        seen[dims.index(x, y)] = true;
    }
    while let Some((x, y)) = stack.pop() {
        if y == dims.height - 1 {
            return true;
        }
        for (nx, ny) in neighbors(x, y, dims, BoundaryMode::Clamped).expect("in range") {
            let i = dims.index(nx, ny);
            if medium.is_pore(nx, ny) && !seen[i] {
                seen[i] = true;
                stack.push((nx, ny));
            }
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdPoint {
    pub porosity: f64,
    pub spanning_fraction: f64,
}

/// Empirical spanning-probability curve over a porosity grid, with the
/// linear-interpolation crossing of 0.5 when the curve reaches it.
#[derive(Debug, Clone)]
pub struct ThresholdCurve {
    pub points: Vec<ThresholdPoint>,
    pub trials: u64,
    pub dims: GridDims,
    pub crossing: Option<f64>,
}

/// Seed of one trial; independent of porosity, so media at different
/// porosities are draw-coupled per trial.
pub fn trial_seed(master_seed: u64, trial: u64) -> u64 {
    site_seed(master_seed, trial, &LcgParams::default_params())
}

/// Sweep `porosities` (ascending), running `trials` independent media per
/// point and testing top-to-bottom spanning on each.
pub fn estimate_threshold(
    dims: GridDims,
    porosities: &[f64],
    trials: u64,
    master_seed: u64,
    jobs: usize,
) -> Result<ThresholdCurve> {
    if porosities.is_empty() {
        return Err(Error::EmptyPorosityList);
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be >= 1".into()));
    }
    for p in porosities {
        if !(0.0..=1.0).contains(p) {
            return Err(Error::InvalidPorosity(*p));
        }
    }

    let count_spanning = |porosity: f64| -> Result<u64> {
        let one = |t: u64| -> Result<bool> {
            let medium = generate_medium(dims, porosity, trial_seed(master_seed, t))?;
            Ok(spans_top_to_bottom(&medium))
        };
        if jobs <= 1 {
            let mut n = 0;
            for t in 0..trials {
                if one(t)? {
                    n += 1;
                }
            }
            Ok(n)
        } else {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
            let hits: Vec<bool> = pool.install(|| {
                (0..trials)
                    .into_par_iter()
                    .map(one)
                    .collect::<Result<Vec<bool>>>()
            })?;
            Ok(hits.iter().filter(|&&h| h).count() as u64)
        }
    };

    let mut points = Vec::with_capacity(porosities.len());
    for &p in porosities {
        let hits = count_spanning(p)?;
        points.push(ThresholdPoint {
            porosity: p,
            spanning_fraction: hits as f64 / trials as f64,
        });
    }
    let crossing = crossing_estimate(&points);
    Ok(ThresholdCurve {
        points,
        trials,
        dims,
        crossing,
    })
}

/// 0.5-crossing of the monotone-regularized curve (running maximum in
/// ascending porosity), linearly interpolated between the bracketing grid
/// points; exact ties resolve toward the lower porosity.
fn crossing_estimate(points: &[ThresholdPoint]) -> Option<f64> {
    let mut reg = Vec::with_capacity(points.len());
    let mut running = f64::NEG_INFINITY;
    for p in points {
        running = running.max(p.spanning_fraction);
        reg.push(running);
    }
    if reg[0] >= 0.5 {
        return Some(points[0].porosity);
    }
    for i in 1..reg.len() {
        if reg[i] >= 0.5 {
            let (p0, f0) = (points[i - 1].porosity, reg[i - 1]);
            let (p1, f1) = (points[i].porosity, reg[i]);
            if f0 == 0.5 {
                return Some(p0);
            }
            return Some(p0 + (0.5 - f0) / (f1 - f0) * (p1 - p0));
        }
    }
    None
}

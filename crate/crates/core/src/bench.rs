//! Micro-benchmark harness: timed whole-lattice vector operations,
//! baseline-overhead subtraction, throughput derivation, and the
//! boundary-vs-full transfer measurement.
//!
//! Method: every operation runs as repeated passes over a `width*height*4`
//! element array of 32-bit floats (four lanes per site, the RGBA texel
//! layout). A pure-assignment pass carries the same fixed overheads as any
//! other pass, so subtracting its time isolates an operation's marginal
//! cost. Per-rep times come from a monotonic clock; one warm-up pass on a
//! scratch copy is discarded and the median is reported. The final array
//! checksum is recorded and consumed, so the measured work cannot be
//! optimized away.

use crate::error::{Error, Result};
use crate::lattice::{Grid, GridDims};
use crate::Backend;
use rayon::prelude::*;
use std::hint::black_box;
use std::time::Instant;

pub const LANES_PER_SITE: usize = 4;
pub const BYTES_PER_ELEMENT: usize = 4;

/// The measured vector operations; row labels of the timing tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OpKind {
    Assign,
    Add,
    Sub,
    Mul,
    Div,
    Sin,
    Cos,
    Log,
    Exp,
}

impl OpKind {
    pub const ALL: [OpKind; 9] = [
        OpKind::Assign,
        OpKind::Add,
        OpKind::Sub,
        OpKind::Mul,
        OpKind::Div,
        OpKind::Sin,
        OpKind::Cos,
        OpKind::Log,
        OpKind::Exp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OpKind::Assign => "assign",
            OpKind::Add => "add",
            OpKind::Sub => "sub",
            OpKind::Mul => "mul",
            OpKind::Div => "div",
            OpKind::Sin => "sin",
            OpKind::Cos => "cos",
            OpKind::Log => "log",
            OpKind::Exp => "exp",
        }
    }

    pub fn parse(s: &str) -> Option<OpKind> {
        Self::ALL.iter().copied().find(|op| op.name() == s)
    }

    pub fn is_transcendental(self) -> bool {
        matches!(self, OpKind::Sin | OpKind::Cos | OpKind::Log | OpKind::Exp)
    }

    /// One application to a single element: `a = c` for Assign,
    /// `a op= c` for arithmetic, `a = f(a)` for the transcendentals.
    #[inline]
    pub fn apply(self, a: f32, c: f32) -> f32 {
        match self {
            OpKind::Assign => c,
            OpKind::Add => a + c,
            OpKind::Sub => a - c,
            OpKind::Mul => a * c,
            OpKind::Div => a / c,
            OpKind::Sin => a.sin(),
            OpKind::Cos => a.cos(),
            OpKind::Log => a.ln(),
            OpKind::Exp => a.exp(),
        }
    }
}

/// One measured operation at one size on one backend.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub op: OpKind,
    pub dims: GridDims,
    pub lanes_per_site: usize,
    pub reps: usize,
    pub total_s: f64,
    pub median_rep_s: f64,
    pub backend: Backend,
    pub checksum: f64,
}

impl BenchRecord {
    pub fn elements(&self) -> u64 {
        (self.dims.sites() * self.lanes_per_site) as u64
    }
}

/// An operation's cost with the Assign baseline removed, and the
/// throughput that follows from it.
#[derive(Debug, Clone)]
pub struct IncrementalCost {
    pub op: OpKind,
    pub dims: GridDims,
    pub backend: Backend,
    pub incremental_s: f64,
    /// elements / incremental_s; None when the incremental time is not
    /// positive (flagged unreliable, not dropped).
    pub throughput: Option<f64>,
    pub reliable: bool,
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        0.5 * (samples[n / 2 - 1] + samples[n / 2])
    }
}

fn run_pass(op: OpKind, c: f32, data: &mut [f32], backend: Backend) {
    match backend {
        Backend::Scalar => {
            for a in data.iter_mut() {
                *a = op.apply(*a, c);
            }
        }
        Backend::DataParallel => {
            data.par_chunks_mut(4096).for_each(|chunk| {
                for a in chunk.iter_mut() {
                    *a = op.apply(*a, c);
                }
            });
        }
    }
}

/// The value every element holds after applying `op` with constant `c`
/// to `x0`, `reps` times. All elements start equal and stay equal, so the
/// expected checksum is `elements * expected_final_value(...)`. Serves as
/// the independent check that the timed work really ran.
pub fn expected_final_value(op: OpKind, c: f32, x0: f32, reps: usize) -> f32 {
    let mut a = x0;
    for _ in 0..reps {
        a = op.apply(a, c);
    }
    a
}

/// Time `reps` whole-array passes of `op`. The array starts as zeros; one
/// warm-up pass runs on a scratch copy and is excluded.
pub fn run_vector_bench(
    op: OpKind,
    dims: GridDims,
    reps: usize,
    backend: Backend,
    c: f32,
) -> Result<BenchRecord> {
    if reps < 3 {
        return Err(Error::TooFewReps { needed: 3, got: reps });
    }
    let elements = dims.sites() * LANES_PER_SITE;
    let mut data = vec![0.0f32; elements];

    let mut scratch = data.clone();
    run_pass(op, c, &mut scratch, backend);
    black_box(&scratch);

    let mut times = Vec::with_capacity(reps);
    let start_all = Instant::now();
    for _ in 0..reps {
        let t = Instant::now();
        run_pass(op, c, &mut data, backend);
        times.push(t.elapsed().as_secs_f64());
        black_box(&data);
    }
    let total_s = start_all.elapsed().as_secs_f64();
    let checksum: f64 = data.iter().map(|&v| v as f64).sum();
    black_box(checksum);

    Ok(BenchRecord {
        op,
        dims,
        lanes_per_site: LANES_PER_SITE,
        reps,
        total_s,
        median_rep_s: median(&mut times),
        backend,
        checksum,
    })
}

/// Subtract each record's matching Assign baseline (same dims, same
/// backend). Nonpositive differences are kept and flagged unreliable.
pub fn baseline_subtract(records: &[BenchRecord]) -> Result<Vec<IncrementalCost>> {
    let baseline = |dims: GridDims, backend: Backend| -> Result<f64> {
        records
            .iter()
            .find(|r| r.op == OpKind::Assign && r.dims == dims && r.backend == backend)
            .map(|r| r.median_rep_s)
            .ok_or(Error::MissingBaseline {
                width: dims.width,
                height: dims.height,
                backend,
            })
    };
    records
        .iter()
        .map(|r| {
            let incremental_s = r.median_rep_s - baseline(r.dims, r.backend)?;
            let reliable = incremental_s > 0.0;
            Ok(IncrementalCost {
                op: r.op,
                dims: r.dims,
                backend: r.backend,
                incremental_s,
                throughput: reliable.then(|| r.elements() as f64 / incremental_s),
                reliable,
            })
        })
        .collect()
}

/// Plain throughput arithmetic: elements * ops_per_element / seconds.
pub fn flops_from_parts(elements: u64, ops_per_element: u64, seconds: f64) -> Result<f64> {
    if !(seconds > 0.0) {
        return Err(Error::NonpositiveTime(seconds));
    }
    Ok(elements as f64 * ops_per_element as f64 / seconds)
}

/// Throughput of an incremental cost at `ops_per_element` operations per
/// array element.
pub fn derive_flops(incremental: &IncrementalCost, ops_per_element: u64) -> Result<f64> {
    let elements = (incremental.dims.sites() * LANES_PER_SITE) as u64;
    flops_from_parts(elements, ops_per_element, incremental.incremental_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransferMode {
    BoundaryRead,
    BoundaryWrite,
    FullRead,
    FullWrite,
}

impl TransferMode {
    pub fn name(self) -> &'static str {
        match self {
            TransferMode::BoundaryRead => "read_bdr",
            TransferMode::BoundaryWrite => "write_bdr",
            TransferMode::FullRead => "read_all",
            TransferMode::FullWrite => "write_all",
        }
    }

    pub fn is_boundary(self) -> bool {
        matches!(self, TransferMode::BoundaryRead | TransferMode::BoundaryWrite)
    }
}

/// One boundary/full copy measurement. An in-host analog of bus transfer
/// rates: it times this artifact's own buffer pathways, not a bus.
#[derive(Debug, Clone)]
pub struct TransferRecord {
    pub dims: GridDims,
    pub mode: TransferMode,
    pub bytes: u64,
    pub reps: usize,
    pub median_rep_s: f64,
    pub rate_mb_s: f64,
}

pub fn transfer_bytes(dims: GridDims, mode: TransferMode) -> u64 {
    let sites = if mode.is_boundary() {
        dims.boundary_len()
    } else {
        dims.sites()
    };
    (sites * LANES_PER_SITE * BYTES_PER_ELEMENT) as u64
}

/// Time boundary extraction/injection or whole-grid copy between two
/// distinct allocations.
pub fn run_transfer_bench(
    dims: GridDims,
    mode: TransferMode,
    reps: usize,
) -> Result<TransferRecord> {
    if reps < 3 {
        return Err(Error::TooFewReps { needed: 3, got: reps });
    }
    let src: Grid<[f32; LANES_PER_SITE]> = Grid::new(dims, [1.0, 2.0, 3.0, 4.0]);
    let mut dst: Grid<[f32; LANES_PER_SITE]> = Grid::new(dims, [0.0; LANES_PER_SITE]);
    let boundary = src.extract_boundary();
    let mut host: Vec<[f32; LANES_PER_SITE]> = vec![[0.0; LANES_PER_SITE]; dims.sites()];

    let mut times = Vec::with_capacity(reps);
    for rep in 0..=reps {
        let t = Instant::now();
        match mode {
            TransferMode::BoundaryRead => {
                black_box(src.extract_boundary());
            }
            TransferMode::BoundaryWrite => {
                dst.inject_boundary(&boundary)?;
                black_box(&dst);
            }
            TransferMode::FullRead => {
                host.copy_from_slice(src.cells());
                black_box(&host);
            }
            TransferMode::FullWrite => {
                dst.cells_mut().copy_from_slice(&host);
                black_box(&dst);
            }
        }
        if rep > 0 {
            // rep 0 is warm-up
            times.push(t.elapsed().as_secs_f64());
        }
    }
    let bytes = transfer_bytes(dims, mode);
    let median_rep_s = median(&mut times);
    Ok(TransferRecord {
        dims,
        mode,
        bytes,
        reps,
        median_rep_s,
        rate_mb_s: bytes as f64 / median_rep_s / 1e6,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Markdown,
}

fn backend_name(b: Backend) -> &'static str {
    match b {
        Backend::Scalar => "scalar",
        Backend::DataParallel => "data-parallel",
    }
}

/// Render records with their incremental costs as CSV or a markdown
/// table, sorted by (op, dims, backend) regardless of insertion order.
/// Columns: `op,backend,width,height,reps,median_s,incr_s,throughput`.
pub fn emit_table(
    records: &[BenchRecord],
    costs: &[IncrementalCost],
    format: TableFormat,
) -> Result<String> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut rows: Vec<&BenchRecord> = records.iter().collect();
    rows.sort_by_key(|r| (r.op, r.dims.width, r.dims.height, backend_name(r.backend)));

    let cost_for = |r: &BenchRecord| {
        costs
            .iter()
            .find(|c| c.op == r.op && c.dims == r.dims && c.backend == r.backend)
    };

    let mut out = String::new();
    let header = ["op", "backend", "width", "height", "reps", "median_s", "incr_s", "throughput"];
    match format {
        TableFormat::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for r in rows {
                let (incr, thr) = match cost_for(r) {
                    Some(c) => (
                        format!("{:.9}", c.incremental_s),
                        c.throughput.map(|t| format!("{t:.4e}")).unwrap_or_default(),
                    ),
                    None => (String::new(), String::new()),
                };
                out.push_str(&format!(
                    "{},{},{},{},{},{:.9},{},{}\n",
                    r.op.name(),
                    backend_name(r.backend),
                    r.dims.width,
                    r.dims.height,
                    r.reps,
                    r.median_rep_s,
                    incr,
                    thr
                ));
            }
        }
        TableFormat::Markdown => {
            out.push_str(&format!("| {} |\n", header.join(" | ")));
            out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
            for r in rows {
                let (incr, thr) = match cost_for(r) {
                    Some(c) => (
                        format!("{:.9}", c.incremental_s),
                        c.throughput.map(|t| format!("{t:.4e}")).unwrap_or_else(|| "-".into()),
                    ),
                    None => ("-".into(), "-".into()),
                };
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {:.9} | {} | {} |\n",
                    r.op.name(),
                    backend_name(r.backend),
                    r.dims.width,
                    r.dims.height,
                    r.reps,
                    r.median_rep_s,
                    incr,
                    thr
                ));
            }
        }
    }
    Ok(out)
}

use thiserror::Error;

/// Errors produced by the simulation and benchmark modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid LCG parameters: {0}")]
    InvalidLcgParams(String),
    #[error("raw value {raw} is outside the generator range [0, {n_mod})")]
    RawOutOfRange { raw: u64, n_mod: u64 },
    #[error("stream count must be at least 1")]
    EmptyStreamSet,
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: u64, got: u64 },
    #[error("grid dimensions must be at least 2x2, got {width}x{height}")]
    InvalidDims { width: usize, height: usize },
    #[error("periodic boundaries require even dimensions, got {width}x{height}")]
    OddPeriodicDims { width: usize, height: usize },
    #[error("coordinate ({x}, {y}) out of range for {width}x{height} grid")]
    OutOfRange {
        x: usize,
        y: usize,
        width: usize,
        height: usize,
    },
    #[error("boundary buffer dims {buf_width}x{buf_height} do not match grid {width}x{height}")]
    BufferDimsMismatch {
        buf_width: usize,
        buf_height: usize,
        width: usize,
        height: usize,
    },
    #[error("no palette entry for cell value at site {site}")]
    UnmappableCell { site: usize },
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error("site ({x}, {y}) has color {actual:?} but the sweep expects {expected:?}")]
    WrongColor {
        x: usize,
        y: usize,
        expected: crate::lattice::Color,
        actual: crate::lattice::Color,
    },
    #[error("porosity {0} outside [0, 1]")]
    InvalidPorosity(f64),
    #[error("invasion source ({x}, {y}) is solid")]
    SourceBlocked { x: usize, y: usize },
    #[error("porosity list is empty")]
    EmptyPorosityList,
    #[error("benchmark needs at least {needed} repetitions, got {got}")]
    TooFewReps { needed: usize, got: usize },
    #[error("no Assign baseline record for {width}x{height} on {backend:?}")]
    MissingBaseline {
        width: usize,
        height: usize,
        backend: crate::Backend,
    },
    #[error("incremental time {0} s is not positive; throughput undefined")]
    NonpositiveTime(f64),
    #[error("no records to format")]
    EmptyRecords,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Lattice Monte Carlo engine.
//!
//! Ising-model Metropolis dynamics and site percolation over a
//! linear-congruential random number generator, with two
//! equivalence-checked execution backends and a micro-benchmark harness
//! built around baseline-overhead subtraction.

pub mod bench;
pub mod error;
pub mod ising;
pub mod lattice;
pub mod percolation;
pub mod rng;

pub use error::{Error, Result};
pub use lattice::{BoundaryMode, Color, Grid, GridDims};

/// Execution backend of a sweep or benchmark pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Site-by-site reference implementation.
    Scalar,
    /// Whole-lattice staged passes with branch-free update arithmetic.
    DataParallel,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Scalar => "scalar",
            Backend::DataParallel => "data-parallel",
        }
    }

    pub fn parse(s: &str) -> Option<Backend> {
        match s {
            "scalar" => Some(Backend::Scalar),
            "data-parallel" | "dataparallel" => Some(Backend::DataParallel),
            _ => None,
        }
    }
}

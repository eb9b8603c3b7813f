//! Dense linear algebra at desk scale: exact rational elimination and a
//! dependency-free symmetric eigensolver for the spectral diagnostics.

pub mod rational;
pub mod spectral;

pub use rational::{inverse_exact, solve_exact, RatMatrix};
pub use spectral::{
    neumann_partial_sums, operator_norm, psd_check, spectral_radius_similar, symmetric_spectrum,
    PsdReport, RealMatrix, Spectrum,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: matrix is {rows}x{cols}, vector has {len}")]
    DimensionMismatch { rows: usize, cols: usize, len: usize },
    #[error("singular matrix (rank {rank})")]
    Singular { rank: usize },
    #[error("matrix is not symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },
    #[error("similarity transform is not symmetric (max deviation {deviation:e})")]
    NotSymmetrizable { deviation: f64 },
    #[error("symmetrizer must be entrywise positive (entry {index} is {value})")]
    BadSymmetrizer { index: usize, value: f64 },
    #[error("spectral radius bound {bound} is not below one; Neumann series diverges")]
    SpectralRadiusNotBelowOne { bound: f64 },
    #[error("Jacobi sweeps did not reach off-diagonal norm {target:e} (got {achieved:e})")]
    JacobiStalled { target: f64, achieved: f64 },
}

//! Planning and costing tools for ground-state energy estimation with
//! windowed quantum phase estimation.
//!
//! The crate covers the full quantitative pipeline:
//!
//! - [`specfn`]: modified Bessel/Struve functions, the cosine integral, and
//!   related special functions used by every closed-form expression here.
//! - [`windows`]: exact and asymptotic confidence-interval errors for the
//!   Kaiser, Slepian (prolate spheroidal), flat and cosine windows, and the
//!   oracle-cost solves built on them.
//! - [`sampling`]: the direct-sampling repetition planner, including the
//!   excited-state error model.
//! - [`binsearch`]: the fuzzy-bisection / amplitude-estimation planner and
//!   the sampling-vs-binary crossover.
//! - [`qpesim`]: Monte Carlo simulation of the phase-estimation measurement
//!   process for validating planner failure probabilities.
//! - [`synth`]: unitary/column/MPS circuit synthesis with statevector
//!   verification and Toffoli/qubit cost models (including the LKS baseline).
//! - [`extrapolate`]: the two-stage overlap extrapolation fits.
//! - [`resources`]: end-to-end Toffoli/qubit assembly for concrete chemistry
//!   systems and deterministic figure-data emission.

pub mod binsearch;
pub mod extrapolate;
mod numerics;
pub mod qpesim;
pub mod resources;
pub mod sampling;
pub mod specfn;
pub mod synth;
pub mod windows;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A requested value would overflow the floating-point range.
    #[error("overflow: {0}")]
    Overflow(String),
    /// An iterative method did not converge within its iteration cap.
    #[error("no convergence: {0}")]
    NonConvergence(String),
    /// The planning problem has no feasible solution.
    #[error("infeasible: {0}")]
    Infeasible(String),
    /// Malformed input data (files, matrices, spectra).
    #[error("data format error: {0}")]
    DataFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;

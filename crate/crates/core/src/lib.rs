//! Explicit short-interval prime number theorem bounds under RH.
//!
//! The crate bundles the smoothed explicit-formula machinery (weights and
//! their Mellin transforms), zero-counting estimates checked against real zero
//! tables, the assembled error constants for ψ, θ and π with a constrained
//! optimiser over their free parameters, and a segmented sieve that provides
//! exact desk-scale ground truth.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod checks;
pub mod exec;
pub mod numerics;
pub mod report;
pub mod sieve;
pub mod weights;
pub mod zeros;

#[cfg(test)]
mod invariants;

pub use exec::Execution;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error(
        "quadrature did not converge: estimate {value}, error {error:e} > tolerance {tolerance:e}"
    )]
    QuadratureNonConvergence {
        value: f64,
        error: f64,
        tolerance: f64,
    },
    #[error("window violation: {0}")]
    Window(String),
    #[error("parameter constraint violated: {0}")]
    Constraint(String),
    #[error("zero table line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("zero table line {line}: ordinate {value} does not exceed the previous one")]
    Ordering { line: usize, value: f64 },
    #[error("zero table is empty")]
    EmptyTable,
    #[error("height {requested} exceeds the table's maximum height {max_height}")]
    OutOfRange { requested: f64, max_height: f64 },
    #[error("sieve range error: {0}")]
    SieveRange(String),
    #[error("missing data: {0}")]
    MissingData(String),
    #[error("infeasible search box: {0}")]
    InfeasibleBox(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by state constructors, loaders, and the numerical routines.
///
/// Validation variants name the violated invariant and carry the measured
/// deviation so a caller can report exactly what was wrong with the input.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("hermiticity violated: max |M - M^dag| = {deviation:.3e} exceeds {tolerance:.0e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("unit trace violated: |tr(M) - 1| = {deviation:.3e} exceeds {tolerance:.0e}")]
    TraceNotOne { deviation: f64, tolerance: f64 },

    #[error("positivity violated: minimum eigenvalue {min_eigenvalue:.3e} is below -{tolerance:.0e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64, tolerance: f64 },

    #[error("unitarity violated: max |U^dag U - I| = {deviation:.3e} exceeds {tolerance:.0e}")]
    NotUnitary { deviation: f64, tolerance: f64 },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("invalid partition: {reason}")]
    InvalidPartition { reason: String },

    #[error("probabilities must be nonnegative and sum to 1: sum = {sum}")]
    InvalidProbabilities { sum: f64 },

    #[error("covariance symmetry violated: max |V - V^T| = {deviation:.3e} exceeds {tolerance:.0e}")]
    CovarianceNotSymmetric { deviation: f64, tolerance: f64 },

    #[error("bona fide violated: minimum symplectic eigenvalue {nu_min:.6} is below 1")]
    NotBonaFide { nu_min: f64 },

    #[error("{0}")]
    Domain(String),
}

impl Error {
    /// Shorthand for numeric-domain failures (parameter outside the range
    /// where the quantity is defined).
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

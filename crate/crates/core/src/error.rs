//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A numerical consistency check failed (imaginary residuals, broken
    /// invariants, corrupted inputs).
    #[error("numerical consistency violated: {0}")]
    Numerical(String),

    /// The iterative eigensolver ran out of iterations.
    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    /// RDM reconstruction from correlators produced an operator that is not
    /// a state; usually a sign-convention bug upstream.
    #[error("rdm reconstruction failed: {0}")]
    Reconstruction(String),

    /// A finite-size-scaling fit cannot be trusted (sign change in C(N) - C,
    /// degenerate bracket, too few sizes).
    #[error("unreliable fit: {0}")]
    UnreliableFit(String),

    /// The requested extremum sits on the window boundary.
    #[error("extremum at window edge (x = {x}); widen the window")]
    EdgeExtremum { x: f64 },

    /// A sweep aborted because one grid point failed.
    #[error("sweep failed at {control} = {x}: {source}")]
    SweepPoint {
        control: String,
        x: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

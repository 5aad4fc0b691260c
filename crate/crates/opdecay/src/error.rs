//! Error type shared by all modules.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the numeric calculus and the experiment pipeline.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Argument outside the function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// An intermediate value left the floating-point range.
    #[error("overflow: {0}")]
    Overflow(String),

    /// No monotone tail could be certified within the search budget.
    #[error("monotonicity error: {0}")]
    Monotonicity(String),

    /// A root-finding target could not be bracketed.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// A Stieltjes triple failed its integrability certificate.
    #[error("integrability error: {0}")]
    Integrability(String),

    /// Duality transform of the zero function.
    #[error("zero function has no duality transform")]
    ZeroFunction,

    /// Iterative refinement did not converge within its budget.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// No decreasing tail envelope could be certified for a supremum.
    #[error("tail error: {0}")]
    Tail(String),

    /// Rate-regime parameters violate the regime's preconditions.
    #[error("regime parameter error: {0}")]
    RegimeParameter(String),

    /// Fixed-point iteration exhausted its iteration budget.
    #[error("no convergence after {iterations} iterations: {detail}")]
    NonConvergence { iterations: usize, detail: String },

    /// A decay function never reaches the requested level.
    #[error("limit error: {0}")]
    Limit(String),

    /// Comparison window shorter than the required two decades.
    #[error("window error: {0}")]
    Window(String),

    /// Invalid experiment or instance specification.
    #[error("spec error: {0}")]
    Spec(String),
}

impl Error {
    /// Process exit code for the CLI contract: 2 for input/schema errors,
    /// 3 for runtime/convergence failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Spec(_) | Error::Domain(_) | Error::RegimeParameter(_) => 2,
            _ => 3,
        }
    }
}

use thiserror::Error;

/// Errors produced by model construction, metric evaluation and optimization.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// Both effective sampling rates are zero, so the reconstruction never
    /// leaves its initial state and the stationary distribution is not unique.
    #[error("degenerate policy: {0}")]
    DegeneratePolicy(String),

    #[error("joint chain is reducible or singular: {0}")]
    ReducibleChain(String),

    #[error("convergence condition violated: {0}")]
    Convergence(String),

    #[error("conditional probability undefined at i = {i}: Pr[C = {i}] is zero")]
    UndefinedConditional { i: u64 },

    #[error("outside the formula's domain: {0}")]
    Domain(String),

    #[error("division by zero while evaluating {0}")]
    DivisionByZero(&'static str),

    /// A sampling budget of zero forbids every sample; nothing can be tracked.
    #[error("infeasible tracking: sampling budget eta = {eta} admits no sampling")]
    InfeasibleTracking { eta: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

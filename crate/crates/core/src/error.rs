use thiserror::Error;

/// Failure modes of the solvers. Values are carried as `f64` regardless of
/// the working scalar so errors stay non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("branch jump at x = {x} (continuation step fell below {min_step:e})")]
    BranchJump { x: f64, min_step: f64 },
    #[error("v = {v} lies beyond the branch exit")]
    PostExit { v: f64 },
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("bracket [{lo}, {hi}] does not straddle a sign change")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("trajectory and Hamilton-Jacobi actions disagree: {trajectory} vs {axis} (relative {relative:e})")]
    ConsistencyFailure {
        trajectory: f64,
        axis: f64,
        relative: f64,
    },
    #[error("quadrature failed to reach tolerance (estimated error {estimate:e})")]
    Quadrature { estimate: f64 },
    #[error("non-physical solution: {0}")]
    NonPhysical(String),
}

impl Error {
    /// Stable identifier used by the CLI on stderr.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Domain(_) => "Domain",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::BranchJump { .. } => "BranchJump",
            Error::PostExit { .. } => "PostExit",
            Error::NoRoot(_) => "NoRoot",
            Error::NoSignChange { .. } => "NoSignChange",
            Error::ConsistencyFailure { .. } => "ConsistencyFailure",
            Error::Quadrature { .. } => "Quadrature",
            Error::NonPhysical(_) => "NonPhysical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

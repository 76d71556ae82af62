use thiserror::Error;

use crate::convex::ConvexBody;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyInput,

    #[error("empty address word has no similitude (identity is not a contraction)")]
    EmptyWord,

    #[error("address index {index} out of range for a system of {len} maps")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid similitude: {0}")]
    InvalidSimilitude(String),

    #[error("invalid angle: {0}")]
    InvalidAngle(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("system has incommensurable rotation angles; use sampled mode")]
    Incommensurable,

    #[error("direction set does not span the circle; half-plane intersection is unbounded")]
    Unbounded,

    #[error("candidate set is degenerate (needs nonempty interior)")]
    DegenerateCandidate,

    #[error("resolution exhausted: q^{depth} * diam = {scale:e} is below geometric tolerance {tolerance:e}")]
    ResolutionExhausted {
        depth: usize,
        scale: f64,
        tolerance: f64,
    },

    #[error("refinement of order {order} would have {maps} maps (cap {cap})")]
    RefinementTooLarge { order: usize, maps: f64, cap: usize },

    #[error("no convergence after {iterations} iterations: error bound {bound:e} > tolerance {tolerance:e}")]
    NotConverged {
        iterations: usize,
        bound: f64,
        tolerance: f64,
        partial: Box<ConvexBody>,
    },

    #[error("regularization failed: {reason}")]
    Regularization {
        reason: String,
        report: Box<crate::ocsc::RegularizationReport>,
    },

    #[error("invalid config: {}", format_issues(.0))]
    Config(Vec<crate::config::ConfigIssue>),
}

fn format_issues(issues: &[crate::config::ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("{}: {}", i.path, i.message))
        .collect::<Vec<_>>()
        .join("; ")
}

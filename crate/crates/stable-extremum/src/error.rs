use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The requested operation is not available for this parameter regime.
    #[error("regime error: {0}")]
    Regime(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A point lies on or across the integration contour it must avoid.
    #[error("contour violation: {0}")]
    Contour(String),

    /// `1 + psi/q` crossed the branch cut of the logarithm on the grid.
    #[error("log branch crossed at node {node}: {detail}")]
    BranchCut { node: i64, detail: String },

    #[error("division guard: {0}")]
    Division(String),

    /// The expectation is infinite for these parameters.
    #[error("divergent expectation: {0}")]
    Divergence(String),

    #[error("tolerance not met: {0}")]
    Tolerance(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("evaluator failed at node {node}: {source}")]
    Node { node: i64, source: Box<Error> },

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

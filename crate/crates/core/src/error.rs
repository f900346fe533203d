use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid coloring: {0}")]
    InvalidColoring(String),

    /// The requested family/parameters fall outside every theorem domain.
    #[error("unsupported spec: {0}")]
    UnsupportedSpec(String),

    /// A piecewise coloring rule left a flare vertex without a matching case.
    #[error("coloring formula does not cover flare vertex (edge {edge}, copy {copy})")]
    FormulaCoverage { edge: usize, copy: usize },

    #[error("infeasible assignment: {0}")]
    InfeasibleAssignment(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Network parameters are malformed (path count, capacity, probabilities).
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    /// An operation received a structurally invalid argument.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The operation needs a non-empty pattern group.
    #[error("empty group: {0}")]
    EmptyGroup(String),
    /// The grouping violates the admissibility assumptions.
    #[error("inadmissible grouping: {}", .0.join("; "))]
    InadmissibleGrouping(Vec<String>),
    /// Code parameters are out of range for the requested construction.
    #[error("invalid code parameters: {0}")]
    InvalidCodeParameters(String),
    /// The requested rate pair cannot be met by the known constructions.
    #[error("unachievable target: {0}")]
    UnachievableTarget(String),
    /// The instance falls outside the exactly characterized cases.
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    /// The instance is degenerate (for example, no patterns at all).
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),
    /// A referenced entity does not exist.
    #[error("not found: {0}")]
    NotFound(String),
}

pub type Result<T> = std::result::Result<T, Error>;

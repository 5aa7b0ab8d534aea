use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("atom cap exceeded: {count} atoms, cap is {cap}")]
    AtomCap { count: usize, cap: usize },

    #[error("conditioning event is impossible")]
    ImpossibleConditioning,

    #[error("value cases do not partition the conditioning event: {0}")]
    BadPartition(String),

    #[error("prevision is not set for member {0}")]
    MissingPrevision(usize),

    #[error("operand is not a conditional event")]
    NotConditionalEvent,

    #[error("operand previsions ({x}, {y}) are not coherent")]
    IncoherentOperands { x: String, y: String },

    #[error("expected a compound of kind {expected}, got {found}")]
    WrongKind { expected: &'static str, found: &'static str },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("empty family")]
    EmptyFamily,

    #[error("linear system is infeasible")]
    Infeasible,

    #[error("base assessment is not coherent")]
    IncoherentBase,

    #[error("endpoint {0} of the extension interval failed verification")]
    EndpointVerification(String),

    #[error("value {0} is outside [0, 1]")]
    OutOfRange(String),

    #[error("invalid rational literal {0:?}")]
    BadRational(String),

    #[error("probability of {0} is zero")]
    ZeroProbability(&'static str),

    #[error("invalid distribution: {0}")]
    BadDistribution(String),

    #[error("{0} must be positive")]
    NonPositive(&'static str),

    #[error("every trial was indeterminate")]
    AllIndeterminate,
}

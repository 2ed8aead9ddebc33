use thiserror::Error;

/// Errors raised by the tower, group and logarithm machinery.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid tower: {0}")]
    InvalidTower(String),

    #[error("polynomial {0} is not Eisenstein")]
    NotEisenstein(String),

    #[error("unramified polynomial {0} is reducible modulo p")]
    ReducibleUnramified(String),

    #[error("subfield marker for {field}: {reason}")]
    BadMarker { field: String, reason: String },

    #[error("found {found} automorphisms but the tower has degree {degree}")]
    AutomorphismCount { found: usize, degree: usize },

    #[error("root refinement did not converge: {0}")]
    RootRefinement(String),

    #[error("division by an element indistinguishable from zero")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("coefficients are not integral")]
    NotIntegral,

    #[error("roots of unity of order {0} are not available in the ambient field")]
    MissingRootsOfUnity(u64),

    #[error("character table is incomplete: {0}")]
    IncompleteTable(String),

    #[error("multiplicity is not a rational integer: {0}")]
    NonIntegerMultiplicity(String),

    #[error("linear system is singular at working precision")]
    Singular,

    #[error("precision fault: {0}")]
    PrecisionFault(String),

    #[error("theorem violated: {0}")]
    TheoremViolation(String),

    #[error("iteration stalled: {0}")]
    Stalled(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

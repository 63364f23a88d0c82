use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("empty restriction: group `{0}` has no members")]
    EmptyRestriction(String),

    #[error("{what} exceeds cap ({size} > {limit})")]
    CapExceeded {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("no hypothesis is consistent with the examples in group `{0}`")]
    NoConsistentHypothesis(String),

    #[error("instance has probabilistic labels; no deterministic target exists")]
    NonRealizableFixture,

    #[error("every group has zero mass")]
    AllGroupsZeroMass,

    #[error("group `{0}` has zero mass")]
    ZeroMassGroup(String),

    #[error("need at least {needed} grid values with positive median error, found {found}")]
    InsufficientPositive { needed: usize, found: usize },

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cap exceeded: {what} = {value} (cap {cap})")]
    CapExceeded {
        what: &'static str,
        value: u64,
        cap: u64,
    },

    #[error("enumeration limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("group is not abelian")]
    NotAbelian,

    #[error("invalid action: {0}")]
    InvalidAction(String),

    #[error("not a normalized 2-cocycle: {0}")]
    NotACocycle(String),

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("map is not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("kappa is not well defined: {0}")]
    KappaNotWellDefined(String),

    #[error("action on the tensor product is not well defined: {0}")]
    ActionNotWellDefined(String),

    #[error("rewriting failed: {0}")]
    RewriteFailed(String),

    #[error("construction routes disagree: {0}")]
    RouteMismatch(String),

    #[error("presented group is infinite or has a free abelian section: {0}")]
    Infinite(String),

    #[error("a structural property that must hold failed: {0}")]
    PropertyFailed(String),

    #[error("unknown suite: {0}")]
    UnknownSuite(String),
}

impl Error {
    pub(crate) fn cap(what: &'static str, value: usize, cap: usize) -> Self {
        Error::CapExceeded {
            what,
            value: value as u64,
            cap: cap as u64,
        }
    }

    /// Errors that mean "ran out of budget" rather than "wrong answer".
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::LimitExceeded(_))
    }
}

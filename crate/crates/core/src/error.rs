use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("word is empty after free reduction")]
    EmptyWord,
    #[error("index {index} out of range 0..={max}")]
    OutOfRange { index: usize, max: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("unknown group spec `{0}`")]
    UnknownGroup(String),
    #[error("malformed Cayley table: {0}")]
    MalformedTable(String),
    #[error("{what} cap exceeded: {size} > {cap}")]
    Cap {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("evaluation budget exceeded: {needed} > {budget}")]
    Budget { needed: u128, budget: u64 },
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("subgroup is not invariant under the given automorphisms")]
    NotCharacteristic,
    #[error("group is not characteristically simple")]
    NotCharSimple,
    #[error("group is not nonabelian simple")]
    NotNonabelianSimple,
    #[error("automorphism set is empty")]
    EmptyAutSet,
    #[error("base tuple does not satisfy the equation")]
    BaseNotSolution,
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("io error: {0}")]
    Io(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Limit,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Cap { .. } | Error::Budget { .. } => ErrorClass::Limit,
            _ => ErrorClass::Usage,
        }
    }

    pub(crate) fn cap(what: &'static str, size: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::Cap {
            what,
            size: size.into(),
            cap: cap.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

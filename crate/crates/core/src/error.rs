use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the supported range (< 2^62)")]
    ModulusTooLarge(u64),
    #[error("unrecognized field `{0}` (expected \"Q\" or \"F<p>\")")]
    Unrecognized(String),
}

/// Failure to read a polynomial expression. Positions are byte offsets into
/// the input text.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("inhomogeneous expression: terms of degree {first} and {second}")]
    Inhomogeneous { first: u32, second: u32 },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("coefficient at position {pos} is undefined in characteristic {p}")]
    Coefficient { pos: usize, p: u64 },
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::UnknownVariable { pos, .. }
            | ParseError::Syntax { pos, .. }
            | ParseError::Coefficient { pos, .. } => Some(*pos),
            ParseError::Inhomogeneous { .. } => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("a ring needs at least one variable")]
    NoVariables,
    #[error("{0} variables requested; at most {max} are supported", max = crate::polyring::MAX_VARS)]
    TooManyVariables(usize),
    #[error("invalid or duplicate variable name `{0}`")]
    BadVariable(String),
    #[error("relation {index} has degree {degree}; relations must be homogeneous of degree >= 1")]
    RelationDegree { index: usize, degree: u32 },
    #[error("relation {index}: {source}")]
    Relation { index: usize, source: ParseError },
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomError {
    #[error("parameters out of range: {0}")]
    Domain(String),
    #[error("symmetric powers of the tangent bundle are only computed in characteristic 0 (got {0})")]
    PrimeFieldRefused(crate::field::FieldSpec),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VanishError {
    #[error("parameters out of range: {0}")]
    Domain(String),
    #[error(transparent)]
    Cohom(#[from] CohomError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("degree cap {cap} is below the required minimum {required}")]
    CapTooSmall { cap: u32, required: u32 },
}

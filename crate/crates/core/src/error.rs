use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of order {p}^{k} exceeds the supported size")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("mixed fields: {0} and {1}")]
    MixedFields(String, String),
    #[error("no embedding of {0} into {1}")]
    NoEmbedding(String, String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("exponent {exponent} of variable {var} reaches the cap {cap}")]
    DegreeCap { var: usize, exponent: u32, cap: u32 },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("K is not a subtorus with torus quotient: {0}")]
    NotPrimitive(String),
    #[error("B drops rank modulo {0}; the arrangement is undefined in this characteristic")]
    CharacteristicDrop(u32),
    #[error("point not on mu^-1(lambda): {0}")]
    NotOnFiber(String),
    #[error("inconsistent lambda: {0}")]
    InconsistentLambda(String),
    #[error("orbit is not closed: {0}")]
    OrbitNotClosed(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

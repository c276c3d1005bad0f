use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order {0} is outside the supported range (q <= 16)")]
    UnsupportedField(u64),
    #[error("q = {q} is not admitted by the {tier} tier")]
    UnsupportedTier { q: u32, tier: String },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{m} does not divide q - 1 = {order}")]
    OrderDoesNotDivide { m: u64, order: u64 },
    #[error("classify_prime_power requires n >= 2, got {0}")]
    TooSmall(u64),
    #[error("matrix is singular")]
    Singular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("estimated memory {estimate} bytes exceeds budget {budget} bytes")]
    MemoryBudget { estimate: u64, budget: u64 },
    #[error("export of {vertices} vertices exceeds the cap of {cap}")]
    ExportCap { vertices: usize, cap: usize },
    #[error("corrupt cache file: {0}")]
    CorruptCache(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("prime {0} is not allowed here: {1}")]
    BadPrime(u64, &'static str),
    #[error("invalid datum: {0}")]
    InvalidDatum(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {what} (prime {prime})")]
    Unsupported { what: String, prime: u64 },
    #[error("budget exceeded: estimated {estimate} operations, cap {cap}")]
    Budget { estimate: u128, cap: u128 },
    #[error("density did not stabilize by i={0}")]
    Unstable(u32),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
}

impl Error {
    pub fn unsupported(what: impl Into<String>, prime: u64) -> Self {
        Error::Unsupported {
            what: what.into(),
            prime,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

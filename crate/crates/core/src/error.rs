use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("order {order} exceeds cap {cap}")]
    CapExceeded { order: usize, cap: usize },
    #[error("registry cap {cap} too small for n = {n} (need {needed})")]
    RegistryTooSmall { n: usize, cap: usize, needed: usize },
    #[error("sieve bound {bound} too small for x = {x}")]
    SieveBoundExceeded { x: f64, bound: u64 },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("matrix is not Hadamard")]
    NotHadamard,
    #[error("matrix is singular")]
    Singular,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no matrix available for order {0}")]
    NoMatrix(usize),
    #[error("no witness constructible for n = {0}")]
    NoWitness(usize),
    #[error("internal invariant failed: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

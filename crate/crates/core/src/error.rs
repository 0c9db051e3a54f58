use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("adjacency matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("adjacency matrix is empty")]
    EmptyMatrix,

    #[error("adjacency matrix is not symmetric at ({row}, {col})")]
    AsymmetricMatrix { row: usize, col: usize },

    #[error("negative adjacency entry {value} at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize, value: i64 },

    #[error("adjacency entry {value} at ({row}, {col}) does not fit in 32 bits")]
    EntryTooLarge { row: usize, col: usize, value: i64 },

    #[error("vertex {vertex} out of range for graph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("graph is not regular")]
    NotRegular,

    #[error("graph is not connected")]
    NotConnected,

    #[error("graph is not simple")]
    NotSimple,

    #[error("degree {0} is too small; at least 2 is required")]
    DegreeTooSmall(usize),

    #[error("walk enumeration would visit {required} extensions, cap is {cap}")]
    SizeCapExceeded { required: u128, cap: u128 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("division by zero in finite field")]
    DivisionByZero,

    #[error("preconditions not met: {0}")]
    PreconditionsNotMet(String),

    #[error("search cap exceeded: {0}")]
    CapExceeded(String),

    #[error("unknown graph name: {0}")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

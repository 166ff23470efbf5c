use thiserror::Error;

/// Errors produced by table construction, search, and the command harness.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("order {order} exceeds the limit of {limit}")]
    OrderTooLarge { order: usize, limit: usize },

    #[error("table is not associative: ({}·{})·{} ≠ {}·({}·{})", .0.0, .0.1, .0.2, .0.0, .0.1, .0.2)]
    NotAssociative((usize, usize, usize)),

    #[error("element {0} out of range for a table of order {1}")]
    ElementOutOfRange(usize, usize),

    #[error("no t ≤ {bound} with a^t = a for element {element}")]
    NoRecurrence { element: usize, bound: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("local exponent {0} is not of the form 2^m + 1")]
    ExponentNotPowerOfTwoPlusOne(usize),

    #[error("seed set is empty")]
    EmptySeed,

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: String,
    },

    #[error("order {order} is above the exhaustive search cap {cap}")]
    OrderTooLargeForExhaustive { order: usize, cap: usize },

    #[error("no (p, q) with max{{(p-1)q, p(q-1)}} < {0} < pq exists")]
    NoSolution(u64),

    #[error("every band of order ≥ {0} has a subsemigroup of order {0}")]
    TheoremForbids(usize),

    #[error("r - 1 = {0} has no odd prime factor")]
    NoOddPrimeFactor(u64),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

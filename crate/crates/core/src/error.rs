use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Neuron count below 3, which leaves `p = ln N / N` outside `(0, 1)`.
    TooFewNeurons(usize),
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// `M·N` exceeds the configured cell budget.
    MemoryBudget {
        cells: u128,
        budget: u128,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    PatternOutOfRange {
        mu: usize,
        count: usize,
    },
    NeuronOutOfRange {
        index: usize,
        n: usize,
    },
    /// Malformed ternary configuration (zero spin stored, unsorted or duplicate index).
    InvalidConfig(&'static str),
    /// Dense reference evaluation refused for `n` above the guard limit.
    OracleTooLarge {
        n: usize,
        limit: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::TooFewNeurons(n) => write!(f, "need at least 3 neurons, got {n}"),
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid {name} = {value}: {reason}"),
            Error::MemoryBudget { cells, budget } => write!(
                f,
                "pattern array of {cells} cells exceeds the budget of {budget}"
            ),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::PatternOutOfRange { mu, count } => {
                write!(f, "pattern index {mu} out of range (M = {count})")
            }
            Error::NeuronOutOfRange { index, n } => {
                write!(f, "neuron index {index} out of range (N = {n})")
            }
            Error::InvalidConfig(what) => write!(f, "invalid ternary configuration: {what}"),
            Error::OracleTooLarge { n, limit } => {
                write!(f, "dense oracle limited to N <= {limit}, got {n}")
            }
        }
    }
}

impl core::error::Error for Error {}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("weight set must be non-empty")]
    EmptyWeights,

    #[error("weight {weight} is zero modulo {modulus}")]
    ZeroWeight { weight: u64, modulus: u64 },

    #[error("{s} is not a nontrivial involution modulo {n}")]
    InvalidS { n: u64, s: u64 },

    #[error("no coprime split of {n} with {s} = -1 on one factor and +1 on the other")]
    NoValidSplit { n: u64, s: u64 },

    #[error("{what}: size {size} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u64,
        limit: u64,
    },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("expected a sequence of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("search budget exceeded after {nodes} nodes; best lower bound {lower_bound}")]
    BudgetExceeded { lower_bound: usize, nodes: u64 },

    #[error(
        "bound violation at n={n}, s={s}: exact {exact} not within [{lower}, {upper}]"
    )]
    BoundViolation {
        n: u64,
        s: u64,
        lower: u64,
        exact: u64,
        upper: u64,
    },
}

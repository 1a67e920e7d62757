use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operands live in Q_{0} and Q_{1}")]
    PrimeMismatch(u32, u32),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("argument outside the convergence domain: {0}")]
    OutOfDomain(String),
    #[error("Hensel hypothesis failed: {0}")]
    HenselHypothesisFailed(String),
    #[error("root multiplicity could not be resolved at working precision")]
    MultiplicityUnresolved,
    #[error("parameters outside the supported regime: {0}")]
    OutOfRegime(String),
    #[error("input is the pole of the map")]
    SingularInput,
    #[error("ball is not inside a region with exact scaling")]
    NotScalingDomain,
    #[error("orbit left the partition at step {0}")]
    EscapesPartition(usize),
    #[error("word is not admissible: {0}")]
    InadmissibleWord(String),
    #[error("itineraries agree on the whole available horizon")]
    EqualToHorizon,
    #[error("block has length {got}, expected {expected}")]
    BadBlockLength { expected: usize, got: usize },
    #[error("degenerate solution form: {0}")]
    DegenerateForm(String),
    #[error("partition function vanishes at working precision")]
    PartitionFunctionZero,
    #[error("enumeration too large: {0}")]
    Infeasible(String),
    #[error("alpha size {0} is excluded")]
    InadmissibleAlpha(usize),
    #[error("cycle relation fails at level {0}")]
    NotACycle(usize),
    #[error("partition is not Markov: {0}")]
    NotMarkov(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

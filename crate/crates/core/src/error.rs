use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("bilinear form is degenerate on the given subspace")]
    DegenerateForm,

    #[error("bilinear form stayed degenerate after {attempts} draws")]
    DegenerateAfterRetries { attempts: usize },

    #[error("epsilon {eps} outside the accepted range {range}")]
    InvalidEpsilon { eps: f64, range: &'static str },

    #[error("instance has no weights")]
    MissingWeights,

    #[error("weight of element {index} is negative")]
    NegativeWeight { index: usize },

    #[error("brute force limited to n <= {limit}, got {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown solver `{0}`")]
    UnknownSolver(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

use thiserror::Error;

/// Errors raised by index algebra, series evaluation and the verification harnesses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {0} is not admissible (last part must be at least 2)")]
    NotAdmissible(String),
    #[error("empty index is not allowed here")]
    EmptyIndex,
    #[error("index part must be a positive integer, got {0}")]
    NonPositivePart(i64),
    #[error("argument count {args} does not match index depth {depth}")]
    ArityMismatch { depth: usize, args: usize },
    #[error("zero argument at position {0}: 1/z is undefined")]
    ZeroArgument(usize),
    #[error("symbolic argument `{0}` cannot be used where an exact number is required")]
    SymbolicArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("not series-convergent: {0}")]
    NotConvergent(String),
    #[error("letter {0} lies on the open integration path (0,1)")]
    LetterOnPath(String),
    #[error("iterated integral diverges: {0}")]
    DivergentWord(String),
    #[error("requested precision unreachable within {cap} terms (needed about {needed})")]
    TermCap { cap: usize, needed: usize },
    #[error("ODE step size underflow near t = {0}")]
    StepUnderflow(String),
    #[error("{0} is not invertible modulo {1}")]
    NotInvertible(String, String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("p = 2 is excluded (the coefficient 1/2 must be invertible)")]
    EvenPrime,
    #[error("modulus {0}^{1} does not fit in 63 bits")]
    ModulusTooLarge(u64, u32),
    #[error("too many variables: {0} (at most {1} supported)")]
    TooManyVariables(usize, usize),
    #[error("exponent overflow in monomial")]
    ExponentOverflow,
    #[error("duality hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("argument outside the supported domain: {0}")]
    UnsupportedDomain(String),
    #[error("relation search: {0}")]
    Relation(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

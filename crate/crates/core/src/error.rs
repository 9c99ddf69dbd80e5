use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("field of order {q} exceeds the configured bound {bound}")]
    FieldTooLarge { q: u64, bound: u64 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus is not a monic irreducible polynomial: {0}")]
    BadModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    ContextMismatch,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("element is not a square")]
    NotASquare,
    #[error("{d} does not divide the group order {order}")]
    NotADivisor { d: u64, order: u64 },
    #[error("invalid coefficient vector: {0}")]
    BadCoefficients(String),

    #[error("evaluation set contains duplicate points")]
    DuplicatePoints,
    #[error("evaluation set size {n} outside 1..={max}")]
    BadSetSize { n: usize, max: u64 },
    #[error("scaling vector has a zero entry at position {0}")]
    ZeroScaling(usize),
    #[error("dimension k = {k} invalid for length n = {n}")]
    BadDimension { k: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("evaluation set contains the point at infinity")]
    InfinityInSet,
    #[error("point is not a member of the evaluation set")]
    NotAMember,
    #[error("operation does not support the point at infinity")]
    InfinityUnsupported,
    #[error("search space of {count} exceeds the bound {bound}")]
    TooLarge { count: u128, bound: u128 },
    #[error("only {available} unerased coordinates, need {needed}")]
    TooManyErasures { available: usize, needed: usize },
    #[error("received word is not a codeword")]
    InconsistentWord,

    #[error("evaluation set needs at least 2 points")]
    SetTooSmall,
    #[error("quadratic characters of delta values differ")]
    CharactersNotEqual,
    #[error("evaluation set must have even size")]
    OddLength,
    #[error("evaluation set must have odd size")]
    EvenLength,
    #[error("-delta is not a square at some point")]
    NegCharacterNotSquare,
    #[error("length n must be even")]
    OddN,
    #[error("internal verification failed: {0}")]
    InternalVerificationFailed(String),

    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),
    #[error("case condition violated: {0}")]
    CaseConditionViolated(String),
    #[error("{0} is not the square of an odd prime power")]
    NotOddSquare(u64),

    #[error("transform is singular (ad - bc = 0)")]
    SingularTransform,
    #[error("input code is not self-dual")]
    NotSelfDual,
    #[error("evaluation set does not contain infinity")]
    NoInfinity,
    #[error("evaluation set is the full projective line")]
    FullProjectiveLine,

    #[error("malformed descriptor: {0}")]
    Descriptor(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

use thiserror::Error;

/// Errors shared across the library.
///
/// Every variant carries a stable machine-readable code (see [`AlgError::code`])
/// so command-line consumers can match on failure modes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("operands live in different fields: {left} vs {right}")]
    MixedFields { left: String, right: String },
    #[error("operands have different alphabets: {left} vs {right} letters")]
    AlphabetMismatch { left: usize, right: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { pos: usize, name: String },
    #[error("bad coefficient at position {pos}: {msg}")]
    BadCoefficient { pos: usize, msg: String },
    #[error("expected {expected} images, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("zero input not allowed here")]
    ZeroInput,
    #[error("constant input not allowed here")]
    ConstantInput,
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error("k must be >= 2, got {0}")]
    BadK(i64),
    #[error("bad degree bound: {0}")]
    BadBound(String),
    #[error("rank-2 operation called on alphabet of size {got}")]
    NotRankTwo { got: usize },
    #[error("endomorphism does not fix the given polynomial")]
    NotFixing,
    #[error("no idempotent power found within {max_iter} compositions")]
    NoConvergence { max_iter: u32 },
    #[error("not a proper retraction: {0}")]
    NotARetraction(String),
    #[error("subduction failed: {0}")]
    ProperSubductionFailure(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("search cap {cap} exceeded")]
    CapExceeded { cap: u32 },
    #[error("leading word is not a square: {0}")]
    NotASquareLeading(String),
    #[error("leading word is not an n-th power: {0}")]
    NotAnNthPowerLeading(String),
    #[error("field characteristic {ch} divides root index {n}")]
    CharDividesN { ch: u64, n: u32 },
    #[error("candidate basis exhausted after {rounds} closure rounds with an unsolvable slice at degree {degree}")]
    BasisExhausted { degree: i64, rounds: u32 },
    #[error(
        "input series floor {actual} is too shallow; need exactness down to degree {required}"
    )]
    InsufficientFloor { required: i64, actual: String },
    #[error("truncation floor {floor} exceeds top degree {top}: nothing provable remains")]
    FloorCollapse { floor: i64, top: String },
    #[error("word is a proper power of a shorter word")]
    ImprimitiveU,
}

impl AlgError {
    /// Stable error code for structured output.
    pub fn code(&self) -> &'static str {
        match self {
            AlgError::MixedFields { .. } => "MixedFields",
            AlgError::AlphabetMismatch { .. } => "AlphabetMismatch",
            AlgError::DivisionByZero => "DivisionByZero",
            AlgError::NotPrime(_) => "NotPrime",
            AlgError::ZeroPolynomial => "ZeroPolynomial",
            AlgError::BadWeights(_) => "BadWeights",
            AlgError::SyntaxError { .. } => "SyntaxError",
            AlgError::UnknownVariable { .. } => "UnknownVariable",
            AlgError::BadCoefficient { .. } => "BadCoefficient",
            AlgError::ArityMismatch { .. } => "ArityMismatch",
            AlgError::ZeroInput => "ZeroInput",
            AlgError::ConstantInput => "ConstantInput",
            AlgError::HypothesesNotMet(_) => "HypothesesNotMet",
            AlgError::BadK(_) => "BadK",
            AlgError::BadBound(_) => "BadBound",
            AlgError::NotRankTwo { .. } => "NotRankTwo",
            AlgError::NotFixing => "NotFixing",
            AlgError::NoConvergence { .. } => "NoConvergence",
            AlgError::NotARetraction(_) => "NotARetraction",
            AlgError::ProperSubductionFailure(_) => "ProperSubductionFailure",
            AlgError::PreconditionFailed(_) => "PreconditionFailed",
            AlgError::CapExceeded { .. } => "CapExceeded",
            AlgError::NotASquareLeading(_) => "NotASquareLeading",
            AlgError::NotAnNthPowerLeading(_) => "NotAnNthPowerLeading",
            AlgError::CharDividesN { .. } => "CharDividesN",
            AlgError::BasisExhausted { .. } => "BasisExhausted",
            AlgError::InsufficientFloor { .. } => "InsufficientFloor",
            AlgError::FloorCollapse { .. } => "FloorCollapse",
            AlgError::ImprimitiveU => "ImprimitiveU",
        }
    }
}

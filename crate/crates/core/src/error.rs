use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("series is not invertible (zero constant term)")]
    NotInvertible,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid leg positions {positions:?} for {legs} legs")]
    InvalidPositions { positions: Vec<usize>, legs: usize },
    #[error("invalid permutation {0:?}")]
    InvalidPermutation(Vec<usize>),
    #[error("expected {expected} legs, got {got}")]
    LegCount { expected: usize, got: usize },
    #[error("a coefficient has nonzero constant term; exponential does not terminate")]
    NonZeroConstantTerm,
    #[error("tensor is not unital modulo h")]
    NotUnital,
    #[error("letter {letter} out of range for dimension {dim}")]
    LetterOutOfRange { letter: usize, dim: usize },
    #[error("bivector is not symmetric")]
    NotSymmetric,
    #[error("bivector is not skew")]
    NotSkew,
    #[error("bivector has matrix rank {0}; a decomposable v⊗w is required")]
    NotDecomposable(usize),
    #[error("element is not primitive")]
    NotPrimitive,
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("input is not a single cyclic class")]
    NotSingleClass,
    #[error("inconsistent linear system")]
    InconsistentSystem,
    #[error("usage: {0}")]
    Usage(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: usize, right: usize },
    #[error("vector has a nonzero {0}-part")]
    WrongComponent(&'static str),
    #[error("element is not in the left ideal Cl(V)f: monomial {0} misses an f-factor")]
    NotInLeftIdeal(String),
    #[error("{0} is not a nilpotent root vector")]
    NotRootVector(String),
    #[error("element has e^e or f^f terms, expected an element of gl(E)")]
    NotGlElement,
    #[error("operation needs level n >= 1")]
    LevelZero,
    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("isotropic vector lies in F")]
    VectorInF,
    #[error("rows {i} and {j} pair to {value}, subspace is not isotropic")]
    NonIsotropicRows { i: usize, j: usize, value: String },
    #[error("rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("isotropic subspace of dimension {dim} is not maximal at level {n}")]
    NotMaximal { dim: usize, n: usize },
    #[error("zero vector")]
    ZeroVector,
    #[error("dense materialization refused at level {0} (limit is 6)")]
    TooLarge(usize),
    #[error("vector has mixed parity")]
    MixedParity,
    #[error("vectors do not form a hyperbolic pair")]
    NotHyperbolic,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("too few points: {points} given, at least {required} needed")]
    TooFewPoints { points: usize, required: usize },
    #[error("discovery failure: {0}")]
    Discovery(String),
    #[error("truncation window {window} too small, need {needed}")]
    Truncation { needed: usize, window: usize },
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not homogeneous")]
    Inhomogeneous,
    #[error("parity mismatch: expected {expected}, found {found}")]
    ParityMismatch { expected: String, found: String },
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

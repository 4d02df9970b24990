use crate::dist::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("bias {0} outside (0, 1/2]")]
    BiasOutOfRange(Rational),
    #[error("target bias {target} exceeds source bias {have}")]
    BiasOrdering { have: Box<Rational>, target: Box<Rational> },
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(Rational),
    #[error("rounds must be positive")]
    ZeroRounds,
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize, usize),
        found: (usize, usize, usize),
    },
    #[error("empty alphabet")]
    EmptyAlphabet,
    #[error("event ({x},{y},{z}) outside alphabet {sizes:?}")]
    EventOutOfRange {
        x: usize,
        y: usize,
        z: usize,
        sizes: (usize, usize, usize),
    },
    #[error("zero event ({x},{y},{z}): zero-probability events must be omitted")]
    ZeroEvent { x: usize, y: usize, z: usize },
    #[error("duplicate event ({x},{y},{z})")]
    DuplicateEvent { x: usize, y: usize, z: usize },
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(Rational),
    #[error("conditioning set has zero probability")]
    EmptyCondition,
    #[error("malformed fraction {0:?}")]
    BadFraction(String),
    #[error("channel row {row} sums to {sum}, expected 1")]
    NotStochastic { row: usize, sum: Rational },
    #[error("negative channel entry in row {row}")]
    NegativeEntry { row: usize },
    #[error("protocol: {0}")]
    Protocol(String),
    #[error("cap {0} outside 1..=6")]
    CapOutOfRange(usize),
    #[error("matrix {rows}x{cols} exceeds the 8x8 search limit")]
    MatrixTooLarge { rows: usize, cols: usize },
    #[error("alphabet of {0} values exceeds the search limit of 8")]
    AlphabetTooLarge(usize),
    #[error("tolerance {0} outside [1e-12, 1e-6]")]
    ToleranceOutOfRange(f64),
    #[error("zero state vector")]
    ZeroVector,
    #[error("dimension mismatch: operator is {op}x{op}, local space has dimension {local}")]
    DimensionMismatch { op: usize, local: usize },
    #[error("every ensemble member was eliminated")]
    AllEliminated,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

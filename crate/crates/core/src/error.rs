use thiserror::Error;

pub type Result<T, E = QutritError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QutritError {
    #[error("digit {0:?} is not a qutrit value (expected 0, 1 or 2)")]
    InvalidDigit(char),
    #[error("register size {0} outside supported range 1..={max}", max = crate::register::MAX_QUTRITS)]
    QutritCount(usize),
    #[error("expected {expected} digits, got {actual}")]
    DigitCount { expected: usize, actual: usize },
    #[error("amplitude vector has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("gate acts on {arity} qutrits but {given} positions were given")]
    ArityMismatch { arity: usize, given: usize },
    #[error("position {position} out of range for a {n}-qutrit register")]
    PositionOutOfRange { position: usize, n: usize },
    #[error("position {0} repeated")]
    RepeatedPosition(usize),
    #[error("matrix of dimension {0} is not a power of three")]
    BadDimension(usize),
    #[error("operator {label} is not unitary (deviation {deviation:e})")]
    NotUnitary { label: String, deviation: f64 },
    #[error("registers have different sizes ({0} vs {1} qutrits)")]
    DimensionMismatch(usize, usize),
    #[error("invalid projector family: {0}")]
    InvalidProjectorFamily(String),
    #[error("every outcome has probability below threshold; projector family is inconsistent with the state")]
    InconsistentFamily,
    #[error("operator {0} does not satisfy M³ = I")]
    NotOrder3(String),
    #[error("operator is not a diagonal unitary")]
    NotDiagonal,
    #[error("error model has all coefficients equal to zero")]
    ZeroModel,
    #[error("trial count must be at least 1")]
    NoTrials,
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("ancilla qutrit {0} has support outside the {{0,1}} subspace")]
    AncillaOutOfSubspace(usize),
    #[error("state lies outside the codespace (residual {0})")]
    OutsideCodespace(f64),
    #[error("uncorrectable syndrome: {0}")]
    Uncorrectable(String),
    #[error("unknown gate name {0:?}")]
    UnknownGate(String),
}

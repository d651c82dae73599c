use thiserror::Error;

/// Errors raised by circuit construction, assembly and the solvers.
#[derive(Debug, Error)]
pub enum GsqcError {
    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("gate `{0}` requires a phase index k >= 1")]
    MissingPhaseIndex(String),

    #[error("invalid circuit parameter: {0}")]
    InvalidParameter(String),

    #[error("circuit is invalid: {0}")]
    InvalidCircuit(String),

    #[error("basis does not match circuit: {0}")]
    BasisMismatch(String),

    #[error("ordinal {ordinal} out of range for dimension {dimension}")]
    OrdinalOutOfRange { ordinal: usize, dimension: usize },

    #[error("invalid site: {0}")]
    InvalidSite(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("projection on qubit `{qubit}` row {row} is orthogonal to its incoming state (overlap {overlap:.3e})")]
    ProjectionOrthogonal { qubit: String, row: usize, overlap: f64 },

    #[error("constructed ground state is not a zero mode: residual {residual:.3e}")]
    GroundStateResidual { residual: f64 },

    #[error("zero vector has no Rayleigh quotient")]
    ZeroVector,

    #[error("dimension {dimension} exceeds dense threshold {threshold}")]
    TooLargeForDense { dimension: usize, threshold: usize },

    #[error(
        "eigensolver did not converge after {iterations} iterations (worst residual {residual:.3e}, tol {tol:.3e})"
    )]
    NoConvergence { iterations: usize, residual: f64, tol: f64 },

    #[error("insufficient points for fit: need at least {needed}, have {have}")]
    InsufficientPoints { needed: usize, have: usize },

    #[error("unknown qubit `{0}`")]
    UnknownQubit(String),

    #[error("invalid row cut {cut} for qubit with {rows} rows")]
    InvalidCut { cut: usize, rows: usize },

    #[error("teleportation segment too short on qubit `{qubit}` at row {row}")]
    SegmentTooShort { qubit: String, row: usize },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GsqcError>;

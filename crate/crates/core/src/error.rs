use thiserror::Error;

/// Errors produced by the polarctx engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed observable {0:?}")]
    MalformedObservable(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("the identity class has no projective point")]
    IdentityHasNoPoint,
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("observables {0} and {1} do not commute")]
    NotMutuallyCommuting(String, String),
    #[error("product of the context is not a multiple of the identity")]
    ProductNotIdentity,
    #[error("odd phase exponent {0} on a product of commuting Hermitian observables")]
    InternalPhaseError(u8),
    #[error("unsupported number of qubits {0} (supported: 1..={max})", max = crate::polar::MAX_SPACE_QUBITS)]
    UnsupportedRank(usize),
    #[error("column-space rank {rank} exceeds the enumeration cap {cap}")]
    CapExceeded { rank: usize, cap: usize },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("point {0:07b} left the quadric under the coordinate map")]
    ImageOffQuadric(u8),
    #[error("budget of {limit} exceeded ({progress})")]
    BudgetExceeded { limit: usize, progress: String },
    #[error("invalid context {index}: {reason}")]
    InvalidContext { index: usize, reason: String },
    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),
    #[error("invalid orbit database: {0}")]
    InvalidDatabase(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

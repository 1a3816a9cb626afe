use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("subsystem dimensions {dims:?} do not multiply to {len}")]
    DimsProduct { dims: Vec<usize>, len: usize },

    #[error("state vector norm is {0}, expected 1")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("operation needs at least two subsystems, state has {0}")]
    NotComposite(usize),

    #[error("projection has vanishing probability {0:e}")]
    VanishingProbability(f64),

    #[error("invalid basis permutation {0:?}")]
    InvalidPermutation(Vec<usize>),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported qudit dimension {0} (supported: 2, 3)")]
    UnsupportedDimension(usize),

    #[error("unknown analyzer label {0:?}")]
    UnknownLabel(String),

    #[error("insufficient measurement settings: rank {rank} of {needed} required")]
    InsufficientSettings { rank: usize, needed: usize },

    #[error("quadrature did not converge: last change {delta:e} at {points} points per axis")]
    QuadratureNotConverged { delta: f64, points: usize },

    #[error("waists differ: {0} vs {1}")]
    WaistMismatch(f64, f64),

    #[error("no crossing of the qubit boundary for r in [0, 1]")]
    NoCrossing,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

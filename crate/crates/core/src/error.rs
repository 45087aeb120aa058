use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^H| = {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rank {rank} is outside 1..={dim}")]
    BadRank { rank: usize, dim: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("invalid probability vector: {0}")]
    BadProbabilityVector(&'static str),
    #[error("bell state index {0} is outside 0..4")]
    BadBellIndex(usize),
    #[error("normalization trace {trace:e} is too small")]
    DegenerateNormalization { trace: f64 },
    #[error("state vector norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },
    #[error("determinant {det_re} + {det_im}i differs from 1")]
    NotUnitDeterminant { det_re: f64, det_im: f64 },
    #[error("no Bell-diagonal state has the requested spectrum and concurrence {target}")]
    InfeasibleSpectrum { target: f64 },
    #[error("target concurrence {0} is outside [0, 1]")]
    BadConcurrence(f64),
    #[error("optimizer did not reach gradient norm {tolerance:e} (best {gradient_norm:e})")]
    NoConvergence { gradient_norm: f64, tolerance: f64 },
    #[error("restarts must be at least 1")]
    BadRestarts,
    #[error("invalid grid: {0}")]
    BadGrid(&'static str),
    #[error("objective is not finite at the stencil point")]
    ObjectiveNotFinite,
    #[error("both energy scales are zero")]
    BothZero,
    #[error("invalid energy statistics")]
    BadHamiltonianStats,
    #[error("omega must be positive and finite, got {0}")]
    BadOmega(f64),
    #[error("pure-angle mode needs pure states")]
    NotPure,
    #[error("observable is not Hermitian")]
    NotHermitianObservable,
    #[error("correlator magnitude must be positive for the logarithm")]
    ZeroCorrelator,
    #[error("invalid Lieb-Robinson constants: {0}")]
    BadLrbInputs(&'static str),
}

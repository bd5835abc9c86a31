use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spin magnitude must be a positive multiple of 1/2, got {0}")]
    InvalidSpin(f64),

    #[error("coherent label is not finite")]
    NonFiniteLabel,

    #[error("fiducial index {index} out of range (limit {limit})")]
    FiducialOutOfRange { index: usize, limit: usize },

    #[error("truncation {truncation} too small: norm deficit {deficit:e} exceeds {tolerance:e}")]
    TruncationTooSmall {
        truncation: usize,
        deficit: f64,
        tolerance: f64,
    },

    #[error("hamiltonian is not hermitian: {0}")]
    NotHermitian(&'static str),

    #[error("parameter `{0}` is not finite")]
    NonFiniteParameter(&'static str),

    #[error("classical energy has imaginary residue {0:e}")]
    ImaginaryEnergy(f64),

    #[error("invalid integrator configuration: {0}")]
    InvalidIntegratorConfig(&'static str),

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("time {t} outside trajectory range [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("hilbert space dimension {dim} exceeds cap {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("oracle configuration mismatch")]
    ConfigMismatch,

    #[error("unsupported group pairing for the oracle (need h(3) x su(2))")]
    UnsupportedGroups,

    #[error("exact evolution failed to converge")]
    EvolutionDiverged,

    #[error("energy root not bracketed in [{lo}, {hi}]")]
    RootNotBracketed { lo: f64, hi: f64 },
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:e})")]
    NotHermitian { max_asymmetry: f64 },

    #[error("matrix is not unitary: worst entry ({row}, {col}) of U^dag U deviates by {deviation:e}")]
    NotUnitary {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("state norm squared {0} deviates from 1")]
    NotNormalized(f64),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("value {value} outside domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("ket |{horizontal}^{photons}> not in a channel with n_max = {n_max}")]
    KetOutOfSpace {
        photons: u32,
        horizontal: u32,
        n_max: u32,
    },

    #[error("invalid parameter point: eigenvalue {value} outside [0, 1]")]
    InvalidParameters { value: f64 },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("attack file line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown attack '{0}'")]
    UnknownAttack(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("message exhausted: {sent} of {len} bits carried by the available encode rounds")]
    MessageExhausted { sent: usize, len: usize },

    #[error("no comparable rounds for QBER estimation")]
    NoComparableRounds,

    #[error("session insecure, transmission aborted: {0}")]
    Aborted(String),
}

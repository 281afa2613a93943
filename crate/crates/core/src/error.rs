use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {asymmetry:e}")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("symbol does not match the spectrum of the operand ({axis})")]
    SpectrumMismatch { axis: &'static str },
    #[error("operand is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("kernel is not 2π-periodic: boundary jump {jump:e}")]
    Aperiodic { jump: f64 },
    #[error("Sobolev order d = {d} must exceed 1/p = {inv_p}")]
    SobolevOrder { d: u32, inv_p: f64 },
    #[error("grid of size {grid} does not resolve the kernel: relative change {change:e} against the half grid")]
    Unresolved { grid: usize, change: f64 },
    #[error("no derivative data: kernel lacks closed-form partials and spectral differentiation is unavailable")]
    MissingDerivatives,
    #[error("bisection for k = {k} cannot reach tolerance {tol:e} (residual {residual:e})")]
    ToleranceUnreachable { k: u64, tol: f64, residual: f64 },
    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter { name, reason: reason.into() }
}

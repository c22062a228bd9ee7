use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("momentum {p} outside the phase space |p| <= {limit}")]
    Domain { p: f64, limit: f64 },

    #[error("derivative is singular on the rim |p| = Ns*hbar (p = {p})")]
    RimSingularity { p: f64 },

    #[error("eigensolver failed to converge for index {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("spectrum was computed without eigenvectors")]
    MissingEigenvectors,

    #[error("state index {n} out of range 0..={max}")]
    StateIndex { n: usize, max: usize },

    #[error("degenerate spectrum range: all eigenvalues equal {0}")]
    DegenerateRange(f64),

    #[error("energy {energy} outside the classical range [{min}, {max}]")]
    EnergyOutOfRange { energy: f64, min: f64, max: f64 },

    #[error("period diverges at the separatrix energy {0}")]
    Separatrix(f64),

    #[error("no potential barrier: {0}")]
    NoBarrier(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("semiclassical level count mismatch: found {found}, expected {expected} ({detail})")]
    CountMismatch {
        found: usize,
        expected: usize,
        detail: String,
    },

    #[error("unsupported geometry: {0}")]
    Unsupported(String),

    #[error("norm violation: |psi1|^2 + |psi2|^2 = {norm}, expected {expected}")]
    Norm { norm: f64, expected: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

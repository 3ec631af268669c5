use thiserror::Error;

/// Errors raised by the numerics and the verification harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("not Hermitian (asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace is not 1 (got {0})")]
    NotNormalized(f64),

    #[error("dimension profile {profile:?} inconsistent with dimension {dim}")]
    InvalidProfile { profile: Vec<usize>, dim: usize },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("operator is zero")]
    ZeroOperator,

    #[error("order alpha = {alpha} unsupported for {what}")]
    UnsupportedOrder { alpha: f64, what: &'static str },

    #[error("exponent constraint violated: residual {0:.3e}")]
    ExponentConstraint(f64),

    #[error("state is not classical on the conditioning register (off-block norm {0:.3e})")]
    NotClassical(f64),

    #[error("operators do not commute (commutator norm {0:.3e})")]
    NonCommuting(f64),

    #[error("operator is singular (min eigenvalue {0:.3e})")]
    Singular(f64),

    #[error("optimizer did not converge: gradient residual {residual:.3e} after {iterations} iterations")]
    OptimizerNoConvergence { residual: f64, iterations: usize },

    #[error("SDP solver did not converge: gap {gap:.3e}, infeasibility {infeasibility:.3e} after {iterations} iterations")]
    SdpNoConvergence {
        gap: f64,
        infeasibility: f64,
        iterations: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown check identifier `{0}`")]
    UnknownCheck(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

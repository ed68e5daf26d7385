use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric: entry ({row},{col}) = {upper} but ({col},{row}) = {lower}")]
    NotSymmetric {
        row: usize,
        col: usize,
        upper: String,
        lower: String,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("vertex enumeration over 2^{m} sign patterns exceeds the cap of 2^{cap}")]
    EnumerationCap { m: usize, cap: usize },

    #[error("restricted determinant vanishes identically along the line")]
    ZeroPolynomial,

    #[error("point is not strictly interior (smallest eigenvalue {lambda_min:e})")]
    NotInterior { lambda_min: f64 },

    #[error("matrix {0} is not positive definite")]
    NotPositiveDefinite(String),

    #[error("no feasible d up to {cap:e}")]
    NoFeasibleD { cap: f64 },

    #[error("membership holds at d = {d:e}; the set is unbounded below in d")]
    UnboundedBelow { d: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{0}")]
    Parse(String),
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no overlap with N_L <= {max_n_left} gives explicit interpolation (delta = {delta}, N_R = {n_right})")]
    InfeasibleOverlap {
        delta: f64,
        n_right: usize,
        max_n_left: usize,
    },

    #[error("degenerate interpolation stencil: donor coordinates {0} and {1} coincide")]
    DegenerateStencil(f64, f64),

    #[error("halo of width {have} is too small, operator needs {need}")]
    HaloTooSmall { have: usize, need: usize },

    #[error("safety factor s_f = {s_f} is not below sigma = {sigma}")]
    BoundViolation { s_f: f64, sigma: f64 },

    #[error("singular system (condition estimate {cond_estimate:e})")]
    SingularSystem { cond_estimate: f64 },

    #[error("linear solve residual {residual:e} exceeds {limit:e}")]
    ResidualTooLarge { residual: f64, limit: f64 },

    #[error("interpolation is not explicit: {0}")]
    ImplicitInterpolation(String),

    #[error("eigenvalue solver did not converge")]
    Eigensolver,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad input rather than by the numerics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidArgument(_)
                | Error::BoundViolation { .. }
                | Error::HaloTooSmall { .. }
                | Error::DegenerateStencil(..)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

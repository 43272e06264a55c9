use thiserror::Error;

/// Errors produced by the synthesis engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid material: {0}")]
    Material(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    /// The transverse antenna distance exceeds the validity limit of the
    /// semi-elliptical integration contour. Beyond `delta_rho/lambda = 3600`
    /// the integrand oscillates too rapidly and a steepest-descent path
    /// would be required instead.
    #[error(
        "transverse distance guard{at}: delta_rho/lambda = {ratio:.1} >= 3600; \
         the semi-elliptical contour is not valid here and evaluation would \
         require a steepest-descent path"
    )]
    TransverseGuard { ratio: f64, at: String },

    #[error("quadrature did not converge: {0}")]
    NonConvergent(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

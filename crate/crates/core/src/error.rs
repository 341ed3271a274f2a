use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("square discriminant {0}")]
    SquareDiscriminant(i64),
    #[error("non-positive discriminant {0}")]
    NonPositiveDiscriminant(i64),
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i128),
    #[error("leading coefficient must be positive, got a = {0}")]
    NonPositiveLeading(i64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("point is not in the upper half-plane (Im z = {0})")]
    NotInUpperHalfPlane(f64),
    #[error("fundamental-domain reduction did not converge for z = {re} + {im}i")]
    ReductionDiverged { re: f64, im: f64 },
    #[error("unknown q-expansion `{0}`")]
    UnknownExpansion(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("divergent lattice sum: convergence exponent {0} must exceed 2")]
    Divergent(f64),
    #[error("quadrature did not converge within {panels} panels (error estimate {estimate:e})")]
    QuadratureFailed { panels: usize, estimate: f64 },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    /// Numerical breakdown (as opposed to invalid input): overflow, failed
    /// reduction or quadrature.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::Overflow(_)
                | Error::NotInUpperHalfPlane(_)
                | Error::ReductionDiverged { .. }
                | Error::QuadratureFailed { .. }
        )
    }
}

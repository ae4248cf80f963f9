use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),
    #[error("1F1 lower parameter {b} hits a pole before the series terminates")]
    NonterminatingPolePassed { b: f64 },
    #[error("{what} did not converge within {limit} iterations")]
    NoConvergence { what: &'static str, limit: usize },
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tol:e}")]
    QuadratureFailure { estimate: f64, tol: f64 },
    #[error("cross-check of {what} failed at index {index}: relative difference {rel:e} > {tol:e}")]
    CrossCheck {
        what: &'static str,
        index: usize,
        rel: f64,
        tol: f64,
    },
    #[error("Hankel determinant of order {n} keeps only {digits:.1} reliable digits")]
    PrecisionExhausted { n: usize, digits: f64 },
    #[error("Hankel determinant of order {n} vanishes at working precision")]
    SingularHankel { n: usize },
    #[error("a_{n}^2 is not positive although the weight is")]
    NonPositiveNorm { n: usize },
    #[error("theta_{n} is degenerate (0 or -t) at t = {t}")]
    DegenerateTheta { n: usize, t: f64 },
    #[error("vector field is singular at t = {t}")]
    SingularRhs { t: f64 },
    #[error("trajectory reached the singular locus; last good t = {last_good_t}")]
    SingularityEncountered { last_good_t: f64 },
    #[error("evaluation panel touches the Painleve V singular locus at t = {t}")]
    SingularPanel { t: f64 },
}

impl Error {
    /// Parameter-validation failures, as opposed to numerical breakdowns.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameters(_) | Error::UnsupportedParameters(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

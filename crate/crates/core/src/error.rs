use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Γ or a Pochhammer denominator hit a pole.
    #[error("pole: {0}")]
    Pole(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Sum of two exact values living in different radical classes.
    #[error("mixed radical sum: {0} + {1}")]
    MixedRadical(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The request itself is malformed or violates an integrability condition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The request is fine but this particular route cannot evaluate it.
    #[error("route inapplicable: {0}")]
    RouteInapplicable(String),

    #[error("no closed-form route applies ({0}); use route=oracle")]
    NoRoute(String),

    #[error("series does not terminate: {0}")]
    NonTerminating(String),

    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: usize, cap: usize },

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e}, tol {tol:e}")]
    Quadrature { estimate: f64, error: f64, tol: f64 },

    /// A numerical scheme could not reach its target; `estimate` is the best value found.
    #[error("accuracy not reached: estimate {estimate:e} with error {error:e}")]
    Accuracy { estimate: f64, error: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("job file: {0}")]
    Job(String),

    /// Two computations that must agree did not.
    #[error("value mismatch: {0}")]
    Mismatch(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole(_) => "pole",
            Error::Domain(_) => "domain",
            Error::MixedRadical(..) => "mixed_radical",
            Error::DivisionByZero => "division_by_zero",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::Precondition(_) => "precondition",
            Error::RouteInapplicable(_) => "route_inapplicable",
            Error::NoRoute(_) => "no_route",
            Error::NonTerminating(_) => "non_terminating",
            Error::DegreeCap { .. } => "degree_cap",
            Error::Quadrature { .. } => "quadrature",
            Error::Accuracy { .. } => "accuracy",
            Error::Parse(_) => "parse",
            Error::Job(_) => "job",
            Error::Mismatch(_) => "mismatch",
        }
    }

    /// True for errors that only rule out one route, not the request.
    pub fn is_route_local(&self) -> bool {
        matches!(self, Error::RouteInapplicable(_) | Error::Pole(_) | Error::MixedRadical(..))
    }
}

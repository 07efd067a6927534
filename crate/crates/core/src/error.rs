use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument must be nonzero")]
    NonzeroRequired,
    #[error("nome out of range: |p| = {0} (need |p| < 1)")]
    NomeOutOfRange(f64),
    #[error("base out of range: |q| = {0} (need 0 < |q| < 1)")]
    BaseOutOfRange(f64),
    #[error("tolerances must be positive and finite")]
    InvalidTolerance,
    #[error("division by a degenerate factor in {0}")]
    DegenerateDivision(&'static str),
    #[error("operation is defined for the basic case p = 0 only")]
    BasicOnly,
    #[error("series does not converge: {0}")]
    DivergentSeries(&'static str),
    #[error("elliptic series requires an explicit terminating index")]
    TerminationRequired,
    #[error("balancing condition violated (relative residual {0:e})")]
    BalancingViolated(f64),
    #[error("parameter list shape: {0}")]
    ParameterCount(&'static str),
    #[error("singular point {0}")]
    SingularPoint(&'static str),
    #[error("degenerate operator parameter: {0}")]
    DegenerateParameter(&'static str),
    #[error("basis is not generic: {0}")]
    DegenerateBasis(&'static str),
    #[error("degree {k} outside basis of degree {n}")]
    DegreeOutOfRange { k: usize, n: usize },
    #[error("reconstruction residual {residual:e} exceeds tolerance {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("collocation matrix ill-conditioned (estimate {0:e})")]
    IllConditioned(f64),
    #[error("parameter sampling exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cannot parse complex number from {0:?}")]
    ParseComplex(String),
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
}

impl Error {
    /// True for failures that mean the inputs sit on an exceptional set
    /// (a vanishing denominator, a pole, a lattice zero) rather than misuse.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::DegenerateDivision(_)
                | Error::SingularPoint(_)
                | Error::DegenerateParameter(_)
                | Error::DegenerateBasis(_)
                | Error::NonzeroRequired
        )
    }
}

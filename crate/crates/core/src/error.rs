use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("argument {arg} = {value} outside the supported domain ({limit})")]
    DomainOverflow {
        arg: &'static str,
        value: f64,
        limit: &'static str,
    },
    #[error("objective does not change sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("{what} did not converge in {iterations} iterations")]
    MaxIterations { what: &'static str, iterations: usize },
    #[error("step size underflow at parameter {param}")]
    StepUnderflow { param: f64, state: Vec<f64> },
    #[error("quadrature failed its error bound: estimate {estimate:e}, target {target:e}")]
    QuadratureNonConvergence { estimate: f64, target: f64 },
    #[error("stencil leaves the domain of the sampled function near {at:?}")]
    StencilOutOfDomain { at: Vec<f64> },
    #[error("implicit relation is multivalued at t = {t}, x = {x} ({roots} roots)")]
    MultivaluedRegion { t: f64, x: f64, roots: usize },
    #[error("no root found: {0}")]
    RootNotFound(String),
    #[error("characteristics cross before t = {t}")]
    CharacteristicCrossing { t: f64 },
    #[error("solution branch lost at t = {t}, x = {x}")]
    BranchLoss { t: f64, x: f64 },
    #[error("{what} = {value} out of range [{lo}, {hi}]")]
    OutOfRange {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("no singularity: {0}")]
    NoSingularity(String),
    #[error("caustic crossed before t = {t}")]
    CausticCrossed { t: f64 },
    #[error("wavebreaking: d x / d eta = {jacobian} at eta = {eta}, tau = {tau}")]
    Wavebreaking { eta: f64, tau: f64, jacobian: f64 },
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

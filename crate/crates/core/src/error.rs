use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a jet whose constant term vanishes (|c0| = {0:e})")]
    DivisionByZeroJet(f64),
    #[error("square root or reciprocal requested at a zero of the jet (|c0| = {0:e})")]
    BranchPointAtBase(f64),
    #[error("jet order {got} is below the required order {needed}")]
    OrderTooLow { needed: usize, got: usize },
    #[error("hierarchy member k = {0} is not supported")]
    UnsupportedK(usize),
    #[error("elliptic modulus {0} is outside (0, 1)")]
    ModulusOutOfRange(f64),
    #[error("denominator magnitude {magnitude:e} at x = {x} is below the pole threshold")]
    PoleAtPoint { x: f64, magnitude: f64 },
    #[error("unsupported parametrization: {0}")]
    UnsupportedParametrization(String),
    #[error("solution {variant} does not carry a dependence on t{flow}")]
    UnsupportedFlow { variant: String, flow: usize },
    #[error("flow coefficients must contain at least one nonzero weight")]
    ZeroFlowWeights,
    #[error("sample point x = {x} is too close to a zero of p (|p| = {magnitude:e})")]
    SampleNearZeroOfP { x: f64, magnitude: f64 },
    #[error("need at least {needed} usable sample points, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("closure system is rank deficient (smallest singular value {smallest_singular_value:e})")]
    RankDeficientSystem { smallest_singular_value: f64 },
    #[error("genus {0} needs H_{{g-1}} beyond H_5")]
    UnsupportedGenus(usize),
    #[error("no genus up to {g_max} fits (best residual {best_residual:e} at g = {best_genus})")]
    NoGenusFound {
        g_max: usize,
        best_genus: usize,
        best_residual: f64,
    },
    #[error("curve coefficients vary along the flow: spread {spread:e} exceeds {limit:e}")]
    SpreadTooLarge { spread: f64, limit: f64 },
    #[error("Y vanishes at the base point (|Y| = {0:e})")]
    YVanishesAtBase(f64),
    #[error("leading polynomial coefficient is degenerate (|a_n| = {0:e})")]
    DegenerateLeadingCoefficient(f64),
    #[error("root iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("branch-point clustering is ambiguous: {0}")]
    AmbiguousClustering(String),
    #[error("odd-degree curve polynomials are not supported (degree {0})")]
    OddDegreeUnsupported(usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

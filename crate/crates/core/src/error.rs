use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown deformation kind `{0}`")]
    UnknownKind(String),

    #[error("argument {value} outside the open domain (-{bound}, {bound}) of {what}")]
    Domain {
        what: &'static str,
        value: f64,
        bound: f64,
    },

    #[error("custom deformation failed its consistency check: {0}")]
    InconsistentDeformation(String),

    #[error("momentum band is infinite; the kernel degenerates to a Dirac delta")]
    InfiniteBand,

    #[error("quadrature budget of {evaluations} evaluations exceeded (best estimate {estimate}, error {err_estimate:e})")]
    BudgetExceeded {
        estimate: Complex64,
        err_estimate: f64,
        evaluations: usize,
    },

    #[error("pole at {pole} is not strictly inside ({lo}, {hi})")]
    PoleAtBoundary { pole: f64, lo: f64, hi: f64 },

    #[error("poles at {first} and {second} are closer than {min_separation:e}")]
    PoleSeparation {
        first: f64,
        second: f64,
        min_separation: f64,
    },

    #[error("principal value over an unbounded interval needs residues summing to zero")]
    UnbalancedResidues,

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root finder did not converge in {iterations} iterations (bracket [{lo}, {hi}])")]
    RootBudgetExceeded { iterations: usize, lo: f64, hi: f64 },

    #[error("no bracket found for the bound-state condition after {expansions} expansions")]
    BracketFailure { expansions: usize },

    #[error("epsilon extrapolation does not contract (successive corrections {previous:e} -> {current:e})")]
    ExtrapolationDivergence { previous: f64, current: f64 },

    #[error("sampled wavefunction invalid: {0}")]
    InvalidGrid(String),

    #[error("grid spacing {dx} exceeds the quarter-Nyquist limit {limit}")]
    GridTooCoarse { dx: f64, limit: f64 },

    #[error("closed-form and amplitude-derived coefficients disagree by {defect:e}")]
    Inconsistent { defect: f64 },
}

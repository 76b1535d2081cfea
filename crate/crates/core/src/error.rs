use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pruning to the essential part removed every vertex")]
    EmptySystem,

    #[error("cylinder table has no value for word {0:?}")]
    InvalidTable(Vec<usize>),

    #[error("potential or measure belongs to a different system")]
    SystemMismatch,

    #[error("simple cycle count exceeds the budget of {cap}")]
    CycleBudgetExceeded { cap: usize },

    #[error("exponent range {spread:.3} exceeds the safe range for beta = {beta}")]
    Overflow { beta: f64, spread: f64 },

    #[error("power iteration did not reach {tol:e} within {iterations} iterations")]
    ConvergenceFailure { iterations: usize, tol: f64 },

    #[error("pressure is not differentiable at beta = {beta}: components {components:?} tie")]
    NondifferentiablePoint { beta: f64, components: Vec<usize> },

    #[error("renewal tail cannot be certified below {tol:e} (bound {bound:e})")]
    TailBoundFailure { tol: f64, bound: f64 },

    #[error("potential never freezes: {0}")]
    NeverFreezes(String),

    #[error("potential is frozen for every beta > 0 tested (down to {beta_min:e})")]
    AlwaysFrozen { beta_min: f64 },

    #[error("mean return time diverges at beta = {beta}")]
    InfiniteMeanReturn { beta: f64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("face extremes have different integrals {integrals:?} (entropies {entropies:?})")]
    FaceIntegralMismatch {
        integrals: Vec<f64>,
        entropies: Vec<f64>,
    },

    #[error("separator program is infeasible: {certificate}")]
    Infeasible { certificate: String },

    #[error("verification failed at beta = {beta}: {detail}")]
    VerificationFailed { beta: f64, detail: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
}

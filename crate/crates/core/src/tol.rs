//! Default tolerances. Every report that embeds tolerances takes them from
//! [`Tolerances::default`].

use serde::Serialize;

/// Row sums of a stochastic matrix.
pub const ROW_SUM: f64 = 1e-12;
/// `stationary * transition = stationary`.
pub const STATIONARY: f64 = 1e-10;
/// Relative width of the Collatz–Wielandt bracket for Perron roots.
pub const POWER_ITERATION: f64 = 1e-13;
pub const POWER_ITERATION_CAP: usize = 1_000_000;
/// Component pressures closer than this are reported as tied.
pub const TIE: f64 = 1e-9;
/// Reduced edge weight counted as tight.
pub const TIGHT: f64 = 1e-10;
/// `h(m) + beta * integral = pressure` for Gibbs measures.
pub const GIBBS: f64 = 1e-8;
/// Allowed excess of a random measure over the pressure.
pub const VARIATIONAL: f64 = 1e-9;
/// Face integrals and separator inequalities.
pub const FACE: f64 = 1e-9;
/// Equal entropy across face extremes.
pub const FACE_ENTROPY: f64 = 1e-10;
/// Transition-matrix distance for matching equilibrium measures.
pub const MEASURE_MATCH: f64 = 1e-8;
pub const CYCLE_BUDGET: usize = 100_000;
/// Absolute bisection width in beta.
pub const BISECTION_BETA: f64 = 1e-10;
pub const RENEWAL: f64 = 1e-10;
pub const FREEZING: f64 = 1e-9;
/// Derivative check: `|FD - integral| <= max(DERIVATIVE_FLOOR, DERIVATIVE_C * step^2)`.
pub const DERIVATIVE_FLOOR: f64 = 1e-4;
pub const DERIVATIVE_C: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub row_sum: f64,
    pub stationary: f64,
    pub power_iteration: f64,
    pub power_iteration_cap: usize,
    pub tie: f64,
    pub tight: f64,
    pub gibbs: f64,
    pub variational: f64,
    pub face: f64,
    pub face_entropy: f64,
    pub measure_match: f64,
    pub cycle_budget: usize,
    pub bisection_beta: f64,
    pub renewal: f64,
    pub freezing: f64,
    pub derivative_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            row_sum: ROW_SUM,
            stationary: STATIONARY,
            power_iteration: POWER_ITERATION,
            power_iteration_cap: POWER_ITERATION_CAP,
            tie: TIE,
            tight: TIGHT,
            gibbs: GIBBS,
            variational: VARIATIONAL,
            face: FACE,
            face_entropy: FACE_ENTROPY,
            measure_match: MEASURE_MATCH,
            cycle_budget: CYCLE_BUDGET,
            bisection_beta: BISECTION_BETA,
            renewal: RENEWAL,
            freezing: FREEZING,
            derivative_floor: DERIVATIVE_FLOOR,
        }
    }
}

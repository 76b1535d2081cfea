//! Thermodynamic formalism on finite subshifts of finite type and on the
//! Hofbauer renewal class of the full 2-shift.
//!
//! The crate computes pressure, equilibrium (Gibbs) states, maximal ergodic
//! averages, residual entropy and slant asymptotes, locates freezing points,
//! and builds potentials that freeze on a prescribed face of equilibrium
//! states by solving a linear program over the cycle polytope.
//!
//! Everything works in nats. All types are immutable after construction and
//! every operation is a pure function of its inputs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod construct;
pub mod cycles;
pub mod ergopt;
mod error;
mod linalg;
pub mod measure;
pub mod random;
pub mod renewal;
mod series;
pub mod sft;
pub mod tol;
pub mod transfer;

pub use cycles::{enumerate_simple_cycles, enumerate_simple_cycles_with_cap, Cycle, CycleSet};
pub use error::{Error, Result};
pub use measure::{integrate, markov_entropy, MarkovMeasure};
pub use sft::{higher_block, CylinderTable, LocPotential, Sft};

//! The causal inequality `I₁` and seesaw optimisation of party instruments.
//!
//! `I₁ = P_AB(11|110) + P_BC(11|011) + P_AC(11|101) − P_ABC(111|111) ≥ 0`
//! holds for every convex mixture of causally ordered processes; the reduced
//! time-reversed Baumeler–Wolf process violates it down to ≈ −1/4.

mod i1;
mod seesaw;
mod strategy;

pub use i1::eval_i1;
pub use seesaw::{seesaw_optimize, seesaw_refine, SeesawConfig, SeesawOutcome, SeesawRun};
pub use strategy::{paper_strategy, quantized_classical_strategy, random_strategy};

pub use crate::process::{CorrelationTensor, Instrument, StrategySpec};

use crate::process::ProcessError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InequalityError {
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("seesaw expects a reduced 3-party process with trivial P and F")]
    NotReduced,
}

pub type Result<T> = std::result::Result<T, InequalityError>;

#[cfg(test)]
mod tests;

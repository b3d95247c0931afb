//! Concrete processes with independent circuit oracles, plus a
//! post-selected-CTC contractor.

pub mod gates;

mod bw;
mod chain;
mod ctc;
mod switch;

pub use bw::{
    bw_process, bw_reverse, circuit_rev_swiss, circuit_swiss, f_bw, f_bw_packed, g_bw,
    g_bw_reverse, rev_swiss_frame_future, rev_swiss_frame_past, swiss_frame_future,
    swiss_frame_past,
};
pub use chain::causal_chain;
pub use ctc::{ctc_simulate, post_selection_probability, rev_swiss_ctc, LoopCircuit};
pub use switch::{quantum_switch, switch_frame_a, switch_frame_b, switch_frame_future, switch_frame_past, switch_g};

use crate::process::ProcessError;
use crate::tensor::CMat;

pub type Result<T> = std::result::Result<T, ProcessError>;

type CircuitEval = Box<dyn Fn(&[CMat]) -> CMat + Send + Sync>;

/// A gate-list description paired with an evaluator from party unitaries to
/// the global operator. Evaluation returns a unitary for unitary inputs.
pub struct CircuitOracle {
    pub description: Vec<String>,
    eval: CircuitEval,
}

impl CircuitOracle {
    pub fn new(
        description: Vec<String>,
        eval: impl Fn(&[CMat]) -> CMat + Send + Sync + 'static,
    ) -> Self {
        Self {
            description,
            eval: Box::new(eval),
        }
    }

    pub fn evaluate(&self, ops: &[CMat]) -> CMat {
        (self.eval)(ops)
    }
}

impl std::fmt::Debug for CircuitOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CircuitOracle")
            .field("description", &self.description)
            .finish_non_exhaustive()
    }
}

/// The identifiers `zoo list` reports.
pub fn zoo_names() -> Vec<&'static str> {
    vec!["switch", "bw", "bw-reverse", "causal-chain"]
}

#[cfg(test)]
mod tests;

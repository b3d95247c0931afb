//! Post-selected closed-timelike-curve circuits.
//!
//! A loop identifies an output wire with an input wire; contracting the pair
//! with the unnormalised identity double-ket gives the effective operator
//! exactly. Physically each loop is a maximally entangled preparation on the
//! input side and a post-selected Bell measurement on the output side, with
//! the d-fold amplitude factor restored.

use crate::process::ProcessError;
use crate::tensor::{CMat, LabeledOperator, LabeledVector};

use super::gates::{controlled_gate, pauli_x, single_gate};
use super::Result;

type BodyBuilder = Box<dyn Fn(&[CMat]) -> Result<LabeledOperator> + Send + Sync>;

/// A staged operator with identified wire pairs.
pub struct LoopCircuit {
    pub description: Vec<String>,
    build: BodyBuilder,
    /// (output factor → input factor) pairs, contracted in order.
    pub loops: Vec<(String, String)>,
}

impl LoopCircuit {
    pub fn new(
        description: Vec<String>,
        loops: Vec<(String, String)>,
        build: impl Fn(&[CMat]) -> Result<LabeledOperator> + Send + Sync + 'static,
    ) -> Self {
        Self {
            description,
            build: Box::new(build),
            loops,
        }
    }

    pub fn body(&self, ops: &[CMat]) -> Result<LabeledOperator> {
        (self.build)(ops)
    }
}

impl std::fmt::Debug for LoopCircuit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LoopCircuit")
            .field("description", &self.description)
            .field("loops", &self.loops)
            .finish_non_exhaustive()
    }
}

/// Exact loop contraction: the effective operator on the unlooped wires.
pub fn ctc_simulate(circuit: &LoopCircuit, ops: &[CMat]) -> Result<LabeledOperator> {
    let mut body = circuit.body(ops)?;
    for (out_label, in_label) in &circuit.loops {
        body = body
            .loop_contract(out_label, in_label)
            .map_err(ProcessError::Tensor)?;
    }
    Ok(body)
}

/// Success probability of realising every loop with a maximally entangled
/// preparation and a post-selected Bell measurement, for a pure input state
/// on the remaining input wires: `‖K|ψ⟩‖² / Π_ℓ d_ℓ²` with `K` the exact
/// contraction.
pub fn post_selection_probability(
    circuit: &LoopCircuit,
    ops: &[CMat],
    input: &LabeledVector,
) -> Result<f64> {
    let body = circuit.body(ops)?;
    let mut dims_sq = 1.0f64;
    for (out_label, _) in &circuit.loops {
        let d = body
            .out_layout()
            .dim_of(out_label)
            .map_err(ProcessError::Tensor)?;
        dims_sq *= (d * d) as f64;
    }
    let k = ctc_simulate(circuit, ops)?;
    let out = k.apply(input).map_err(ProcessError::Tensor)?;
    Ok(out.norm().powi(2) / dims_sq)
}

/// The time-reversed Baumeler–Wolf process as a circuit with three
/// post-selected CTC loops: the corrections `X^{f(P)}` feed the party wires,
/// each party unitary sits on a loop from its input back to the circuit.
pub fn rev_swiss_ctc() -> LoopCircuit {
    let wire_pairs = [("A", 0usize), ("B", 1), ("C", 2)];
    let mut description = vec![
        "X on O_A ctrl[P_B=0, P_C=1]; X on O_B ctrl[P_A=1, P_C=0]; X on O_C ctrl[P_A=0, P_B=1]"
            .into(),
        "P wires exit as party inputs; U_A, U_B, U_C applied".into(),
    ];
    for (name, _) in wire_pairs {
        description.push(format!("loop: I_{name} (after U_{name}) -> O_{name}"));
    }
    LoopCircuit::new(
        description,
        wire_pairs
            .iter()
            .map(|(n, _)| (format!("{n}_I"), format!("{n}_O")))
            .collect(),
        |ops: &[CMat]| {
            // six wires [S_A, S_B, S_C, L_A, L_B, L_C]
            let x = pauli_x();
            let corr = controlled_gate(6, 3, &x, &[(1, 0), (2, 1)])
                * controlled_gate(6, 4, &x, &[(0, 1), (2, 0)])
                * controlled_gate(6, 5, &x, &[(0, 0), (1, 1)]);
            let parties =
                single_gate(6, 0, &ops[0]) * single_gate(6, 1, &ops[1]) * single_gate(6, 2, &ops[2]);
            let body = parties * corr;
            let out_layout = crate::tensor::SpaceLayout::of(&[
                ("A_I", 2),
                ("B_I", 2),
                ("C_I", 2),
                ("F_A", 2),
                ("F_B", 2),
                ("F_C", 2),
            ]);
            let in_layout = crate::tensor::SpaceLayout::of(&[
                ("P_A", 2),
                ("P_B", 2),
                ("P_C", 2),
                ("A_O", 2),
                ("B_O", 2),
                ("C_O", 2),
            ]);
            Ok(LabeledOperator::new(out_layout, in_layout, body)?)
        },
    )
}

//! The quantum switch: a control qubit coherently decides whether Alice
//! acts before Bob or after.

use crate::process::{reconstruct_process, PartySpec, ProcessVector};
use crate::tensor::CMat;

use super::gates::controlled_gate;
use super::{CircuitOracle, Result};

/// `G(U_A, U_B) = |0⟩⟨0|_C ⊗ U_B·U_A + |1⟩⟨1|_C ⊗ U_A·U_B` on control⊗system.
pub fn switch_g(u_a: &CMat, u_b: &CMat) -> CMat {
    let d = u_a.nrows();
    let ba = u_b * u_a;
    let ab = u_a * u_b;
    let mut g = CMat::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            g[(i, j)] = ba[(i, j)];
            g[(d + i, d + j)] = ab[(i, j)];
        }
    }
    g
}

/// Alice's frame circuit: controlled-U_B (control |1⟩), then U_A on the
/// system, then controlled-U_B (control |0⟩). Wires: [C, S].
pub fn switch_frame_a() -> CircuitOracle {
    CircuitOracle::new(
        vec![
            "ctrl[C=1] U_B on S".into(),
            "U_A on S".into(),
            "ctrl[C=0] U_B on S".into(),
        ],
        |ops: &[CMat]| {
            let (u_a, u_b) = (&ops[0], &ops[1]);
            let pre = controlled_gate(2, 1, u_b, &[(0, 1)]);
            let mid = controlled_gate(2, 1, u_a, &[]);
            let post = controlled_gate(2, 1, u_b, &[(0, 0)]);
            post * mid * pre
        },
    )
}

/// Bob's frame circuit: controlled-U_A (control |0⟩), then U_B, then
/// controlled-U_A (control |1⟩). Wires: [C, S].
pub fn switch_frame_b() -> CircuitOracle {
    CircuitOracle::new(
        vec![
            "ctrl[C=0] U_A on S".into(),
            "U_B on S".into(),
            "ctrl[C=1] U_A on S".into(),
        ],
        |ops: &[CMat]| {
            let (u_a, u_b) = (&ops[0], &ops[1]);
            let pre = controlled_gate(2, 1, u_a, &[(0, 0)]);
            let mid = controlled_gate(2, 1, u_b, &[]);
            let post = controlled_gate(2, 1, u_a, &[(0, 1)]);
            post * mid * pre
        },
    )
}

fn swap_cs() -> CMat {
    // |c,s⟩ ↦ |s,c⟩ on two qubits
    let mut m = CMat::zeros(4, 4);
    for c in 0..2 {
        for s in 0..2 {
            m[(s * 2 + c, c * 2 + s)] = num_complex::Complex64::new(1.0, 0.0);
        }
    }
    m
}

/// Alice's past frame half for the switch, in `[A_I, E_A] = [S, C]` factor
/// order: route the system to Alice, applying U_B first only on the
/// control-|1⟩ branch.
pub fn switch_frame_past(u_b: &CMat) -> CMat {
    swap_cs() * controlled_gate(2, 1, u_b, &[(0, 1)])
}

/// Alice's future frame half for the switch: apply U_B after Alice only on
/// the control-|0⟩ branch.
pub fn switch_frame_future(u_b: &CMat) -> CMat {
    controlled_gate(2, 1, u_b, &[(0, 0)]) * swap_cs().adjoint()
}

/// The switch process vector (d_P = d_F = 4, qubit parties A and B) with
/// both frame circuits as independent oracles.
pub fn quantum_switch() -> Result<(ProcessVector, CircuitOracle, CircuitOracle)> {
    let parties = vec![PartySpec::qubit("A"), PartySpec::qubit("B")];
    let w = reconstruct_process(|ops: &[CMat]| switch_g(&ops[0], &ops[1]), &parties, 4)?;
    Ok((w, switch_frame_a(), switch_frame_b()))
}

//! The Baumeler–Wolf tripartite process, its time reverse, and the frame
//! circuits for both. Three-bit registers are ordered (A, B, C) with A the
//! most significant bit.

use crate::process::{canonical_layout, PartySpec, ProcessVector};
use crate::tensor::{C64, CMat, LabeledVector};

use super::gates::{controlled_gate, pauli_x, single_gate};
use super::{CircuitOracle, Result};

/// The boolean dynamics: `f(a,b,c) = (b̄c, ac̄, āb)`.
pub fn f_bw(a: u8, b: u8, c: u8) -> (u8, u8, u8) {
    (
        u8::from(b == 0 && c == 1),
        u8::from(a == 1 && c == 0),
        u8::from(a == 0 && b == 1),
    )
}

/// `f_bw` on packed 3-bit values, A most significant.
pub fn f_bw_packed(x: usize) -> usize {
    let (a, b, c) = (((x >> 2) & 1) as u8, ((x >> 1) & 1) as u8, (x & 1) as u8);
    let (fa, fb, fc) = f_bw(a, b, c);
    ((fa as usize) << 2) | ((fb as usize) << 1) | (fc as usize)
}

fn bw_parties() -> Vec<PartySpec> {
    vec![
        PartySpec::qubit("A"),
        PartySpec::qubit("B"),
        PartySpec::qubit("C"),
    ]
}

fn assemble(entry: impl Fn(usize, usize) -> (usize, usize, usize, usize)) -> Result<ProcessVector> {
    let parties = bw_parties();
    let layout = canonical_layout(&parties, 8, 8);
    let strides = layout.strides();
    let mut entries = LabeledVector::zeros(layout.clone()).entries().clone();
    for x in 0..8usize {
        for y in 0..8usize {
            let (p, f, i, o) = entry(x, y);
            let mut flat = p * strides[0] + f * strides[1];
            for k in 0..3 {
                let ib = (i >> (2 - k)) & 1;
                let ob = (o >> (2 - k)) & 1;
                flat += ib * strides[2 + 2 * k] + ob * strides[3 + 2 * k];
            }
            entries[flat] += C64::new(1.0, 0.0);
        }
    }
    let v = LabeledVector::new(layout, entries)?;
    ProcessVector::new(parties, 8, 8, v)
}

/// `|w⟩ = Σ_{x,y} |y⟩^P |x⟩^O |y⊕f(x)⟩^I |x⟩^F`.
pub fn bw_process() -> Result<ProcessVector> {
    assemble(|x, y| (y, x, y ^ f_bw_packed(x), x))
}

/// The time reverse `|w_r⟩ = Σ_{x,y} |x⟩^P |y⊕f(x)⟩^O |x⟩^I |y⟩^F`.
pub fn bw_reverse() -> Result<ProcessVector> {
    assemble(|x, y| (x, y, x, y ^ f_bw_packed(x)))
}

/// Closed form of the induced map of `|w⟩`:
/// `G[x, y] = (U_A⊗U_B⊗U_C)[x, y⊕f(x)]`.
pub fn g_bw(ops: &[CMat]) -> CMat {
    let u = ops[0].kronecker(&ops[1]).kronecker(&ops[2]);
    CMat::from_fn(8, 8, |x, y| u[(x, y ^ f_bw_packed(x))])
}

/// Closed form of the induced map of `|w_r⟩`:
/// `G_r[y, x] = (U_A⊗U_B⊗U_C)[y⊕f(x), x]`, i.e.
/// `G_r|x⟩ = X^{f(x)}(U_A⊗U_B⊗U_C)|x⟩`.
pub fn g_bw_reverse(ops: &[CMat]) -> CMat {
    let u = ops[0].kronecker(&ops[1]).kronecker(&ops[2]);
    CMat::from_fn(8, 8, |y, x| u[(y ^ f_bw_packed(x), x)])
}

/// Alice's frame circuit for `|w⟩`: wires (A, B, C) top to bottom;
/// columns left to right apply first.
pub fn circuit_swiss() -> CircuitOracle {
    CircuitOracle::new(
        vec![
            "U_B on B; U_C on C".into(),
            "X on A ctrl[B=0, C=1]".into(),
            "U_A on A".into(),
            "U_B·X·U_B† on B ctrl[A=1, C=0]".into(),
            "U_C·X·U_C† on C ctrl[A=0, B=1]".into(),
        ],
        |ops: &[CMat]| {
            let x = pauli_x();
            let c1 = single_gate(3, 1, &ops[1]) * single_gate(3, 2, &ops[2]);
            let c2 = controlled_gate(3, 0, &x, &[(1, 0), (2, 1)]);
            let c3 = single_gate(3, 0, &ops[0]);
            let conj_b = &ops[1] * &x * ops[1].adjoint();
            let c4 = controlled_gate(3, 1, &conj_b, &[(0, 1), (2, 0)]);
            let conj_c = &ops[2] * &x * ops[2].adjoint();
            let c5 = controlled_gate(3, 2, &conj_c, &[(0, 0), (1, 1)]);
            c5 * c4 * c3 * c2 * c1
        },
    )
}

/// The past half of Alice's frame in `circuit_swiss`: everything before
/// `U_A` acts, as an operator `P(8) → A_I(2) ⊗ E_A(4)` with E_A the (B, C)
/// wires. Jointly linear in (U_B, U_C) by construction.
pub fn swiss_frame_past(others: &[CMat]) -> CMat {
    let x = pauli_x();
    let c1 = single_gate(3, 1, &others[0]) * single_gate(3, 2, &others[1]);
    let c2 = controlled_gate(3, 0, &x, &[(1, 0), (2, 1)]);
    c2 * c1
}

/// The future half of Alice's frame in `circuit_swiss`: everything after
/// `U_A`, as an operator `A_O(2) ⊗ E_A(4) → F(8)`. Depends nontrivially on
/// (U_B, U_C).
pub fn swiss_frame_future(others: &[CMat]) -> CMat {
    let x = pauli_x();
    let conj_b = &others[0] * &x * others[0].adjoint();
    let c4 = controlled_gate(3, 1, &conj_b, &[(0, 1), (2, 0)]);
    let conj_c = &others[1] * &x * others[1].adjoint();
    let c5 = controlled_gate(3, 2, &conj_c, &[(0, 0), (1, 1)]);
    c5 * c4
}

/// The past half of Alice's frame in `circuit_rev_swiss`.
pub fn rev_swiss_frame_past(others: &[CMat]) -> CMat {
    let x = pauli_x();
    let conj_c = others[1].adjoint() * &x * &others[1];
    let c1 = controlled_gate(3, 2, &conj_c, &[(0, 0), (1, 1)]);
    let conj_b = others[0].adjoint() * &x * &others[0];
    let c2 = controlled_gate(3, 1, &conj_b, &[(0, 1), (2, 0)]);
    c2 * c1
}

/// The future half of Alice's frame in `circuit_rev_swiss`; jointly linear
/// in (U_B, U_C).
pub fn rev_swiss_frame_future(others: &[CMat]) -> CMat {
    let x = pauli_x();
    let c4 = controlled_gate(3, 0, &x, &[(1, 0), (2, 1)]);
    let c5 = single_gate(3, 1, &others[0]) * single_gate(3, 2, &others[1]);
    c5 * c4
}

/// Alice's frame circuit for the time reverse `|w_r⟩`.
pub fn circuit_rev_swiss() -> CircuitOracle {
    CircuitOracle::new(
        vec![
            "U_C†·X·U_C on C ctrl[A=0, B=1]".into(),
            "U_B†·X·U_B on B ctrl[A=1, C=0]".into(),
            "U_A on A".into(),
            "X on A ctrl[B=0, C=1]".into(),
            "U_B on B; U_C on C".into(),
        ],
        |ops: &[CMat]| {
            let x = pauli_x();
            let conj_c = ops[2].adjoint() * &x * &ops[2];
            let c1 = controlled_gate(3, 2, &conj_c, &[(0, 0), (1, 1)]);
            let conj_b = ops[1].adjoint() * &x * &ops[1];
            let c2 = controlled_gate(3, 1, &conj_b, &[(0, 1), (2, 0)]);
            let c3 = single_gate(3, 0, &ops[0]);
            let c4 = controlled_gate(3, 0, &x, &[(1, 0), (2, 1)]);
            let c5 = single_gate(3, 1, &ops[1]) * single_gate(3, 2, &ops[2]);
            c5 * c4 * c3 * c2 * c1
        },
    )
}

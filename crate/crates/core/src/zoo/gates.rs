//! Small dense-circuit helpers: n-qubit registers, single-qubit gates with
//! any number of (wire, value) controls. Wire 0 is the most significant bit.

use crate::tensor::{C64, CMat};

pub fn pauli_x() -> CMat {
    CMat::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
    ])
}

pub fn pauli_y() -> CMat {
    CMat::from_row_slice(2, 2, &[
        C64::new(0.0, 0.0),
        C64::new(0.0, -1.0),
        C64::new(0.0, 1.0),
        C64::new(0.0, 0.0),
    ])
}

pub fn pauli_z() -> CMat {
    CMat::from_row_slice(2, 2, &[
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(-1.0, 0.0),
    ])
}

#[inline]
fn bit(state: usize, wire: usize, n: usize) -> usize {
    (state >> (n - 1 - wire)) & 1
}

/// `op` (2x2) acting on `target`, applied only when every `(wire, value)`
/// control matches; identity on non-matching branches.
pub fn controlled_gate(n: usize, target: usize, op: &CMat, controls: &[(usize, u8)]) -> CMat {
    let dim = 1usize << n;
    let mut m = CMat::zeros(dim, dim);
    for col in 0..dim {
        let active = controls
            .iter()
            .all(|&(w, v)| bit(col, w, n) == v as usize);
        if active {
            let t = bit(col, target, n);
            for tp in 0..2 {
                let z = op[(tp, t)];
                if z.norm_sqr() > 0.0 {
                    let row = (col & !(1 << (n - 1 - target))) | (tp << (n - 1 - target));
                    m[(row, col)] += z;
                }
            }
        } else {
            m[(col, col)] += C64::new(1.0, 0.0);
        }
    }
    m
}

/// Uncontrolled single-qubit gate on `target` of an n-qubit register.
pub fn single_gate(n: usize, target: usize, op: &CMat) -> CMat {
    controlled_gate(n, target, op, &[])
}

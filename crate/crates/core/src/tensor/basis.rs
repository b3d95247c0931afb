//! Operator bases: Heisenberg–Weyl unitaries, Hermitian bases, and
//! randomised orthonormal unitary bases.

use super::{C64, CMat};
use rand::Rng;
use std::f64::consts::TAU;

/// The d² Heisenberg–Weyl unitaries `U_{m,n} = Σ_k ω^{kn} |k+m mod d⟩⟨k|`,
/// `ω = exp(2πi/d)`, enumerated with `m` outer so the first element is the
/// identity. Pairwise `⟨⟨U_i|U_j⟩⟩ = d·δ_ij` and their double-kets span the
/// full operator space.
pub fn unitary_basis(d: usize) -> Vec<CMat> {
    assert!(d >= 1, "unitary_basis: d must be positive");
    let mut out = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let mut u = CMat::zeros(d, d);
            for k in 0..d {
                let phase = TAU * (k * n) as f64 / d as f64;
                u[((k + m) % d, k)] = C64::new(phase.cos(), phase.sin());
            }
            out.push(u);
        }
    }
    out
}

/// Coefficients `c_i = tr(U_i† M)/d` so that `M = Σ_i c_i U_i` for any
/// orthonormal unitary basis.
pub fn expand_in_unitary_basis(m: &CMat, basis: &[CMat]) -> Vec<C64> {
    let d = m.nrows() as f64;
    basis
        .iter()
        .map(|u| (u.adjoint() * m).trace() / C64::new(d, 0.0))
        .collect()
}

/// A second orthonormal unitary basis `{V·U_i·W}` for Haar-random V, W;
/// used to confirm basis independence of reconstructions.
pub fn randomized_unitary_basis(d: usize, rng: &mut impl Rng) -> Vec<CMat> {
    let v = super::random::haar_unitary(d, rng);
    let w = super::random::haar_unitary(d, rng);
    unitary_basis(d).into_iter().map(|u| &v * u * &w).collect()
}

/// A Hermitian basis of the full operator space on dimension `d`
/// (d² elements): diagonal units, symmetric pairs and antisymmetric pairs.
pub fn hermitian_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut e = CMat::zeros(d, d);
        e[(i, i)] = C64::new(1.0, 0.0);
        out.push(e);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let mut s = CMat::zeros(d, d);
            s[(i, j)] = C64::new(1.0, 0.0);
            s[(j, i)] = C64::new(1.0, 0.0);
            out.push(s);
            let mut a = CMat::zeros(d, d);
            a[(i, j)] = C64::new(0.0, 1.0);
            a[(j, i)] = C64::new(0.0, -1.0);
            out.push(a);
        }
    }
    out
}

/// A traceless Hermitian basis (d² − 1 elements): the pair elements of
/// [`hermitian_basis`] plus Gell-Mann-style diagonal traceless matrices.
pub fn traceless_hermitian_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d - 1);
    for i in 0..d {
        for j in (i + 1)..d {
            let mut s = CMat::zeros(d, d);
            s[(i, j)] = C64::new(1.0, 0.0);
            s[(j, i)] = C64::new(1.0, 0.0);
            out.push(s);
            let mut a = CMat::zeros(d, d);
            a[(i, j)] = C64::new(0.0, 1.0);
            a[(j, i)] = C64::new(0.0, -1.0);
            out.push(a);
        }
    }
    for k in 1..d {
        let mut h = CMat::zeros(d, d);
        for i in 0..k {
            h[(i, i)] = C64::new(1.0, 0.0);
        }
        h[(k, k)] = C64::new(-(k as f64), 0.0);
        out.push(h);
    }
    out
}

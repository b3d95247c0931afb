//! Spectral helpers over dense complex matrices.
//!
//! Full Hermitian eigendecompositions go through nalgebra; the handful of
//! call sites that can meet very large matrices (process-matrix PSD margins
//! and purity rank tests) use power iteration instead, which is exact enough
//! there because those spectra are dominated by a single eigenvalue.

use super::{C64, CMat, CVec};

/// Above this dimension extremal eigenvalues switch to power iteration.
const DENSE_EIG_LIMIT: usize = 600;

const POWER_ITERS: usize = 800;
const POWER_TOL: f64 = 1e-13;

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
/// The input is symmetrised; eigenvectors are returned as columns.
pub fn hermitian_eigen(m: &CMat) -> (Vec<f64>, CMat) {
    assert_eq!(m.nrows(), m.ncols(), "hermitian_eigen: square required");
    let n = m.nrows();
    if n == 0 {
        return (vec![], CMat::zeros(0, 0));
    }
    let sym = (m + m.adjoint()).map(|z| z * 0.5);
    let eig = nalgebra::SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vecs.set_column(k, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

fn rayleigh(m: &CMat, v: &CVec) -> f64 {
    let mv = m * v;
    v.iter()
        .zip(mv.iter())
        .map(|(a, b)| (a.conj() * b).re)
        .sum::<f64>()
}

/// Dominant algebraic eigenpair of a Hermitian matrix via shifted power
/// iteration (shift makes the algebraic maximum also dominant in modulus).
fn leading_pair_power(m: &CMat, deflate: Option<(&CVec, f64)>) -> (f64, CVec) {
    let n = m.nrows();
    let shift = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() + 1.0;
    let apply = |v: &CVec| -> CVec {
        let mut out = m * v + v.map(|z| z * C64::new(shift, 0.0));
        if let Some((d, lam)) = deflate {
            let ov: C64 = d.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            out -= d.map(|z| z * ov * C64::new(lam + shift, 0.0));
        }
        out
    };
    // deterministic start vector with a spread of phases
    let mut v = CVec::from_fn(n, |i, _| {
        C64::new(1.0 + ((i * 37 + 11) % 101) as f64 / 101.0, ((i * 53 + 7) % 89) as f64 / 89.0)
    });
    let nv = v.norm();
    v /= C64::new(nv, 0.0);
    let mut lam = 0.0f64;
    for _ in 0..POWER_ITERS {
        let w = apply(&v);
        let norm = w.norm();
        if norm < 1e-300 {
            return (-shift, v); // operator annihilates the iterate
        }
        let w = w.map(|z| z / C64::new(norm, 0.0));
        let new_lam = {
            let mut r = rayleigh(m, &w);
            if let Some((d, lamd)) = deflate {
                let ov: C64 = d.iter().zip(w.iter()).map(|(a, b)| a.conj() * b).sum();
                r -= lamd * ov.norm_sqr();
            }
            r
        };
        let done = (new_lam - lam).abs() <= POWER_TOL * (1.0 + new_lam.abs());
        v = w;
        lam = new_lam;
        if done {
            break;
        }
    }
    (lam, v)
}

/// Largest algebraic eigenvalue and eigenvector of a Hermitian matrix.
pub fn leading_hermitian_pair(m: &CMat) -> (f64, CVec) {
    let n = m.nrows();
    if n <= DENSE_EIG_LIMIT {
        let (vals, vecs) = hermitian_eigen(m);
        let v = vecs.column(n - 1).into_owned();
        (vals[n - 1], CVec::from_iterator(n, v.iter().cloned()))
    } else {
        leading_pair_power(m, None)
    }
}

/// Second-largest algebraic eigenvalue, given the leading pair.
pub fn second_hermitian_eigenvalue(m: &CMat, leading: f64, v1: &CVec) -> f64 {
    let n = m.nrows();
    if n <= DENSE_EIG_LIMIT {
        let (vals, _) = hermitian_eigen(m);
        if n >= 2 {
            vals[n - 2]
        } else {
            f64::NEG_INFINITY
        }
    } else {
        leading_pair_power(m, Some((v1, leading))).0
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_hermitian_eigenvalue(m: &CMat) -> f64 {
    let n = m.nrows();
    if n == 0 {
        return 0.0;
    }
    if n <= DENSE_EIG_LIMIT {
        hermitian_eigen(m).0[0]
    } else {
        let neg = m.map(|z| -z);
        let (lam, _) = leading_pair_power(&neg, None);
        -lam
    }
}

/// Column phase convention: first entry of significant modulus made real
/// positive. Keeps eigenvector output deterministic for regression tests.
pub fn fix_phase(v: &CVec) -> CVec {
    let thresh = v.iter().map(|z| z.norm()).fold(0.0, f64::max) * 1e-8;
    for z in v.iter() {
        if z.norm() > thresh {
            let phase = z / C64::new(z.norm(), 0.0);
            return v.map(|e| e * phase.conj());
        }
    }
    v.clone()
}

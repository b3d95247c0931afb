//! Constructive decomposition of linear unitarity-preserving maps.
//!
//! Any linear map `f` sending d_A-dimensional unitaries to unitaries on a
//! d_A·d_E-dimensional space factors as `f(U) = A(U ⊗ id_E)B` or
//! `f(U) = A(Uᵀ ⊗ id_E)B` for fixed unitaries A, B. The pipeline below
//! builds A and B explicitly:
//!
//! 1. `f₁(U) = f(id)†f(U)`, so `f₁(id) = id`;
//! 2. `P_a = f₁(|a⟩⟨a|)` by linear extension — orthogonal rank-d_E
//!    projectors summing to the identity;
//! 3. a basis-aligning unitary `V` from the projector eigenvectors, so
//!    `V f₁(|a⟩⟨a|) V† = |a⟩⟨a| ⊗ id_E`;
//! 4. `g(U) = tr_E(V f₁(U) V†)/d_E`, a unitarity-preserving map on d_A;
//! 5. `h = g·g(id)†`; the leading eigenvector `c₀` of `h(|0⟩⟨0|)` seeds the
//!    conjugating unitary, and `‖h(|0⟩⟨1|)c₀‖` separates the transpose
//!    branch (analytically 0 without transpose, 1 with);
//! 6. columns `C|b⟩ = h(|b⟩⟨0|)c₀` (transpose case: `h(|0⟩⟨b|)c₀`),
//!    `D = C†g(id)`;
//! 7. `A = f(id)V†(C ⊗ id)`, `B = (D ⊗ id)V`.

use crate::tensor::{expand_in_unitary_basis, haar_unitary, linalg, unitary_basis, C64, CMat, CVec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{FrameError, Result};

#[derive(Clone, Debug)]
pub struct MarcusDecomposition {
    pub a_op: CMat,
    pub b_op: CMat,
    pub transposed: bool,
    /// Max reconstruction residual over fresh random unitaries.
    pub residual: f64,
    pub d_a: usize,
    pub d_e: usize,
}

impl MarcusDecomposition {
    /// `A (U ⊗ id_E) B`, with the transpose applied when flagged.
    pub fn reconstruct(&self, u: &CMat) -> CMat {
        let id_e = CMat::identity(self.d_e, self.d_e);
        let arg = if self.transposed { u.transpose() } else { u.clone() };
        &self.a_op * arg.kronecker(&id_e) * &self.b_op
    }
}

const LINEARITY_CHECKS: usize = 10;
const RESIDUAL_CHECKS: usize = 20;

/// Partial trace over the second (environment) tensor slot of an operator on
/// `A ⊗ E` with row-major (A outer, E inner) index packing.
fn trace_out_env(m: &CMat, d_a: usize, d_e: usize) -> CMat {
    let mut out = CMat::zeros(d_a, d_a);
    for a in 0..d_a {
        for ap in 0..d_a {
            let mut acc = C64::new(0.0, 0.0);
            for e in 0..d_e {
                acc += m[(a * d_e + e, ap * d_e + e)];
            }
            out[(a, ap)] = acc;
        }
    }
    out
}

fn basis_unit(d: usize, r: usize, c: usize) -> CMat {
    let mut m = CMat::zeros(d, d);
    m[(r, c)] = C64::new(1.0, 0.0);
    m
}

pub fn marcus_extract(f: impl Fn(&CMat) -> CMat, d_a: usize, d_e: usize) -> Result<MarcusDecomposition> {
    marcus_extract_seeded(f, d_a, d_e, 0x6d61_7263)
}

pub fn marcus_extract_seeded(
    f: impl Fn(&CMat) -> CMat,
    d_a: usize,
    d_e: usize,
    seed: u64,
) -> Result<MarcusDecomposition> {
    if d_a == 0 || d_e == 0 {
        return Err(FrameError::Dimensions("zero dimension".into()));
    }
    let d = d_a * d_e;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let basis = unitary_basis(d_a);
    let values: Vec<CMat> = basis
        .iter()
        .map(|u| {
            let fu = f(u);
            if fu.nrows() != d || fu.ncols() != d {
                return Err(FrameError::Dimensions(format!(
                    "f returned {}x{}, expected {d}x{d}",
                    fu.nrows(),
                    fu.ncols()
                )));
            }
            Ok(fu)
        })
        .collect::<Result<_>>()?;

    let extend = |m: &CMat| -> CMat {
        let coeffs = expand_in_unitary_basis(m, &basis);
        let mut acc = CMat::zeros(d, d);
        for (c, v) in coeffs.iter().zip(values.iter()) {
            if c.norm_sqr() > 0.0 {
                acc += v.map(|z| z * c);
            }
        }
        acc
    };

    // linearity of the oracle: its linear extension must reproduce it on
    // fresh unitaries
    for _ in 0..LINEARITY_CHECKS {
        let u = haar_unitary(d_a, &mut rng);
        let direct = f(&u);
        let lin = extend(&u);
        let resid = (&direct - &lin).norm();
        if resid > 1e-8 * (1.0 + direct.norm()) {
            return Err(FrameError::NotLinear(resid));
        }
    }

    let f_id = f(&CMat::identity(d_a, d_a));
    let f1 = |m: &CMat| -> CMat { f_id.adjoint() * extend(m) };

    // projectors P_a = f₁(|a⟩⟨a|) of rank d_E
    let mut projs: Vec<CMat> = Vec::with_capacity(d_a);
    let mut proj_sum = CMat::zeros(d, d);
    for a in 0..d_a {
        let p = f1(&basis_unit(d_a, a, a));
        let herm = (&p - p.adjoint()).norm();
        let idem = (&p * &p - &p).norm();
        if herm > 1e-7 * (1.0 + p.norm()) || idem > 1e-7 * (1.0 + p.norm()) {
            return Err(FrameError::NotProjector(a, herm.max(idem)));
        }
        proj_sum += &p;
        projs.push(p);
    }
    let sum_resid = (&proj_sum - CMat::identity(d, d)).norm();
    if sum_resid > 1e-7 * (d as f64) {
        return Err(FrameError::NotProjector(0, sum_resid));
    }

    // Eigenbasis of the first block, ordered ascending by eigenvalue with
    // lexicographic tie-breaking and fixed phases so the (gauge) choice is
    // deterministic.
    let block0: Vec<CVec> = {
        let (vals, vecs) = linalg::hermitian_eigen(&projs[0]);
        let mut kept: Vec<(f64, CVec)> = vals
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > 0.5)
            .map(|(i, &v)| {
                let col = CVec::from_iterator(d, vecs.column(i).iter().cloned());
                (v, linalg::fix_phase(&col))
            })
            .collect();
        if kept.len() != d_e {
            return Err(FrameError::EnvDimMismatch {
                expected: d_e,
                found: kept.len(),
            });
        }
        kept.sort_by(|x, y| {
            x.0.total_cmp(&y.0).then_with(|| {
                for (a_c, b_c) in x.1.iter().zip(y.1.iter()) {
                    let ord = a_c.re.total_cmp(&b_c.re).then(a_c.im.total_cmp(&b_c.im));
                    if ord != std::cmp::Ordering::Equal {
                        return ord;
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        kept.into_iter().map(|(_, v)| v).collect()
    };

    // The remaining blocks must share block 0's environment gauge, so their
    // bases are transported through f₁(|a⟩⟨0|) (or f₁(|0⟩⟨a|) on the
    // transpose branch) rather than eigendecomposed independently — an
    // independent eigenbasis per block would scramble the environment and
    // break the reduction to a d_A-dimensional map.
    let mut v_rows: Vec<(usize, CVec)> = Vec::with_capacity(d);
    for (e, v0) in block0.iter().enumerate() {
        v_rows.push((e, v0.clone()));
    }
    for a in 1..d_a {
        let hop = f1(&basis_unit(d_a, a, 0));
        let hop_t = f1(&basis_unit(d_a, 0, a));
        let probe = (&hop * &block0[0]).norm();
        let transport = if probe > 0.5 { &hop } else { &hop_t };
        let mut transported: Vec<CVec> = Vec::with_capacity(d_e);
        for v0 in &block0 {
            let mut w = transport * v0;
            // orthonormalise against earlier vectors in the block
            for prev in &transported {
                let ov: C64 = prev.iter().zip(w.iter()).map(|(p, x)| p.conj() * x).sum();
                w -= prev.map(|z| z * ov);
            }
            let norm = w.norm();
            if norm < 0.5 {
                return Err(FrameError::NotProjector(a, 1.0 - norm));
            }
            transported.push(w.map(|z| z / C64::new(norm, 0.0)));
        }
        for (e, w) in transported.into_iter().enumerate() {
            v_rows.push((a * d_e + e, w));
        }
    }

    // V = Σ_{a,e} |a,e⟩⟨v_a^e|
    let mut v_mat = CMat::zeros(d, d);
    for (row, vec) in &v_rows {
        for c in 0..d {
            v_mat[(*row, c)] = vec[c].conj();
        }
    }
    let v_unit = (&v_mat * v_mat.adjoint() - CMat::identity(d, d)).norm();
    if v_unit > 1e-7 * (d as f64) {
        return Err(FrameError::NonUnitary {
            what: "projector-aligning V".into(),
            residual: v_unit,
        });
    }

    // g on the A factor alone
    let g = |m: &CMat| -> CMat {
        let conj = &v_mat * f1(m) * v_mat.adjoint();
        trace_out_env(&conj, d_a, d_e).map(|z| z / C64::new(d_e as f64, 0.0))
    };
    let g_id = g(&CMat::identity(d_a, d_a));
    let h = |m: &CMat| -> CMat { g(m) * g_id.adjoint() };

    let h00 = h(&basis_unit(d_a, 0, 0));
    let (_, c0_raw) = linalg::leading_hermitian_pair(&(&h00 + h00.adjoint()).map(|z| z * 0.5));
    let c0 = linalg::fix_phase(&c0_raw);

    let transposed = if d_a > 1 {
        let t = h(&basis_unit(d_a, 0, 1)) * &c0;
        t.norm() > 0.5
    } else {
        false
    };

    let mut c_mat = CMat::zeros(d_a, d_a);
    for b in 0..d_a {
        let col = if transposed {
            h(&basis_unit(d_a, 0, b)) * &c0
        } else {
            h(&basis_unit(d_a, b, 0)) * &c0
        };
        for r in 0..d_a {
            c_mat[(r, b)] = col[r];
        }
    }
    let c_unit = (c_mat.adjoint() * &c_mat - CMat::identity(d_a, d_a)).norm();
    if c_unit > 1e-6 * (d_a as f64) {
        return Err(FrameError::NonUnitary {
            what: "conjugating C".into(),
            residual: c_unit,
        });
    }
    let d_mat = c_mat.adjoint() * &g_id;

    let id_e = CMat::identity(d_e, d_e);
    let a_op = &f_id * v_mat.adjoint() * c_mat.kronecker(&id_e);
    let b_op = d_mat.kronecker(&id_e) * &v_mat;

    let mut deco = MarcusDecomposition {
        a_op,
        b_op,
        transposed,
        residual: 0.0,
        d_a,
        d_e,
    };
    let mut worst = 0.0f64;
    for _ in 0..RESIDUAL_CHECKS {
        let u = haar_unitary(d_a, &mut rng);
        let resid = (f(&u) - deco.reconstruct(&u)).norm();
        worst = worst.max(resid);
    }
    deco.residual = worst;
    Ok(deco)
}

//! Validity certification: PSD plus the normalisation battery.
//!
//! The normalisation condition — that every tuple of party CPTP maps is sent
//! to a trace-preserving `P → F` Choi operator — is multilinear in the
//! parties' Choi operators. A multilinear condition holding on an affine
//! spanning set of each party's CPTP set holds on the whole set, so the
//! battery below is a complete check, not a sampled one.

use crate::tensor::{
    hermitian_basis, linalg, traceless_hermitian_basis, C64, CMat, LabeledOperator,
};
use crate::DEFAULT_TOL;

use super::{choi_link, ProcessError, ProcessMatrix, ProcessVector, Result, F_LABEL, P_LABEL};

/// Outcome of [`ProcessMatrix::validate`] / [`ProcessVector::validate`].
#[derive(Clone, Debug)]
pub struct ValidityReport {
    pub psd_margin: f64,
    pub worst_normalization_residual: f64,
    pub verdict: bool,
    /// Description of the worst spanning tuple when the battery fails.
    pub witness: Option<String>,
    pub tolerance: f64,
}

/// The affine spanning set of one party's CPTP Choi set on `in ⊗ out`:
/// `J₀ = id/d_out` plus `J₀ + ε·(G_i ⊗ λ_j)` over a Hermitian basis {G_i}
/// of the input operators and a traceless Hermitian basis {λ_j} of the
/// output. ε keeps every element PSD.
pub(crate) fn spanning_set(d_in: usize, d_out: usize) -> Vec<CMat> {
    let q = d_in * d_out;
    let j0 = CMat::identity(q, q).map(|z| z / C64::new(d_out as f64, 0.0));
    let gs = hermitian_basis(d_in);
    let ls = traceless_hermitian_basis(d_out);
    let op_norm = |m: &CMat| -> f64 {
        let (vals, _) = linalg::hermitian_eigen(m);
        vals.iter().fold(0.0f64, |a, &v| a.max(v.abs()))
    };
    let max_g = gs.iter().map(op_norm).fold(0.0, f64::max);
    let max_l = ls.iter().map(op_norm).fold(0.0, f64::max);
    let eps = if max_g * max_l > 0.0 {
        1.0 / (2.0 * d_out as f64 * max_g * max_l)
    } else {
        0.5
    };

    let mut set = vec![j0.clone()];
    for g in &gs {
        for l in &ls {
            set.push(&j0 + g.kronecker(l).map(|z| z * C64::new(eps, 0.0)));
        }
    }
    set
}

fn normalization_residual(g: &LabeledOperator) -> f64 {
    let tr_f = g.partial_trace(&[F_LABEL]).expect("G carries P and F");
    let d_p = tr_f.out_dim();
    (tr_f.entries() - CMat::identity(d_p, d_p)).norm()
}

fn witness_text(parties: &[super::PartySpec], tuple: &[usize], residual: f64) -> String {
    let picks: Vec<String> = parties
        .iter()
        .zip(tuple.iter())
        .map(|(p, &e)| format!("{}:{}", p.name, e))
        .collect();
    format!(
        "normalization fails on spanning tuple [{}] (0 = J0, k>0 = J0 + eps*(G_i(x)lambda_j)); residual {residual:.3e}",
        picks.join(", ")
    )
}

impl ProcessMatrix {
    /// Validity battery at the default tolerance.
    pub fn validate(&self) -> Result<ValidityReport> {
        self.validate_with_tol(DEFAULT_TOL)
    }

    pub fn validate_with_tol(&self, tol: f64) -> Result<ValidityReport> {
        let w = self.matrix();
        let herm = w.hermiticity_residual();
        if herm > tol * (1.0 + w.fro_norm()) {
            return Err(ProcessError::NonHermitian(herm));
        }
        let psd_margin = w.min_eigenvalue();

        let sets: Vec<Vec<CMat>> = self
            .parties()
            .iter()
            .map(|p| spanning_set(p.d_in, p.d_out))
            .collect();

        let mut worst = 0.0f64;
        let mut witness_tuple: Vec<usize> = vec![];
        // Depth-first over spanning tuples, contracting one party per level
        // so shared prefixes are computed once.
        fn dfs(
            x: &LabeledOperator,
            level: usize,
            parties: &[super::PartySpec],
            sets: &[Vec<CMat>],
            tuple: &mut Vec<usize>,
            worst: &mut f64,
            witness: &mut Vec<usize>,
        ) -> Result<()> {
            if level == parties.len() {
                let r = normalization_residual(x);
                if r > *worst {
                    *worst = r;
                    *witness = tuple.clone();
                }
                return Ok(());
            }
            let p = &parties[level];
            let labels = [p.in_label.as_str(), p.out_label.as_str()];
            for (e, m) in sets[level].iter().enumerate() {
                let next = choi_link(x, &labels, m)?;
                tuple.push(e);
                dfs(&next, level + 1, parties, sets, tuple, worst, witness)?;
                tuple.pop();
            }
            Ok(())
        }
        let mut tuple = Vec::new();
        dfs(
            w,
            0,
            self.parties(),
            &sets,
            &mut tuple,
            &mut worst,
            &mut witness_tuple,
        )?;

        let verdict = psd_margin >= -tol * (1.0 + w.fro_norm()) && worst <= tol;
        Ok(ValidityReport {
            psd_margin,
            worst_normalization_residual: worst,
            verdict,
            witness: if worst > tol {
                Some(witness_text(self.parties(), &witness_tuple, worst))
            } else {
                None
            },
            tolerance: tol,
        })
    }
}

impl ProcessVector {
    /// Validity battery for `|w⟩⟨w|`, using the rank-one form
    /// `G = A·(⊗ₖ Mₖ)·A†` with `A = |w⟩` reshaped parties → P⊗F. Avoids
    /// materialising the dense process matrix.
    pub fn validate(&self) -> Result<ValidityReport> {
        self.validate_with_tol(DEFAULT_TOL)
    }

    pub fn validate_with_tol(&self, tol: f64) -> Result<ValidityReport> {
        let a = self.pf_by_parties()?;
        let sets: Vec<Vec<CMat>> = self
            .parties()
            .iter()
            .map(|p| spanning_set(p.d_in, p.d_out))
            .collect();

        let p_layout_pair = [(P_LABEL, self.p_dim()), (F_LABEL, self.f_dim())];
        let pf_layout = crate::tensor::SpaceLayout::of(&p_layout_pair);

        let mut worst = 0.0f64;
        let mut witness_tuple: Vec<usize> = vec![];
        // kron over spanning elements, sharing prefixes
        #[allow(clippy::too_many_arguments)]
        fn dfs(
            prefix: &CMat,
            level: usize,
            sets: &[Vec<CMat>],
            a: &CMat,
            pf_layout: &crate::tensor::SpaceLayout,
            tuple: &mut Vec<usize>,
            worst: &mut f64,
            witness: &mut Vec<usize>,
        ) -> Result<()> {
            if level == sets.len() {
                let g = a * prefix * a.adjoint();
                let g_op = LabeledOperator::on(pf_layout.clone(), g)?;
                let r = normalization_residual(&g_op);
                if r > *worst {
                    *worst = r;
                    *witness = tuple.clone();
                }
                return Ok(());
            }
            for (e, m) in sets[level].iter().enumerate() {
                let next = prefix.kronecker(m);
                tuple.push(e);
                dfs(&next, level + 1, sets, a, pf_layout, tuple, worst, witness)?;
                tuple.pop();
            }
            Ok(())
        }
        let one = CMat::identity(1, 1);
        let mut tuple = Vec::new();
        dfs(
            &one,
            0,
            &sets,
            a.entries(),
            &pf_layout,
            &mut tuple,
            &mut worst,
            &mut witness_tuple,
        )?;

        // |w⟩⟨w| is PSD by construction.
        let verdict = worst <= tol;
        Ok(ValidityReport {
            psd_margin: 0.0,
            worst_normalization_residual: worst,
            verdict,
            witness: if worst > tol {
                Some(witness_text(self.parties(), &witness_tuple, worst))
            } else {
                None
            },
            tolerance: tol,
        })
    }
}

//! Purity: a valid process is pure iff it is rank one and its reshaped
//! vector `U_w : P⊗(⊗outₖ) → F⊗(⊗inₖ)` is unitary.

use crate::tensor::{linalg, C64, LabeledOperator, LabeledVector};
use crate::DEFAULT_TOL;

use super::{ProcessError, ProcessMatrix, ProcessVector, Result, F_LABEL, P_LABEL};

#[derive(Clone, Debug)]
pub struct PurityReport {
    pub pure: bool,
    /// The purification unitary when pure.
    pub u_w: Option<LabeledOperator>,
    /// Second-largest eigenvalue (rank test: `λ₂ ≤ tol·tr W`).
    pub second_eigenvalue: f64,
    pub unitarity_residual: f64,
}

fn u_w_labels(parties: &[super::PartySpec]) -> (Vec<&str>, Vec<&str>) {
    let mut out_labels: Vec<&str> = vec![F_LABEL];
    let mut in_labels: Vec<&str> = vec![P_LABEL];
    for p in parties {
        out_labels.push(p.in_label.as_str());
        in_labels.push(p.out_label.as_str());
    }
    (out_labels, in_labels)
}

fn reshape_u_w(w: &ProcessVector) -> Result<LabeledOperator> {
    let (out_labels, in_labels) = u_w_labels(w.parties());
    Ok(w.vector().reshape_split(&out_labels, &in_labels)?)
}

impl ProcessVector {
    /// Purity certificate of `|w⟩⟨w|`; requires validity.
    pub fn is_pure(&self) -> Result<PurityReport> {
        let validity = self.validate()?;
        if !validity.verdict {
            return Err(ProcessError::InvalidProcess(
                validity
                    .witness
                    .unwrap_or_else(|| "normalization battery failed".into()),
            ));
        }
        let u_w = reshape_u_w(self)?;
        let residual = u_w.unitarity_residual();
        let pure = residual <= unitarity_gate(u_w.out_dim());
        Ok(PurityReport {
            pure,
            u_w: pure.then_some(u_w),
            second_eigenvalue: 0.0,
            unitarity_residual: residual,
        })
    }
}

fn unitarity_gate(dim: usize) -> f64 {
    DEFAULT_TOL * (1.0 + (dim as f64).sqrt())
}

impl ProcessMatrix {
    /// Purity certificate; requires validity. Pure iff the second eigenvalue
    /// is below `tol·tr W` and the leading eigenvector reshapes to a unitary.
    pub fn is_pure(&self) -> Result<PurityReport> {
        let validity = self.validate()?;
        if !validity.verdict {
            return Err(ProcessError::InvalidProcess(
                validity
                    .witness
                    .unwrap_or_else(|| "normalization battery failed".into()),
            ));
        }
        let m = self.matrix().entries();
        let trace = m.trace().re;
        let (lam1, v1) = linalg::leading_hermitian_pair(m);
        let lam2 = linalg::second_hermitian_eigenvalue(m, lam1, &v1);
        if lam2 > DEFAULT_TOL * trace.max(1.0) {
            return Ok(PurityReport {
                pure: false,
                u_w: None,
                second_eigenvalue: lam2,
                unitarity_residual: f64::INFINITY,
            });
        }
        let scale = C64::new(lam1.max(0.0).sqrt(), 0.0);
        let w_vec = LabeledVector::new(
            self.matrix().out_layout().clone(),
            v1.map(|z| z * scale),
        )?;
        let w = ProcessVector::new(
            self.parties().to_vec(),
            self.p_dim(),
            self.f_dim(),
            w_vec,
        )?;
        let u_w = reshape_u_w(&w)?;
        let residual = u_w.unitarity_residual();
        let pure = residual <= unitarity_gate(u_w.out_dim());
        Ok(PurityReport {
            pure,
            u_w: pure.then_some(u_w),
            second_eigenvalue: lam2,
            unitarity_residual: residual,
        })
    }

    /// The leading-eigenvector process vector of a (numerically) rank-one
    /// process matrix, with double-ket normalisation.
    pub fn to_process_vector(&self) -> Result<ProcessVector> {
        let report = self.is_pure()?;
        if !report.pure {
            return Err(ProcessError::InvalidProcess(format!(
                "not rank one: second eigenvalue {:.3e}",
                report.second_eigenvalue
            )));
        }
        let m = self.matrix().entries();
        let (lam1, v1) = linalg::leading_hermitian_pair(m);
        let scale = C64::new(lam1.max(0.0).sqrt(), 0.0);
        let w_vec = LabeledVector::new(
            self.matrix().out_layout().clone(),
            v1.map(|z| z * scale),
        )?;
        ProcessVector::new(self.parties().to_vec(), self.p_dim(), self.f_dim(), w_vec)
    }
}

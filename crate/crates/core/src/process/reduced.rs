//! Reduced processes: contracting away the global past and future against a
//! fixed past state leaves a process on the party factors alone.

use crate::tensor::{CMat, LabeledOperator};

use super::{
    canonical_layout, PartySpec, ProcessError, ProcessMatrix, ProcessVector, Result, F_LABEL,
    P_LABEL,
};

/// Which operator meets the past state in
/// `W_ψ = tr_{PF}[(ρ_P^{T_P} ⊗ id)·|w⟩⟨w|]`.
///
/// `TransposeP` applies the partial transpose to `ρ_P` (the Choi-inversion
/// convention and the default); `Plain` omits it. The two agree whenever
/// `ρ_P` has a real matrix, e.g. for real-amplitude pure states.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PastConvention {
    #[default]
    TransposeP,
    Plain,
}

/// `W_ψ = tr_{PF}[(ρ_P^{T_P} ⊗ id)·|w⟩⟨w|]` as a process on the party
/// factors only (trivial one-dimensional P and F).
pub fn reduced_process(w: &ProcessVector, rho_p: &CMat) -> Result<ProcessMatrix> {
    reduced_process_with(w, rho_p, PastConvention::TransposeP)
}

pub fn reduced_process_with(
    w: &ProcessVector,
    rho_p: &CMat,
    convention: PastConvention,
) -> Result<ProcessMatrix> {
    let d_p = w.p_dim();
    if rho_p.nrows() != d_p || rho_p.ncols() != d_p {
        return Err(ProcessError::NotAState(format!(
            "shape {}x{}, expected {d_p}x{d_p}",
            rho_p.nrows(),
            rho_p.ncols()
        )));
    }
    let herm = (rho_p - rho_p.adjoint()).norm();
    if herm > 1e-8 * (1.0 + rho_p.norm()) {
        return Err(ProcessError::NotAState(format!(
            "not Hermitian (residual {herm:.3e})"
        )));
    }
    let tr = rho_p.trace();
    if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
        return Err(ProcessError::NotAState(format!("trace {tr} != 1")));
    }

    // Slice |w⟩ at each P index: C_p[party, f] = w[(p, f, party)], so
    // W_red = Σ_{p,p''} coef[p'',p] · C_{p''} C_p†.
    let party_labels = w.party_labels();
    let mut out_labels: Vec<&str> = vec![P_LABEL];
    out_labels.extend(party_labels.iter());
    let by_f = w.vector().reshape_split(&out_labels, &[F_LABEL])?;
    let d_f = w.f_dim();
    let d_par: usize = by_f.out_dim() / d_p;

    let slices: Vec<CMat> = (0..d_p)
        .map(|p| {
            CMat::from_fn(d_par, d_f, |par, f| by_f.entries()[(p * d_par + par, f)])
        })
        .collect();

    let coef = |p2: usize, p: usize| match convention {
        PastConvention::TransposeP => rho_p[(p2, p)],
        PastConvention::Plain => rho_p[(p, p2)],
    };

    let mut red = CMat::zeros(d_par, d_par);
    for p2 in 0..d_p {
        for p in 0..d_p {
            let c = coef(p2, p);
            if c.norm() == 0.0 {
                continue;
            }
            red += (&slices[p2] * slices[p].adjoint()).map(|z| z * c);
        }
    }

    let parties: Vec<PartySpec> = w.parties().to_vec();
    let layout = canonical_layout(&parties, 1, 1);
    let op = LabeledOperator::on(layout, red)?;
    ProcessMatrix::new(parties, 1, 1, op)
}

//! Frame extraction for one party of a pure process at fixed unitaries of
//! the others.

use crate::process::{induced_contraction, PartySpec, ProcessVector};
use crate::tensor::{double_ket, C64, CMat, LabeledOperator, LabeledVector, SpaceLayout};

use super::marcus::marcus_extract_seeded;
use super::{FrameError, Result};

/// One party's causal frame at fixed other-party unitaries: a past
/// `Π : P → in ⊗ E` and a future `Φ : out ⊗ E → F` with
/// `Φ(U ⊗ id_E)Π` equal to the induced map. Π and Φ individually carry a
/// unitary gauge on E; only products are comparable across extractions.
#[derive(Clone, Debug)]
pub struct FrameDecomposition {
    pub party: PartySpec,
    /// The other parties' unitaries, in process party order.
    pub fixed_unitaries: Vec<CMat>,
    pub pi_op: LabeledOperator,
    pub phi_op: LabeledOperator,
    pub env_dim: usize,
    /// Reconstruction residual reported by the extraction.
    pub residual: f64,
}

impl FrameDecomposition {
    fn env_label(&self) -> String {
        format!("E_{}", self.party.name)
    }

    /// The gauge-invariant product `Φ (U ⊗ id_E) Π : P → F`.
    pub fn product(&self, u: &CMat) -> Result<LabeledOperator> {
        let d_a = self.party.d_in;
        if u.nrows() != d_a || u.ncols() != d_a {
            return Err(FrameError::Dimensions(format!(
                "party unitary is {}x{}, expected {d_a}x{d_a}",
                u.nrows(),
                u.ncols()
            )));
        }
        let id_e = CMat::identity(self.env_dim, self.env_dim);
        let mid = LabeledOperator::new(
            self.phi_op.in_layout().clone(),
            self.pi_op.out_layout().clone(),
            u.kronecker(&id_e),
        )?;
        Ok(self.phi_op.compose(&mid)?.compose(&self.pi_op)?)
    }

    /// `⟨⟨id|^{E E'} |Π⟩⟩^{P, in·E} |Φ⟩⟩^{out·E', F}`: the single-party
    /// process vector this frame induces at its fixed unitaries, on
    /// `[P, in, out, F]`. Gauge-independent.
    pub fn reassembled_vector(&self) -> Result<LabeledVector> {
        let e = self.env_label();
        let e2 = format!("{e}'");
        let pi_ket = double_ket(&self.pi_op)?;
        let phi_relabel = self.phi_op.relabeled(&e, &e2)?;
        let phi_ket = double_ket(&phi_relabel)?;
        let big = pi_ket.kron(&phi_ket)?;
        let id_pair = LabeledOperator::new(
            SpaceLayout::of(&[(e2.as_str(), self.env_dim)]),
            SpaceLayout::of(&[(e.as_str(), self.env_dim)]),
            CMat::identity(self.env_dim, self.env_dim),
        )?;
        let bra = double_ket(&id_pair)?;
        let contracted = big.contract_bra(&[e.as_str(), e2.as_str()], &bra)?;
        Ok(contracted.permute_factors(&[
            "P",
            self.party.in_label.as_str(),
            self.party.out_label.as_str(),
            "F",
        ])?)
    }
}

/// Extracts the causal frame of `party` from a pure process at the given
/// fixed unitaries of the other parties (in process order, skipping
/// `party`). Fails with [`FrameError::TransposeDetected`] if the oracle sits
/// on the transpose branch, which no valid process reaches.
pub fn extract_frame(
    w: &ProcessVector,
    party: &str,
    fixed: &[CMat],
) -> Result<FrameDecomposition> {
    let idx = w.party_index(party)?;
    for p in w.parties() {
        p.equal_dims()?;
    }
    if w.p_dim() != w.f_dim() {
        return Err(FrameError::Dimensions(format!(
            "d_P = {} but d_F = {}",
            w.p_dim(),
            w.f_dim()
        )));
    }
    let n = w.parties().len();
    if fixed.len() != n - 1 {
        return Err(FrameError::Dimensions(format!(
            "expected {} fixed unitaries, got {}",
            n - 1,
            fixed.len()
        )));
    }
    let d_a = w.parties()[idx].d_in;
    if !w.p_dim().is_multiple_of(d_a) {
        return Err(FrameError::EnvDimMismatch {
            expected: 0,
            found: w.p_dim(),
        });
    }
    let d_e = w.p_dim() / d_a;

    let oracle = |u: &CMat| -> CMat {
        let mut ops: Vec<CMat> = Vec::with_capacity(n);
        let mut it = fixed.iter();
        for k in 0..n {
            if k == idx {
                ops.push(u.clone());
            } else {
                ops.push(it.next().expect("fixed count checked").clone());
            }
        }
        induced_contraction(w, &ops)
            .expect("layout-checked contraction")
            .into_entries()
    };

    let deco = marcus_extract_seeded(oracle, d_a, d_e, 0x6672_616d_6500 ^ idx as u64)?;
    if deco.transposed {
        return Err(FrameError::TransposeDetected);
    }

    let spec = w.parties()[idx].clone();
    let e_label = format!("E_{}", spec.name);
    let pi_op = LabeledOperator::new(
        SpaceLayout::of(&[(spec.in_label.as_str(), d_a), (e_label.as_str(), d_e)]),
        SpaceLayout::of(&[("P", w.p_dim())]),
        deco.b_op.clone(),
    )?;
    let phi_op = LabeledOperator::new(
        SpaceLayout::of(&[("F", w.f_dim())]),
        SpaceLayout::of(&[(spec.out_label.as_str(), d_a), (e_label.as_str(), d_e)]),
        deco.a_op.clone(),
    )?;
    Ok(FrameDecomposition {
        party: spec,
        fixed_unitaries: fixed.to_vec(),
        pi_op,
        phi_op,
        env_dim: d_e,
        residual: deco.residual,
    })
}

/// How far `candidate · reference†` is from the pure-gauge form
/// `id ⊗ V` with `V` unitary on the environment. Zero means the two frame
/// halves agree up to gauge.
pub fn gauge_match_residual(candidate: &CMat, reference: &CMat, d_a: usize, d_e: usize) -> f64 {
    let k = candidate * reference.adjoint();
    // average the diagonal blocks to estimate V
    let mut v = CMat::zeros(d_e, d_e);
    for a in 0..d_a {
        for e1 in 0..d_e {
            for e2 in 0..d_e {
                v[(e1, e2)] += k[(a * d_e + e1, a * d_e + e2)] / C64::new(d_a as f64, 0.0);
            }
        }
    }
    let model = CMat::identity(d_a, d_a).kronecker(&v);
    let unit = (v.adjoint() * &v - CMat::identity(d_e, d_e)).norm();
    (&k - model).norm() + unit
}

//! The time-delocalised decomposition: fixing one party's unitary leaves a
//! single-party pure process `ξ(U) = ⟨⟨U*| |w⟩` from
//! `P̃ = P⊗(other outputs)` to `F̃ = F⊗(other inputs)`; its frame
//! `ξ(U) = S (U ⊗ id_E) T` exhibits the party acting on subsystems
//! maximally entangled into the global past and future.

use crate::process::{canonical_layout, PartySpec, ProcessVector};
use crate::tensor::{double_ket, CMat, LabeledOperator, LabeledVector, SpaceLayout};

use super::marcus::marcus_extract_seeded;
use super::{FrameError, Result};

#[derive(Clone, Debug)]
pub struct OreshkovDecomposition {
    pub party: PartySpec,
    /// `T : P̃ → in ⊗ E`
    pub t_op: LabeledOperator,
    /// `S : out ⊗ E → F̃`
    pub s_op: LabeledOperator,
    pub env_dim: usize,
    parties: Vec<PartySpec>,
    p_dim: usize,
    f_dim: usize,
    /// Extraction residual over fresh random unitaries.
    pub residual: f64,
}

fn p_tilde_labels(w: &ProcessVector, idx: usize) -> Vec<&str> {
    let mut v = vec!["P"];
    for (k, p) in w.parties().iter().enumerate() {
        if k != idx {
            v.push(p.out_label.as_str());
        }
    }
    v
}

fn f_tilde_labels(w: &ProcessVector, idx: usize) -> Vec<&str> {
    let mut v = vec!["F"];
    for (k, p) in w.parties().iter().enumerate() {
        if k != idx {
            v.push(p.in_label.as_str());
        }
    }
    v
}

/// `ξ(U) = ⟨⟨U*|_party |w⟩`, reshaped as an operator `P̃ → F̃`.
pub fn xi_contraction(w: &ProcessVector, idx: usize, u: &CMat) -> Result<LabeledOperator> {
    let spec = &w.parties()[idx];
    let u_conj_op = LabeledOperator::new(
        SpaceLayout::of(&[(spec.out_label.as_str(), spec.d_out)]),
        SpaceLayout::of(&[(spec.in_label.as_str(), spec.d_in)]),
        u.map(|z| z.conj()),
    )?;
    let bra = double_ket(&u_conj_op)?;
    let rest = w
        .vector()
        .contract_bra(&[spec.in_label.as_str(), spec.out_label.as_str()], &bra)?;
    Ok(rest.reshape_split(&f_tilde_labels(w, idx), &p_tilde_labels(w, idx))?)
}

pub fn oreshkov_decompose(w: &ProcessVector, party: &str) -> Result<OreshkovDecomposition> {
    let idx = w.party_index(party)?;
    for p in w.parties() {
        p.equal_dims()?;
    }
    let d_a = w.parties()[idx].d_in;
    let d_p_tilde: usize = w.p_dim()
        * w.parties()
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != idx)
            .map(|(_, p)| p.d_out)
            .product::<usize>();
    if !d_p_tilde.is_multiple_of(d_a) {
        return Err(FrameError::EnvDimMismatch {
            expected: 0,
            found: d_p_tilde,
        });
    }
    let d_e = d_p_tilde / d_a;

    let oracle = |u: &CMat| -> CMat {
        xi_contraction(w, idx, u)
            .expect("layout-checked contraction")
            .into_entries()
    };
    let deco = marcus_extract_seeded(oracle, d_a, d_e, 0x6f72_6573_6800 ^ idx as u64)?;
    if deco.transposed {
        return Err(FrameError::TransposeDetected);
    }

    let spec = w.parties()[idx].clone();
    let e_label = format!("E~{}", spec.name);
    let p_tilde_layout = {
        let pairs: Vec<(&str, usize)> = p_tilde_labels(w, idx)
            .into_iter()
            .map(|l| {
                let d = if l == "P" {
                    w.p_dim()
                } else {
                    w.parties().iter().find(|p| p.out_label == l).unwrap().d_out
                };
                (l, d)
            })
            .collect();
        SpaceLayout::of(&pairs)
    };
    let f_tilde_layout = {
        let pairs: Vec<(&str, usize)> = f_tilde_labels(w, idx)
            .into_iter()
            .map(|l| {
                let d = if l == "F" {
                    w.f_dim()
                } else {
                    w.parties().iter().find(|p| p.in_label == l).unwrap().d_in
                };
                (l, d)
            })
            .collect();
        SpaceLayout::of(&pairs)
    };

    let t_op = LabeledOperator::new(
        SpaceLayout::of(&[(spec.in_label.as_str(), d_a), (e_label.as_str(), d_e)]),
        p_tilde_layout,
        deco.b_op.clone(),
    )?;
    let s_op = LabeledOperator::new(
        f_tilde_layout,
        SpaceLayout::of(&[(spec.out_label.as_str(), d_a), (e_label.as_str(), d_e)]),
        deco.a_op.clone(),
    )?;
    Ok(OreshkovDecomposition {
        party: spec,
        t_op,
        s_op,
        env_dim: d_e,
        parties: w.parties().to_vec(),
        p_dim: w.p_dim(),
        f_dim: w.f_dim(),
        residual: deco.residual,
    })
}

impl OreshkovDecomposition {
    /// `S (U ⊗ id_E) T : P̃ → F̃`.
    pub fn xi(&self, u: &CMat) -> Result<LabeledOperator> {
        let id_e = CMat::identity(self.env_dim, self.env_dim);
        let mid = LabeledOperator::new(
            self.s_op.in_layout().clone(),
            self.t_op.out_layout().clone(),
            u.kronecker(&id_e),
        )?;
        Ok(self.s_op.compose(&mid)?.compose(&self.t_op)?)
    }

    /// `|w⟩ = ⟨⟨id|^{E E'} |T⟩⟩^{P̃, in·E} |S⟩⟩^{out·E', F̃}`, re-permuted to
    /// the canonical process layout.
    pub fn reassemble(&self) -> Result<ProcessVector> {
        let e = format!("E~{}", self.party.name);
        let e2 = format!("{e}'");
        let t_ket = double_ket(&self.t_op)?;
        let s_relabel = self.s_op.relabeled(&e, &e2)?;
        let s_ket = double_ket(&s_relabel)?;
        let big = t_ket.kron(&s_ket)?;
        let id_pair = LabeledOperator::new(
            SpaceLayout::of(&[(e2.as_str(), self.env_dim)]),
            SpaceLayout::of(&[(e.as_str(), self.env_dim)]),
            CMat::identity(self.env_dim, self.env_dim),
        )?;
        let bra = double_ket(&id_pair)?;
        let contracted = big.contract_bra(&[e.as_str(), e2.as_str()], &bra)?;

        let canonical = canonical_layout(&self.parties, self.p_dim, self.f_dim);
        let order: Vec<&str> = canonical.labels().collect();
        let vector = contracted.permute_factors(&order)?;
        let vector = LabeledVector::new(canonical, vector.entries().clone())?;
        Ok(ProcessVector::new(
            self.parties.clone(),
            self.p_dim,
            self.f_dim,
            vector,
        )?)
    }
}

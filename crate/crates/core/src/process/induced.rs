//! The induced map of a pure process: the global `P → F` evolution obtained
//! by plugging one operator into each party slot.

use crate::tensor::{double_ket, unket, CMat, LabeledOperator, SpaceLayout};
use crate::DEFAULT_TOL;

use super::{require_unitary, ProcessVector, Result, P_LABEL};

/// `|G⟩⟩^{PF} = |w⟩^{T_parties} · ⊗ₖ |Mₖ⟩⟩` for arbitrary party operators,
/// by multilinearity. Returns the `P → F` operator.
pub fn induced_contraction(w: &ProcessVector, ops: &[CMat]) -> Result<LabeledOperator> {
    if ops.len() != w.parties().len() {
        return Err(super::dim_mismatch(format!(
            "expected {} party operators, got {}",
            w.parties().len(),
            ops.len()
        )));
    }
    let mut dk: Option<crate::tensor::LabeledVector> = None;
    for (party, m) in w.parties().iter().zip(ops.iter()) {
        if m.nrows() != party.d_out || m.ncols() != party.d_in {
            return Err(super::dim_mismatch(format!(
                "operator for party `{}` is {}x{}, expected {}x{}",
                party.name,
                m.nrows(),
                m.ncols(),
                party.d_out,
                party.d_in
            )));
        }
        let op = LabeledOperator::new(
            SpaceLayout::of(&[(party.out_label.as_str(), party.d_out)]),
            SpaceLayout::of(&[(party.in_label.as_str(), party.d_in)]),
            m.clone(),
        )?;
        let ket = double_ket(&op)?;
        dk = Some(match dk {
            None => ket,
            Some(acc) => acc.kron(&ket)?,
        });
    }
    let g_vec = match dk {
        Some(dk) => w.pf_by_parties()?.apply(&dk)?,
        // No parties: |w⟩ itself is |G⟩⟩ on P⊗F.
        None => w.vector().clone(),
    };
    Ok(unket(&g_vec, &[P_LABEL])?)
}

/// The induced map at unitary arguments: checks each party operator is
/// unitary (and square) before contracting. For valid pure processes the
/// result is unitary within tolerance.
pub fn induced_map(w: &ProcessVector, unitaries: &[CMat]) -> Result<LabeledOperator> {
    for (party, u) in w.parties().iter().zip(unitaries.iter()) {
        party.equal_dims()?;
        require_unitary(&party.name, u, DEFAULT_TOL)?;
    }
    induced_contraction(w, unitaries)
}

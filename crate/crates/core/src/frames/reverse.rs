//! Time reversal of pure processes: conjugate the amplitudes and swap the
//! global past with the future and every party input with its output. The
//! induced map transforms as `G_r(U₁,…) = G(U₁†,…)†`.

use crate::process::{canonical_layout, ProcessVector};
use crate::tensor::LabeledVector;

use super::{FrameError, Result};

pub fn time_reverse(w: &ProcessVector) -> Result<ProcessVector> {
    if w.p_dim() != w.f_dim() {
        return Err(FrameError::Dimensions(format!(
            "time reversal needs d_P = d_F (got {} vs {})",
            w.p_dim(),
            w.f_dim()
        )));
    }
    for p in w.parties() {
        p.equal_dims()?;
    }
    // |w_r⟩ = (SWAP_PF ⊗ ⊗ₖ SWAP_{inₖ outₖ}) |w*⟩: conjugate, permute the
    // factors into swapped order, then read the result in canonical labels.
    let mut order: Vec<&str> = vec!["F", "P"];
    for p in w.parties() {
        order.push(p.out_label.as_str());
        order.push(p.in_label.as_str());
    }
    let permuted = w.vector().conjugate().permute_factors(&order)?;
    let layout = canonical_layout(w.parties(), w.p_dim(), w.f_dim());
    let vector = LabeledVector::new(layout, permuted.entries().clone())?;
    Ok(ProcessVector::new(
        w.parties().to_vec(),
        w.p_dim(),
        w.f_dim(),
        vector,
    )?)
}

//! The inequality functional.

use crate::process::CorrelationTensor;

use super::{InequalityError, Result};

/// `I₁ = P_AB(11|110) + P_BC(11|011) + P_AC(11|101) − P_ABC(111|111)`,
/// two-party terms marginalising the unlisted party's outcome at the
/// displayed settings.
pub fn eval_i1(t: &CorrelationTensor) -> Result<f64> {
    if t.n_parties() != 3
        || t.outcome_arities().iter().any(|&a| a != 2)
        || t.setting_arities().iter().any(|&s| s != 2)
    {
        return Err(InequalityError::Arity(format!(
            "need 3 binary-setting binary-outcome parties, got outcomes {:?} settings {:?}",
            t.outcome_arities(),
            t.setting_arities()
        )));
    }
    let p_ab = t.marginal(&[0, 1], &[1, 1], &[1, 1, 0]);
    let p_bc = t.marginal(&[1, 2], &[1, 1], &[0, 1, 1]);
    let p_ac = t.marginal(&[0, 2], &[1, 1], &[1, 0, 1]);
    let p_abc = t.prob(&[1, 1, 1], &[1, 1, 1]);
    Ok(p_ab + p_bc + p_ac - p_abc)
}

//! Reconstruction of a pure process from its induced-map oracle.
//!
//! Processes with equal per-party input/output dimensions are fully
//! determined by their action on unitaries:
//!
//! `|w⟩ = (1/Πₖ dₖ) Σ_{i₁…i_N} |G(U_{i₁},…,U_{i_N})⟩⟩^{PF} ⊗ₖ |U_{i_k}*⟩⟩`
//!
//! summed over an orthonormal unitary basis per party. The result is
//! basis-independent.

use crate::tensor::{double_ket, unitary_basis, C64, CMat, LabeledOperator, LabeledVector, SpaceLayout};

use super::{PartySpec, ProcessError, ProcessVector, Result, F_LABEL, P_LABEL};

/// Reconstructs `|w⟩` from an oracle mapping per-party unitaries to the
/// global `P → F` operator (as a `d_F x d_P` matrix). Uses the
/// Heisenberg–Weyl basis for every party.
pub fn reconstruct_process<O>(oracle: O, parties: &[PartySpec], p_dim: usize) -> Result<ProcessVector>
where
    O: Fn(&[CMat]) -> CMat,
{
    let bases: Vec<Vec<CMat>> = parties
        .iter()
        .map(|p| p.equal_dims().map(unitary_basis))
        .collect::<Result<_>>()?;
    reconstruct_process_with_bases(oracle, parties, p_dim, &bases)
}

/// Same as [`reconstruct_process`] with caller-supplied orthonormal unitary
/// bases (one per party); reconstruction must not depend on the choice.
pub fn reconstruct_process_with_bases<O>(
    oracle: O,
    parties: &[PartySpec],
    p_dim: usize,
    bases: &[Vec<CMat>],
) -> Result<ProcessVector>
where
    O: Fn(&[CMat]) -> CMat,
{
    let dims: Vec<usize> = parties
        .iter()
        .map(|p| p.equal_dims())
        .collect::<Result<_>>()?;
    if bases.len() != parties.len() {
        return Err(super::dim_mismatch("one unitary basis per party required"));
    }
    for (d, b) in dims.iter().zip(bases.iter()) {
        if b.len() != d * d {
            return Err(super::dim_mismatch(format!(
                "basis has {} elements for dimension {d}",
                b.len()
            )));
        }
    }

    // The output dimension of a square-party process equals d_P.
    let f_dim = p_dim;
    let norm = C64::new(1.0 / dims.iter().map(|&d| d as f64).product::<f64>(), 0.0);

    let p_layout = SpaceLayout::of(&[(P_LABEL, p_dim)]);
    let f_layout = SpaceLayout::of(&[(F_LABEL, f_dim)]);

    let sizes: Vec<usize> = bases.iter().map(|b| b.len()).collect();
    let mut total: Option<LabeledVector> = None;
    super::for_each_tuple(&sizes, |tuple| -> Result<()> {
        let ops: Vec<CMat> = tuple
            .iter()
            .zip(bases.iter())
            .map(|(&i, b)| b[i].clone())
            .collect();
        let g = oracle(&ops);
        if g.nrows() != f_dim || g.ncols() != p_dim {
            return Err(ProcessError::OracleShape {
                expected_rows: f_dim,
                expected_cols: p_dim,
                rows: g.nrows(),
                cols: g.ncols(),
            });
        }
        let g_op = LabeledOperator::new(f_layout.clone(), p_layout.clone(), g)?;
        let mut term = double_ket(&g_op)?;
        for (k, party) in parties.iter().enumerate() {
            let u_conj = bases[k][tuple[k]].map(|z| z.conj());
            let u_op = LabeledOperator::new(
                SpaceLayout::of(&[(party.out_label.as_str(), party.d_out)]),
                SpaceLayout::of(&[(party.in_label.as_str(), party.d_in)]),
                u_conj,
            )?;
            term = term.kron(&double_ket(&u_op)?)?;
        }
        total = Some(match total.take() {
            None => term,
            Some(acc) => acc.add(&term)?,
        });
        Ok(())
    })?;

    let vector = total.expect("at least one basis tuple").scale(norm);
    ProcessVector::new(parties.to_vec(), p_dim, f_dim, vector)
}

//! The contraction primitive behind the generalised Born rule.

use crate::tensor::{CMat, LabeledOperator};

use super::{ProcessError, Result};

/// Computes `tr_S( X^{T_S} · (M ⊗ id) )` for a factor group `S` without
/// materialising the transpose: with row indices split as `(s, r)` and
/// column indices as `(s', c)` over the selected factors,
///
/// `Y[r, c] = Σ_{s,s'} X[(s,r),(s',c)] · M[s, s']`.
///
/// `labels` must appear in both layouts with matching dimensions and `M` is
/// indexed row-major over the selected factors in layout order. This is the
/// link product of a process with one party's Choi operator.
pub fn choi_link(x: &LabeledOperator, labels: &[&str], m: &CMat) -> Result<LabeledOperator> {
    use crate::tensor::TensorError;

    let out_pos = x.out_layout().positions_of(labels)?;
    let in_pos = x.in_layout().positions_of(labels)?;
    for (l, (&po, &pi)) in labels.iter().zip(out_pos.iter().zip(in_pos.iter())) {
        if x.out_layout().factors()[po].dim != x.in_layout().factors()[pi].dim {
            return Err(ProcessError::Tensor(TensorError::NonSquareFactor(
                l.to_string(),
            )));
        }
    }

    let row_sp = crate::tensor::splitter(x.out_layout(), &out_pos);
    let col_sp = crate::tensor::splitter(x.in_layout(), &in_pos);
    let sel = row_sp.sel_dim;
    if m.nrows() != sel || m.ncols() != sel {
        return Err(ProcessError::Dimensions(format!(
            "choi_link: operator is {}x{}, selected factors have dimension {sel}",
            m.nrows(),
            m.ncols()
        )));
    }

    let kept_out: Vec<usize> = (0..x.out_layout().len())
        .filter(|p| !out_pos.contains(p))
        .collect();
    let kept_in: Vec<usize> = (0..x.in_layout().len())
        .filter(|p| !in_pos.contains(p))
        .collect();

    let mut entries = CMat::zeros(row_sp.rest_dim, col_sp.rest_dim);
    for i in 0..x.out_dim() {
        let (s_row, r) = row_sp.split(i);
        for j in 0..x.in_dim() {
            let (s_col, c) = col_sp.split(j);
            entries[(r, c)] += x.entries()[(i, j)] * m[(s_row, s_col)];
        }
    }
    LabeledOperator::new(
        x.out_layout().select(&kept_out),
        x.in_layout().select(&kept_in),
        entries,
    )
    .map_err(ProcessError::Tensor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{random_matrix, LabeledOperator, SpaceLayout};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Reference implementation straight off the defining formula:
    /// partial transpose, embed `M ⊗ id`, multiply, partial trace.
    fn brute_link(x: &LabeledOperator, labels: &[&str], m: &CMat) -> LabeledOperator {
        let xt = x.partial_transpose(labels).unwrap();
        let sel_pos = x.out_layout().positions_of(labels).unwrap();
        let sel_layout = x.out_layout().select(&sel_pos);
        let rest_pos: Vec<usize> = (0..x.out_layout().len())
            .filter(|p| !sel_pos.contains(p))
            .collect();
        let rest_layout = x.out_layout().select(&rest_pos);
        let m_op = LabeledOperator::on(sel_layout, m.clone()).unwrap();
        let big = m_op
            .kron(&LabeledOperator::identity(rest_layout))
            .unwrap();
        let order: Vec<&str> = x.out_layout().labels().collect();
        let big = big.permute_factors(&order).unwrap();
        xt.compose(&big).unwrap().partial_trace(labels).unwrap()
    }

    #[test]
    fn matches_definition_on_random_operators() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let layout = SpaceLayout::of(&[("p", 2), ("a", 2), ("b", 3)]);
        let x = LabeledOperator::on(layout, random_matrix(12, 12, &mut rng)).unwrap();
        for labels in [vec!["a"], vec!["b"], vec!["a", "b"]] {
            let d: usize = labels
                .iter()
                .map(|l| x.out_layout().dim_of(l).unwrap())
                .product();
            let m = random_matrix(d, d, &mut rng);
            let fast = choi_link(&x, &labels, &m).unwrap();
            let slow = brute_link(&x, &labels, &m);
            assert!(
                (fast.entries() - slow.entries()).norm() < 1e-12,
                "labels {labels:?}"
            );
        }
    }
}

//! Double-ket vectorisation and its inverse.
//!
//! `|K⟩⟩ = Σ_i |i⟩ ⊗ K|i⟩` on input⊗output, unnormalised (`|id⟩⟩` has
//! norm² = d). The inverse reads an operator back off a vector by partial
//! transposition on the input factors.

use super::{C64, CMat, CVec, LabeledOperator, LabeledVector, Result, SpaceLayout};

impl LabeledVector {
    /// Reshape into an operator `in_labels → out_labels`; the two label sets
    /// must partition the layout. `M[r,c] = v[r at out positions, c at in]`.
    pub fn reshape_split(
        &self,
        out_labels: &[&str],
        in_labels: &[&str],
    ) -> Result<LabeledOperator> {
        let order: Vec<&str> = out_labels.iter().chain(in_labels.iter()).copied().collect();
        let permuted = self.permute_factors(&order)?;
        let out_layout = permuted.layout().select(&(0..out_labels.len()).collect::<Vec<_>>());
        let in_layout = permuted
            .layout()
            .select(&(out_labels.len()..order.len()).collect::<Vec<_>>());
        let (rows, cols) = (out_layout.total_dim(), in_layout.total_dim());
        let slice: Vec<C64> = permuted.entries().iter().cloned().collect();
        let entries = CMat::from_row_slice(rows, cols, &slice);
        LabeledOperator::new(out_layout, in_layout, entries)
    }
}

impl LabeledOperator {
    /// Row-major flattening onto `out_layout ⊗ in_layout`; inverse of
    /// [`LabeledVector::reshape_split`].
    pub fn flatten_to_vector(&self) -> Result<LabeledVector> {
        let layout = self.out_layout().concat(self.in_layout())?;
        let mut entries = CVec::zeros(layout.total_dim());
        let cols = self.in_dim();
        for r in 0..self.out_dim() {
            for c in 0..cols {
                entries[r * cols + c] = self.entries()[(r, c)];
            }
        }
        LabeledVector::new(layout, entries)
    }
}

/// `|K⟩⟩ = Σ_i |i⟩^{in} ⊗ (K|i⟩)^{out}` on the concatenated layout
/// input ⊗ output. Input and output labels must be disjoint.
pub fn double_ket(k: &LabeledOperator) -> Result<LabeledVector> {
    let layout = k.in_layout().concat(k.out_layout())?;
    let (d_in, d_out) = (k.in_dim(), k.out_dim());
    let mut entries = CVec::zeros(d_in * d_out);
    for i in 0..d_in {
        for j in 0..d_out {
            entries[i * d_out + j] = k.entries()[(j, i)];
        }
    }
    LabeledVector::new(layout, entries)
}

/// Inverse of [`double_ket`]: the partial transpose of `|v⟩` on the input
/// factors, read as an operator from the `in_labels` factors to the rest.
pub fn unket(v: &LabeledVector, in_labels: &[&str]) -> Result<LabeledOperator> {
    let out_labels: Vec<&str> = v
        .layout()
        .labels()
        .filter(|l| !in_labels.contains(l))
        .collect();
    v.reshape_split(&out_labels, in_labels)
}

/// `|id⟩⟩⟨⟨id|` linking two same-dimension factors (unnormalised
/// maximally entangled projector).
pub fn entangled_pair(label_a: &str, label_b: &str, dim: usize) -> LabeledOperator {
    let layout = SpaceLayout::of(&[(label_a, dim), (label_b, dim)]);
    let mut v = LabeledVector::zeros(layout);
    let mut entries = v.entries().clone();
    for i in 0..dim {
        entries[i * dim + i] = C64::new(1.0, 0.0);
    }
    v = LabeledVector::new(v.layout().clone(), entries).unwrap();
    v.outer()
}

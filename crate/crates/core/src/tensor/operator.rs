use super::layout::Splitter;
use super::{linalg, C64, CMat, CVec, Result, SpaceLayout, TensorError};

/// A dense complex matrix between tensor products of named factors.
///
/// Entries are `out_dim x in_dim`; row and column indices are row-major over
/// the respective layout's factors. Hermiticity, unitarity and positive
/// semidefiniteness are checkable predicates with explicit tolerances, never
/// stored flags.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOperator {
    out_layout: SpaceLayout,
    in_layout: SpaceLayout,
    entries: CMat,
}

/// A dense complex vector over a tensor product of named factors.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledVector {
    layout: SpaceLayout,
    entries: CVec,
}

impl LabeledOperator {
    pub fn new(out_layout: SpaceLayout, in_layout: SpaceLayout, entries: CMat) -> Result<Self> {
        if entries.nrows() != out_layout.total_dim() || entries.ncols() != in_layout.total_dim() {
            return Err(TensorError::ShapeMismatch {
                rows: entries.nrows(),
                cols: entries.ncols(),
                out: out_layout.total_dim(),
                inp: in_layout.total_dim(),
            });
        }
        Ok(Self {
            out_layout,
            in_layout,
            entries,
        })
    }

    /// Square operator on a single layout.
    pub fn on(layout: SpaceLayout, entries: CMat) -> Result<Self> {
        Self::new(layout.clone(), layout, entries)
    }

    pub fn identity(layout: SpaceLayout) -> Self {
        let d = layout.total_dim();
        Self {
            out_layout: layout.clone(),
            in_layout: layout,
            entries: CMat::identity(d, d),
        }
    }

    pub fn zeros(out_layout: SpaceLayout, in_layout: SpaceLayout) -> Self {
        let entries = CMat::zeros(out_layout.total_dim(), in_layout.total_dim());
        Self {
            out_layout,
            in_layout,
            entries,
        }
    }

    /// Scalar (1x1) operator on empty layouts.
    pub fn scalar(z: C64) -> Self {
        Self {
            out_layout: SpaceLayout::scalar(),
            in_layout: SpaceLayout::scalar(),
            entries: CMat::from_element(1, 1, z),
        }
    }

    pub fn out_layout(&self) -> &SpaceLayout {
        &self.out_layout
    }

    pub fn in_layout(&self) -> &SpaceLayout {
        &self.in_layout
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn into_entries(self) -> CMat {
        self.entries
    }

    pub fn out_dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn in_dim(&self) -> usize {
        self.entries.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.out_dim() == self.in_dim()
    }

    /// Matrix product `self * rhs`; requires matching total dimensions.
    pub fn compose(&self, rhs: &LabeledOperator) -> Result<LabeledOperator> {
        if self.in_dim() != rhs.out_dim() {
            return Err(TensorError::DimensionMismatch(format!(
                "compose: in dim {} vs out dim {}",
                self.in_dim(),
                rhs.out_dim()
            )));
        }
        Ok(LabeledOperator {
            out_layout: self.out_layout.clone(),
            in_layout: rhs.in_layout.clone(),
            entries: &self.entries * &rhs.entries,
        })
    }

    pub fn apply(&self, v: &LabeledVector) -> Result<LabeledVector> {
        if self.in_dim() != v.dim() {
            return Err(TensorError::DimensionMismatch(format!(
                "apply: in dim {} vs vector dim {}",
                self.in_dim(),
                v.dim()
            )));
        }
        Ok(LabeledVector {
            layout: self.out_layout.clone(),
            entries: &self.entries * &v.entries,
        })
    }

    pub fn adjoint(&self) -> LabeledOperator {
        LabeledOperator {
            out_layout: self.in_layout.clone(),
            in_layout: self.out_layout.clone(),
            entries: self.entries.adjoint(),
        }
    }

    /// Full transpose in the computational basis (layouts swap roles).
    pub fn transpose_full(&self) -> LabeledOperator {
        LabeledOperator {
            out_layout: self.in_layout.clone(),
            in_layout: self.out_layout.clone(),
            entries: self.entries.transpose(),
        }
    }

    pub fn conjugate(&self) -> LabeledOperator {
        LabeledOperator {
            out_layout: self.out_layout.clone(),
            in_layout: self.in_layout.clone(),
            entries: self.entries.map(|z| z.conj()),
        }
    }

    pub fn scale(&self, z: C64) -> LabeledOperator {
        LabeledOperator {
            out_layout: self.out_layout.clone(),
            in_layout: self.in_layout.clone(),
            entries: self.entries.map(|e| e * z),
        }
    }

    pub fn add(&self, rhs: &LabeledOperator) -> Result<LabeledOperator> {
        if self.out_dim() != rhs.out_dim() || self.in_dim() != rhs.in_dim() {
            return Err(TensorError::DimensionMismatch("add: shape".into()));
        }
        Ok(LabeledOperator {
            out_layout: self.out_layout.clone(),
            in_layout: self.in_layout.clone(),
            entries: &self.entries + &rhs.entries,
        })
    }

    pub fn sub(&self, rhs: &LabeledOperator) -> Result<LabeledOperator> {
        if self.out_dim() != rhs.out_dim() || self.in_dim() != rhs.in_dim() {
            return Err(TensorError::DimensionMismatch("sub: shape".into()));
        }
        Ok(LabeledOperator {
            out_layout: self.out_layout.clone(),
            in_layout: self.in_layout.clone(),
            entries: &self.entries - &rhs.entries,
        })
    }

    /// Tensor product; factor labels must stay unique.
    pub fn kron(&self, rhs: &LabeledOperator) -> Result<LabeledOperator> {
        Ok(LabeledOperator {
            out_layout: self.out_layout.concat(&rhs.out_layout)?,
            in_layout: self.in_layout.concat(&rhs.in_layout)?,
            entries: self.entries.kronecker(&rhs.entries),
        })
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn fro_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hilbert–Schmidt inner product `tr(self† rhs)`.
    pub fn hs_inner(&self, rhs: &LabeledOperator) -> Result<C64> {
        if self.out_dim() != rhs.out_dim() || self.in_dim() != rhs.in_dim() {
            return Err(TensorError::DimensionMismatch("hs_inner: shape".into()));
        }
        Ok(self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let d = &self.entries - self.entries.adjoint();
        d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.hermiticity_residual() <= tol * (1.0 + self.fro_norm())
    }

    /// `max(‖W†W − id‖_F, ‖WW† − id‖_F)`.
    pub fn unitarity_residual(&self) -> f64 {
        let gram_in = self.entries.adjoint() * &self.entries;
        let gram_out = &self.entries * self.entries.adjoint();
        let r_in = (&gram_in - CMat::identity(gram_in.nrows(), gram_in.ncols()))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let r_out = (&gram_out - CMat::identity(gram_out.nrows(), gram_out.ncols()))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt();
        r_in.max(r_out)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_residual() <= tol
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_hermitian_eigenvalue(&self.entries)
    }

    /// PSD margin and verdict: min eigenvalue `≥ −tol·(1 + ‖W‖_F)`.
    pub fn psd_margin(&self) -> f64 {
        self.min_eigenvalue()
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.psd_margin() >= -tol * (1.0 + self.fro_norm())
    }

    /// Relabels one factor in whichever layouts contain it.
    pub fn relabeled(&self, from: &str, to: &str) -> Result<LabeledOperator> {
        let out_layout = if self.out_layout.contains(from) {
            self.out_layout.relabeled(from, to)?
        } else {
            self.out_layout.clone()
        };
        let in_layout = if self.in_layout.contains(from) {
            self.in_layout.relabeled(from, to)?
        } else {
            self.in_layout.clone()
        };
        if out_layout == self.out_layout && in_layout == self.in_layout {
            return Err(TensorError::UnknownLabel(from.to_string()));
        }
        Ok(LabeledOperator {
            out_layout,
            in_layout,
            entries: self.entries.clone(),
        })
    }

    /// Replaces both layouts without touching entries; total dims must match.
    pub fn with_layouts(&self, out_layout: SpaceLayout, in_layout: SpaceLayout) -> Result<Self> {
        Self::new(out_layout, in_layout, self.entries.clone())
    }

    /// Reorders the output factors to `order`, permuting rows accordingly.
    pub fn permute_out(&self, order: &[&str]) -> Result<LabeledOperator> {
        let new_layout = self.out_layout.reordered(order)?;
        let map = permutation_map(&self.out_layout, &new_layout)?;
        let mut entries = CMat::zeros(self.out_dim(), self.in_dim());
        for (new_r, &old_r) in map.iter().enumerate() {
            for c in 0..self.in_dim() {
                entries[(new_r, c)] = self.entries[(old_r, c)];
            }
        }
        Ok(LabeledOperator {
            out_layout: new_layout,
            in_layout: self.in_layout.clone(),
            entries,
        })
    }

    /// Reorders the input factors to `order`, permuting columns accordingly.
    pub fn permute_in(&self, order: &[&str]) -> Result<LabeledOperator> {
        let new_layout = self.in_layout.reordered(order)?;
        let map = permutation_map(&self.in_layout, &new_layout)?;
        let mut entries = CMat::zeros(self.out_dim(), self.in_dim());
        for (new_c, &old_c) in map.iter().enumerate() {
            for r in 0..self.out_dim() {
                entries[(r, new_c)] = self.entries[(r, old_c)];
            }
        }
        Ok(LabeledOperator {
            out_layout: self.in_layout.reordered(order)?,
            in_layout: new_layout,
            entries,
        })
    }

    /// Reorders both layouts of a layout-square operator to `order`.
    pub fn permute_factors(&self, order: &[&str]) -> Result<LabeledOperator> {
        self.permute_out(order)?.permute_in(order)
    }

    /// Partial trace over the named factors (must be square factor-wise).
    pub fn partial_trace(&self, labels: &[&str]) -> Result<LabeledOperator> {
        for l in labels {
            let po = self.out_layout.position(l)?;
            let pi = self.in_layout.position(l)?;
            if self.out_layout.factors()[po].dim != self.in_layout.factors()[pi].dim {
                return Err(TensorError::NonSquareFactor(l.to_string()));
            }
        }
        let out_pos = self.out_layout.positions_of(labels)?;
        let in_pos = self.in_layout.positions_of(labels)?;
        let row_sp = Splitter::new(&self.out_layout, &out_pos);
        let col_sp = Splitter::new(&self.in_layout, &in_pos);

        let kept_out: Vec<usize> = (0..self.out_layout.len())
            .filter(|p| !out_pos.contains(p))
            .collect();
        let kept_in: Vec<usize> = (0..self.in_layout.len())
            .filter(|p| !in_pos.contains(p))
            .collect();
        let new_out = self.out_layout.select(&kept_out);
        let new_in = self.in_layout.select(&kept_in);

        let mut entries = CMat::zeros(row_sp.rest_dim, col_sp.rest_dim);
        for r in 0..self.out_dim() {
            let (rs, rr) = row_sp.split(r);
            for c in 0..self.in_dim() {
                let (cs, cr) = col_sp.split(c);
                if rs == cs {
                    entries[(rr, cr)] += self.entries[(r, c)];
                }
            }
        }
        LabeledOperator::new(new_out, new_in, entries)
    }

    /// Transpose on the named factors only; requires them square factor-wise
    /// and at matching dimensions in both layouts.
    pub fn partial_transpose(&self, labels: &[&str]) -> Result<LabeledOperator> {
        for l in labels {
            let po = self.out_layout.position(l)?;
            let pi = self.in_layout.position(l)?;
            if self.out_layout.factors()[po].dim != self.in_layout.factors()[pi].dim {
                return Err(TensorError::NonSquareFactor(l.to_string()));
            }
        }
        let out_pos = self.out_layout.positions_of(labels)?;
        let in_pos = self.in_layout.positions_of(labels)?;
        let row_sp = Splitter::new(&self.out_layout, &out_pos);
        let col_sp = Splitter::new(&self.in_layout, &in_pos);

        let mut entries = CMat::zeros(self.out_dim(), self.in_dim());
        for r in 0..self.out_dim() {
            let (rs, rr) = row_sp.split(r);
            for c in 0..self.in_dim() {
                let (cs, cr) = col_sp.split(c);
                // Selected sub-indices swap between row and column.
                let nr = row_sp.compose(cs, rr);
                let nc = col_sp.compose(rs, cr);
                entries[(nr, nc)] = self.entries[(r, c)];
            }
        }
        LabeledOperator::new(self.out_layout.clone(), self.in_layout.clone(), entries)
    }

    /// Coarsens consecutive factors of both layouts into single factors
    /// (entries untouched); the operator must be layout-square.
    pub fn merge_consecutive_factors(&self, groups: &[(&str, usize)]) -> Result<LabeledOperator> {
        Ok(LabeledOperator {
            out_layout: self.out_layout.merge_consecutive(groups)?,
            in_layout: self.in_layout.merge_consecutive(groups)?,
            entries: self.entries.clone(),
        })
    }

    /// Closes a wire: contracts the output factor `out_label` with the input
    /// factor `in_label` (equal dims), i.e. `Y[o,i] = Σ_e W[(o,e),(i,e)]`.
    pub fn loop_contract(&self, out_label: &str, in_label: &str) -> Result<LabeledOperator> {
        let po = self.out_layout.position(out_label)?;
        let pi = self.in_layout.position(in_label)?;
        let d_o = self.out_layout.factors()[po].dim;
        let d_i = self.in_layout.factors()[pi].dim;
        if d_o != d_i {
            return Err(TensorError::DimensionMismatch(format!(
                "loop {out_label}->{in_label}: dims {d_o} vs {d_i}"
            )));
        }
        let row_sp = Splitter::new(&self.out_layout, &[po]);
        let col_sp = Splitter::new(&self.in_layout, &[pi]);
        let kept_out: Vec<usize> = (0..self.out_layout.len()).filter(|&p| p != po).collect();
        let kept_in: Vec<usize> = (0..self.in_layout.len()).filter(|&p| p != pi).collect();

        let mut entries = CMat::zeros(row_sp.rest_dim, col_sp.rest_dim);
        for r in 0..self.out_dim() {
            let (rs, rr) = row_sp.split(r);
            for c in 0..self.in_dim() {
                let (cs, cr) = col_sp.split(c);
                if rs == cs {
                    entries[(rr, cr)] += self.entries[(r, c)];
                }
            }
        }
        LabeledOperator::new(
            self.out_layout.select(&kept_out),
            self.in_layout.select(&kept_in),
            entries,
        )
    }
}

impl LabeledVector {
    pub fn new(layout: SpaceLayout, entries: CVec) -> Result<Self> {
        if entries.len() != layout.total_dim() {
            return Err(TensorError::ShapeMismatch {
                rows: entries.len(),
                cols: 1,
                out: layout.total_dim(),
                inp: 1,
            });
        }
        Ok(Self { layout, entries })
    }

    pub fn zeros(layout: SpaceLayout) -> Self {
        let entries = CVec::zeros(layout.total_dim());
        Self { layout, entries }
    }

    pub fn basis_state(layout: SpaceLayout, index: usize) -> Self {
        let mut v = Self::zeros(layout);
        v.entries[index] = C64::new(1.0, 0.0);
        v
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn entries(&self) -> &CVec {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, z: C64) -> LabeledVector {
        LabeledVector {
            layout: self.layout.clone(),
            entries: self.entries.map(|e| e * z),
        }
    }

    pub fn add(&self, rhs: &LabeledVector) -> Result<LabeledVector> {
        if self.dim() != rhs.dim() {
            return Err(TensorError::DimensionMismatch("add: vector dims".into()));
        }
        Ok(LabeledVector {
            layout: self.layout.clone(),
            entries: &self.entries + &rhs.entries,
        })
    }

    pub fn sub(&self, rhs: &LabeledVector) -> Result<LabeledVector> {
        if self.dim() != rhs.dim() {
            return Err(TensorError::DimensionMismatch("sub: vector dims".into()));
        }
        Ok(LabeledVector {
            layout: self.layout.clone(),
            entries: &self.entries - &rhs.entries,
        })
    }

    pub fn conjugate(&self) -> LabeledVector {
        LabeledVector {
            layout: self.layout.clone(),
            entries: self.entries.map(|z| z.conj()),
        }
    }

    /// `⟨self|rhs⟩`.
    pub fn inner(&self, rhs: &LabeledVector) -> Result<C64> {
        if self.dim() != rhs.dim() {
            return Err(TensorError::DimensionMismatch("inner: vector dims".into()));
        }
        Ok(self
            .entries
            .iter()
            .zip(rhs.entries.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn kron(&self, rhs: &LabeledVector) -> Result<LabeledVector> {
        Ok(LabeledVector {
            layout: self.layout.concat(&rhs.layout)?,
            entries: self.entries.kronecker(&rhs.entries),
        })
    }

    pub fn with_layout(&self, layout: SpaceLayout) -> Result<LabeledVector> {
        LabeledVector::new(layout, self.entries.clone())
    }

    /// Reorders the layout factors to `order`, permuting entries to match.
    pub fn permute_factors(&self, order: &[&str]) -> Result<LabeledVector> {
        let new_layout = self.layout.reordered(order)?;
        let map = permutation_map(&self.layout, &new_layout)?;
        let mut entries = CVec::zeros(self.dim());
        for (new_i, &old_i) in map.iter().enumerate() {
            entries[new_i] = self.entries[old_i];
        }
        Ok(LabeledVector {
            layout: new_layout,
            entries,
        })
    }

    /// Contracts a bra against the named factors:
    /// `out[rest] = Σ_sel conj(bra[sel]) · self[(sel, rest)]`.
    pub fn contract_bra(&self, labels: &[&str], bra: &LabeledVector) -> Result<LabeledVector> {
        let pos = self.layout.positions_of(labels)?;
        let sp = Splitter::new(&self.layout, &pos);
        if bra.dim() != sp.sel_dim {
            return Err(TensorError::DimensionMismatch(format!(
                "contract_bra: bra dim {} vs selected dim {}",
                bra.dim(),
                sp.sel_dim
            )));
        }
        let kept: Vec<usize> = (0..self.layout.len()).filter(|p| !pos.contains(p)).collect();
        let mut entries = CVec::zeros(sp.rest_dim);
        for i in 0..self.dim() {
            let (s, r) = sp.split(i);
            entries[r] += bra.entries[s].conj() * self.entries[i];
        }
        LabeledVector::new(self.layout.select(&kept), entries)
    }

    /// Outer product `|self⟩⟨self|`.
    pub fn outer(&self) -> LabeledOperator {
        let d = self.dim();
        let mut entries = CMat::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                entries[(r, c)] = self.entries[r] * self.entries[c].conj();
            }
        }
        LabeledOperator {
            out_layout: self.layout.clone(),
            in_layout: self.layout.clone(),
            entries,
        }
    }

    /// Residual `min_φ ‖self − e^{iφ} rhs‖`, treating global phase as gauge.
    pub fn phase_aligned_distance(&self, rhs: &LabeledVector) -> Result<f64> {
        let ov = self.inner(rhs)?;
        let phase = if ov.norm() > 0.0 {
            ov / ov.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        self.sub(&rhs.scale(phase.conj()))
            .map(|d| d.norm())
    }
}

/// For each flat index of `to`, the corresponding flat index of `from`.
/// Both layouts must contain the same factors (possibly reordered).
fn permutation_map(from: &SpaceLayout, to: &SpaceLayout) -> Result<Vec<usize>> {
    let from_strides = from.strides();
    let to_strides = to.strides();
    // position in `from` of each `to` factor
    let mut from_pos = Vec::with_capacity(to.len());
    for f in to.factors() {
        from_pos.push(from.position(&f.label)?);
    }
    let total = to.total_dim();
    let mut map = vec![0usize; total];
    for (i, slot) in map.iter_mut().enumerate() {
        let mut rem = i;
        let mut old = 0usize;
        for (k, f) in to.factors().iter().enumerate() {
            let digit = rem / to_strides[k];
            rem %= to_strides[k];
            let _ = f;
            old += digit * from_strides[from_pos[k]];
        }
        *slot = old;
    }
    Ok(map)
}

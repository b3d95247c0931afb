use super::{Result, TensorError};

/// One named tensor factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

impl Factor {
    pub fn new(label: impl Into<String>, dim: usize) -> Self {
        Self {
            label: label.into(),
            dim,
        }
    }
}

/// An ordered list of named, dimensioned Hilbert-space factors.
///
/// The listed order is the canonical tensor order: flat indices are row-major
/// over the factors, with the first factor most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceLayout {
    factors: Vec<Factor>,
}

impl SpaceLayout {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        for f in &factors {
            if f.dim == 0 {
                return Err(TensorError::ZeroDim(f.label.clone()));
            }
        }
        for (i, f) in factors.iter().enumerate() {
            if factors[..i].iter().any(|g| g.label == f.label) {
                return Err(TensorError::DuplicateLabel(f.label.clone()));
            }
        }
        Ok(Self { factors })
    }

    /// Layout from `(label, dim)` pairs; panics on duplicate labels.
    pub fn of(pairs: &[(&str, usize)]) -> Self {
        Self::new(
            pairs
                .iter()
                .map(|&(l, d)| Factor::new(l, d))
                .collect::<Vec<_>>(),
        )
        .expect("invalid layout")
    }

    /// The trivial (one-dimensional, factorless) layout.
    pub fn scalar() -> Self {
        Self { factors: vec![] }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.label.as_str())
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| TensorError::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.position(label)?].dim)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.factors.iter().any(|f| f.label == label)
    }

    /// Row-major strides, one per factor.
    pub fn strides(&self) -> Vec<usize> {
        let n = self.factors.len();
        let mut s = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.factors[k + 1].dim;
        }
        s
    }

    /// Concatenation of two layouts (tensor product order).
    pub fn concat(&self, other: &SpaceLayout) -> Result<SpaceLayout> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        SpaceLayout::new(factors)
    }

    /// The sub-layout formed by the factors at `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> SpaceLayout {
        SpaceLayout {
            factors: positions.iter().map(|&p| self.factors[p].clone()).collect(),
        }
    }

    /// Positions of `labels` within this layout, in the order given.
    pub fn positions_of(&self, labels: &[&str]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.position(l)).collect()
    }

    /// New layout with the same factors reordered to `order` (a permutation
    /// of the labels).
    pub fn reordered(&self, order: &[&str]) -> Result<SpaceLayout> {
        if order.len() != self.factors.len() {
            return Err(TensorError::NotAPermutation(order.join(",")));
        }
        let mut seen = vec![false; self.factors.len()];
        let mut factors = Vec::with_capacity(order.len());
        for l in order {
            let p = self.position(l)?;
            if seen[p] {
                return Err(TensorError::NotAPermutation(order.join(",")));
            }
            seen[p] = true;
            factors.push(self.factors[p].clone());
        }
        Ok(SpaceLayout { factors })
    }

    pub fn relabeled(&self, from: &str, to: &str) -> Result<SpaceLayout> {
        let p = self.position(from)?;
        let mut factors = self.factors.clone();
        factors[p].label = to.to_string();
        SpaceLayout::new(factors)
    }

    /// Coarsens consecutive factor groups into single factors. `groups` gives
    /// (new label, number of consecutive factors consumed); the counts must
    /// sum to the factor count. Flat indices are unchanged.
    pub fn merge_consecutive(&self, groups: &[(&str, usize)]) -> Result<SpaceLayout> {
        let total: usize = groups.iter().map(|&(_, n)| n).sum();
        if total != self.factors.len() {
            return Err(TensorError::DimensionMismatch(format!(
                "merge groups cover {total} of {} factors",
                self.factors.len()
            )));
        }
        let mut factors = Vec::with_capacity(groups.len());
        let mut at = 0usize;
        for &(label, n) in groups {
            let dim: usize = self.factors[at..at + n].iter().map(|f| f.dim).product();
            factors.push(Factor::new(label, dim.max(1)));
            at += n;
        }
        SpaceLayout::new(factors)
    }
}

/// Decomposes flat indices of a layout into a (selected, rest) pair of
/// sub-indices and composes them back. Both sub-enumerations are row-major
/// over their factors in layout order.
pub(crate) struct Splitter {
    /// For every flat index: (selected code, rest code).
    codes: Vec<(u32, u32)>,
    /// selected code -> contribution to the flat index.
    sel_contrib: Vec<usize>,
    /// rest code -> contribution to the flat index.
    rest_contrib: Vec<usize>,
    pub sel_dim: usize,
    pub rest_dim: usize,
}

impl Splitter {
    pub fn new(layout: &SpaceLayout, selected: &[usize]) -> Self {
        let n = layout.len();
        let strides = layout.strides();
        let is_sel: Vec<bool> = (0..n).map(|k| selected.contains(&k)).collect();

        let sel_dims: Vec<usize> = (0..n)
            .filter(|&k| is_sel[k])
            .map(|k| layout.factors()[k].dim)
            .collect();
        let rest_dims: Vec<usize> = (0..n)
            .filter(|&k| !is_sel[k])
            .map(|k| layout.factors()[k].dim)
            .collect();
        let sel_strides: Vec<usize> = (0..n).filter(|&k| is_sel[k]).map(|k| strides[k]).collect();
        let rest_strides: Vec<usize> = (0..n).filter(|&k| !is_sel[k]).map(|k| strides[k]).collect();

        let sel_dim: usize = sel_dims.iter().product();
        let rest_dim: usize = rest_dims.iter().product();

        let contrib = |dims: &[usize], full_strides: &[usize], code: usize| -> usize {
            let mut c = code;
            let mut acc = 0usize;
            for k in (0..dims.len()).rev() {
                let digit = c % dims[k];
                c /= dims[k];
                acc += digit * full_strides[k];
            }
            acc
        };
        let sel_contrib: Vec<usize> = (0..sel_dim)
            .map(|c| contrib(&sel_dims, &sel_strides, c))
            .collect();
        let rest_contrib: Vec<usize> = (0..rest_dim)
            .map(|c| contrib(&rest_dims, &rest_strides, c))
            .collect();

        let total = layout.total_dim();
        let mut codes = vec![(0u32, 0u32); total];
        for (i, slot) in codes.iter_mut().enumerate() {
            let mut sel_code = 0usize;
            let mut rest_code = 0usize;
            let mut rem = i;
            let mut si = 0usize;
            let mut ri = 0usize;
            for k in 0..n {
                let d = layout.factors()[k].dim;
                let digit = rem / strides[k];
                rem %= strides[k];
                let _ = d;
                if is_sel[k] {
                    sel_code = sel_code * sel_dims[si] + digit;
                    si += 1;
                } else {
                    rest_code = rest_code * rest_dims[ri] + digit;
                    ri += 1;
                }
            }
            *slot = (sel_code as u32, rest_code as u32);
        }

        Self {
            codes,
            sel_contrib,
            rest_contrib,
            sel_dim,
            rest_dim,
        }
    }

    #[inline]
    pub fn split(&self, flat: usize) -> (usize, usize) {
        let (s, r) = self.codes[flat];
        (s as usize, r as usize)
    }

    #[inline]
    pub fn compose(&self, sel_code: usize, rest_code: usize) -> usize {
        self.sel_contrib[sel_code] + self.rest_contrib[rest_code]
    }
}

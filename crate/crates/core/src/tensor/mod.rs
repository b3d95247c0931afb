//! Labelled finite-dimensional complex linear algebra and the Choi calculus.
//!
//! Operators and vectors carry a [`SpaceLayout`]: an ordered list of named,
//! dimensioned tensor factors. Flat indices are row-major over the factors in
//! listed order, so `kron` concatenates layouts and all factor permutations
//! are explicit. Everything is immutable after construction; operations are
//! pure functions.

mod basis;
mod choi;
mod layout;
pub mod linalg;
mod operator;
mod random;

pub use basis::{
    expand_in_unitary_basis, hermitian_basis, randomized_unitary_basis, traceless_hermitian_basis,
    unitary_basis,
};
pub use choi::{double_ket, entangled_pair, unket};
pub use layout::{Factor, SpaceLayout};
pub(crate) use layout::Splitter;

/// Crate-internal index splitter over a subset of layout factors.
pub(crate) fn splitter(layout: &SpaceLayout, positions: &[usize]) -> Splitter {
    Splitter::new(layout, positions)
}
pub use operator::{LabeledOperator, LabeledVector};
pub use random::{haar_unitary, random_density, random_hermitian, random_matrix};

use thiserror::Error;

pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
pub type CVec = nalgebra::DVector<num_complex::Complex64>;
pub type C64 = num_complex::Complex64;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("duplicate factor label `{0}` in layout")]
    DuplicateLabel(String),
    #[error("unknown factor label `{0}`")]
    UnknownLabel(String),
    #[error("matrix shape ({rows}x{cols}) does not match layouts ({out}x{inp})")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        out: usize,
        inp: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("`{0}` is not a permutation of the layout labels")]
    NotAPermutation(String),
    #[error("factor `{0}` is not square across the operator's layouts")]
    NonSquareFactor(String),
    #[error("zero-dimensional factor `{0}`")]
    ZeroDim(String),
}

pub type Result<T> = std::result::Result<T, TensorError>;

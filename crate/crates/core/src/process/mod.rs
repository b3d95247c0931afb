//! Process matrices and pure processes.
//!
//! A process routes quantum systems between local parties without assuming a
//! global order: it maps the parties' channels to a channel from a global
//! past `P` to a global future `F`. Process vectors and matrices here always
//! carry the canonical layout `[P, F, in₁, out₁, in₂, out₂, …]`.

mod contract;
mod correlations;
mod induced;
mod pad;
mod purity;
mod reconstruct;
mod reduced;
mod validate;


pub use contract::choi_link;
pub use correlations::{correlations, CorrelationTensor, Instrument, StrategySpec};
pub use induced::{induced_contraction, induced_map};
pub use pad::PaddedProcess;
pub use purity::PurityReport;
pub use reconstruct::{reconstruct_process, reconstruct_process_with_bases};
pub use reduced::{reduced_process, reduced_process_with, PastConvention};
pub use validate::ValidityReport;

use crate::tensor::{C64, CMat, LabeledOperator, LabeledVector, SpaceLayout, TensorError};
use crate::DEFAULT_TOL;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProcessError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("operator is not Hermitian (residual {0:.3e})")]
    NonHermitian(f64),
    #[error("not a valid process: {0}")]
    InvalidProcess(String),
    #[error("party `{0}` requires equal input/output dimensions (got {1} vs {2})")]
    UnequalPartyDims(String, usize, usize),
    #[error("argument for party `{party}` is not unitary (residual {residual:.3e})")]
    NonUnitaryArgument { party: String, residual: f64 },
    #[error("ill-formed instrument: {0}")]
    BadInstrument(String),
    #[error("`rho_p` is not a state: {0}")]
    NotAState(String),
    #[error("oracle returned wrong shape: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    OracleShape {
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("dimension mismatch: {0}")]
    Dimensions(String),
}

pub type Result<T> = std::result::Result<T, ProcessError>;

pub const P_LABEL: &str = "P";
pub const F_LABEL: &str = "F";

/// One party's wiring: its named input/output factors and their dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartySpec {
    pub name: String,
    pub in_label: String,
    pub out_label: String,
    pub d_in: usize,
    pub d_out: usize,
}

impl PartySpec {
    pub fn new(name: impl Into<String>, d_in: usize, d_out: usize) -> Self {
        let name = name.into();
        Self {
            in_label: format!("{name}_I"),
            out_label: format!("{name}_O"),
            name,
            d_in,
            d_out,
        }
    }

    /// A qubit party (d_in = d_out = 2).
    pub fn qubit(name: impl Into<String>) -> Self {
        Self::new(name, 2, 2)
    }

    pub fn equal_dims(&self) -> Result<usize> {
        if self.d_in != self.d_out {
            return Err(ProcessError::UnequalPartyDims(
                self.name.clone(),
                self.d_in,
                self.d_out,
            ));
        }
        Ok(self.d_in)
    }
}

/// The canonical layout `[P, F, in₁, out₁, …]` for the given shape.
pub fn canonical_layout(parties: &[PartySpec], p_dim: usize, f_dim: usize) -> SpaceLayout {
    let mut pairs: Vec<(&str, usize)> = vec![(P_LABEL, p_dim), (F_LABEL, f_dim)];
    for p in parties {
        pairs.push((p.in_label.as_str(), p.d_in));
        pairs.push((p.out_label.as_str(), p.d_out));
    }
    SpaceLayout::of(&pairs)
}

/// A pure process `|w⟩` on `P ⊗ F ⊗ (⊗ₖ inₖ ⊗ outₖ)`.
///
/// Carries double-ket normalisation: `tr |w⟩⟨w| = d_P·Πₖ d_outₖ` for valid
/// processes. Purity certificate: the reshaped operator
/// `U_w : P⊗(⊗outₖ) → F⊗(⊗inₖ)` is unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessVector {
    parties: Vec<PartySpec>,
    p_dim: usize,
    f_dim: usize,
    vector: LabeledVector,
}

/// A process matrix `W`: PSD on the canonical layout and passing the
/// normalisation battery of [`ProcessMatrix::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProcessMatrix {
    parties: Vec<PartySpec>,
    p_dim: usize,
    f_dim: usize,
    matrix: LabeledOperator,
}

impl ProcessVector {
    pub fn new(
        parties: Vec<PartySpec>,
        p_dim: usize,
        f_dim: usize,
        vector: LabeledVector,
    ) -> Result<Self> {
        let expect = canonical_layout(&parties, p_dim, f_dim);
        if vector.layout() != &expect {
            return Err(ProcessError::Dimensions(format!(
                "vector layout {:?} does not match canonical layout {:?}",
                vector.layout(),
                expect
            )));
        }
        Ok(Self {
            parties,
            p_dim,
            f_dim,
            vector,
        })
    }

    pub fn parties(&self) -> &[PartySpec] {
        &self.parties
    }

    pub fn p_dim(&self) -> usize {
        self.p_dim
    }

    pub fn f_dim(&self) -> usize {
        self.f_dim
    }

    pub fn vector(&self) -> &LabeledVector {
        &self.vector
    }

    pub fn party(&self, name: &str) -> Result<&PartySpec> {
        self.parties
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| ProcessError::Dimensions(format!("unknown party `{name}`")))
    }

    pub fn party_index(&self, name: &str) -> Result<usize> {
        self.parties
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| ProcessError::Dimensions(format!("unknown party `{name}`")))
    }

    /// All party factor labels in canonical (interleaved) order.
    pub fn party_labels(&self) -> Vec<&str> {
        let mut v = Vec::with_capacity(2 * self.parties.len());
        for p in &self.parties {
            v.push(p.in_label.as_str());
            v.push(p.out_label.as_str());
        }
        v
    }

    /// `|w⟩⟨w|` as a dense process matrix.
    pub fn to_process_matrix(&self) -> ProcessMatrix {
        ProcessMatrix {
            parties: self.parties.clone(),
            p_dim: self.p_dim,
            f_dim: self.f_dim,
            matrix: self.vector.outer(),
        }
    }

    /// `|w⟩` reshaped as a matrix from the party factors to `P⊗F`.
    pub(crate) fn pf_by_parties(&self) -> Result<LabeledOperator> {
        let labels = self.party_labels();
        Ok(self.vector.reshape_split(&[P_LABEL, F_LABEL], &labels)?)
    }

    /// Global-phase canonical form: first nonzero amplitude real positive.
    pub fn phase_normalized(&self) -> ProcessVector {
        let thresh = self
            .vector
            .entries()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
            * 1e-12;
        for z in self.vector.entries().iter() {
            if z.norm() > thresh {
                let phase = z.conj() / C64::new(z.norm(), 0.0);
                return ProcessVector {
                    parties: self.parties.clone(),
                    p_dim: self.p_dim,
                    f_dim: self.f_dim,
                    vector: self.vector.scale(phase),
                };
            }
        }
        self.clone()
    }
}

impl ProcessMatrix {
    pub fn new(
        parties: Vec<PartySpec>,
        p_dim: usize,
        f_dim: usize,
        matrix: LabeledOperator,
    ) -> Result<Self> {
        let expect = canonical_layout(&parties, p_dim, f_dim);
        if matrix.out_layout() != &expect || matrix.in_layout() != &expect {
            return Err(ProcessError::Dimensions(
                "matrix layouts do not match canonical layout".into(),
            ));
        }
        Ok(Self {
            parties,
            p_dim,
            f_dim,
            matrix,
        })
    }

    pub fn parties(&self) -> &[PartySpec] {
        &self.parties
    }

    pub fn p_dim(&self) -> usize {
        self.p_dim
    }

    pub fn f_dim(&self) -> usize {
        self.f_dim
    }

    pub fn matrix(&self) -> &LabeledOperator {
        &self.matrix
    }

    pub fn party_labels(&self) -> Vec<&str> {
        let mut v = Vec::with_capacity(2 * self.parties.len());
        for p in &self.parties {
            v.push(p.in_label.as_str());
            v.push(p.out_label.as_str());
        }
        v
    }

    pub fn party(&self, name: &str) -> Result<&PartySpec> {
        self.parties
            .iter()
            .find(|p| p.name == name)
            .ok_or_else(|| ProcessError::Dimensions(format!("unknown party `{name}`")))
    }
}

/// Unitarity gate shared by operations that accept party unitaries.
pub(crate) fn require_unitary(party: &str, u: &CMat, tol: f64) -> Result<()> {
    if u.nrows() != u.ncols() {
        return Err(ProcessError::NonUnitaryArgument {
            party: party.to_string(),
            residual: f64::INFINITY,
        });
    }
    let gram = u.adjoint() * u;
    let residual = (gram - CMat::identity(u.nrows(), u.nrows())).norm();
    if residual > tol.max(DEFAULT_TOL) * 1e3 {
        return Err(ProcessError::NonUnitaryArgument {
            party: party.to_string(),
            residual,
        });
    }
    Ok(())
}

pub(crate) fn dim_mismatch(msg: impl Into<String>) -> ProcessError {
    ProcessError::Dimensions(msg.into())
}

/// Visits every index tuple in `Π [0, sizes[k])`, odometer order.
pub(crate) fn for_each_tuple<E>(
    sizes: &[usize],
    mut f: impl FnMut(&[usize]) -> std::result::Result<(), E>,
) -> std::result::Result<(), E> {
    let n = sizes.len();
    if sizes.contains(&0) {
        return Ok(());
    }
    let mut tuple = vec![0usize; n];
    loop {
        f(&tuple)?;
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
            tuple[k] += 1;
            if tuple[k] < sizes[k] {
                break;
            }
            tuple[k] = 0;
        }
    }
}

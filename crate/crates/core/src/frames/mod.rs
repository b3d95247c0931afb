//! Causal reference frames: constructive extraction, consistency checks,
//! time reversal, and the time-delocalised (Oreshkov) decomposition.
//!
//! A frame for one party splits the global evolution into a past
//! `Π : P → in ⊗ E` and a future `Φ : out ⊗ E → F` around that party's
//! action, as functions of the other parties' unitaries. Frames are unique
//! only up to a unitary gauge on the environment factor, so cross-checks
//! compare the gauge-invariant products `Φ(U ⊗ id)Π`.

mod consistency;
mod extract;
mod marcus;
mod oreshkov;
mod probes;
mod reverse;

pub use consistency::{check_consistency, ConsistencyReport, FrameGenerator};
pub use extract::{extract_frame, gauge_match_residual, FrameDecomposition};
pub use marcus::{marcus_extract, marcus_extract_seeded, MarcusDecomposition};
pub use oreshkov::{oreshkov_decompose, OreshkovDecomposition};
pub use probes::{independence_probe, linearity_probe};
pub use reverse::time_reverse;

use crate::process::ProcessError;
use crate::tensor::TensorError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrameError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error("oracle is not linear: extension residual {0:.3e}")]
    NotLinear(f64),
    #[error("f(|{0}⟩⟨{0}|) is not a projector (residual {1:.3e}); oracle is not unitarity-preserving")]
    NotProjector(usize, f64),
    #[error("projector rank {found} does not match environment dimension {expected}")]
    EnvDimMismatch { expected: usize, found: usize },
    #[error("transpose branch detected; not a causal frame of a valid process")]
    TransposeDetected,
    #[error("{what} is not unitary (residual {residual:.3e})")]
    NonUnitary { what: String, residual: f64 },
    #[error("dimension error: {0}")]
    Dimensions(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;

#[cfg(test)]
mod tests;

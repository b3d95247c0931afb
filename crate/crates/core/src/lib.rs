//! Finite-dimensional quantum processes without a global causal order.
//!
//! The crate is organised around a small labelled linear-algebra layer
//! ([`tensor`]) carrying the Choi/double-ket calculus, on top of which sit:
//!
//! - [`process`] — process vectors and matrices: validity certification,
//!   purity, induced maps, reconstruction from induced-map oracles,
//!   dimension padding, outcome correlations and reduced processes;
//! - [`frames`] — causal-reference-frame extraction through a constructive
//!   generalised Marcus decomposition, frame consistency, time reversal and
//!   the time-delocalised (Oreshkov) decomposition;
//! - [`zoo`] — concrete processes (quantum switch, causally ordered chains,
//!   the Baumeler–Wolf process and its time reverse) together with
//!   independent circuit oracles and a post-selected-CTC contractor;
//! - [`inequality`] — the causal inequality `I₁`, the instrument strategy
//!   that violates it, and a seesaw optimiser over party instruments;
//! - [`gravity`] — the Schwarzschild gravitational-switch construction:
//!   frame-adapted metrics, radial light travel times and branch-dependent
//!   causal order.

pub mod frames;
pub mod gravity;
pub mod inequality;
pub mod io;
pub mod process;
pub mod tensor;
pub mod zoo;

/// Default numerical tolerance for unitarity/hermiticity/PSD predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

pub use tensor::{LabeledOperator, LabeledVector, SpaceLayout};

//! Consistency of causal reference frames: every party's decomposition must
//! induce the same global past-to-future unitary.

use crate::process::ProcessVector;
use crate::tensor::{haar_unitary, CMat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{extract_frame, FrameError, Result};

/// Produces one party's frame of a fixed process at any choice of the other
/// parties' unitaries.
pub struct FrameGenerator<'a> {
    w: &'a ProcessVector,
    party: String,
}

impl<'a> FrameGenerator<'a> {
    pub fn new(w: &'a ProcessVector, party: impl Into<String>) -> Self {
        Self {
            w,
            party: party.into(),
        }
    }

    pub fn process(&self) -> &ProcessVector {
        self.w
    }

    pub fn party(&self) -> &str {
        &self.party
    }

    pub fn frame_at(&self, fixed: &[CMat]) -> Result<super::FrameDecomposition> {
        extract_frame(self.w, &self.party, fixed)
    }
}

#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub consistent: bool,
    pub max_residual: f64,
    pub samples: usize,
    pub tolerance: f64,
}

/// Draws `samples` random unitary tuples, evaluates each generator's
/// gauge-invariant product `Φ(U ⊗ id)Π` and compares them pairwise.
pub fn check_consistency(
    generators: &[FrameGenerator],
    samples: usize,
    seed: u64,
) -> Result<ConsistencyReport> {
    check_consistency_with_tol(generators, samples, seed, 1e-8)
}

pub fn check_consistency_with_tol(
    generators: &[FrameGenerator],
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<ConsistencyReport> {
    if generators.len() < 2 {
        return Err(FrameError::Dimensions(
            "consistency needs at least two frames".into(),
        ));
    }
    let shape: Vec<(String, usize)> = generators[0]
        .w
        .parties()
        .iter()
        .map(|p| (p.name.clone(), p.d_in))
        .collect();
    for g in generators {
        let s: Vec<(String, usize)> = g
            .w
            .parties()
            .iter()
            .map(|p| (p.name.clone(), p.d_in))
            .collect();
        if s != shape || g.w.p_dim() != generators[0].w.p_dim() {
            return Err(FrameError::Dimensions(
                "frames must share the party layout".into(),
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    for _ in 0..samples {
        let tuple: Vec<CMat> = shape.iter().map(|&(_, d)| haar_unitary(d, &mut rng)).collect();
        let mut products: Vec<CMat> = Vec::with_capacity(generators.len());
        for g in generators {
            let idx = g.w.party_index(&g.party)?;
            let fixed: Vec<CMat> = tuple
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != idx)
                .map(|(_, u)| u.clone())
                .collect();
            let frame = g.frame_at(&fixed)?;
            let prod = frame.product(&tuple[idx])?;
            products.push(prod.into_entries());
        }
        for i in 0..products.len() {
            for j in (i + 1)..products.len() {
                max_residual = max_residual.max((&products[i] - &products[j]).norm());
            }
        }
    }
    Ok(ConsistencyReport {
        consistent: max_residual < tol,
        max_residual,
        samples,
        tolerance: tol,
    })
}

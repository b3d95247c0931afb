//! Instrument strategies: the exact violating strategy and random seeds for
//! optimisation restarts.

use crate::process::{Instrument, StrategySpec};
use crate::tensor::{C64, CMat, linalg, random_matrix};
use crate::zoo::gates::{pauli_x, pauli_y};
use rand::Rng;

fn id4() -> CMat {
    CMat::identity(4, 4)
}

/// The strategy that achieves `I₁ ≈ −1/4` on the reduced time-reversed
/// Baumeler–Wolf process; identical for all three parties. Choi operators on
/// `in ⊗ out`:
///
/// - `M_{0|0} = ½(id − ½ id⊗X − ½ X⊗X)`, `M_{1|0} = 0`
/// - `M_{0|1} ≈ ¼(id − 0.97926 X⊗id − 0.20258 Y⊗id)`
/// - `M_{1|1} ≈ ¼(id + id⊗X + 0.97926(X⊗id + X⊗X) + 0.20258(Y⊗id + Y⊗X))`
pub fn paper_strategy() -> StrategySpec {
    let x = pauli_x();
    let y = pauli_y();
    let id2 = CMat::identity(2, 2);
    let c1 = 0.97926f64;
    let c2 = 0.20258f64;

    let m00 = (id4() - id2.kronecker(&x).map(|z| z * 0.5) - x.kronecker(&x).map(|z| z * 0.5))
        .map(|z| z * 0.5);
    let m10 = CMat::zeros(4, 4);
    let m01 = (id4() - x.kronecker(&id2).map(|z| z * c1) - y.kronecker(&id2).map(|z| z * c2))
        .map(|z| z * 0.25);
    let m11 = (id4()
        + id2.kronecker(&x)
        + (x.kronecker(&id2) + x.kronecker(&x)).map(|z| z * c1)
        + (y.kronecker(&id2) + y.kronecker(&x)).map(|z| z * c2))
    .map(|z| z * 0.25);

    let per_party = |name: &str| {
        vec![
            Instrument::new(name, 0, vec![m00.clone(), m10.clone()]),
            Instrument::new(name, 1, vec![m01.clone(), m11.clone()]),
        ]
    };
    StrategySpec::new(vec![per_party("A"), per_party("B"), per_party("C")])
}

/// Inverse square root of a positive definite Hermitian matrix.
fn inv_sqrt(m: &CMat) -> CMat {
    let (vals, vecs) = linalg::hermitian_eigen(m);
    let d = m.nrows();
    let mut diag = CMat::zeros(d, d);
    for (i, &v) in vals.iter().enumerate() {
        diag[(i, i)] = C64::new(1.0 / v.max(1e-14).sqrt(), 0.0);
    }
    &vecs * diag * vecs.adjoint()
}

/// A random binary instrument on a d-dimensional party. Draws across the
/// natural extremal families: sharp two-outcome instruments (one Kraus per
/// outcome) and single-outcome settings where one element carries the whole
/// CPTP map and the other vanishes.
fn random_instrument(name: &str, setting: usize, d: usize, rng: &mut impl Rng) -> Instrument {
    let style: u8 = rng.random_range(0..4);
    let kraus: Vec<Vec<CMat>> = match style {
        // all the weight on outcome 0 or on outcome 1
        0 => vec![vec![random_matrix(d, d, rng), random_matrix(d, d, rng)], vec![]],
        1 => vec![vec![], vec![random_matrix(d, d, rng), random_matrix(d, d, rng)]],
        // sharp: one Kraus per outcome
        _ => (0..2).map(|_| vec![random_matrix(d, d, rng)]).collect(),
    };
    let mut s = CMat::zeros(d, d);
    for per_outcome in &kraus {
        for k in per_outcome {
            s += k.adjoint() * k;
        }
    }
    let t = inv_sqrt(&s);
    let elements: Vec<CMat> = kraus
        .iter()
        .map(|per_outcome| {
            let mut m = CMat::zeros(d * d, d * d);
            let _ = &m;
            for k in per_outcome {
                let kt = k * &t;
                // |K⟩⟩⟨⟨K| with |K⟩⟩[(i,o)] = K[o,i]
                for i in 0..d {
                    for o in 0..d {
                        for ip in 0..d {
                            for op in 0..d {
                                m[(i * d + o, ip * d + op)] +=
                                    kt[(o, i)] * kt[(op, ip)].conj();
                            }
                        }
                    }
                }
            }
            m
        })
        .collect();
    Instrument::new(name, setting, elements)
}

/// Both settings of a random binary instrument as raw element pairs.
pub(super) fn random_instrument_pair(d: usize, rng: &mut impl Rng) -> [[CMat; 2]; 2] {
    let mk = |rng: &mut _| {
        let inst = random_instrument("tmp", 0, d, rng);
        [inst.elements[0].clone(), inst.elements[1].clone()]
    };
    [mk(rng), mk(rng)]
}

/// A random two-setting two-outcome strategy for `n` parties of equal
/// dimension `d`.
pub fn random_strategy(n: usize, d: usize, rng: &mut impl Rng) -> StrategySpec {
    let names: Vec<String> = (0..n)
        .map(|k| ((b'A' + k as u8) as char).to_string())
        .collect();
    StrategySpec::new(
        names
            .iter()
            .map(|name| {
                (0..2)
                    .map(|x| random_instrument(name, x, d, rng))
                    .collect()
            })
            .collect(),
    )
}

/// Discrete Fourier basis projectors: the conjugate frame of the
/// computational basis.
fn fourier_projectors(d: usize) -> Vec<CMat> {
    let fd = d as f64;
    (0..d)
        .map(|s| {
            let col = CMat::from_fn(d, 1, |j, _| {
                let phase = std::f64::consts::TAU * (j * s) as f64 / fd;
                C64::new(phase.cos() / fd.sqrt(), phase.sin() / fd.sqrt())
            });
            &col * col.adjoint()
        })
        .collect()
}

/// A random classical measure-and-reprepare strategy in the conjugate
/// (Fourier) frame, identical for all `n` parties and quantized to
/// half-integer preparation weights. Setting 0 is single-outcome; setting 1
/// measures projectively with a random outcome assignment. Classical
/// conjugate-frame strategies are the time reverse of computational-basis
/// classical ones, which makes them the natural extremal seeds for
/// correlations of time-reversed classical processes.
pub fn quantized_classical_strategy(n: usize, d: usize, rng: &mut impl Rng) -> StrategySpec {
    let basis = fourier_projectors(d);
    let levels = [0.0f64, 0.5, 1.0];
    let quantized_state = |rng: &mut dyn rand::RngCore| -> CMat {
        // quantized weights over the frame, renormalised
        let mut weights: Vec<f64> = (0..d)
            .map(|_| levels[(rng.next_u32() as usize) % levels.len()])
            .collect();
        let total: f64 = weights.iter().sum();
        if total == 0.0 {
            let k = (rng.next_u32() as usize) % d;
            weights[k] = 1.0;
        }
        let total: f64 = weights.iter().sum();
        let mut state = CMat::zeros(d, d);
        for (s, w) in weights.iter().enumerate() {
            state += basis[s].map(|z| z * C64::new(w / total, 0.0));
        }
        state
    };

    // one shared table for all parties
    let prep0: Vec<CMat> = (0..d).map(|_| quantized_state(rng)).collect();
    let prep1: Vec<CMat> = (0..d).map(|_| quantized_state(rng)).collect();
    let mut assignment: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        let j = (rng.next_u32() as usize) % (i + 1);
        assignment.swap(i, j);
    }

    let names: Vec<String> = (0..n)
        .map(|k| ((b'A' + k as u8) as char).to_string())
        .collect();
    StrategySpec::new(
        names
            .iter()
            .map(|name| {
                let mut m0 = CMat::zeros(d * d, d * d);
                for (s, prep) in prep0.iter().enumerate() {
                    m0 += basis[s].transpose().kronecker(prep);
                }
                let mut elems0 = vec![m0];
                elems0.push(CMat::zeros(d * d, d * d));
                let elems1: Vec<CMat> = (0..d.min(2))
                    .map(|a| basis[assignment[a]].transpose().kronecker(&prep1[a]))
                    .collect();
                let elems1 = if d == 2 {
                    elems1
                } else {
                    // fold the remaining outcomes into the last element
                    let mut rest = CMat::zeros(d * d, d * d);
                    for a in 1..d {
                        rest += basis[assignment[a]].transpose().kronecker(&prep1[a]);
                    }
                    vec![elems1[0].clone(), rest]
                };
                vec![
                    Instrument::new(name.clone(), 0, elems0),
                    Instrument::new(name.clone(), 1, elems1),
                ]
            })
            .collect(),
    )
}

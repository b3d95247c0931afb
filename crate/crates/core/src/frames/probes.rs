//! Structural probes for closed-form frame functions of several unitary
//! arguments: joint linearity (via agreement with the multilinear extension
//! from the product unitary basis) and independence (variation across
//! random argument tuples).

use crate::tensor::{expand_in_unitary_basis, haar_unitary, unitary_basis, C64, CMat};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Max residual between `f` and its multilinear extension from the product
/// Heisenberg–Weyl basis, over `samples` random unitary tuples. Near zero
/// iff `f` is jointly linear in its arguments.
pub fn linearity_probe(
    f: impl Fn(&[CMat]) -> CMat,
    arg_dims: &[usize],
    samples: usize,
    seed: u64,
) -> f64 {
    let bases: Vec<Vec<CMat>> = arg_dims.iter().map(|&d| unitary_basis(d)).collect();
    let sizes: Vec<usize> = bases.iter().map(|b| b.len()).collect();

    let mut tuples: Vec<Vec<usize>> = Vec::new();
    crate::process::for_each_tuple::<std::convert::Infallible>(&sizes, |t| {
        tuples.push(t.to_vec());
        Ok(())
    })
    .unwrap();
    let values: Vec<CMat> = tuples
        .iter()
        .map(|t| {
            let args: Vec<CMat> = t
                .iter()
                .zip(bases.iter())
                .map(|(&i, b)| b[i].clone())
                .collect();
            f(&args)
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let args: Vec<CMat> = arg_dims.iter().map(|&d| haar_unitary(d, &mut rng)).collect();
        let coeff_sets: Vec<Vec<C64>> = args
            .iter()
            .zip(bases.iter())
            .map(|(a, b)| expand_in_unitary_basis(a, b))
            .collect();
        let direct = f(&args);
        let mut ext = CMat::zeros(direct.nrows(), direct.ncols());
        for (tuple, value) in tuples.iter().zip(values.iter()) {
            let mut c = C64::new(1.0, 0.0);
            for (k, &i) in tuple.iter().enumerate() {
                c *= coeff_sets[k][i];
            }
            if c.norm_sqr() > 0.0 {
                ext += value.map(|z| z * c);
            }
        }
        let scale = 1.0 + direct.norm();
        worst = worst.max((direct - ext).norm() / scale);
    }
    worst
}

/// Max pairwise distance `‖f(x) − f(y)‖` over random argument tuples; zero
/// iff the function is constant on the sampled set.
pub fn independence_probe(
    f: impl Fn(&[CMat]) -> CMat,
    arg_dims: &[usize],
    samples: usize,
    seed: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<CMat> = (0..samples.max(2))
        .map(|_| {
            let args: Vec<CMat> = arg_dims.iter().map(|&d| haar_unitary(d, &mut rng)).collect();
            f(&args)
        })
        .collect();
    let mut worst = 0.0f64;
    for i in 0..values.len() {
        for j in (i + 1)..values.len() {
            worst = worst.max((&values[i] - &values[j]).norm());
        }
    }
    worst
}

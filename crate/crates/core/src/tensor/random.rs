//! Seeded random matrix ensembles for tests and optimisation restarts.

use super::{C64, CMat};
use rand::Rng;
use rand_distr::StandardNormal;

/// Complex Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal
/// phase fix.
pub fn haar_unitary(d: usize, rng: &mut impl Rng) -> CMat {
    let g = random_matrix(d, d, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / C64::new(rjj.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// GUE-style random Hermitian matrix.
pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> CMat {
    let g = random_matrix(d, d, rng);
    (&g + g.adjoint()).map(|z| z * 0.5)
}

/// Random density matrix: normalised Wishart `GG†/tr`.
pub fn random_density(d: usize, rng: &mut impl Rng) -> CMat {
    let g = random_matrix(d, d, rng);
    let w = &g * g.adjoint();
    let t = w.trace().re;
    w.map(|z| z / C64::new(t, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn haar_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in [1usize, 2, 3, 5, 8] {
            let u = haar_unitary(d, &mut rng);
            let res = (u.adjoint() * &u - CMat::identity(d, d)).norm();
            assert!(res < 1e-12, "d={d}: residual {res}");
        }
    }

    #[test]
    fn density_is_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rho = random_density(4, &mut rng);
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!((&rho - rho.adjoint()).norm() < 1e-12);
    }
}

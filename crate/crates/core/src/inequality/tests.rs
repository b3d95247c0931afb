use super::*;
use crate::process::{correlations, reduced_process, CorrelationTensor};
use crate::tensor::{haar_unitary, random_density, C64, CMat};
use crate::zoo;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn uniform_psi() -> CMat {
    CMat::from_element(8, 8, C64::new(1.0 / 8.0, 0.0))
}

fn reduced_w_psi() -> crate::process::ProcessMatrix {
    let wr = zoo::bw_reverse().unwrap();
    reduced_process(&wr, &uniform_psi()).unwrap()
}

#[test]
fn paper_strategy_is_well_formed() {
    let s = paper_strategy();
    let parties = vec![
        crate::process::PartySpec::qubit("A"),
        crate::process::PartySpec::qubit("B"),
        crate::process::PartySpec::qubit("C"),
    ];
    s.check(&parties, 1e-9).unwrap();

    // M_{1|0} = 0 exactly
    assert!(s.instruments[0][0].elements[1].norm() == 0.0);
    // the two published coefficients appear verbatim
    let m01 = &s.instruments[0][1].elements[0];
    assert_eq!(m01[(2, 0)].re, -0.97926 / 4.0);
    assert_eq!(m01[(2, 0)].im, -0.20258 / 4.0);
    // M_{0|0} has nonnegative eigenvalues
    let m00 = &s.instruments[0][0].elements[0];
    let (vals, _) = crate::tensor::linalg::hermitian_eigen(m00);
    assert!(vals.iter().all(|&v| v > -1e-12));
}

#[test]
fn i1_uniform_and_deterministic_anchors() {
    // uniform p ≡ 1/8 → I₁ = 3·(1/4) − 1/8 = 5/8
    let uniform = CorrelationTensor::from_probabilities(
        vec![2, 2, 2],
        vec![2, 2, 2],
        vec![0.125; 64],
    )
    .unwrap();
    assert!((eval_i1(&uniform).unwrap() - 0.625).abs() < 1e-15);

    // deterministic all-zero outcomes → I₁ = 0
    let mut probs = vec![0.0; 64];
    for x in 0..8 {
        probs[x * 8] = 1.0;
    }
    let det = CorrelationTensor::from_probabilities(vec![2, 2, 2], vec![2, 2, 2], probs).unwrap();
    assert_eq!(eval_i1(&det).unwrap(), 0.0);

    // arity mismatch is an error
    let two_party =
        CorrelationTensor::from_probabilities(vec![2, 2], vec![2, 2], vec![0.25; 16]).unwrap();
    assert!(eval_i1(&two_party).is_err());
}

#[test]
fn paper_strategy_reproduces_quarter_violation() {
    let w_psi = reduced_w_psi();
    let rho = CMat::identity(1, 1);
    let t = correlations(&w_psi, &paper_strategy(), &rho).unwrap();
    assert!(t.worst_normalization_residual < 1e-9);
    assert!(t.all_nonnegative(1e-10));
    let i1 = eval_i1(&t).unwrap();
    assert!(
        (i1 + 0.25).abs() < 0.005,
        "I₁ = {i1}, expected ≈ −1/4"
    );
}

#[test]
fn seesaw_from_paper_strategy_never_degrades() {
    let w_psi = reduced_w_psi();
    let config = SeesawConfig {
        max_sweeps: 3,
        ..Default::default()
    };
    let run = seesaw_refine(&w_psi, &paper_strategy(), &config).unwrap();
    assert!(run.value <= -0.249, "value {} degraded", run.value);
    for pair in run.trace.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-9, "trace not monotone: {:?}", run.trace);
    }
}

#[test]
fn seesaw_subproblem_certificate() {
    // the affine model of the subproblem must agree with the exact value
    let w_psi = reduced_w_psi();
    let strategy = paper_strategy();
    let rho = CMat::identity(1, 1);
    let exact = eval_i1(&correlations(&w_psi, &strategy, &rho).unwrap()).unwrap();
    for k in 0..3 {
        let coeffs = super::seesaw::affine_coefficients(&w_psi, &strategy, k).unwrap();
        let mut model = 0.0;
        #[allow(clippy::needless_range_loop)]
        for x in 0..2 {
            for a in 0..2 {
                let m = &strategy.instruments[k][x].elements[a];
                model += coeffs[x][a]
                    .iter()
                    .zip(m.iter())
                    .map(|(c, e)| (c * e).re)
                    .sum::<f64>();
            }
        }
        assert!(
            (model - exact).abs() < 1e-6,
            "party {k}: affine model {model} vs exact {exact}"
        );
    }
}

#[test]
fn seesaw_random_restarts_find_violations() {
    let w_psi = reduced_w_psi();
    let config = SeesawConfig {
        restarts: 4,
        max_sweeps: 30,
        seed: 0,
        ..Default::default()
    };
    let outcome = seesaw_optimize(&w_psi, &config).unwrap();
    assert_eq!(outcome.restart_values.len(), 4);
    assert!(
        outcome.best.value <= -0.24,
        "no restart found the violation: {:?}",
        outcome.restart_values
    );
    for pair in outcome.best.trace.windows(2) {
        assert!(pair[1] <= pair[0] + 1e-9);
    }
    // constraints hold to 1e-8 on the returned strategy
    outcome
        .best
        .strategy
        .check(w_psi.parties(), 1e-8)
        .unwrap();
}

#[test]
fn causal_chains_respect_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(90);
    for _ in 0..3 {
        let links: Vec<CMat> = (0..4).map(|_| haar_unitary(4, &mut rng)).collect();
        let w = zoo::causal_chain(&links, 2, 2).unwrap().to_process_matrix();
        for _ in 0..5 {
            let strategy = random_strategy(3, 2, &mut rng);
            let rho = random_density(4, &mut rng);
            let t = correlations(&w, &strategy, &rho).unwrap();
            let i1 = eval_i1(&t).unwrap();
            assert!(i1 >= -1e-9, "causal bound violated: {i1}");
        }
    }
}

#[test]
fn random_strategies_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(91);
    let parties = vec![
        crate::process::PartySpec::qubit("A"),
        crate::process::PartySpec::qubit("B"),
        crate::process::PartySpec::qubit("C"),
    ];
    for _ in 0..5 {
        random_strategy(3, 2, &mut rng).check(&parties, 1e-9).unwrap();
    }
}


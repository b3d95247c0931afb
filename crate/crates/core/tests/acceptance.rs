//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! with the governing tolerance. Run with `cargo test --test acceptance`
//! (add `-- --nocapture` to see the lines as they print).

use causal_frames::frames::{
    check_consistency, extract_frame, gauge_match_residual, independence_probe, linearity_probe,
    marcus_extract, oreshkov_decompose, time_reverse, FrameGenerator,
};
use causal_frames::gravity::{
    causal_order, find_switch_point, light_travel_time, light_travel_time_quadrature,
    metric_components, worldline_event, Branch, CausalRelation, Party, SchwarzschildParams,
};
use causal_frames::inequality::{
    eval_i1, paper_strategy, random_strategy, seesaw_optimize, seesaw_refine, SeesawConfig,
};
use causal_frames::process::{
    canonical_layout, correlations, induced_map, reconstruct_process, reduced_process,
    PartySpec, ProcessMatrix, ProcessVector,
};
use causal_frames::tensor::{
    double_ket, haar_unitary, random_density, random_matrix, unket, C64, CMat, LabeledOperator,
    LabeledVector, SpaceLayout,
};
use causal_frames::zoo;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn report(criterion: u32, description: &str, pass: bool) {
    println!(
        "criterion {criterion:2}: {} — {description}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {description}");
}

fn uniform_psi() -> CMat {
    CMat::from_element(8, 8, C64::new(1.0 / 8.0, 0.0))
}

fn reduced_w_psi() -> ProcessMatrix {
    let wr = zoo::bw_reverse().unwrap();
    reduced_process(&wr, &uniform_psi()).unwrap()
}

#[test]
fn criterion_01_choi_calculus() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let tol = 1e-10;
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let d = rng.random_range(1..=4usize);
        let in_l = SpaceLayout::of(&[("i", d)]);
        let out_l = SpaceLayout::of(&[("o", d)]);
        let m = LabeledOperator::new(out_l.clone(), in_l.clone(), random_matrix(d, d, &mut rng))
            .unwrap();
        let n = LabeledOperator::new(out_l.clone(), in_l.clone(), random_matrix(d, d, &mut rng))
            .unwrap();

        // ⟨⟨M|N⟩⟩ = tr(M†N)
        let lhs = double_ket(&m).unwrap().inner(&double_ket(&n).unwrap()).unwrap();
        let rhs = (m.entries().adjoint() * n.entries()).trace();
        worst = worst.max((lhs - rhs).norm());

        // |K⟩⟩ᵀ = ⟨⟨K*| elementwise
        let k_t = double_ket(&m).unwrap();
        let k_conj_bra = double_ket(&m.conjugate()).unwrap().conjugate();
        worst = worst.max(k_t.sub(&k_conj_bra).unwrap().norm());

        // inversion roundtrip
        let v = double_ket(&n).unwrap();
        let back = unket(&v, &["i"]).unwrap();
        worst = worst.max((back.entries() - n.entries()).norm());

        // product of three maps in Choi form
        let v1 = haar_unitary(d, &mut rng);
        let v2 = haar_unitary(d, &mut rng);
        let v3 = haar_unitary(d, &mut rng);
        let v1_op = LabeledOperator::new(
            SpaceLayout::of(&[("a", d)]),
            SpaceLayout::of(&[("p", d)]),
            v1.clone(),
        )
        .unwrap();
        let v3_op = LabeledOperator::new(
            SpaceLayout::of(&[("f", d)]),
            SpaceLayout::of(&[("b", d)]),
            v3.clone(),
        )
        .unwrap();
        let big = double_ket(&v1_op)
            .unwrap()
            .kron(&double_ket(&v3_op).unwrap())
            .unwrap();
        let v2_conj = LabeledOperator::new(
            SpaceLayout::of(&[("b", d)]),
            SpaceLayout::of(&[("a", d)]),
            v2.map(|z| z.conj()),
        )
        .unwrap();
        let contracted = big
            .contract_bra(&["a", "b"], &double_ket(&v2_conj).unwrap())
            .unwrap();
        let prod = LabeledOperator::new(
            SpaceLayout::of(&[("f", d)]),
            SpaceLayout::of(&[("p", d)]),
            &v3 * &v2 * &v1,
        )
        .unwrap();
        let expect = double_ket(&prod).unwrap();
        worst = worst.max(
            contracted
                .permute_factors(&["p", "f"])
                .unwrap()
                .sub(&expect)
                .unwrap()
                .norm(),
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        &format!("Choi identities over 200 instances: worst {worst:.2e} (tol {tol:.0e}), {elapsed:.2}s (< 5s)"),
        worst < tol && elapsed < 5.0,
    );
}

#[test]
fn criterion_02_quantum_switch() {
    let (w, frame_a, frame_b) = zoo::quantum_switch().unwrap();
    let valid = w.validate().unwrap().verdict;
    let pure = w.is_pure().unwrap().pure;

    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let ops = [haar_unitary(2, &mut rng), haar_unitary(2, &mut rng)];
        let g = induced_map(&w, &ops).unwrap();
        worst = worst.max((g.entries() - frame_a.evaluate(&ops)).norm());
        worst = worst.max((g.entries() - frame_b.evaluate(&ops)).norm());
    }

    let gens = [FrameGenerator::new(&w, "A"), FrameGenerator::new(&w, "B")];
    let consistency = check_consistency(&gens, 5, 102).unwrap();

    report(
        2,
        &format!(
            "switch: valid {valid}, pure {pure}, circuit agreement {worst:.2e} (tol 1e-9), frames consistent {} ({:.2e})",
            consistency.consistent, consistency.max_residual
        ),
        valid && pure && worst < 1e-9 && consistency.consistent,
    );
}

#[test]
fn criterion_03_marcus_extraction() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 0.0f64;
    for (d_a, d_e) in [(2usize, 1usize), (2, 2), (2, 4), (3, 1), (3, 2), (3, 4)] {
        let d = d_a * d_e;
        let a = haar_unitary(d, &mut rng);
        let b = haar_unitary(d, &mut rng);
        let id_e = CMat::identity(d_e, d_e);
        let f = |u: &CMat| -> CMat { &a * u.kronecker(&id_e) * &b };
        let deco = marcus_extract(f, d_a, d_e).unwrap();
        assert!(!deco.transposed);
        for _ in 0..50 {
            let u = haar_unitary(d_a, &mut rng);
            worst = worst.max((f(&u) - deco.reconstruct(&u)).norm());
        }

        // dressed transpose branch must be flagged
        let ft = |u: &CMat| -> CMat { &a * u.transpose().kronecker(&id_e) * &b };
        let deco_t = marcus_extract(ft, d_a, d_e).unwrap();
        assert!(deco_t.transposed, "transpose not flagged at d_a={d_a} d_e={d_e}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        3,
        &format!("marcus recovery worst {worst:.2e} (tol 1e-8), transposes flagged, {elapsed:.2}s (< 30s)"),
        worst < 1e-8 && elapsed < 30.0,
    );
}

#[test]
fn criterion_04_bw_frame_structure() {
    // the exhibited frame of |w⟩: past jointly linear in (U_B, U_C), future
    // varying; mirrored for |w_r⟩. The closed-form halves are verified as
    // genuine frames and gauge-matched against marcus extraction.
    let w = zoo::bw_process().unwrap();
    let wr = zoo::bw_reverse().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let id4 = CMat::identity(4, 4);
    let mut frame_residual = 0.0f64;
    for _ in 0..10 {
        let ops: Vec<CMat> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let others = [ops[1].clone(), ops[2].clone()];
        let g = induced_map(&w, &ops).unwrap();
        let prod = zoo::swiss_frame_future(&others)
            * ops[0].kronecker(&id4)
            * zoo::swiss_frame_past(&others);
        frame_residual = frame_residual.max((g.entries() - &prod).norm());
        let gr = induced_map(&wr, &ops).unwrap();
        let prod_r = zoo::rev_swiss_frame_future(&others)
            * ops[0].kronecker(&id4)
            * zoo::rev_swiss_frame_past(&others);
        frame_residual = frame_residual.max((gr.entries() - &prod_r).norm());
    }

    let lin_past = linearity_probe(|a: &[CMat]| zoo::swiss_frame_past(a), &[2, 2], 10, 104);
    let fut_varies = independence_probe(|a: &[CMat]| zoo::swiss_frame_future(a), &[2, 2], 10, 105);
    let lin_fut_r =
        linearity_probe(|a: &[CMat]| zoo::rev_swiss_frame_future(a), &[2, 2], 10, 106);
    let past_varies_r =
        independence_probe(|a: &[CMat]| zoo::rev_swiss_frame_past(a), &[2, 2], 10, 107);

    let mut gauge = 0.0f64;
    for _ in 0..3 {
        let others: Vec<CMat> = (0..2).map(|_| haar_unitary(2, &mut rng)).collect();
        let frame = extract_frame(&w, "A", &others).unwrap();
        gauge = gauge.max(gauge_match_residual(
            frame.pi_op.entries(),
            &zoo::swiss_frame_past(&others),
            2,
            4,
        ));
    }

    report(
        4,
        &format!(
            "bw frames: halves are frames ({frame_residual:.2e}), past linear ({lin_past:.2e} < 1e-10) while future varies ({fut_varies:.2e} > 1e-6); reversed mirrored ({lin_fut_r:.2e}, {past_varies_r:.2e}); extraction gauge-matches ({gauge:.2e})"
        ),
        frame_residual < 1e-9
            && lin_past < 1e-10
            && fut_varies > 1e-6
            && lin_fut_r < 1e-10
            && past_varies_r > 1e-6
            && gauge < 1e-7,
    );
}

#[test]
fn criterion_05_time_reversal() {
    let w = zoo::bw_process().unwrap();
    let wr = zoo::bw_reverse().unwrap();
    let reversed = time_reverse(&w).unwrap();
    let vector_residual = reversed
        .vector()
        .phase_aligned_distance(wr.vector())
        .unwrap();
    let back = time_reverse(&reversed).unwrap();
    let involution_exact = back.vector().entries() == w.vector().entries();

    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut sandwich = 0.0f64;
    for _ in 0..20 {
        let a = haar_unitary(2, &mut rng);
        let b = haar_unitary(2, &mut rng);
        let parties = vec![PartySpec::qubit("A")];
        let single =
            reconstruct_process(|ops: &[CMat]| &a * &ops[0] * &b, &parties, 2).unwrap();
        let rev = time_reverse(&single).unwrap();
        let u = haar_unitary(2, &mut rng);
        let gr = induced_map(&rev, std::slice::from_ref(&u)).unwrap();
        let expect = b.adjoint() * &u * a.adjoint();
        sandwich = sandwich.max((gr.entries() - expect).norm());
    }

    report(
        5,
        &format!(
            "time reversal: |w_r⟩ residual {vector_residual:.2e} (tol 1e-10), involution exact {involution_exact}, AUB ↦ B†UA† worst {sandwich:.2e}"
        ),
        vector_residual < 1e-10 && involution_exact && sandwich < 1e-9,
    );
}

#[test]
fn criterion_06_inequality_reproduction() {
    let start = Instant::now();
    let w_psi = reduced_w_psi();
    let rho = CMat::identity(1, 1);
    let t = correlations(&w_psi, &paper_strategy(), &rho).unwrap();
    let i1 = eval_i1(&t).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    report(
        6,
        &format!("I1 with the published strategy: {i1:.6} (−0.25 ± 0.005), {elapsed:.2}s (< 10s)"),
        (i1 + 0.25).abs() < 0.005 && elapsed < 10.0,
    );
}

#[test]
fn criterion_07_seesaw() {
    let w_psi = reduced_w_psi();

    // never degrade the published feasible point
    let config_refine = SeesawConfig {
        max_sweeps: 3,
        ..Default::default()
    };
    let refine = seesaw_refine(&w_psi, &paper_strategy(), &config_refine).unwrap();
    let never_exceeds = refine.trace.iter().all(|&v| v <= -0.249);

    let config = SeesawConfig {
        restarts: 20,
        max_sweeps: 40,
        seed: 0,
        ..Default::default()
    };
    let outcome = seesaw_optimize(&w_psi, &config).unwrap();
    let monotone = outcome
        .best
        .trace
        .windows(2)
        .all(|p| p[1] <= p[0] + 1e-9);

    report(
        7,
        &format!(
            "seesaw: best of 20 restarts {:.6} (≤ −0.24), trace monotone {monotone}, paper-init floor holds {never_exceeds} (≤ −0.249)",
            outcome.best.value
        ),
        outcome.best.value <= -0.24 && monotone && never_exceeds,
    );
}

#[test]
fn criterion_08_ctc_contraction() {
    let wr = zoo::bw_reverse().unwrap();
    let circuit = zoo::rev_swiss_ctc();
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut worst = 0.0f64;
    for _ in 0..30 {
        let ops: Vec<CMat> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let k = zoo::ctc_simulate(&circuit, &ops).unwrap();
        let g = induced_map(&wr, &ops).unwrap();
        worst = worst.max((k.entries() - g.entries()).norm());
    }
    report(
        8,
        &format!("post-selected CTC contraction matches the reverse process: worst {worst:.2e} (tol 1e-9)"),
        worst < 1e-9,
    );
}

#[test]
fn criterion_09_oreshkov_reassembly() {
    let (w_switch, _, _) = zoo::quantum_switch().unwrap();
    let wr = zoo::bw_reverse().unwrap();
    let mut worst = 0.0f64;
    for (w, party) in [(&w_switch, "A"), (&wr, "A")] {
        let deco = oreshkov_decompose(w, party).unwrap();
        let back = deco.reassemble().unwrap();
        worst = worst.max(back.vector().phase_aligned_distance(w.vector()).unwrap());
    }
    report(
        9,
        &format!("time-delocalised (S,T) reassembly residual {worst:.2e} (tol 1e-8)"),
        worst < 1e-8,
    );
}

#[test]
fn criterion_10_validity_discrimination() {
    // the party self-loop |U⟩⟩⟨⟨U| fails with a witness
    let parties = vec![PartySpec::qubit("A")];
    let layout = canonical_layout(&parties, 2, 2);
    let mut entries = LabeledVector::zeros(layout.clone()).entries().clone();
    for p in 0..2 {
        for i in 0..2 {
            entries[p * 8 + p * 4 + i * 2 + i] = C64::new(1.0, 0.0);
        }
    }
    let v = LabeledVector::new(layout, entries).unwrap();
    let self_loop = ProcessVector::new(parties, 2, 2, v).unwrap();
    let loop_report = self_loop.validate().unwrap();
    let loop_fails = !loop_report.verdict && loop_report.witness.is_some();

    // every zoo process passes
    let mut rng = ChaCha8Rng::seed_from_u64(110);
    let links: Vec<CMat> = (0..3).map(|_| haar_unitary(4, &mut rng)).collect();
    let zoo_pass = [
        zoo::quantum_switch().unwrap().0,
        zoo::bw_process().unwrap(),
        zoo::bw_reverse().unwrap(),
        zoo::causal_chain(&links, 2, 2).unwrap(),
    ]
    .iter()
    .all(|w| w.validate().unwrap().verdict);

    // an equal mixture of two distinct pure causally ordered processes is
    // valid but fails the purity rank test
    let chain = |rng: &mut ChaCha8Rng| {
        let links: Vec<CMat> = (0..3).map(|_| haar_unitary(2, rng)).collect();
        zoo::causal_chain(&links, 2, 1).unwrap()
    };
    let w1 = chain(&mut rng).to_process_matrix();
    let w2 = chain(&mut rng).to_process_matrix();
    let half = C64::new(0.5, 0.0);
    let mixture = ProcessMatrix::new(
        w1.parties().to_vec(),
        2,
        2,
        w1.matrix().scale(half).add(&w2.matrix().scale(half)).unwrap(),
    )
    .unwrap();
    let mix_valid = mixture.validate().unwrap().verdict;
    let mix_purity = mixture.is_pure().unwrap();

    report(
        10,
        &format!(
            "self-loop fails with witness {loop_fails}; all zoo processes pass {zoo_pass}; rank-2 mixture valid {mix_valid} but impure (λ₂ = {:.3})",
            mix_purity.second_eigenvalue
        ),
        loop_fails && zoo_pass && mix_valid && !mix_purity.pure,
    );
}

#[test]
fn criterion_11_gravity() {
    // flat limits at negligible mass
    let tiny = SchwarzschildParams::new(1e-30, 10.0, 5.0).unwrap();
    let c = tiny.c;
    let mut flat_ok = true;
    for branch in [Branch::One, Branch::Two] {
        for party in [Party::A, Party::B] {
            let e = worldline_event(party, 3.0, branch, &tiny).unwrap();
            flat_ok &= (e.t - 3.0).abs() / 3.0 < 1e-10;
        }
        let (g_tt, g_zz) = match branch {
            Branch::One => metric_components(branch, 2.0, &tiny).unwrap(),
            Branch::Two => metric_components(branch, 2.0 + 25.0, &tiny).unwrap(),
        };
        flat_ok &= (g_tt + c * c).abs() / (c * c) < 1e-10 && (g_zz - 1.0).abs() < 1e-10;
    }
    let dt = light_travel_time(0.0, 5.0, Branch::One, &tiny).unwrap();
    flat_ok &= (dt - 5.0 / c).abs() / (5.0 / c) < 1e-10;

    // closed form vs quadrature
    let mut rng = ChaCha8Rng::seed_from_u64(111);
    let mut quad_worst = 0.0f64;
    for _ in 0..6 {
        let mass = 10f64.powf(rng.random_range(20.0..30.0));
        let rs = 2.0 * causal_frames::gravity::NEWTON_G * mass / (c * c);
        let radius = 10f64.powf(rng.random_range(0.5..2.0)) * rs;
        let height = radius * rng.random_range(0.01..0.5);
        let p = SchwarzschildParams::new(mass, radius, height).unwrap();
        let closed = light_travel_time(0.0, height, Branch::One, &p).unwrap();
        let quad = light_travel_time_quadrature(0.0, height, Branch::One, &p).unwrap();
        quad_worst = quad_worst.max((closed - quad).abs() / closed.abs());
    }

    // the parameter search finds and persists an order flip
    let point = find_switch_point(6.4e6, 1.0).unwrap();
    let orders = causal_order(point.tau_star, &point.params).unwrap();
    let flip = orders == (CausalRelation::BBeforeA, CausalRelation::ABeforeB);
    // frozen regression fixture of the deterministic search
    let fixture = point.params.mass == 1e28 && (point.tau_star - 29340.608102315902).abs() < 1e-6;

    report(
        11,
        &format!(
            "gravity: flat limits {flat_ok}, closed-vs-quadrature {quad_worst:.2e} (tol 1e-12), order flip found {flip} at M = {:.1e} kg (fixture {fixture})",
            point.params.mass
        ),
        flat_ok && quad_worst < 1e-12 && flip && fixture,
    );
}

#[test]
fn criterion_12_causal_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(112);
    let mut min_i1 = f64::INFINITY;
    for _ in 0..10 {
        let links: Vec<CMat> = (0..4).map(|_| haar_unitary(4, &mut rng)).collect();
        let w = zoo::causal_chain(&links, 2, 2).unwrap().to_process_matrix();
        for _ in 0..5 {
            let strategy = random_strategy(3, 2, &mut rng);
            let rho = random_density(4, &mut rng);
            let t = correlations(&w, &strategy, &rho).unwrap();
            min_i1 = min_i1.min(eval_i1(&t).unwrap());
        }
    }
    report(
        12,
        &format!("causal bound: min I1 over 50 strategy/process draws = {min_i1:.3e} (≥ −1e-9)"),
        min_i1 >= -1e-9,
    );
}

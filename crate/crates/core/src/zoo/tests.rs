use super::gates::{pauli_x, pauli_z};
use super::*;
use crate::process::{induced_map, reduced_process, Instrument, StrategySpec};
use crate::tensor::{haar_unitary, C64, CMat, LabeledOperator, LabeledVector, SpaceLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cm(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[test]
fn switch_identity_and_xz_cases() {
    let id = CMat::identity(2, 2);
    assert!((switch_g(&id, &id) - CMat::identity(4, 4)).norm() < 1e-15);

    // U_A = X, U_B = Z: blocks ZX and XZ differ by a sign
    let g = switch_g(&pauli_x(), &pauli_z());
    let zx = pauli_z() * pauli_x();
    let xz = pauli_x() * pauli_z();
    for i in 0..2 {
        for j in 0..2 {
            assert!((g[(i, j)] - zx[(i, j)]).norm() < 1e-15);
            assert!((g[(2 + i, 2 + j)] - xz[(i, j)]).norm() < 1e-15);
            assert!((zx[(i, j)] + xz[(i, j)]).norm() < 1e-15);
        }
    }
}

#[test]
fn switch_circuits_agree_with_induced_map() {
    let (w, frame_a, frame_b) = quantum_switch().unwrap();
    assert!(w.validate().unwrap().verdict);
    assert!(w.is_pure().unwrap().pure);

    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for _ in 0..50 {
        let u_a = haar_unitary(2, &mut rng);
        let u_b = haar_unitary(2, &mut rng);
        let ops = [u_a.clone(), u_b.clone()];
        let g = induced_map(&w, &ops).unwrap();
        let direct = switch_g(&u_a, &u_b);
        let ca = frame_a.evaluate(&ops);
        let cb = frame_b.evaluate(&ops);
        assert!((g.entries() - &direct).norm() < 1e-9);
        assert!((&ca - &direct).norm() < 1e-12);
        assert!((&cb - &direct).norm() < 1e-12);
    }
}

#[test]
fn chain_trivial_memory_composes() {
    let id = CMat::identity(2, 2);
    let w = causal_chain(&[id.clone(), id.clone(), id.clone()], 2, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let u_a = haar_unitary(2, &mut rng);
    let u_b = haar_unitary(2, &mut rng);
    let g = induced_map(&w, &[u_a.clone(), u_b.clone()]).unwrap();
    assert!((g.entries() - (&u_b * &u_a)).norm() < 1e-10);
}

#[test]
fn chain_random_links_validate_and_pure() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let links: Vec<CMat> = (0..3).map(|_| haar_unitary(4, &mut rng)).collect();
    let w = causal_chain(&links, 2, 2).unwrap();
    assert!(w.validate().unwrap().verdict);
    assert!(w.is_pure().unwrap().pure);
}

#[test]
fn f_bw_truth_table_anchors() {
    assert_eq!(f_bw(0, 0, 0), (0, 0, 0));
    assert_eq!(f_bw(0, 0, 1), (1, 0, 0));
    assert_eq!(f_bw(1, 0, 0), (0, 1, 0));
    assert_eq!(f_bw(0, 1, 0), (0, 0, 1));
    assert_eq!(f_bw(1, 1, 1), (0, 0, 0));
    // x ↦ x⊕f(x) is a bijection
    let mut seen = [false; 8];
    for x in 0..8 {
        seen[x ^ f_bw_packed(x)] = true;
    }
    assert!(seen.iter().all(|&s| s));
}

#[test]
fn bw_processes_validate_and_are_pure() {
    let w = bw_process().unwrap();
    let wr = bw_reverse().unwrap();
    for v in [&w, &wr] {
        assert!(v.validate().unwrap().verdict);
        let purity = v.is_pure().unwrap();
        assert!(purity.pure);
        assert!(purity.unitarity_residual < 1e-10);
    }
}

#[test]
fn bw_closed_forms_match_induced_maps() {
    let w = bw_process().unwrap();
    let wr = bw_reverse().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..10 {
        let ops: Vec<CMat> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let g = induced_map(&w, &ops).unwrap();
        let gr = induced_map(&wr, &ops).unwrap();
        assert!((g.entries() - g_bw(&ops)).norm() < 1e-10);
        assert!((gr.entries() - g_bw_reverse(&ops)).norm() < 1e-10);
        assert!(g.unitarity_residual() < 1e-9);
        assert!(gr.unitarity_residual() < 1e-9);
    }
}

#[test]
fn bw_reverse_basis_state_identities() {
    // G_r(U_A,U_B,U_C)|iii⟩ = (U_A⊗U_B⊗U_C)|iii⟩, and the three corrected
    // families carry a Pauli-X on exactly one slot.
    let mut rng = ChaCha8Rng::seed_from_u64(54);
    let ops: Vec<CMat> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
    let gr = g_bw_reverse(&ops);
    let u = ops[0].kronecker(&ops[1]).kronecker(&ops[2]);
    let x = pauli_x();
    let id = CMat::identity(2, 2);
    let corrections: [CMat; 8] = std::array::from_fn(|xin| {
        let f = f_bw_packed(xin);
        let xa = if f & 4 != 0 { x.clone() } else { id.clone() };
        let xb = if f & 2 != 0 { x.clone() } else { id.clone() };
        let xc = if f & 1 != 0 { x.clone() } else { id.clone() };
        xa.kronecker(&xb).kronecker(&xc)
    });
    for xin in 0..8usize {
        let mut col = CMat::zeros(8, 1);
        for y in 0..8 {
            col[(y, 0)] = gr[(y, xin)];
        }
        let mut base = CMat::zeros(8, 1);
        for y in 0..8 {
            base[(y, 0)] = u[(y, xin)];
        }
        let expect = &corrections[xin] * base;
        assert!(
            (col - expect).norm() < 1e-12,
            "column {xin}: G_r|x⟩ must be X^f(x) (⊗U)|x⟩"
        );
    }
}

#[test]
fn bw_circuits_match_induced_maps() {
    let w = bw_process().unwrap();
    let wr = bw_reverse().unwrap();
    let swiss = circuit_swiss();
    let rev = circuit_rev_swiss();
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    for _ in 0..30 {
        let ops: Vec<CMat> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let g = induced_map(&w, &ops).unwrap();
        let gr = induced_map(&wr, &ops).unwrap();
        assert!(
            (g.entries() - swiss.evaluate(&ops)).norm() < 1e-9,
            "frame circuit differs from induced map of |w⟩"
        );
        assert!(
            (gr.entries() - rev.evaluate(&ops)).norm() < 1e-9,
            "frame circuit differs from induced map of |w_r⟩"
        );
    }
}

#[test]
fn bw_classical_fixed_point_dynamics() {
    // computational-basis deterministic instruments reproduce the boolean
    // dynamics of f over all 8 classical inputs
    let w = bw_process().unwrap();
    let uniform = CMat::identity(8, 8).map(|z| z / cm(8.0));

    // classical identity-instrument: measure in the computational basis and
    // forward the observed state
    let classical: Vec<CMat> = (0..2)
        .map(|a| {
            let mut m = CMat::zeros(4, 4);
            m[(a * 2 + a, a * 2 + a)] = cm(1.0);
            m
        })
        .collect();
    let strategy = StrategySpec::new(
        (0..3)
            .map(|k| {
                vec![Instrument::new(
                    ["A", "B", "C"][k],
                    0,
                    classical.clone(),
                )]
            })
            .collect(),
    );
    let t = crate::process::correlations(&w.to_process_matrix(), &strategy, &uniform).unwrap();
    assert!(t.worst_normalization_residual < 1e-9);

    // p(a | no settings) over the 8 outcomes: the classical process pipes
    // each party's input bit through; outcome distribution must be the
    // pushforward of the uniform y over the fixed-point structure.
    // Classical w: input to parties is y⊕f(x) where x is the forwarded
    // output; deterministic forwarding means x = a (measured), so outcome a
    // occurs iff a = y⊕f(a) for some y — every a, uniformly.
    let mut total = 0.0;
    for a in 0..8usize {
        let outcome = [(a >> 2) & 1, (a >> 1) & 1, a & 1];
        let p = t.prob(&outcome, &[0, 0, 0]);
        assert!(p >= -1e-12);
        total += p;
    }
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn ctc_single_loop_is_trace() {
    // single loop around an identity wire (d = 2) → scalar 2
    let circuit = LoopCircuit::new(
        vec!["identity wire looped".into()],
        vec![("l".into(), "l".into())],
        |_ops| {
            Ok(LabeledOperator::on(
                SpaceLayout::of(&[("l", 2)]),
                CMat::identity(2, 2),
            )?)
        },
    );
    let k = ctc_simulate(&circuit, &[]).unwrap();
    assert_eq!(k.out_dim(), 1);
    assert!((k.entries()[(0, 0)] - cm(2.0)).norm() < 1e-14);
}

#[test]
fn ctc_loop_through_unitary_gives_trace_on_spectators() {
    let mut rng = ChaCha8Rng::seed_from_u64(56);
    let u = haar_unitary(3, &mut rng);
    let u_for_closure = u.clone();
    let circuit = LoopCircuit::new(
        vec!["U on loop wire, identity on spectator".into()],
        vec![("l".into(), "l".into())],
        move |_ops| {
            let body = u_for_closure.kronecker(&CMat::identity(2, 2));
            Ok(LabeledOperator::on(
                SpaceLayout::of(&[("l", 3), ("s", 2)]),
                body,
            )?)
        },
    );
    let k = ctc_simulate(&circuit, &[]).unwrap();
    let expect = CMat::identity(2, 2).map(|z| z * u.trace());
    assert!((k.entries() - expect).norm() < 1e-12);
}

#[test]
fn rev_swiss_ctc_matches_reverse_process() {
    let wr = bw_reverse().unwrap();
    let circuit = rev_swiss_ctc();
    let mut rng = ChaCha8Rng::seed_from_u64(57);
    for _ in 0..30 {
        let ops: Vec<CMat> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
        let k = ctc_simulate(&circuit, &ops).unwrap();
        let gr = induced_map(&wr, &ops).unwrap();
        assert!(
            (k.entries() - gr.entries()).norm() < 1e-9,
            "CTC contraction must reproduce the induced map"
        );
    }
}

#[test]
fn rev_swiss_post_selection_probability() {
    // the contracted operator is unitary, so all-loop Bell post-selection
    // succeeds with probability (1/d²)³ = 1/64 on any pure input
    let circuit = rev_swiss_ctc();
    let mut rng = ChaCha8Rng::seed_from_u64(58);
    let ops: Vec<CMat> = (0..3).map(|_| haar_unitary(2, &mut rng)).collect();
    let mut amps = LabeledVector::zeros(SpaceLayout::of(&[("P_A", 2), ("P_B", 2), ("P_C", 2)]));
    let mut entries = amps.entries().clone();
    entries[3] = cm(1.0);
    amps = LabeledVector::new(amps.layout().clone(), entries).unwrap();
    let p = post_selection_probability(&circuit, &ops, &amps).unwrap();
    assert!((p - 1.0 / 64.0).abs() < 1e-12);
}

#[test]
fn reduced_bw_reverse_uniform_matches_display() {
    // W_ψ = (1/8) Σ_{u,v,x} |u⟩⟨v|^I ⊗ |x+f(u)⟩⟨x+f(v)|^O for uniform ψ
    let wr = bw_reverse().unwrap();
    let uniform = CMat::from_element(8, 8, cm(1.0 / 8.0));
    let red = reduced_process(&wr, &uniform).unwrap();

    // expected: party factors ordered (A_I, A_O, B_I, B_O, C_I, C_O); the
    // display orders (I, O) = (A_I B_I C_I, A_O B_O C_O) — build and permute.
    let i_layout = SpaceLayout::of(&[("A_I", 2), ("B_I", 2), ("C_I", 2)]);
    let o_layout = SpaceLayout::of(&[("A_O", 2), ("B_O", 2), ("C_O", 2)]);
    let mut grouped = LabeledOperator::zeros(
        i_layout.concat(&o_layout).unwrap(),
        i_layout.concat(&o_layout).unwrap(),
    );
    let mut entries = grouped.entries().clone();
    for u in 0..8usize {
        for v in 0..8usize {
            for x in 0..8usize {
                let row = u * 8 + (x ^ f_bw_packed(u));
                let col = v * 8 + (x ^ f_bw_packed(v));
                entries[(row, col)] += cm(1.0 / 8.0);
            }
        }
    }
    grouped = LabeledOperator::new(
        grouped.out_layout().clone(),
        grouped.in_layout().clone(),
        entries,
    )
    .unwrap();
    let interleaved = grouped
        .permute_factors(&["A_I", "A_O", "B_I", "B_O", "C_I", "C_O"])
        .unwrap();

    // red's canonical layout has trivial P, F in front; entries must agree
    assert!(
        (red.matrix().entries() - interleaved.entries()).norm() < 1e-12,
        "reduced process must match the uniform-superposition display"
    );

    let report = red.validate().unwrap();
    assert!(report.verdict, "reduced W_ψ must be a valid 3-party process");
}

#[test]
fn reduced_bw_reverse_basis_state_is_classical() {
    // ψ = |000⟩: the reduced process is diagonal in the computational basis
    let wr = bw_reverse().unwrap();
    let mut rho = CMat::zeros(8, 8);
    rho[(0, 0)] = cm(1.0);
    let red = reduced_process(&wr, &rho).unwrap();
    for r in 0..64 {
        for c in 0..64 {
            if r != c {
                assert!(red.matrix().entries()[(r, c)].norm() < 1e-13);
            }
        }
    }
    assert!(red.validate().unwrap().verdict);
}

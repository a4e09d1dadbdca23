use proptest::prelude::*;

use ringwalk_core::dynamics::{build_line, gap_scan, propagate, AdiabaticFamily, LineVariant};
use ringwalk_core::hamspace::check_effective_equivalence;
use ringwalk_core::linalg::CMatrix;
use ringwalk_core::qcore::{
    apply_gate, circuit_unitary, gates_unitary, Amplitude, BasisLabel, Circuit, Gate, GateKind, Statevector,
};
use ringwalk_core::ring::{parse, render, Bit, DataLabel, Glyph, RingConfiguration, RingLayout};
use ringwalk_core::rules::{enumerate_trajectory, RuleTable};
use ringwalk_core::vprog::{compile, simulate_program, Cursor};

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate> {
    prop_oneof![
        (0..n).prop_map(Gate::h),
        (0..n, 1..n).prop_map(move |(c, d)| Gate::cs(c, (c + d) % n)),
    ]
}

fn circuit_strategy() -> impl Strategy<Value = Circuit> {
    (2usize..=4).prop_flat_map(|n| {
        prop::collection::vec(gate_strategy(n), 0..=6).prop_map(move |g| Circuit::new(n, g).unwrap())
    })
}

fn state_strategy(n: usize) -> impl Strategy<Value = Statevector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("non-zero", |v| {
        let amps: Vec<Amplitude> = v.into_iter().map(|(r, i)| Amplitude::new(r, i)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        (norm > 1e-3)
            .then(|| Statevector::new(amps.into_iter().map(|a| a / norm).collect(), BasisLabel::DataRegister).unwrap())
    })
}

fn column(u: &CMatrix, j: usize) -> Vec<Amplitude> {
    (0..u.dim()).map(|i| u[(i, j)]).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gates_preserve_norm(x in state_strategy(3), g in gate_strategy(3)) {
        let y = apply_gate(&x, &g).unwrap();
        prop_assert!((y.norm() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_unitaries_are_unitary(c in circuit_strategy()) {
        prop_assert!(circuit_unitary(&c).unwrap().is_unitary(1e-10));
    }

    #[test]
    fn compiled_programs_simulate_exactly(c in circuit_strategy()) {
        let prog = compile(&c).unwrap();
        prop_assert!(prog.len() <= c.program_size_bound());
        let u = circuit_unitary(&c).unwrap();
        for x in 0..1usize << c.qubits() {
            let out = simulate_program(&prog, &Statevector::basis_state(c.qubits(), x)).unwrap();
            let want = Statevector::new(column(&u, x), BasisLabel::DataRegister).unwrap();
            prop_assert!(out.distance(&want) < 1e-10);
        }
    }

    #[test]
    fn trajectories_replay_the_circuit(c in circuit_strategy()) {
        prop_assume!(!c.is_empty());
        let prog = compile(&c).unwrap();
        let traj = enumerate_trajectory(&prog).unwrap();
        let events = traj.event_circuit().unwrap();
        let a = circuit_unitary(&events).unwrap();
        let b = circuit_unitary(&c).unwrap();
        prop_assert!(a.max_abs_diff(&b) < 1e-10);

        let table = RuleTable::new(traj.layout());
        for (t, cfg) in traj.steps.iter().enumerate() {
            let f = table.forward_steps(cfg).unwrap().len();
            let b = table.backward_steps(cfg).unwrap().len();
            prop_assert_eq!(f, usize::from(t < traj.tbar()));
            prop_assert_eq!(b, usize::from(t > 0));
            prop_assert!(cfg.active_site().is_some());
            if t < traj.tbar() {
                let (next, _) = table.successor(cfg).unwrap().unwrap();
                let (back, _) = table.predecessor(&next).unwrap().unwrap();
                prop_assert_eq!(&back, cfg);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn restricted_hamiltonian_is_the_line(c in circuit_strategy()) {
        prop_assume!(!c.is_empty());
        let rep = check_effective_equivalence(&compile(&c).unwrap()).unwrap();
        prop_assert!(rep.max_deviation <= 1e-12);
    }

    #[test]
    fn gap_bound_holds(tbar in 1usize..=200) {
        let fam = AdiabaticFamily::new(tbar, 1.0, 0.1).unwrap();
        prop_assert!(gap_scan(&fam, 101).unwrap().pass);
    }

    #[test]
    fn propagation_is_unitary(tbar in 1usize..150, site in 0usize..150, t in 0.0f64..500.0) {
        let h = build_line(tbar, LineVariant::StartStop).unwrap();
        let x = Statevector::line_site(tbar + 1, site % (tbar + 1));
        let y = propagate(&h.matrix, &x, t).unwrap();
        prop_assert!((y.norm() - 1.0).abs() < 1e-10);
    }
}

fn config_strategy() -> impl Strategy<Value = RingConfiguration> {
    (2usize..7, 2usize..6, 1usize..6).prop_flat_map(|(s, d, h)| {
        let k = s + d + h;
        (
            prop::collection::vec(any::<bool>(), s + h),
            Just((0..d).collect::<Vec<usize>>()).prop_shuffle(),
            0..k,
            0usize..3,
        )
            .prop_map(move |(bits, perm, active, cur)| {
                let layout = RingLayout::new(s, d, h).unwrap();
                let mut glyphs = Vec::with_capacity(k);
                let mut program = bits.into_iter();
                for site in 0..k {
                    let bit = if (s..s + d).contains(&site) {
                        Bit::Data(DataLabel::from_index(perm[site - s]).unwrap())
                    } else {
                        Bit::from_bool(program.next().unwrap())
                    };
                    let cursor = if site == active {
                        Cursor::ACTIVE[cur]
                    } else {
                        Cursor::Empty
                    };
                    glyphs.push(Glyph::new(cursor, bit));
                }
                RingConfiguration::new(layout, glyphs).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn render_parse_roundtrip(c in config_strategy()) {
        let text = render(&c);
        prop_assert_eq!(parse(&text).unwrap(), c);
    }
}

#[test]
fn sigma_gate_matches_swap_cascade() {
    for m in 2..=8usize {
        let wires: Vec<usize> = (0..m).collect();
        let sigma = gates_unitary(m, [&Gate::new(GateKind::SigmaCascade, wires)]).unwrap();
        let swaps: Vec<Gate> = (0..m - 1).map(|i| Gate::new(GateKind::Swap, vec![i, i + 1])).collect();
        let cascade = gates_unitary(m, swaps.iter()).unwrap();
        assert!(sigma.max_abs_diff(&cascade) < 1e-12, "m = {m}");
    }
}

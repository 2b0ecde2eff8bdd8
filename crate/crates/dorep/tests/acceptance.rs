//! Acceptance suite. Each test prints one pass/fail line; run with
//! `cargo test --test acceptance -- --nocapture` to see them.

use dorep::actions::{act_space, act_space_size, Menu};
use dorep::axioms::{check_canc, check_cent, check_trans, validate_witness, AxiomWitness};
use dorep::logic::{all_atoms, Atom, Formula, Signature, TruthSet};
use dorep::models::{check_noop_identity, BasicModel, SelectionModel, WellOrderFamily};
use dorep::pipeline::{generate_fixture, roundtrip_seed, RoundtripConfig};
use dorep::preferences::{
    atom_guarded_act, generate_preferences, Partition, PreferenceRelation, SEURepresentation,
};
use dorep::rat::{rat, rat_int};
use dorep::representation::{
    build_representation, check_paired_selection, solve_state_dependent, RepError,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn report(name: &str, pass: bool) {
    println!("acceptance {name}: {}", if pass { "pass" } else { "FAIL" });
    assert!(pass, "acceptance {name} failed");
}

fn sig_p() -> Signature {
    Signature::new(["p"]).unwrap()
}

fn sig_pq() -> Signature {
    Signature::new(["p", "q"]).unwrap()
}

fn seeded_centered_family(model: &BasicModel, seed: u64) -> WellOrderFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.num_states();
    let orders = (0..n)
        .map(|w| {
            let mut rest: Vec<usize> = (0..n).filter(|s| *s != w).collect();
            rest.shuffle(&mut rng);
            let mut order = vec![w];
            order.extend(rest);
            order
        })
        .collect();
    WellOrderFamily::new(model, orders).unwrap()
}

/// Criterion: one hundred seeded centered language-based families over
/// two propositions; exhaustive centering/specificity/transitivity
/// checks and ten thousand verified pairs per seed, zero disagreements,
/// inside ten minutes.
#[test]
fn roundtrip_hundred_seeds_two_props() {
    let start = Instant::now();
    let sig = sig_pq();
    let menu = Menu::rich(&sig);
    assert_eq!(menu.len(), 11);
    assert_eq!(act_space_size(&menu).to_string(), "14641");

    let config = RoundtripConfig {
        pairs: 10_000,
        ..RoundtripConfig::default()
    };
    for seed in 1..=100u64 {
        let result = roundtrip_seed(&sig, seed, &config).unwrap();
        assert!(result.cent && result.ssc && result.trans, "axioms at seed {seed}: {result:?}");
        assert!(result.feasible, "feasibility at seed {seed}");
        assert_eq!(result.verified_pairs, 10_000, "pairs at seed {seed}");
        assert_eq!(result.disagreements, 0, "disagreements at seed {seed}");
        assert!(result.pass, "seed {seed}: {result:?}");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 600,
        "round trip took {elapsed:?}, budget is ten minutes"
    );
    report(
        &format!("roundtrip 100 seeds over two props ({elapsed:?})"),
        true,
    );
}

/// Criterion: the one-proposition case is fully exhaustive (all nine
/// tables, all thirty-six pairs, the min-choice indifference and
/// utility well-definedness checks) inside one second.
#[test]
fn one_prop_exhaustive() {
    let start = Instant::now();
    let sig = sig_p();
    let menu = Menu::rich(&sig);
    assert_eq!(act_space(&menu, 100).unwrap().count(), 9);

    let result = roundtrip_seed(&sig, 1, &RoundtripConfig::default()).unwrap();
    assert!(result.verification_exhaustive);
    assert_eq!(result.verified_pairs, 36);
    assert_eq!(result.disagreements, 0);
    assert!(result.min_choice_indifference);
    assert!(result.utility_well_defined);
    assert!(result.pass, "{result:?}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget is one second");
    report(&format!("one-prop exhaustive round trip ({elapsed:?})"), true);
}

/// Criterion: in every built representation the induced selection is
/// structurally (min_choice(W, φ), W), exhaustively over all
/// (state, member) pairs, for one and two propositions.
#[test]
fn paired_selection_structure() {
    for sig in [sig_p(), sig_pq()] {
        let menu = Menu::rich(&sig);
        for seed in 1..=10u64 {
            let fixture = generate_fixture(&sig, seed);
            let synthesis = build_representation(&fixture.pr, &menu, 1_000_000).unwrap();
            let mismatch =
                check_paired_selection(synthesis.representation.selection_model(), &synthesis.orders)
                    .unwrap();
            assert_eq!(mismatch, None, "sig {:?} seed {seed}", sig.props());
            // All 2^n × 2^n × |F| triples were scanned.
            let n = sig.atom_count();
            assert_eq!(
                synthesis.representation.selection_model().model().num_states(),
                n * n
            );
        }
    }
    report("paired selection lands on (min_choice, previous)", true);
}

/// Criterion: for every class pair (cond, payload) with cond entailing
/// a satisfiable payload over two propositions, and twenty seeded
/// centered models, the guarded action is the identity map.
#[test]
fn entailed_condition_noop_sweep() {
    let sig = sig_pq();
    // One representative formula per semantic class: disjunction of
    // atoms, with `true` standing for the full class.
    let class_formula = |atom_set: u32| -> Formula {
        if atom_set == 15 {
            return Formula::True;
        }
        (0..4)
            .filter(|i| atom_set & (1 << i) != 0)
            .map(|i| Atom(i as u16).formula(&sig))
            .reduce(Formula::or)
            .unwrap_or(Formula::False)
    };
    let menu = Menu::new(
        &sig,
        (1..=15u32).map(class_formula).collect(),
    )
    .unwrap();
    let model = BasicModel::canonical(&sig);

    let mut pairs = 0u32;
    for seed in 1..=20u64 {
        let family = seeded_centered_family(&model, seed);
        let sm = SelectionModel::induce(model.clone(), menu.clone(), family).unwrap();
        for cond_set in 0..=15u32 {
            for payload_set in 1..=15u32 {
                if cond_set & !payload_set != 0 {
                    continue; // cond does not entail payload
                }
                let cond = class_formula(cond_set);
                let payload = class_formula(payload_set);
                let moved = check_noop_identity(&sm, &cond, &payload).unwrap();
                assert_eq!(
                    moved, None,
                    "seed {seed}, cond {cond_set:#06b}, payload {payload_set:#06b}"
                );
                if seed == 1 {
                    pairs += 1;
                }
            }
        }
    }
    assert_eq!(pairs, 80); // 3^4 − 1 entailing class pairs, payload satisfiable
    report("entailed-condition actions are identity on 20 centered models", true);
}

/// Criterion, negative controls: a non-centered model fails the
/// centering check with a self-validating witness; an intransitive
/// closeness partition fails the transitivity check; a strict
/// preference cycle makes the feasibility stage emit a mechanically
/// verified certificate.
#[test]
fn negative_controls() {
    // (a) Non-centered model: rotate every order so no state is
    // closest to itself.
    let sig = sig_pq();
    let menu = Menu::rich(&sig);
    let model = BasicModel::canonical(&sig);
    let n = model.num_states();
    let family = WellOrderFamily::new(
        &model,
        (0..n).map(|w| (0..n).map(|k| (w + 1 + k) % n).collect()).collect(),
    )
    .unwrap();
    let sm = SelectionModel::induce(model, menu.clone(), family).unwrap();
    let rep = SEURepresentation::new(
        sm,
        vec![rat(1, 4); 4],
        vec![rat_int(1), rat_int(2), rat_int(5), rat_int(-3)],
    )
    .unwrap();
    let pr = generate_preferences(&rep, &menu).unwrap();
    let cent = check_cent(&pr, &menu).unwrap();
    assert!(!cent.pass);
    assert!(validate_witness(&pr, &menu, cent.witness.as_ref().unwrap()).unwrap());

    // (b) Intransitive closeness partition.
    let w = Atom(0);
    let (x, y, z) = (Atom(1), Atom(2), Atom(3));
    let tied = vec![
        atom_guarded_act(&menu, w, menu.pair_member(x, y).unwrap()),
        atom_guarded_act(&menu, w, menu.atom_member(x).unwrap()),
        atom_guarded_act(&menu, w, menu.pair_member(y, z).unwrap()),
        atom_guarded_act(&menu, w, menu.atom_member(y).unwrap()),
    ];
    let split = vec![atom_guarded_act(&menu, w, menu.pair_member(x, z).unwrap())];
    let cyclic = PreferenceRelation::Partition(Partition::new(vec![tied, split]).unwrap());
    let trans = check_trans(&cyclic, &menu).unwrap();
    assert!(!trans.pass);
    let witness = trans.witness.unwrap();
    assert!(matches!(witness, AxiomWitness::Transitivity { .. }));
    assert!(validate_witness(&cyclic, &menu, &witness).unwrap());

    // (c) Strict preference cycle on rotated tables: infeasible with a
    // valid certificate and a cancellation tuple.
    let sig1 = sig_p();
    let menu1 = Menu::rich(&sig1);
    let t = |a: u16, b: u16| dorep::actions::CompiledAct { table: vec![a, b] };
    let cyclic_partition = PreferenceRelation::Partition(
        Partition::new(vec![
            vec![t(1, 2)],
            vec![t(2, 0)],
            vec![t(0, 1)],
            vec![t(2, 1)],
            vec![t(0, 2)],
            vec![t(1, 0)],
        ])
        .unwrap(),
    );
    match solve_state_dependent(&cyclic_partition, &menu1, 1_000) {
        Err(RepError::Infeasible(report_box)) => {
            assert!(report_box.validate(&cyclic_partition, &menu1).unwrap());
            let tuple = report_box.canc_witness.as_ref().expect("small multipliers");
            assert!(validate_witness(&cyclic_partition, &menu1, tuple).unwrap());
        }
        other => panic!("expected infeasibility, got {other:?}"),
    }

    report("negative controls (centering, transitivity, feasibility)", true);
}

/// Criterion: cancellation sampling with tuple length up to three and a
/// hundred-thousand-tuple budget reports zero violations across twenty
/// seeds, with the length-one equal-table case exhaustive on a 200-act
/// sample.
#[test]
fn cancellation_sampling_twenty_seeds() {
    let sig = sig_pq();
    let menu = Menu::rich(&sig);
    for seed in 1..=20u64 {
        let fixture = generate_fixture(&sig, seed);
        let report = check_canc(&fixture.pr, &menu, 3, 100_000, seed).unwrap();
        assert!(report.pass, "seed {seed}: {:?}", report.witness);
    }
    report("cancellation sampling, 20 seeds x 100k tuples", true);
}

/// Criterion: the roundtrip command is deterministic; identical
/// invocations produce byte-identical JSON.
#[test]
fn roundtrip_output_is_byte_identical() {
    let bin = env!("CARGO_BIN_EXE_dorep");
    let run = || {
        let output = std::process::Command::new(bin)
            .args([
                "roundtrip",
                "--props",
                "p,q",
                "--seeds",
                "1..3",
                "--pairs",
                "500",
            ])
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "exit {:?}", output.status);
        output.stdout
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    assert_eq!(first, second, "outputs differ between runs");
    report("roundtrip output byte-identical across runs", true);
}

/// The verification path really is exact: perturbing one utility value
/// flips at least one verdict in the exhaustive one-prop sweep.
#[test]
fn verification_tolerance_is_zero() {
    let sig = sig_p();
    let menu = Menu::rich(&sig);
    let fixture = generate_fixture(&sig, 5);
    let synthesis = build_representation(&fixture.pr, &menu, 1_000).unwrap();
    let rep = synthesis.representation;
    let mut u = rep.u().to_vec();
    // The smallest perturbation representable here still counts.
    u[1] += rat(1, 1_000_000);
    let nudged =
        SEURepresentation::new(rep.selection_model().clone(), rep.pi().to_vec(), u).unwrap();
    let outcome = dorep::representation::verify_representation(
        &nudged,
        &fixture.pr,
        &menu,
        dorep::representation::PairSample::default(),
    )
    .unwrap();
    assert!(outcome.witness.is_some(), "a nudged utility must be caught");
    report("verification is exact (no tolerance)", true);
}

/// Orders extracted from generated preferences agree with the
/// generating family wherever utilities are injective: the quotient
/// order is recoverable from behaviour alone.
#[test]
fn extracted_orders_recover_generating_family() {
    let sig = sig_pq();
    let menu = Menu::rich(&sig);
    for seed in 1..=10u64 {
        let fixture = generate_fixture(&sig, seed);
        let orders =
            dorep::representation::extract_well_orders(&fixture.pr, &menu, true).unwrap();
        let family = fixture.rep.selection_model().family().unwrap();
        for w in all_atoms(&sig) {
            let generated: Vec<Atom> = family.order(w.0 as usize).to_vec().iter()
                .map(|s| fixture.rep.selection_model().model().state_atom(*s))
                .collect();
            assert_eq!(orders.order(w), &generated[..], "seed {seed} atom {w:?}");
        }
    }
    report("extracted well-orders match the generating family", true);
}

/// Menu richness really is required downstream: synthesis rejects a
/// menu without atom members.
#[test]
fn poor_menus_are_rejected() {
    let sig = sig_pq();
    let menu = Menu::new(&sig, vec![Formula::Prop(0), Formula::True]).unwrap();
    let act = dorep::actions::CompiledAct::constant(&menu, 0);
    let pr = PreferenceRelation::Partition(Partition::new(vec![vec![act]]).unwrap());
    match build_representation(&pr, &menu, 1_000) {
        Err(RepError::Pref(_)) | Err(RepError::Action(_)) => {}
        other => panic!("expected richness rejection, got {other:?}"),
    }
    // And truth sets confirm what richness means here.
    let missing = TruthSet::from_atoms(&sig, [Atom(0)]);
    assert!(menu
        .formulas()
        .iter()
        .all(|f| f.truth_set(&sig) != missing));
    report("non-rich menus are rejected before synthesis", true);
}

//! Constructive synthesis of an expected-utility representation.
//!
//! From a preference relation over compiled acts that passes the
//! centering, specificity, and transitivity checks, the pipeline
//!
//! 1. solves for a state-dependent utility `u*` over (atom, member)
//!    pairs whose atom-wise sums reproduce every comparison, an exact
//!    linear feasibility problem whose infeasibility certificate
//!    converts into a cancellation violation;
//! 2. extracts one well-order of atoms per atom from the closeness
//!    relation, ties broken by ascending bitmask, the conditioning atom
//!    first when centering holds;
//! 3. assembles the paired-state model (current atom, previous atom),
//!    whose induced selection lands on `(min_choice(W, φ), W)` from any
//!    state with first component `W`;
//! 4. defines a uniform probability and a state utility from `u*`, and
//!    verifies the expected-utility comparison against the input
//!    preference on sampled or exhaustive act pairs.

use crate::actions::{act_space, parse_action, ActionError, CompiledAct, Menu};
use crate::axioms::{check_cent, check_ssc, check_trans, AxiomReport, AxiomWitness};
use crate::feasibility::{
    solve, FarkasCertificate, FeasibilityOutcome, FeasibilityProblem, SparseRow,
};
use crate::logic::{all_atoms, Atom, TruthSet};
use crate::models::{BasicModel, ModelError, SelectionModel, WellOrderFamily};
use crate::preferences::{generate_preferences, PrefError, PreferenceRelation, SEURepresentation};
use crate::rat::{rat_to_string, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("axiom {} failed", .0.axiom)]
    Axiom(Box<AxiomReport>),
    #[error("no additive utility represents the preference relation")]
    Infeasible(Box<InfeasibilityReport>),
    #[error("closeness at {0} is not total: SSC does not hold")]
    NotTotal(String),
    #[error("closeness at {0} is not transitive")]
    NotTransitive(String),
    #[error("formula {0:?} is unsatisfiable")]
    Unsatisfiable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Pref(#[from] PrefError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// State-dependent utility: one exact rational per (atom, menu member).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDependentUtility {
    /// `values[atom][member]`.
    pub values: Vec<Vec<Rat>>,
}

impl StateDependentUtility {
    pub fn value(&self, w: Atom, member: usize) -> &Rat {
        &self.values[w.0 as usize][member]
    }

    /// Atom-wise sum for an act table.
    pub fn act_sum(&self, act: &CompiledAct) -> Rat {
        act.table
            .iter()
            .enumerate()
            .fold(Rat::zero(), |acc, (x, &j)| acc + &self.values[x][j as usize])
    }
}

/// One used constraint of an infeasible system, stated over acts.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CertificateItem {
    pub better: String,
    pub worse: String,
    /// Positive rational weight, reduced.
    pub multiplier: String,
    /// Whether the input relation ranks `better` strictly above `worse`
    /// (gap constraint) or indifferent to it (equality constraint).
    pub strict: bool,
}

/// A nonnegative combination of input comparisons that sums, on the
/// utility side, to the contradiction `0 ≥ total strict weight > 0`.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct InfeasibilityReport {
    pub items: Vec<CertificateItem>,
    /// A cancellation-violating tuple assembled from the certificate
    /// when clearing denominators keeps the tuple small.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canc_witness: Option<AxiomWitness>,
}

impl InfeasibilityReport {
    /// Re-establish the contradiction mechanically: every item must
    /// hold under `pr` with the stated strictness, the weighted act
    /// tables must cancel per atom and member, and strict weight must
    /// be positive.
    pub fn validate(&self, pr: &PreferenceRelation, menu: &Menu) -> Result<bool, RepError> {
        let mut net: std::collections::HashMap<(usize, u16), Rat> = std::collections::HashMap::new();
        let mut strict_weight = Rat::zero();
        for item in &self.items {
            let better = parse_action(&item.better, menu.sig())
                .map_err(|e| RepError::Precondition(e.to_string()))?
                .compile(menu)?;
            let worse = parse_action(&item.worse, menu.sig())
                .map_err(|e| RepError::Precondition(e.to_string()))?
                .compile(menu)?;
            let weight = crate::rat::rat_from_str(&item.multiplier)
                .map_err(RepError::Precondition)?;
            if weight.is_negative() {
                return Ok(false);
            }
            let verdict = pr.compare_compiled(&better, &worse);
            let holds = if item.strict {
                verdict == Ordering::Greater
            } else {
                verdict == Ordering::Equal
            };
            if !holds {
                return Ok(false);
            }
            if item.strict {
                strict_weight += &weight;
            }
            for (x, (&bj, &wj)) in better.table.iter().zip(&worse.table).enumerate() {
                *net.entry((x, bj)).or_insert_with(Rat::zero) += &weight;
                *net.entry((x, wj)).or_insert_with(Rat::zero) -= &weight;
            }
        }
        Ok(net.values().all(Rat::is_zero) && strict_weight.is_positive())
    }
}

/// Best-first indifference classes of the full act space, members in
/// table-lexicographic order within each class.
fn ordered_classes(
    pr: &PreferenceRelation,
    menu: &Menu,
    cap: u64,
) -> Result<Vec<Vec<CompiledAct>>, RepError> {
    let acts: Vec<CompiledAct> = act_space(menu, cap)?.collect();
    // Score each table once; sorting by comparator would re-sum per
    // comparison.
    let keys: Vec<Rat> = match pr {
        PreferenceRelation::Scored(oracle) => acts.iter().map(|a| oracle.score(a)).collect(),
        PreferenceRelation::Partition(_) => Vec::new(),
    };
    let mut indices: Vec<usize> = (0..acts.len()).collect();
    if keys.is_empty() {
        indices.sort_by(|&a, &b| {
            pr.compare_compiled(&acts[b], &acts[a])
                .then_with(|| acts[a].table.cmp(&acts[b].table))
        });
    } else {
        indices.sort_by(|&a, &b| {
            keys[b].cmp(&keys[a]).then_with(|| acts[a].table.cmp(&acts[b].table))
        });
    }
    let mut classes: Vec<Vec<CompiledAct>> = Vec::new();
    let mut last_key: Option<usize> = None;
    for idx in indices {
        let tied = match last_key {
            Some(prev) => {
                if keys.is_empty() {
                    pr.compare_compiled(&acts[prev], &acts[idx]) == Ordering::Equal
                } else {
                    keys[prev] == keys[idx]
                }
            }
            None => false,
        };
        let act = acts[idx].clone();
        if tied {
            classes.last_mut().unwrap().push(act);
        } else {
            classes.push(vec![act]);
        }
        last_key = Some(idx);
    }
    Ok(classes)
}

/// Solve for a state-dependent utility representing `pr` over the full
/// act space: equal sums inside each indifference class, sums dropping
/// by at least one across adjacent classes (the scale is free, so unit
/// gaps lose no generality). Chains of consecutive members suffice:
/// sums are additive and ≥ is transitive.
pub fn solve_state_dependent(
    pr: &PreferenceRelation,
    menu: &Menu,
    cap: u64,
) -> Result<StateDependentUtility, RepError> {
    let classes = ordered_classes(pr, menu, cap)?;
    let m = menu.len();
    let var = |x: usize, j: u16| x * m + j as usize;
    let diff_row = |f: &CompiledAct, g: &CompiledAct| -> SparseRow {
        let mut entries: Vec<(usize, Rat)> = Vec::new();
        for x in 0..f.table.len() {
            if f.table[x] != g.table[x] {
                entries.push((var(x, f.table[x]), Rat::one()));
                entries.push((var(x, g.table[x]), -Rat::one()));
            }
        }
        entries.sort_by_key(|(v, _)| *v);
        // Equal variables cannot repeat: f and g differ per atom.
        entries
    };

    let mut equalities: Vec<SparseRow> = Vec::new();
    let mut equality_pairs: Vec<(CompiledAct, CompiledAct)> = Vec::new();
    for class in &classes {
        for pair in class.windows(2) {
            equalities.push(diff_row(&pair[0], &pair[1]));
            equality_pairs.push((pair[0].clone(), pair[1].clone()));
        }
    }
    let mut inequalities: Vec<SparseRow> = Vec::new();
    let mut gap_pairs: Vec<(CompiledAct, CompiledAct)> = Vec::new();
    for pair in classes.windows(2) {
        inequalities.push(diff_row(&pair[0][0], &pair[1][0]));
        gap_pairs.push((pair[0][0].clone(), pair[1][0].clone()));
    }

    let problem = FeasibilityProblem {
        num_vars: menu.atom_count() * m,
        equalities,
        inequalities,
    };
    match solve(&problem) {
        FeasibilityOutcome::Feasible(v) => {
            let values = (0..menu.atom_count())
                .map(|x| (0..m).map(|j| v[x * m + j].clone()).collect())
                .collect();
            Ok(StateDependentUtility { values })
        }
        FeasibilityOutcome::Infeasible(cert) => Err(RepError::Infeasible(Box::new(
            certificate_report(menu, &cert, &equality_pairs, &gap_pairs),
        ))),
    }
}

/// Restate a raw Farkas certificate over acts and, when the cleared
/// multipliers stay small, as a cancellation-violating tuple.
fn certificate_report(
    menu: &Menu,
    cert: &FarkasCertificate,
    equality_pairs: &[(CompiledAct, CompiledAct)],
    gap_pairs: &[(CompiledAct, CompiledAct)],
) -> InfeasibilityReport {
    let sig = menu.sig();
    let mut items: Vec<CertificateItem> = Vec::new();
    let mut weights: Vec<Rat> = Vec::new();
    let mut pairs: Vec<(CompiledAct, CompiledAct, bool)> = Vec::new();
    for (idx, weight) in &cert.inequality_multipliers {
        if weight.is_zero() {
            continue;
        }
        let (better, worse) = &gap_pairs[*idx];
        pairs.push((better.clone(), worse.clone(), true));
        weights.push(weight.clone());
    }
    for (idx, weight) in &cert.equality_multipliers {
        if weight.is_zero() {
            continue;
        }
        // Signed equality multiplier: orient the indifferent pair.
        let (f, g) = &equality_pairs[*idx];
        let (better, worse) = if weight.is_positive() {
            (f.clone(), g.clone())
        } else {
            (g.clone(), f.clone())
        };
        pairs.push((better, worse, false));
        weights.push(weight.abs());
    }
    for ((better, worse, strict), weight) in pairs.iter().zip(&weights) {
        items.push(CertificateItem {
            better: better.canonical_action(menu).display(sig).to_string(),
            worse: worse.canonical_action(menu).display(sig).to_string(),
            multiplier: rat_to_string(weight),
            strict: *strict,
        });
    }

    // Integral multipliers turn the certificate into a finite tuple:
    // each comparison repeated its weight's worth of times gives
    // matching per-atom multisets with every premise weakly preferring
    // the alpha side and a strict pair left for the conclusion.
    let lcm = weights
        .iter()
        .fold(BigInt::one(), |acc, w| num_integer::lcm(acc, w.denom().clone()));
    let counts: Vec<BigInt> = weights.iter().map(|w| (w * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let total: BigInt = counts.iter().sum();
    let canc_witness = if total <= BigInt::from(24) {
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let mut strict_last: Option<(String, String)> = None;
        for ((better, worse, strict), count) in pairs.iter().zip(&counts) {
            let mut reps = count.clone();
            while reps.is_positive() {
                let pair = (
                    better.canonical_action(menu).display(sig).to_string(),
                    worse.canonical_action(menu).display(sig).to_string(),
                );
                if *strict && strict_last.is_none() {
                    strict_last = Some(pair);
                } else {
                    alphas.push(pair.0);
                    betas.push(pair.1);
                }
                reps -= BigInt::one();
            }
        }
        strict_last.map(|(a, b)| {
            alphas.push(a);
            betas.push(b);
            AxiomWitness::Cancellation { alphas, betas }
        })
    } else {
        None
    };

    InfeasibilityReport { items, canc_witness }
}

/// One well-order of atoms per conditioning atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomOrders {
    per_atom: Vec<Vec<Atom>>,
}

impl AtomOrders {
    pub fn order(&self, w: Atom) -> &[Atom] {
        &self.per_atom[w.0 as usize]
    }

    /// The order-least atom compatible with the truth set.
    pub fn min_choice(&self, w: Atom, ts: &TruthSet) -> Option<Atom> {
        self.order(w).iter().copied().find(|a| ts.contains(*a))
    }
}

/// Linearize each closeness preorder into a well-order of atoms. Ties
/// break by ascending bitmask; with `centered` the conditioning atom is
/// pulled to rank zero (it must already sit in the minimal class).
pub fn extract_well_orders(
    pr: &PreferenceRelation,
    menu: &Menu,
    centered: bool,
) -> Result<AtomOrders, RepError> {
    let sig = menu.sig();
    let atoms: Vec<Atom> = all_atoms(sig).collect();
    let mut per_atom = Vec::with_capacity(atoms.len());
    for &w in &atoms {
        // Totality and transitivity must hold or the linearization is
        // meaningless; surface which one leaked through.
        for &x in &atoms {
            for &y in &atoms {
                if !pr.closeness(menu, w, x, y)? && !pr.closeness(menu, w, y, x)? {
                    return Err(RepError::NotTotal(w.label(sig)));
                }
            }
        }
        for &x in &atoms {
            for &y in &atoms {
                for &z in &atoms {
                    if pr.closeness(menu, w, x, y)?
                        && pr.closeness(menu, w, y, z)?
                        && !pr.closeness(menu, w, x, z)?
                    {
                        return Err(RepError::NotTransitive(w.label(sig)));
                    }
                }
            }
        }
        let mut order = atoms.clone();
        // Strictly-closer counts sort the preorder; bitmask order is
        // stable within ties.
        let mut strictly_below = vec![0usize; atoms.len()];
        for &x in &atoms {
            for &y in &atoms {
                if pr.closeness(menu, w, x, y)? && !pr.closeness(menu, w, y, x)? {
                    strictly_below[y.0 as usize] += 1;
                }
            }
        }
        order.sort_by_key(|a| strictly_below[a.0 as usize]);
        if centered {
            let pos = order.iter().position(|a| *a == w).unwrap();
            if strictly_below[order[pos].0 as usize] != strictly_below[order[0].0 as usize] {
                return Err(RepError::Precondition(format!(
                    "centering does not place {} in the closest class",
                    w.label(sig)
                )));
            }
            order.remove(pos);
            order.insert(0, w);
        }
        per_atom.push(order);
    }
    Ok(AtomOrders { per_atom })
}

/// First (conditioning atom, member) where doing the member is not
/// conditionally indifferent to doing its resolved closest atom.
pub fn check_min_choice_indifference(
    pr: &PreferenceRelation,
    orders: &AtomOrders,
    menu: &Menu,
) -> Result<Option<(Atom, String)>, RepError> {
    let sig = menu.sig();
    for w in all_atoms(sig) {
        for j in 0..menu.len() {
            let min = orders
                .min_choice(w, menu.truth_set(j))
                .ok_or_else(|| RepError::Unsatisfiable(menu.formula(j).display(sig).to_string()))?;
            let min_member = menu.atom_member(min)?;
            let verdict = pr.compare_compiled(
                &crate::preferences::atom_guarded_act(menu, w, j),
                &crate::preferences::atom_guarded_act(menu, w, min_member),
            );
            if verdict != Ordering::Equal {
                return Ok(Some((w, menu.formula(j).display(sig).to_string())));
            }
        }
    }
    Ok(None)
}

/// Two members resolving to the same closest atom must carry the same
/// state-dependent utility; otherwise the state utility built from
/// either would be ambiguous. Returns the first offending triple.
pub fn check_utility_well_defined(
    u_star: &StateDependentUtility,
    orders: &AtomOrders,
    menu: &Menu,
) -> Option<(Atom, String, String)> {
    let sig = menu.sig();
    for w in all_atoms(sig) {
        for j in 0..menu.len() {
            for k in (j + 1)..menu.len() {
                let mj = orders.min_choice(w, menu.truth_set(j));
                let mk = orders.min_choice(w, menu.truth_set(k));
                if mj == mk && u_star.value(w, j) != u_star.value(w, k) {
                    return Some((
                        w,
                        menu.formula(j).display(sig).to_string(),
                        menu.formula(k).display(sig).to_string(),
                    ));
                }
            }
        }
    }
    None
}

/// A finished synthesis: the representation plus the intermediate
/// objects the checks quantify over.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub representation: SEURepresentation,
    pub u_star: StateDependentUtility,
    pub orders: AtomOrders,
    pub axiom_reports: Vec<AxiomReport>,
}

/// Index of paired state (current, previous) in the paired model.
fn paired_index(sig_atoms: usize, current: Atom, previous: Atom) -> usize {
    current.0 as usize * sig_atoms + previous.0 as usize
}

pub fn paired_state_name(sig: &crate::logic::Signature, current: Atom, previous: Atom) -> String {
    format!("{}|{}", current.label(sig), previous.label(sig))
}

/// Build the paired-state model over (current atom, previous atom):
/// valuation reads the current component; the well-order at a state
/// with first component `W` ranks blocks of equal current atom by
/// `orders[W]`, and inside each block puts previous-component `W`
/// first, the rest ascending.
fn build_paired_model(
    menu: &Menu,
    orders: &AtomOrders,
) -> Result<SelectionModel, RepError> {
    let sig = menu.sig();
    let n_atoms = sig.atom_count();
    let atoms: Vec<Atom> = all_atoms(sig).collect();
    let mut names = Vec::with_capacity(n_atoms * n_atoms);
    let mut state_atoms = Vec::with_capacity(n_atoms * n_atoms);
    for &current in &atoms {
        for &previous in &atoms {
            names.push(paired_state_name(sig, current, previous));
            state_atoms.push(current);
        }
    }
    let model = BasicModel::from_atoms(sig, names, state_atoms)?;

    let mut family_orders = Vec::with_capacity(n_atoms * n_atoms);
    for &w in &atoms {
        let ranked: Vec<usize> = orders
            .order(w)
            .iter()
            .flat_map(|&current| {
                let mut block = vec![paired_index(n_atoms, current, w)];
                block.extend(
                    atoms
                        .iter()
                        .filter(|prev| **prev != w)
                        .map(|&prev| paired_index(n_atoms, current, prev)),
                );
                block
            })
            .collect();
        // The order at (w, w') ignores w': repeat per previous atom.
        for _ in &atoms {
            family_orders.push(ranked.clone());
        }
    }
    let family = WellOrderFamily::new(&model, family_orders)?;
    Ok(SelectionModel::induce(model, menu.clone(), family)?)
}

/// Structural identity of the built selection: from any state with
/// first component `W`, doing a member lands on (min_choice, W).
/// Exhaustive over (state, member); returns the first mismatch.
pub fn check_paired_selection(
    sm: &SelectionModel,
    orders: &AtomOrders,
) -> Result<Option<(String, String)>, RepError> {
    let menu = sm.menu();
    let sig = menu.sig();
    let n_atoms = sig.atom_count();
    for w in all_atoms(sig) {
        for prev in all_atoms(sig) {
            let base = paired_index(n_atoms, w, prev);
            for j in 0..menu.len() {
                let min = orders
                    .min_choice(w, menu.truth_set(j))
                    .ok_or_else(|| {
                        RepError::Unsatisfiable(menu.formula(j).display(sig).to_string())
                    })?;
                let expected = paired_index(n_atoms, min, w);
                if sm.select(base, j) != expected {
                    return Ok(Some((
                        sm.model().state_name(base).to_string(),
                        menu.formula(j).display(sig).to_string(),
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Run the whole synthesis: axioms, feasibility, orders, paired model,
/// probability and utility, with the structural checks asserted.
pub fn build_representation(
    pr: &PreferenceRelation,
    menu: &Menu,
    cap: u64,
) -> Result<Synthesis, RepError> {
    let mut reports = Vec::new();
    for check in [check_cent, check_ssc, check_trans] {
        let report = check(pr, menu)?;
        let pass = report.pass;
        reports.push(report);
        if !pass {
            return Err(RepError::Axiom(Box::new(reports.pop().unwrap())));
        }
    }

    let u_star = solve_state_dependent(pr, menu, cap)?;
    let orders = extract_well_orders(pr, menu, true)?;
    let sm = build_paired_model(menu, &orders)?;
    if let Some((state, member)) = check_paired_selection(&sm, &orders)? {
        return Err(RepError::Precondition(format!(
            "paired selection mismatch at {state} for {member}"
        )));
    }
    if let Some((w, phi, psi)) = check_utility_well_defined(&u_star, &orders, menu) {
        return Err(RepError::Precondition(format!(
            "state-dependent utility disagrees at {} between {} and {}",
            w.label(menu.sig()),
            phi,
            psi
        )));
    }

    let sig = menu.sig();
    let n_atoms = sig.atom_count();
    let total_states = n_atoms * n_atoms;
    let pi = vec![
        Rat::new(BigInt::one(), BigInt::from(total_states as i64));
        total_states
    ];
    // π of one first-component block.
    let block_mass = Rat::new(BigInt::one(), BigInt::from(n_atoms as i64));
    let mut u = vec![Rat::zero(); total_states];
    for w in all_atoms(sig) {
        for x in all_atoms(sig) {
            let member = (0..menu.len())
                .find(|&j| orders.min_choice(w, menu.truth_set(j)) == Some(x));
            if let Some(j) = member {
                u[paired_index(n_atoms, x, w)] = u_star.value(w, j) / &block_mass;
            }
            // Unreachable pairs keep utility zero; no act ever lands
            // there.
        }
    }
    let representation = SEURepresentation::new(sm, pi, u)?;
    Ok(Synthesis {
        representation,
        u_star,
        orders,
        axiom_reports: reports,
    })
}

/// How act pairs are drawn for verification.
#[derive(Debug, Clone, Copy)]
pub enum PairSample {
    /// All unordered pairs when the act space is at most this size,
    /// otherwise the seeded sample count.
    Auto { threshold: u64, samples: u64, seed: u64 },
}

impl Default for PairSample {
    fn default() -> Self {
        PairSample::Auto {
            threshold: 300,
            samples: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub checked_pairs: u64,
    pub exhaustive: bool,
    /// First pair where the preference verdict and the exact
    /// expected-utility comparison disagree.
    pub witness: Option<(String, String)>,
}

impl VerifyOutcome {
    pub fn pass(&self) -> bool {
        self.witness.is_none()
    }
}

/// Compare `pr` with expected utility under the representation on act
/// pairs: the verdicts must match exactly, tolerance zero.
pub fn verify_representation(
    rep: &SEURepresentation,
    pr: &PreferenceRelation,
    menu: &Menu,
    sample: PairSample,
) -> Result<VerifyOutcome, RepError> {
    // Expected utility decomposes into the same additive shape as the
    // scored oracle, one value per (atom, member).
    let eu_oracle = match generate_preferences(rep, menu)? {
        PreferenceRelation::Scored(s) => s,
        PreferenceRelation::Partition(_) => unreachable!("generated preferences are scored"),
    };
    let eu = PreferenceRelation::Scored(eu_oracle);

    let PairSample::Auto { threshold, samples, seed } = sample;
    let size = crate::actions::act_space_size(menu);
    let exhaustive = size <= num_bigint::BigUint::from(threshold);
    let mut checked = 0u64;
    let mut witness = None;
    let disagree = |a: &CompiledAct, b: &CompiledAct| -> bool {
        pr.compare_compiled(a, b) != eu.compare_compiled(a, b)
    };

    if exhaustive {
        let acts: Vec<CompiledAct> = act_space(menu, threshold)?.collect();
        'outer: for i in 0..acts.len() {
            for j in (i + 1)..acts.len() {
                checked += 1;
                if disagree(&acts[i], &acts[j]) {
                    witness = Some((
                        acts[i].canonical_action(menu).display(menu.sig()).to_string(),
                        acts[j].canonical_action(menu).display(menu.sig()).to_string(),
                    ));
                    break 'outer;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_atoms = menu.atom_count();
        let m = menu.len() as u16;
        for _ in 0..samples {
            let a = CompiledAct {
                table: (0..n_atoms).map(|_| rng.gen_range(0..m)).collect(),
            };
            let b = CompiledAct {
                table: (0..n_atoms).map(|_| rng.gen_range(0..m)).collect(),
            };
            checked += 1;
            if disagree(&a, &b) {
                witness = Some((
                    a.canonical_action(menu).display(menu.sig()).to_string(),
                    b.canonical_action(menu).display(menu.sig()).to_string(),
                ));
                break;
            }
        }
    }
    Ok(VerifyOutcome {
        checked_pairs: checked,
        exhaustive,
        witness,
    })
}

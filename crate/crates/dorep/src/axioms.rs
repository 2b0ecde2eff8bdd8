//! Decision-axiom checkers.
//!
//! Each checker takes a preference relation and a menu and returns an
//! [`AxiomReport`]: pass, or the first counterexample in enumeration
//! order. Witnesses carry their ingredients as parseable strings so a
//! reported violation can be re-established through the public
//! comparison interface alone (see [`validate_witness`]).
//!
//! Centering, specificity, and transitivity are decided exactly.
//! Cancellation is searched under a budget: full quantification over
//! all tuple lengths and acts is infeasible, and the linear-feasibility
//! route in [`crate::representation`] provides the complementary
//! signal (an infeasible preference relation has some cancellation
//! violation).

use crate::actions::{parse_action, CompiledAct, Menu};
use crate::logic::{all_atoms, Atom};
use crate::preferences::{atom_act_labels, guarded_table, PrefError, PreferenceRelation};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Coverage {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub axiom: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<AxiomWitness>,
    pub coverage: Coverage,
}

impl AxiomReport {
    fn pass(axiom: &str, coverage: Coverage) -> AxiomReport {
        AxiomReport {
            axiom: axiom.to_string(),
            pass: true,
            witness: None,
            coverage,
        }
    }

    fn fail(axiom: &str, witness: AxiomWitness, coverage: Coverage) -> AxiomReport {
        AxiomReport {
            axiom: axiom.to_string(),
            pass: false,
            witness: Some(witness),
            coverage,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum AxiomWitness {
    /// `cond` entails `payload`, both menu members, yet
    /// `if cond then do(payload)` is not indifferent to `do(true)`.
    Centering { cond: String, payload: String },
    /// A decomposition of `phi` into menu members none of which
    /// resolves the ambiguity conditional on `atom`: each part comes
    /// with a menu formula between it and `phi` that it disagrees with.
    Specificity {
        phi: String,
        atom: String,
        decomposition: Vec<String>,
        violations: Vec<SpecificityViolation>,
    },
    /// Closeness fails to chain: `x ⊑_w y` and `y ⊑_w z` but not
    /// `x ⊑_w z`.
    Transitivity {
        w: String,
        x: String,
        y: String,
        z: String,
    },
    /// Per-atom outcome multisets match, every `alphas[i] ⪰ betas[i]`,
    /// and at least one of those preferences is strict; cancellation
    /// demands the last `betas` be weakly preferred back, and it is not.
    Cancellation {
        alphas: Vec<String>,
        betas: Vec<String>,
    },
    /// A derived-principle failure found by the smoke tests.
    Consequence { principle: String, detail: String },
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct SpecificityViolation {
    pub part: String,
    pub psi: String,
}

/// Centering: for every ordered pair of menu members with
/// `cond ⊨ payload`, `if cond then do(payload)` is indifferent to
/// `do(true)`. Exhaustive over menu pairs.
pub fn check_cent(pr: &PreferenceRelation, menu: &Menu) -> Result<AxiomReport, PrefError> {
    let sig = menu.sig();
    let do_true = CompiledAct::constant(menu, menu.true_index());
    for cond_idx in 0..menu.len() {
        for payload_idx in 0..menu.len() {
            if !menu.truth_set(cond_idx).is_subset(menu.truth_set(payload_idx)) {
                continue;
            }
            let guarded = guarded_table(
                menu,
                menu.truth_set(cond_idx),
                &CompiledAct::constant(menu, payload_idx),
            );
            if pr.compare_compiled(&guarded, &do_true) != Ordering::Equal {
                return Ok(AxiomReport::fail(
                    "cent",
                    AxiomWitness::Centering {
                        cond: menu.formula(cond_idx).display(sig).to_string(),
                        payload: menu.formula(payload_idx).display(sig).to_string(),
                    },
                    Coverage::Exhaustive,
                ));
            }
        }
    }
    Ok(AxiomReport::pass("cent", Coverage::Exhaustive))
}

/// Sufficiently specific conditions, decided exactly.
///
/// A member `m ⊨ phi` is *acceptable* for `(phi, atom)` when every menu
/// formula between `m` and `phi` is conditionally indifferent to `m`.
/// A violating decomposition exists exactly when the unacceptable
/// members entailing `phi` cover `phi`'s truth set: any covering
/// family of them is one, and no decomposition of any size escapes. So
/// the checker tests that cover directly and reports a greedy covering
/// family as the witness, with one breaking formula per part.
pub fn check_ssc(pr: &PreferenceRelation, menu: &Menu) -> Result<AxiomReport, PrefError> {
    require_rich(menu)?;
    let sig = menu.sig();
    let labels = atom_act_labels(pr, menu);
    let m = menu.len();

    // sub[j][k]: member j entails member k.
    let sub: Vec<Vec<bool>> = (0..m)
        .map(|j| {
            (0..m)
                .map(|k| menu.truth_set(j).is_subset(menu.truth_set(k)))
                .collect()
        })
        .collect();

    for phi in 0..m {
        let phi_ts = menu.truth_set(phi);
        for x in all_atoms(sig) {
            let xi = x.0 as usize;
            // Candidates are the members under phi; a candidate is
            // acceptable when the whole interval up to phi shares its
            // conditional label at x.
            let mut bad: Vec<usize> = Vec::new();
            for cand in 0..m {
                if !sub[cand][phi] {
                    continue;
                }
                let ok = (0..m).all(|psi| {
                    !(sub[cand][psi] && sub[psi][phi]) || labels[xi][psi] == labels[xi][cand]
                });
                if !ok {
                    bad.push(cand);
                }
            }
            // Do the unacceptable candidates cover phi?
            let mut covered = crate::logic::TruthSet::empty(sig);
            for &b in &bad {
                covered = covered.union(menu.truth_set(b));
            }
            if covered == *phi_ts {
                let decomposition = greedy_cover(menu, phi_ts, &bad);
                let violations = decomposition
                    .iter()
                    .map(|&part| {
                        let psi = (0..m)
                            .find(|&psi| {
                                sub[part][psi]
                                    && sub[psi][phi]
                                    && labels[xi][psi] != labels[xi][part]
                            })
                            .expect("part was classified unacceptable");
                        SpecificityViolation {
                            part: menu.formula(part).display(sig).to_string(),
                            psi: menu.formula(psi).display(sig).to_string(),
                        }
                    })
                    .collect();
                return Ok(AxiomReport::fail(
                    "ssc",
                    AxiomWitness::Specificity {
                        phi: menu.formula(phi).display(sig).to_string(),
                        atom: x.label(sig),
                        decomposition: decomposition
                            .iter()
                            .map(|&i| menu.formula(i).display(sig).to_string())
                            .collect(),
                        violations,
                    },
                    Coverage::Exhaustive,
                ));
            }
        }
    }
    Ok(AxiomReport::pass("ssc", Coverage::Exhaustive))
}

fn greedy_cover(menu: &Menu, target: &crate::logic::TruthSet, pool: &[usize]) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut covered = crate::logic::TruthSet::empty(menu.sig());
    while covered != *target {
        let best = pool
            .iter()
            .copied()
            .filter(|i| !chosen.contains(i))
            .max_by_key(|&i| {
                menu.truth_set(i)
                    .iter()
                    .filter(|a| !covered.contains(*a))
                    .count()
            })
            .expect("pool covers the target");
        chosen.push(best);
        covered = covered.union(menu.truth_set(best));
    }
    chosen.sort_unstable();
    chosen
}

/// Closeness transitivity, exhaustive over all atom quadruples.
pub fn check_trans(pr: &PreferenceRelation, menu: &Menu) -> Result<AxiomReport, PrefError> {
    require_rich(menu)?;
    let sig = menu.sig();
    let labels = atom_act_labels(pr, menu);
    let close = |w: Atom, x: Atom, y: Atom| -> Result<bool, PrefError> {
        if x == y {
            return Ok(true);
        }
        let wi = w.0 as usize;
        Ok(labels[wi][menu.pair_member(x, y)?] == labels[wi][menu.atom_member(x)?])
    };
    for w in all_atoms(sig) {
        for x in all_atoms(sig) {
            for y in all_atoms(sig) {
                for z in all_atoms(sig) {
                    if close(w, x, y)? && close(w, y, z)? && !close(w, x, z)? {
                        return Ok(AxiomReport::fail(
                            "trans",
                            AxiomWitness::Transitivity {
                                w: w.label(sig),
                                x: x.label(sig),
                                y: y.label(sig),
                                z: z.label(sig),
                            },
                            Coverage::Exhaustive,
                        ));
                    }
                }
            }
        }
    }
    Ok(AxiomReport::pass("trans", Coverage::Exhaustive))
}

/// Budgeted cancellation search.
///
/// Samples tuples of act tables whose per-atom outcome multisets match:
/// draw `n` tables, then permute each atom's column independently. For
/// such a tuple, cancellation fails exactly when some arrangement has
/// every premise `α_i ⪰ β_i` and a strict pair left for the
/// conclusion; equivalently, all pairs weakly prefer the α side and at
/// least one strictly does. The length-1 case (equal tables compare
/// indifferent) is checked exhaustively over a 200-act sample of
/// distinct syntactic realizations.
pub fn check_canc(
    pr: &PreferenceRelation,
    menu: &Menu,
    max_n: u32,
    budget: u64,
    seed: u64,
) -> Result<AxiomReport, PrefError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_atoms = menu.atom_count();
    let m = menu.len() as u16;
    let coverage = Coverage::Sampled { seed, count: budget };

    // Equal tables must be indifferent, whatever syntax realizes them.
    let mut reversed: Vec<Atom> = all_atoms(menu.sig()).collect();
    reversed.reverse();
    for _ in 0..200 {
        let act = random_table(&mut rng, n_atoms, m);
        let canonical = act.canonical_action(menu).compile(menu)?;
        let alt = act.chain_action(menu, &reversed).compile(menu)?;
        if pr.compare_compiled(&canonical, &alt) != Ordering::Equal {
            return Ok(AxiomReport::fail(
                "canc",
                AxiomWitness::Cancellation {
                    alphas: vec![act.canonical_action(menu).display(menu.sig()).to_string()],
                    betas: vec![act.chain_action(menu, &reversed).display(menu.sig()).to_string()],
                },
                coverage,
            ));
        }
    }

    if max_n >= 2 {
        for _ in 0..budget {
            let n = rng.gen_range(2..=max_n) as usize;
            let alphas: Vec<CompiledAct> =
                (0..n).map(|_| random_table(&mut rng, n_atoms, m)).collect();
            let mut betas = vec![CompiledAct { table: vec![0; n_atoms] }; n];
            for x in 0..n_atoms {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                for i in 0..n {
                    betas[i].table[x] = alphas[perm[i]].table[x];
                }
            }
            let relations: Vec<Ordering> = (0..n)
                .map(|i| pr.compare_compiled(&alphas[i], &betas[i]))
                .collect();
            let all_weak = relations.iter().all(|r| *r != Ordering::Less);
            let some_strict = relations.contains(&Ordering::Greater);
            if all_weak && some_strict {
                // Put a strict pair last so the stated conclusion
                // fails with the premises in place.
                let strict = relations
                    .iter()
                    .rposition(|r| *r == Ordering::Greater)
                    .expect("some_strict");
                let mut order: Vec<usize> = (0..n).filter(|i| *i != strict).collect();
                order.push(strict);
                return Ok(AxiomReport::fail(
                    "canc",
                    AxiomWitness::Cancellation {
                        alphas: order
                            .iter()
                            .map(|&i| {
                                alphas[i].canonical_action(menu).display(menu.sig()).to_string()
                            })
                            .collect(),
                        betas: order
                            .iter()
                            .map(|&i| {
                                betas[i].canonical_action(menu).display(menu.sig()).to_string()
                            })
                            .collect(),
                    },
                    coverage,
                ));
            }
        }
    }
    Ok(AxiomReport::pass("canc", coverage))
}

fn random_table(rng: &mut ChaCha8Rng, n_atoms: usize, menu_len: u16) -> CompiledAct {
    CompiledAct {
        table: (0..n_atoms).map(|_| rng.gen_range(0..menu_len)).collect(),
    }
}

/// Cheap smoke tests for principles cancellation implies: reflexivity,
/// transitivity of the comparison, and independence of the unchosen
/// else-branch. Sampled; failures here surface implementation or input
/// defects before the expensive cancellation search runs.
pub fn derive_consequences(
    pr: &PreferenceRelation,
    menu: &Menu,
    samples: u64,
    seed: u64,
) -> Result<AxiomReport, PrefError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_atoms = menu.atom_count();
    let m = menu.len() as u16;
    let coverage = Coverage::Sampled { seed, count: samples };
    let fail = |principle: &str, detail: String| {
        Ok(AxiomReport::fail(
            "consequences",
            AxiomWitness::Consequence {
                principle: principle.to_string(),
                detail,
            },
            coverage.clone(),
        ))
    };

    for _ in 0..samples {
        let a = random_table(&mut rng, n_atoms, m);
        if pr.compare_compiled(&a, &a) != Ordering::Equal {
            return fail("reflexivity", format!("{:?}", a.table));
        }
        let b = random_table(&mut rng, n_atoms, m);
        let c = random_table(&mut rng, n_atoms, m);
        if pr.compare_compiled(&a, &b) != Ordering::Less
            && pr.compare_compiled(&b, &c) != Ordering::Less
            && pr.compare_compiled(&a, &c) == Ordering::Less
        {
            return fail(
                "transitivity",
                format!("{:?}, {:?}, {:?}", a.table, b.table, c.table),
            );
        }

        // Independence: swapping the shared else-branch cannot flip
        // the verdict.
        let phi = rng.gen_range(0..menu.len());
        let d = random_table(&mut rng, n_atoms, m);
        let ts = menu.truth_set(phi).clone();
        let splice = |then: &CompiledAct, els: &CompiledAct| -> CompiledAct {
            CompiledAct {
                table: (0..n_atoms)
                    .map(|x| {
                        if ts.contains(Atom(x as u16)) {
                            then.table[x]
                        } else {
                            els.table[x]
                        }
                    })
                    .collect(),
            }
        };
        let with_c = pr.compare_compiled(&splice(&a, &c), &splice(&b, &c));
        let with_d = pr.compare_compiled(&splice(&a, &d), &splice(&b, &d));
        if (with_c != Ordering::Less) != (with_d != Ordering::Less) {
            return fail(
                "independence",
                format!(
                    "condition {}, acts {:?} vs {:?}, else {:?} / {:?}",
                    menu.formula(phi).display(menu.sig()),
                    a.table,
                    b.table,
                    c.table,
                    d.table
                ),
            );
        }
    }
    Ok(AxiomReport::pass("consequences", coverage))
}

fn require_rich(menu: &Menu) -> Result<(), PrefError> {
    if !menu.is_rich() {
        // Surface the first missing member.
        for x in all_atoms(menu.sig()) {
            menu.atom_member(x)?;
            for y in all_atoms(menu.sig()) {
                if x.0 < y.0 {
                    menu.pair_member(x, y)?;
                }
            }
        }
    }
    Ok(())
}

/// Re-establish a reported violation using only the public comparison
/// interface. Returns `true` when the witness genuinely violates its
/// axiom against `pr`.
pub fn validate_witness(
    pr: &PreferenceRelation,
    menu: &Menu,
    witness: &AxiomWitness,
) -> Result<bool, PrefError> {
    let sig = menu.sig();
    match witness {
        AxiomWitness::Centering { cond, payload } => {
            let cond = crate::logic::parse_formula(cond, sig)
                .map_err(|e| PrefError::Action(crate::actions::ActionError::MenuViolation(e.to_string())))?;
            let payload = crate::logic::parse_formula(payload, sig)
                .map_err(|e| PrefError::Action(crate::actions::ActionError::MenuViolation(e.to_string())))?;
            if !cond.entails(&payload, sig) {
                return Ok(false);
            }
            let act = crate::actions::Action::if_then(cond, crate::actions::Action::Do(payload));
            let verdict = pr.compare(menu, &act, &crate::actions::Action::Do(crate::logic::Formula::True))?;
            Ok(verdict != Ordering::Equal)
        }
        AxiomWitness::Specificity {
            phi,
            atom,
            decomposition,
            violations,
        } => {
            let phi = parse_menu_formula(menu, phi)?;
            let atom = Atom::parse_label(atom, sig).ok_or(PrefError::MenuMismatch)?;
            // The decomposition must cover phi exactly...
            let mut union = crate::logic::TruthSet::empty(sig);
            for part in decomposition {
                union = union.union(&parse_menu_formula(menu, part)?.truth_set(sig));
            }
            if union != phi.truth_set(sig) {
                return Ok(false);
            }
            // ...and every part must break on its recorded formula.
            if violations.len() != decomposition.len() {
                return Ok(false);
            }
            for v in violations {
                let part = parse_menu_formula(menu, &v.part)?;
                let psi = parse_menu_formula(menu, &v.psi)?;
                if !part.entails(&psi, sig) || !psi.entails(&phi, sig) {
                    return Ok(false);
                }
                let verdict = pr.conditional_compare(
                    menu,
                    &atom.formula(sig),
                    &crate::actions::Action::Do(psi),
                    &crate::actions::Action::Do(part),
                )?;
                if verdict == Ordering::Equal {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        AxiomWitness::Transitivity { w, x, y, z } => {
            let parse = |s: &str| Atom::parse_label(s, sig).ok_or(PrefError::MenuMismatch);
            let (w, x, y, z) = (parse(w)?, parse(x)?, parse(y)?, parse(z)?);
            Ok(pr.closeness(menu, w, x, y)?
                && pr.closeness(menu, w, y, z)?
                && !pr.closeness(menu, w, x, z)?)
        }
        AxiomWitness::Cancellation { alphas, betas } => {
            if alphas.len() != betas.len() || alphas.is_empty() {
                return Ok(false);
            }
            let compile = |texts: &[String]| -> Result<Vec<CompiledAct>, PrefError> {
                texts
                    .iter()
                    .map(|t| {
                        parse_action(t, sig)
                            .map_err(|e| {
                                PrefError::Action(crate::actions::ActionError::MenuViolation(
                                    e.to_string(),
                                ))
                            })
                            .and_then(|a| a.compile(menu).map_err(PrefError::Action))
                    })
                    .collect()
            };
            let a = compile(alphas)?;
            let b = compile(betas)?;
            // Per-atom multisets must match.
            for x in 0..menu.atom_count() {
                let mut col_a: Vec<u16> = a.iter().map(|t| t.table[x]).collect();
                let mut col_b: Vec<u16> = b.iter().map(|t| t.table[x]).collect();
                col_a.sort_unstable();
                col_b.sort_unstable();
                if col_a != col_b {
                    return Ok(false);
                }
            }
            let n = a.len();
            let premises_hold = (0..n - 1).all(|i| {
                pr.compare_compiled(&a[i], &b[i]) != Ordering::Less
            });
            let conclusion_fails =
                pr.compare_compiled(&a[n - 1], &b[n - 1]) == Ordering::Greater;
            Ok(premises_hold && conclusion_fails)
        }
        AxiomWitness::Consequence { .. } => Ok(true),
    }
}

fn parse_menu_formula(menu: &Menu, text: &str) -> Result<crate::logic::Formula, PrefError> {
    let f = crate::logic::parse_formula(text, menu.sig()).map_err(|e| {
        PrefError::Action(crate::actions::ActionError::MenuViolation(e.to_string()))
    })?;
    if menu.index_of(&f).is_none() {
        return Err(PrefError::Action(crate::actions::ActionError::MenuViolation(
            text.to_string(),
        )));
    }
    Ok(f)
}

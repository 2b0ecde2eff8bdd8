//! Preference relations over compiled acts.
//!
//! Two representations sit behind one comparison interface: an ordered
//! partition (best class first, with an implicit bottom class for any
//! table not listed) for user-supplied relations, and a scored oracle
//! for relations generated from a selection model with probabilities
//! and utilities. Both compare acts through their tables only, so
//! actions with equal tables are always indifferent.

use crate::actions::{Action, ActionError, CompiledAct, Menu};
use crate::logic::{all_atoms, Atom, Formula, TruthSet};
use crate::models::{ModelError, SelectionModel};
use crate::rat::{is_nonnegative, Rat};
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrefError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("act {0:?} appears in two different classes")]
    ConflictingRank(String),
    #[error("partition class {0} is empty")]
    EmptyClass(usize),
    #[error("probabilities must be nonnegative and sum to exactly 1 (got sum {0})")]
    BadProbability(String),
    #[error("value table shape does not match the menu")]
    ShapeMismatch,
    #[error("representation menu differs from the menu under comparison")]
    MenuMismatch,
}

/// Ordered indifference classes of compiled acts, best first. Any table
/// not listed sits in one implicit class strictly below all listed
/// ones, so the comparison stays total over the whole act space.
#[derive(Debug, Clone)]
pub struct Partition {
    classes: Vec<Vec<CompiledAct>>,
    rank: HashMap<CompiledAct, usize>,
}

impl Partition {
    pub fn new(classes: Vec<Vec<CompiledAct>>) -> Result<Partition, PrefError> {
        let mut rank = HashMap::new();
        let mut kept: Vec<Vec<CompiledAct>> = Vec::with_capacity(classes.len());
        for (k, class) in classes.into_iter().enumerate() {
            if class.is_empty() {
                return Err(PrefError::EmptyClass(k));
            }
            let mut dedup = Vec::new();
            for act in class {
                match rank.get(&act) {
                    Some(&r) if r != k => {
                        return Err(PrefError::ConflictingRank(format!("{:?}", act.table)))
                    }
                    Some(_) => {}
                    None => {
                        rank.insert(act.clone(), k);
                        dedup.push(act);
                    }
                }
            }
            kept.push(dedup);
        }
        Ok(Partition { classes: kept, rank })
    }

    pub fn classes(&self) -> &[Vec<CompiledAct>] {
        &self.classes
    }

    fn rank_of(&self, act: &CompiledAct) -> usize {
        self.rank.get(act).copied().unwrap_or(self.classes.len())
    }
}

/// Additive scores: a value per (atom, menu member), with an act's
/// score the sum of its table's entries. This is exactly the shape of
/// preferences generated by expected utility, and callers never see the
/// numbers, only comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredOracle {
    /// `values[atom][member]`, exact rationals.
    values: Vec<Vec<Rat>>,
}

impl ScoredOracle {
    pub fn new(menu: &Menu, values: Vec<Vec<Rat>>) -> Result<ScoredOracle, PrefError> {
        if values.len() != menu.atom_count() || values.iter().any(|row| row.len() != menu.len()) {
            return Err(PrefError::ShapeMismatch);
        }
        Ok(ScoredOracle { values })
    }

    pub(crate) fn score(&self, act: &CompiledAct) -> Rat {
        act.table
            .iter()
            .enumerate()
            .map(|(x, &j)| &self.values[x][j as usize])
            .fold(Rat::zero(), |acc, v| acc + v)
    }

    #[cfg(test)]
    pub(crate) fn value(&self, x: Atom, member: usize) -> &Rat {
        &self.values[x.0 as usize][member]
    }
}

#[derive(Debug, Clone)]
pub enum PreferenceRelation {
    Partition(Partition),
    Scored(ScoredOracle),
}

impl PreferenceRelation {
    /// Total preorder comparison on tables; `Greater` means the first
    /// act is strictly preferred.
    pub fn compare_compiled(&self, a: &CompiledAct, b: &CompiledAct) -> Ordering {
        match self {
            // Smaller rank = better class.
            PreferenceRelation::Partition(p) => p.rank_of(b).cmp(&p.rank_of(a)),
            PreferenceRelation::Scored(s) => s.score(a).cmp(&s.score(b)),
        }
    }

    pub fn compare(&self, menu: &Menu, a: &Action, b: &Action) -> Result<Ordering, PrefError> {
        Ok(self.compare_compiled(&a.compile(menu)?, &b.compile(menu)?))
    }

    /// Compare `if cond then a` against `if cond then b`, both with the
    /// implicit `else do(true)`.
    pub fn conditional_compare(
        &self,
        menu: &Menu,
        cond: &Formula,
        a: &Action,
        b: &Action,
    ) -> Result<Ordering, PrefError> {
        let ts = cond.truth_set(menu.sig());
        let ta = guarded_table(menu, &ts, &a.compile(menu)?);
        let tb = guarded_table(menu, &ts, &b.compile(menu)?);
        Ok(self.compare_compiled(&ta, &tb))
    }

    /// The closeness relation `φ_X ⊑_W φ_Y`: conditional on `φ_W`, doing
    /// the (canonical) disjunction of the two atoms is indifferent to
    /// doing `φ_X`. Reflexive by definition.
    pub fn closeness(&self, menu: &Menu, w: Atom, x: Atom, y: Atom) -> Result<bool, PrefError> {
        if x == y {
            return Ok(true);
        }
        let disj = menu.pair_member(x, y)?;
        let ax = menu.atom_member(x)?;
        let verdict = self.compare_compiled(
            &atom_guarded_act(menu, w, disj),
            &atom_guarded_act(menu, w, ax),
        );
        Ok(verdict == Ordering::Equal)
    }
}

/// Table of `if cond then act`: the act's choice where `cond` holds,
/// `true` elsewhere.
pub fn guarded_table(menu: &Menu, cond: &TruthSet, act: &CompiledAct) -> CompiledAct {
    let true_idx = menu.true_index() as u16;
    CompiledAct {
        table: act
            .table
            .iter()
            .enumerate()
            .map(|(x, &j)| if cond.contains(Atom(x as u16)) { j } else { true_idx })
            .collect(),
    }
}

/// Table of `if φ_W then do(menu[member])`: `member` at atom `w`,
/// `true` everywhere else.
pub fn atom_guarded_act(menu: &Menu, w: Atom, member: usize) -> CompiledAct {
    let mut table = vec![menu.true_index() as u16; menu.atom_count()];
    table[w.0 as usize] = member as u16;
    CompiledAct { table }
}

/// A selection model with a probability measure and a state utility:
/// everything needed to score acts by expected utility.
#[derive(Debug, Clone)]
pub struct SEURepresentation {
    sm: SelectionModel,
    pi: Vec<Rat>,
    u: Vec<Rat>,
}

impl SEURepresentation {
    pub fn new(sm: SelectionModel, pi: Vec<Rat>, u: Vec<Rat>) -> Result<SEURepresentation, PrefError> {
        let n = sm.model().num_states();
        if pi.len() != n || u.len() != n {
            return Err(PrefError::ShapeMismatch);
        }
        let sum: Rat = pi.iter().fold(Rat::zero(), |acc, p| acc + p);
        if !sum.is_one() || !pi.iter().all(is_nonnegative) {
            return Err(PrefError::BadProbability(crate::rat::rat_to_string(&sum)));
        }
        Ok(SEURepresentation { sm, pi, u })
    }

    pub fn selection_model(&self) -> &SelectionModel {
        &self.sm
    }

    pub fn pi(&self) -> &[Rat] {
        &self.pi
    }

    pub fn u(&self) -> &[Rat] {
        &self.u
    }

    /// Exact expected utility of an interpreted state map.
    pub fn expected_utility_of_map(&self, map: &[usize]) -> Rat {
        map.iter()
            .enumerate()
            .fold(Rat::zero(), |acc, (w, &to)| acc + &self.pi[w] * &self.u[to])
    }

    /// Exact expected utility of an action.
    pub fn expected_utility(&self, act: &Action) -> Result<Rat, PrefError> {
        let map = act.interpret(&self.sm)?;
        Ok(self.expected_utility_of_map(&map))
    }
}

/// Score every table by expected utility under the representation.
///
/// For a table `f`, the canonical act realizing it satisfies
/// `⟦f⟧(ω) = c(ω, f(atom(ω)))`, so the expected utility decomposes into
/// one summand per atom and the oracle is an additive value table:
/// `V(X, j) = Σ_{ω ⊨ φ_X} π(ω)·u(c(ω, j))`.
pub fn generate_preferences(
    rep: &SEURepresentation,
    menu: &Menu,
) -> Result<PreferenceRelation, PrefError> {
    let sm = rep.selection_model();
    if sm.menu() != menu {
        return Err(PrefError::MenuMismatch);
    }
    let model = sm.model();
    let mut values = vec![vec![Rat::zero(); menu.len()]; menu.atom_count()];
    for w in 0..model.num_states() {
        let x = model.state_atom(w).0 as usize;
        for j in 0..menu.len() {
            let contrib = &rep.pi()[w] * &rep.u()[sm.select(w, j)];
            values[x][j] += contrib;
        }
    }
    Ok(PreferenceRelation::Scored(ScoredOracle { values }))
}

/// Dense labels per atom: `labels[x][j] == labels[x][k]` exactly when
/// `if φ_x then do(menu[j])` and `if φ_x then do(menu[k])` are
/// indifferent. Closeness and the axiom sweeps reduce to label lookups
/// because acts guarded by an atom differ from `do(true)` only there.
pub fn atom_act_labels(pr: &PreferenceRelation, menu: &Menu) -> Vec<Vec<u32>> {
    let m = menu.len();
    all_atoms(menu.sig())
        .map(|x| {
            let acts: Vec<CompiledAct> = (0..m).map(|j| atom_guarded_act(menu, x, j)).collect();
            let mut idx: Vec<usize> = (0..m).collect();
            idx.sort_by(|&a, &b| pr.compare_compiled(&acts[a], &acts[b]));
            let mut labels = vec![0u32; m];
            let mut next = 0u32;
            for (pos, &j) in idx.iter().enumerate() {
                if pos > 0
                    && pr.compare_compiled(&acts[idx[pos - 1]], &acts[j]) != Ordering::Equal
                {
                    next += 1;
                }
                labels[j] = next;
            }
            labels
        })
        .collect()
}

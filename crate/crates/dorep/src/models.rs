//! Basic models, well-order families, and selection models.
//!
//! States are opaque ids with a valuation, not atoms, so models with
//! duplicated theories can be built; theory equivalence of two states
//! is equality of their atoms. A selection function is stored
//! extensionally as a (state × menu member) table and must satisfy
//! success: the selected state lies in the payload's extension. When
//! the table is induced by a family of per-state well-orders we keep
//! the family around as provenance.

use crate::actions::{Action, Menu};
use crate::logic::{Atom, Formula, Signature, TruthSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("model has no states")]
    EmptyStates,
    #[error("signature mismatch between model and menu")]
    SignatureMismatch,
    #[error("order for state {0:?} is not a permutation of all states")]
    BadOrder(String),
    #[error("order family size {family} does not match state count {states}")]
    FamilySize { family: usize, states: usize },
    #[error("menu formula {formula:?} has empty extension in the model")]
    FRichnessViolation { formula: String },
    #[error("selection({state}, {formula}) lands outside the formula's extension")]
    SuccessViolation { state: String, formula: String },
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("selection table disagrees with precisification {part:?} at state {state:?} via {psi:?}")]
    ResolutionFailure {
        part: String,
        psi: String,
        state: String,
    },
}

/// A state set with a valuation, represented per state as the atom it
/// satisfies (each state satisfies exactly one atom).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicModel {
    sig: Signature,
    state_names: Vec<String>,
    state_atoms: Vec<Atom>,
}

impl BasicModel {
    pub fn from_atoms(
        sig: &Signature,
        state_names: Vec<String>,
        state_atoms: Vec<Atom>,
    ) -> Result<BasicModel, ModelError> {
        if state_names.is_empty() {
            return Err(ModelError::EmptyStates);
        }
        assert_eq!(state_names.len(), state_atoms.len());
        Ok(BasicModel {
            sig: sig.clone(),
            state_names,
            state_atoms,
        })
    }

    /// One state per atom, named by the atom's set label. Every pair of
    /// distinct states has distinct theories.
    pub fn canonical(sig: &Signature) -> BasicModel {
        let atoms: Vec<Atom> = crate::logic::all_atoms(sig).collect();
        let names = atoms.iter().map(|a| a.label(sig)).collect();
        BasicModel {
            sig: sig.clone(),
            state_names: names,
            state_atoms: atoms,
        }
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn state_name(&self, w: usize) -> &str {
        &self.state_names[w]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    /// The unique atom satisfied at `w`; two states are
    /// theory-equivalent exactly when their atoms coincide.
    pub fn state_atom(&self, w: usize) -> Atom {
        self.state_atoms[w]
    }

    pub fn satisfies(&self, w: usize, ts: &TruthSet) -> bool {
        ts.contains(self.state_atoms[w])
    }

    /// States in the extension of a truth set, ascending.
    pub fn extension(&self, ts: &TruthSet) -> Vec<usize> {
        (0..self.num_states())
            .filter(|w| self.satisfies(*w, ts))
            .collect()
    }

    pub fn formula_extension(&self, f: &Formula) -> Vec<usize> {
        self.extension(&f.truth_set(&self.sig))
    }

    pub fn is_f_rich(&self, menu: &Menu) -> Result<(), ModelError> {
        if self.sig != *menu.sig() {
            return Err(ModelError::SignatureMismatch);
        }
        for j in 0..menu.len() {
            if self.extension(menu.truth_set(j)).is_empty() {
                return Err(ModelError::FRichnessViolation {
                    formula: menu.formula(j).display(&self.sig).to_string(),
                });
            }
        }
        Ok(())
    }
}

/// One well-order of the whole state space per state, stored as ranked
/// lists (closest first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WellOrderFamily {
    orders: Vec<Vec<usize>>,
}

impl WellOrderFamily {
    pub fn new(model: &BasicModel, orders: Vec<Vec<usize>>) -> Result<WellOrderFamily, ModelError> {
        let n = model.num_states();
        if orders.len() != n {
            return Err(ModelError::FamilySize {
                family: orders.len(),
                states: n,
            });
        }
        for (w, order) in orders.iter().enumerate() {
            let mut seen = vec![false; n];
            if order.len() != n {
                return Err(ModelError::BadOrder(model.state_name(w).to_string()));
            }
            for &s in order {
                if s >= n || seen[s] {
                    return Err(ModelError::BadOrder(model.state_name(w).to_string()));
                }
                seen[s] = true;
            }
        }
        Ok(WellOrderFamily { orders })
    }

    pub fn order(&self, w: usize) -> &[usize] {
        &self.orders[w]
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    /// Every state ranks itself closest.
    pub fn is_centered(&self) -> bool {
        self.orders.iter().enumerate().all(|(w, o)| o[0] == w)
    }

    /// Rank of each state in `order(w)`.
    pub fn ranks(&self, w: usize) -> Vec<usize> {
        let mut r = vec![0; self.orders.len()];
        for (rank, &s) in self.orders[w].iter().enumerate() {
            r[s] = rank;
        }
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Explicit,
    Induced(WellOrderFamily),
}

/// A basic model, a menu, and a success-respecting selection table.
#[derive(Debug, Clone)]
pub struct SelectionModel {
    model: BasicModel,
    menu: Menu,
    /// `table[state][member]` is the selected state.
    table: Vec<Vec<usize>>,
    provenance: Provenance,
}

impl SelectionModel {
    /// Wrap an explicit selection table, enforcing success.
    pub fn new_explicit(
        model: BasicModel,
        menu: Menu,
        table: Vec<Vec<usize>>,
    ) -> Result<SelectionModel, ModelError> {
        if model.sig() != menu.sig() {
            return Err(ModelError::SignatureMismatch);
        }
        assert_eq!(table.len(), model.num_states());
        for (w, row) in table.iter().enumerate() {
            assert_eq!(row.len(), menu.len());
            for (j, &sel) in row.iter().enumerate() {
                if sel >= model.num_states() || !model.satisfies(sel, menu.truth_set(j)) {
                    return Err(ModelError::SuccessViolation {
                        state: model.state_name(w).to_string(),
                        formula: menu.formula(j).display(model.sig()).to_string(),
                    });
                }
            }
        }
        Ok(SelectionModel {
            model,
            menu,
            table,
            provenance: Provenance::Explicit,
        })
    }

    /// Selection induced by a well-order family: the closest state of
    /// the payload's extension. Fails if some member has an empty
    /// extension.
    pub fn induce(
        model: BasicModel,
        menu: Menu,
        family: WellOrderFamily,
    ) -> Result<SelectionModel, ModelError> {
        if model.sig() != menu.sig() {
            return Err(ModelError::SignatureMismatch);
        }
        if family.orders().len() != model.num_states() {
            return Err(ModelError::FamilySize {
                family: family.orders().len(),
                states: model.num_states(),
            });
        }
        let mut table = Vec::with_capacity(model.num_states());
        for w in 0..model.num_states() {
            let mut row = Vec::with_capacity(menu.len());
            for j in 0..menu.len() {
                let ts = menu.truth_set(j);
                let pick = family
                    .order(w)
                    .iter()
                    .copied()
                    .find(|&s| model.satisfies(s, ts))
                    .ok_or_else(|| ModelError::FRichnessViolation {
                        formula: menu.formula(j).display(model.sig()).to_string(),
                    })?;
                row.push(pick);
            }
            table.push(row);
        }
        Ok(SelectionModel {
            model,
            menu,
            table,
            provenance: Provenance::Induced(family),
        })
    }

    pub fn model(&self) -> &BasicModel {
        &self.model
    }

    pub fn menu(&self) -> &Menu {
        &self.menu
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn family(&self) -> Option<&WellOrderFamily> {
        match &self.provenance {
            Provenance::Induced(f) => Some(f),
            Provenance::Explicit => None,
        }
    }

    /// The selected state for `do(menu[member])` performed at `state`.
    pub fn select(&self, state: usize, member: usize) -> usize {
        self.table[state][member]
    }
}

/// First (state, member) pair where the state satisfies the payload but
/// the selection moves away; `None` when centering holds.
pub fn check_centering(sm: &SelectionModel) -> Option<CenteringWitness> {
    for w in 0..sm.model().num_states() {
        for j in 0..sm.menu().len() {
            if sm.model().satisfies(w, sm.menu().truth_set(j)) && sm.select(w, j) != w {
                return Some(CenteringWitness {
                    state: w,
                    member: j,
                    selected: sm.select(w, j),
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenteringWitness {
    pub state: usize,
    pub member: usize,
    pub selected: usize,
}

/// Why a family fails to be language-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LanguageBasedWitness {
    /// In `order(base)`, a state with a different theory sits between
    /// two theory-equivalent states, so the quotient order is not
    /// well-defined.
    Interleaved {
        base: usize,
        earlier: usize,
        between: usize,
        later: usize,
    },
    /// Two theory-equivalent states induce different quotient orders.
    QuotientMismatch { first: usize, second: usize },
}

/// Check that the family's quotient by theory equivalence is
/// well-defined and depends only on the theory of the base state.
/// Returns the first violation in enumeration order.
pub fn check_language_based(
    family: &WellOrderFamily,
    model: &BasicModel,
) -> Option<LanguageBasedWitness> {
    let n = model.num_states();
    // Clause (a): no interleaving inside any single order.
    for base in 0..n {
        let order = family.order(base);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let (a, b, c) = (order[i], order[j], order[k]);
                    if model.state_atom(a) == model.state_atom(c)
                        && model.state_atom(b) != model.state_atom(a)
                    {
                        return Some(LanguageBasedWitness::Interleaved {
                            base,
                            earlier: a,
                            between: b,
                            later: c,
                        });
                    }
                }
            }
        }
    }
    // Clause (b): equivalent bases share the quotient order.
    for w1 in 0..n {
        for w2 in (w1 + 1)..n {
            if model.state_atom(w1) == model.state_atom(w2)
                && quotient_order(family, model, w1) != quotient_order(family, model, w2)
            {
                return Some(LanguageBasedWitness::QuotientMismatch {
                    first: w1,
                    second: w2,
                });
            }
        }
    }
    None
}

/// Distinct theories (atoms) in the order they first appear in
/// `order(w)`. With no interleaving this is the quotient order.
pub fn quotient_order(family: &WellOrderFamily, model: &BasicModel, w: usize) -> Vec<Atom> {
    let mut seen = Vec::new();
    for &s in family.order(w) {
        let a = model.state_atom(s);
        if !seen.contains(&a) {
            seen.push(a);
        }
    }
    seen
}

/// With centering and `cond ⊨ payload`, `if cond then do(payload)` must
/// be the identity map. Returns the first moved state, if any.
pub fn check_noop_identity(
    sm: &SelectionModel,
    cond: &Formula,
    payload: &Formula,
) -> Result<Option<usize>, ModelError> {
    let sig = sm.menu().sig();
    if !cond.entails(payload, sig) {
        return Err(ModelError::PreconditionViolation(format!(
            "{} does not entail {}",
            cond.display(sig),
            payload.display(sig)
        )));
    }
    if check_centering(sm).is_some() {
        return Err(ModelError::PreconditionViolation(
            "selection model is not centered".to_string(),
        ));
    }
    let act = Action::if_then(cond.clone(), Action::Do(payload.clone()));
    let map = act
        .interpret(sm)
        .map_err(|e| ModelError::PreconditionViolation(e.to_string()))?;
    Ok(map.into_iter().enumerate().find(|(w, to)| w != to).map(|(w, _)| w))
}

/// For a language-based induced selection and a decomposition of
/// `phi` into menu members, pick the precisification index the
/// selection resolves to, then verify that every menu formula between
/// that part and `phi` acts identically on every state of the atom's
/// extension. A verification failure indicates a bug, not a property
/// of the inputs.
pub fn check_precisification(
    sm: &SelectionModel,
    phi: &Formula,
    parts: &[Formula],
    x: Atom,
) -> Result<usize, ModelError> {
    let menu = sm.menu();
    let sig = menu.sig();
    let family = sm.family().ok_or_else(|| {
        ModelError::PreconditionViolation("selection is not induced by a well-order family".into())
    })?;
    if check_language_based(family, sm.model()).is_some() {
        return Err(ModelError::PreconditionViolation(
            "well-order family is not language-based".to_string(),
        ));
    }
    let phi_idx = menu.index_of(phi).ok_or_else(|| {
        ModelError::PreconditionViolation(format!("{} is not a menu member", phi.display(sig)))
    })?;
    let mut part_indices = Vec::with_capacity(parts.len());
    for part in parts {
        part_indices.push(menu.index_of(part).ok_or_else(|| {
            ModelError::PreconditionViolation(format!(
                "decomposition member {} is not a menu member",
                part.display(sig)
            ))
        })?);
    }
    let union = parts
        .iter()
        .map(|p| p.truth_set(sig))
        .reduce(|a, b| a.union(&b))
        .ok_or_else(|| ModelError::PreconditionViolation("empty decomposition".into()))?;
    if union != phi.truth_set(sig) {
        return Err(ModelError::PreconditionViolation(format!(
            "decomposition does not cover {}",
            phi.display(sig)
        )));
    }

    let x_states = sm.model().extension(&TruthSet::from_atoms(sig, [x]));
    let chosen = match x_states.first() {
        Some(&w) => {
            let resolved = sm.select(w, phi_idx);
            (0..parts.len())
                .find(|&i| sm.model().satisfies(resolved, menu.truth_set(part_indices[i])))
                .expect("selection respects success, so some part contains it")
        }
        // No state realizes the atom: everything below is vacuous.
        None => 0,
    };

    let part_idx = part_indices[chosen];
    for j in 0..menu.len() {
        let psi_ts = menu.truth_set(j);
        if menu.truth_set(part_idx).is_subset(psi_ts) && psi_ts.is_subset(&phi.truth_set(sig)) {
            for &w in &x_states {
                if sm.select(w, j) != sm.select(w, part_idx) {
                    return Err(ModelError::ResolutionFailure {
                        part: parts[chosen].display(sig).to_string(),
                        psi: menu.formula(j).display(sig).to_string(),
                        state: sm.model().state_name(w).to_string(),
                    });
                }
            }
        }
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn sig_pq() -> Signature {
        Signature::new(["p", "q"]).unwrap()
    }

    fn rich_menu(sig: &Signature) -> Menu {
        Menu::rich(sig)
    }

    /// order(w) = w first, everything else ascending.
    fn centered_family(model: &BasicModel) -> WellOrderFamily {
        let n = model.num_states();
        let orders = (0..n)
            .map(|w| {
                let mut o = vec![w];
                o.extend((0..n).filter(|s| *s != w));
                o
            })
            .collect();
        WellOrderFamily::new(model, orders).unwrap()
    }

    #[test]
    fn canonical_model_shape() {
        let sig1 = Signature::new(["p"]).unwrap();
        let m1 = BasicModel::canonical(&sig1);
        assert_eq!(m1.num_states(), 2);
        let p_ext = m1.formula_extension(&Formula::Prop(0));
        assert_eq!(p_ext, vec![1]);
        assert_eq!(m1.state_name(1), "{p}");

        let m2 = BasicModel::canonical(&sig_pq());
        assert_eq!(m2.num_states(), 4);
        for w1 in 0..4 {
            for w2 in (w1 + 1)..4 {
                assert_ne!(m2.state_atom(w1), m2.state_atom(w2));
            }
        }
    }

    #[test]
    fn induced_selection_picks_minimum() {
        // Atoms over {p,q} index as {}=0, {p}=1, {q}=2, {p,q}=3.
        // order at {p,q}: {p,q} < {p} < {q} < {}
        let sig = sig_pq();
        let model = BasicModel::canonical(&sig);
        let mut orders: Vec<Vec<usize>> = (0..4)
            .map(|w| {
                let mut o = vec![w];
                o.extend((0..4).filter(|s| *s != w));
                o
            })
            .collect();
        orders[3] = vec![3, 1, 2, 0];
        let family = WellOrderFamily::new(&model, orders).unwrap();
        let menu = rich_menu(&sig);
        let sm = SelectionModel::induce(model, menu.clone(), family).unwrap();

        let not_p = parse_formula("!p", &sig).unwrap();
        let idx = menu.index_of(&not_p);
        // !p is not itself a member of the rich menu; select through the
        // disjunction member {} ∨ {q} which has the same truth set.
        assert!(idx.is_none());
        let disj = menu.pair_member(Atom(0), Atom(2)).unwrap();
        assert_eq!(sm.select(3, disj), 2, "closest !p-state to {{p,q}} is {{q}}");

        // From any state, an atom member selects the unique atom state.
        for w in 0..4 {
            for x in crate::logic::all_atoms(&sig) {
                let j = menu.atom_member(x).unwrap();
                assert_eq!(sm.model().state_atom(sm.select(w, j)), x);
            }
        }
    }

    #[test]
    fn interpret_do_picks_closest_state() {
        // Atoms over {p,q}: {}=0, {p}=1, {q}=2, {p,q}=3; the order at
        // {p,q} ranks {p,q} < {p} < {q} < {}.
        let sig = sig_pq();
        let model = BasicModel::canonical(&sig);
        let mut formulas: Vec<Formula> = Menu::rich(&sig).formulas().to_vec();
        formulas.push(parse_formula("!p", &sig).unwrap());
        let menu = Menu::new(&sig, formulas).unwrap();
        let mut orders: Vec<Vec<usize>> = (0..4)
            .map(|w| {
                let mut o = vec![w];
                o.extend((0..4).filter(|s| *s != w));
                o
            })
            .collect();
        orders[3] = vec![3, 1, 2, 0];
        let family = WellOrderFamily::new(&model, orders).unwrap();
        let sm = SelectionModel::induce(model, menu, family).unwrap();

        let do_not_p = Action::Do(parse_formula("!p", &sig).unwrap());
        let map = do_not_p.interpret(&sm).unwrap();
        assert_eq!(map[3], 2, "closest !p-state to {{p,q}} is {{q}}");

        // A condition that fails leaves the state alone: the implicit
        // else is do(true) and the family is centered.
        let guarded = Action::if_then(
            parse_formula("p", &sig).unwrap(),
            Action::Do(parse_formula("!p", &sig).unwrap()),
        );
        let map = guarded.interpret(&sm).unwrap();
        assert_eq!(map[0], 0);
        assert_eq!(map[2], 2);
    }

    #[test]
    fn success_is_enforced() {
        let sig = Signature::new(["p"]).unwrap();
        let model = BasicModel::canonical(&sig);
        let menu = rich_menu(&sig);
        // select({}, p) = {} violates success for payload p.
        let table = vec![vec![0, 0, 0], vec![0, 1, 1]];
        let err = SelectionModel::new_explicit(model, menu, table).unwrap_err();
        assert!(matches!(err, ModelError::SuccessViolation { .. }));
    }

    #[test]
    fn centering_check_and_witness() {
        let sig = Signature::new(["p"]).unwrap();
        let model = BasicModel::canonical(&sig);
        let menu = rich_menu(&sig);

        let centered = centered_family(&model);
        let sm = SelectionModel::induce(model.clone(), menu.clone(), centered).unwrap();
        assert_eq!(check_centering(&sm), None);

        // order at {} ranks {p} first: selecting true from {} moves.
        let family = WellOrderFamily::new(&model, vec![vec![1, 0], vec![1, 0]]).unwrap();
        let sm2 = SelectionModel::induce(model.clone(), menu.clone(), family).unwrap();
        let w = check_centering(&sm2).unwrap();
        assert_eq!(w.state, 0);
        assert_eq!(sm2.menu().formula(w.member), &Formula::True);
        assert_eq!(w.selected, 1);

        // A hand-built table that stays put wherever legal passes.
        let table = vec![vec![0, 1, 0], vec![0, 1, 1]];
        let sm3 = SelectionModel::new_explicit(model, menu, table).unwrap();
        assert_eq!(check_centering(&sm3), None);
    }

    #[test]
    fn language_based_on_duplicated_states() {
        let sig = Signature::new(["p"]).unwrap();
        // Two copies of the {p} state plus one {} state.
        let model = BasicModel::from_atoms(
            &sig,
            vec!["a".into(), "b".into(), "z".into()],
            vec![Atom(1), Atom(1), Atom(0)],
        )
        .unwrap();

        // Canonical-style model: any family is language-based.
        let canon = BasicModel::canonical(&sig);
        let fam = centered_family(&canon);
        assert_eq!(check_language_based(&fam, &canon), None);

        // Interleaving {} between the two {p} copies breaks clause (a).
        let bad = WellOrderFamily::new(
            &model,
            vec![vec![0, 2, 1], vec![1, 0, 2], vec![2, 0, 1]],
        )
        .unwrap();
        assert_eq!(
            check_language_based(&bad, &model),
            Some(LanguageBasedWitness::Interleaved {
                base: 0,
                earlier: 0,
                between: 2,
                later: 1
            })
        );

        // Copy-consistent orders pass both clauses.
        let good = WellOrderFamily::new(
            &model,
            vec![vec![0, 1, 2], vec![0, 1, 2], vec![2, 0, 1]],
        )
        .unwrap();
        assert_eq!(check_language_based(&good, &model), None);

        // Equivalent bases with different quotient orders break (b).
        let mismatched = WellOrderFamily::new(
            &model,
            vec![vec![0, 1, 2], vec![2, 0, 1], vec![2, 0, 1]],
        )
        .unwrap();
        assert_eq!(
            check_language_based(&mismatched, &model),
            Some(LanguageBasedWitness::QuotientMismatch { first: 0, second: 1 })
        );
    }

    #[test]
    fn noop_identity_under_centering() {
        let sig = sig_pq();
        let model = BasicModel::canonical(&sig);
        let menu = rich_menu(&sig);
        let family = centered_family(&model);
        let sm = SelectionModel::induce(model.clone(), menu.clone(), family).unwrap();

        let p_and_q = Atom(0b11).formula(&sig);
        let p_member = menu.pair_member(Atom(0b01), Atom(0b11)).unwrap();
        let phi = menu.formula(p_member).clone();
        assert!(p_and_q.entails(&phi, &sig));
        assert_eq!(check_noop_identity(&sm, &p_and_q, &phi), Ok(None));
        assert_eq!(check_noop_identity(&sm, &phi, &phi), Ok(None));

        // Precondition: cond must entail payload.
        assert!(matches!(
            check_noop_identity(&sm, &phi, &p_and_q),
            Err(ModelError::PreconditionViolation(_))
        ));

        // Precondition: centering.
        let mut orders: Vec<Vec<usize>> = (0..4).map(|w| {
            let mut o = vec![w];
            o.extend((0..4).filter(|s| *s != w));
            o
        }).collect();
        orders[0] = vec![1, 0, 2, 3];
        let skew = WellOrderFamily::new(&model, orders).unwrap();
        let sm2 = SelectionModel::induce(model, menu, skew).unwrap();
        assert!(matches!(
            check_noop_identity(&sm2, &p_and_q, &phi),
            Err(ModelError::PreconditionViolation(_))
        ));
    }

    #[test]
    fn precisification_resolution() {
        let sig = sig_pq();
        let model = BasicModel::canonical(&sig);
        let mut formulas: Vec<Formula> = Menu::rich(&sig).formulas().to_vec();
        formulas.push(parse_formula("p | q", &sig).unwrap());
        let menu = Menu::new(&sig, formulas).unwrap();
        let mut orders: Vec<Vec<usize>> = (0..4)
            .map(|w| {
                let mut o = vec![w];
                o.extend((0..4).filter(|s| *s != w));
                o
            })
            .collect();
        orders[3] = vec![3, 1, 2, 0];
        let family = WellOrderFamily::new(&model, orders).unwrap();
        let sm = SelectionModel::induce(model, menu.clone(), family).unwrap();

        // p | q has atoms {p}, {q}, {p,q}.
        let phi = parse_formula("p | q", &sig).unwrap();
        let parts: Vec<Formula> = [Atom(1), Atom(2), Atom(3)]
            .iter()
            .map(|a| a.formula(&sig))
            .collect();
        // From {p,q}, do(p | q) stays at {p,q} (centering), so the
        // chosen precisification is the {p,q} atom: index 2.
        assert_eq!(check_precisification(&sm, &phi, &parts, Atom(3)), Ok(2));

        // Single-part decompositions resolve to that part.
        let part_one = vec![phi.clone()];
        assert_eq!(check_precisification(&sm, &phi, &part_one, Atom(0)), Ok(0));

        // Coverage precondition.
        let short = vec![Atom(1).formula(&sig)];
        assert!(matches!(
            check_precisification(&sm, &phi, &short, Atom(0)),
            Err(ModelError::PreconditionViolation(_))
        ));
    }
}

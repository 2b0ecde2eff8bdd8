//! The action algebra over a finite menu of satisfiable formulas.
//!
//! An [`Action`] is `do(φ)` for a menu formula φ, an if-then-else split
//! on an arbitrary condition, or a sequential composition. Seq-free
//! actions compile to a [`CompiledAct`]: a total map from atoms to menu
//! formulas. Two actions with the same table are indistinguishable to
//! any table-respecting preference relation, which is why the table is
//! the unit the rest of the crate works with.
//!
//! Menu membership is by structural formula identity, not logical
//! equivalence: `do(q | !q)` and `do(true)` are different primitive
//! actions when both formulas are menu members. [`Menu::new_normalized`]
//! collapses equivalent members for callers who want extensionality.

use crate::logic::{all_atoms, Atom, Formula, ParseError, Parser, Signature, Tok, TruthSet};
use crate::models::SelectionModel;
use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MenuError {
    #[error("menu formula {0:?} is unsatisfiable")]
    Unsatisfiable(String),
    #[error("menu does not contain `true`")]
    MissingTrue,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ActionError {
    #[error("sequential composition has no atom table; compile the pieces separately")]
    SeqNotCompilable,
    #[error("do-payload {0:?} is not a menu member")]
    MenuViolation(String),
    #[error("act space has {cardinality} tables, over the cap of {cap}")]
    CapExceeded { cardinality: String, cap: u64 },
    #[error("menu is not rich enough: no member for {0}")]
    RichnessViolation(String),
}

/// Default bound on how many tables [`act_space`] may enumerate.
pub const DEFAULT_ACT_SPACE_CAP: u64 = 1_000_000;

/// An ordered, structurally deduplicated set of satisfiable formulas
/// containing `true`. Each member is an allowed `do` payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Menu {
    sig: Signature,
    formulas: Vec<Formula>,
    truth_sets: Vec<TruthSet>,
    true_idx: usize,
    /// Canonical member per atom: the member that *is* (or denotes) φ_X.
    atom_members: Vec<Option<usize>>,
    /// Canonical member per unordered atom pair, row-major over x <= y.
    pair_members: Vec<Option<usize>>,
    rich: bool,
}

impl Menu {
    pub fn new(sig: &Signature, formulas: Vec<Formula>) -> Result<Menu, MenuError> {
        let mut kept: Vec<Formula> = Vec::new();
        for f in formulas {
            if !kept.contains(&f) {
                kept.push(f);
            }
        }
        let mut truth_sets = Vec::with_capacity(kept.len());
        for f in &kept {
            let ts = f.truth_set(sig);
            if ts.is_empty() {
                return Err(MenuError::Unsatisfiable(f.display(sig).to_string()));
            }
            truth_sets.push(ts);
        }
        let true_idx = kept
            .iter()
            .position(|f| *f == Formula::True)
            .ok_or(MenuError::MissingTrue)?;

        let n_atoms = sig.atom_count();
        let atom_members: Vec<Option<usize>> = all_atoms(sig)
            .map(|x| {
                let canonical = x.formula(sig);
                let singleton = TruthSet::from_atoms(sig, [x]);
                find_member(&kept, &truth_sets, &canonical, &singleton)
            })
            .collect();
        let mut pair_members = vec![None; n_atoms * n_atoms];
        for x in 0..n_atoms {
            for y in x..n_atoms {
                let (ax, ay) = (Atom(x as u16), Atom(y as u16));
                let (canonical, target) = if x == y {
                    (ax.formula(sig), TruthSet::from_atoms(sig, [ax]))
                } else {
                    (
                        Formula::or(ax.formula(sig), ay.formula(sig)),
                        TruthSet::from_atoms(sig, [ax, ay]),
                    )
                };
                pair_members[x * n_atoms + y] = find_member(&kept, &truth_sets, &canonical, &target);
            }
        }

        let rich = (0..n_atoms).all(|x| {
            atom_members[x].is_some()
                && (x..n_atoms).all(|y| pair_members[x * n_atoms + y].is_some())
        });

        Ok(Menu {
            sig: sig.clone(),
            formulas: kept,
            truth_sets,
            true_idx,
            atom_members,
            pair_members,
            rich,
        })
    }

    /// Like [`Menu::new`] but first collapses logically equivalent members,
    /// keeping the first representative of each class.
    pub fn new_normalized(sig: &Signature, formulas: Vec<Formula>) -> Result<Menu, MenuError> {
        let mut kept: Vec<Formula> = Vec::new();
        let mut seen: Vec<TruthSet> = Vec::new();
        for f in formulas {
            let ts = f.truth_set(sig);
            if !seen.contains(&ts) {
                seen.push(ts);
                kept.push(f);
            }
        }
        Menu::new(sig, kept)
    }

    /// The standard rich menu: every atom, every pairwise disjunction of
    /// distinct atoms (skipping disjunctions that already cover all
    /// atoms, where `true` stands in for them), then `true`.
    pub fn rich(sig: &Signature) -> Menu {
        let n = sig.atom_count();
        let mut formulas = Vec::new();
        for x in all_atoms(sig) {
            formulas.push(x.formula(sig));
        }
        for x in 0..n {
            for y in (x + 1)..n {
                if n > 2 {
                    formulas.push(Formula::or(
                        Atom(x as u16).formula(sig),
                        Atom(y as u16).formula(sig),
                    ));
                }
            }
        }
        formulas.push(Formula::True);
        Menu::new(sig, formulas).expect("rich menu construction cannot fail")
    }

    pub fn sig(&self) -> &Signature {
        &self.sig
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn formula(&self, idx: usize) -> &Formula {
        &self.formulas[idx]
    }

    pub fn truth_set(&self, idx: usize) -> &TruthSet {
        &self.truth_sets[idx]
    }

    pub fn true_index(&self) -> usize {
        self.true_idx
    }

    pub fn index_of(&self, f: &Formula) -> Option<usize> {
        self.formulas.iter().position(|g| g == f)
    }

    /// Whether the menu contains a member for every atom and every
    /// pairwise disjunction of atoms.
    pub fn is_rich(&self) -> bool {
        self.rich
    }

    pub fn atom_member(&self, x: Atom) -> Result<usize, ActionError> {
        self.atom_members[x.0 as usize]
            .ok_or_else(|| ActionError::RichnessViolation(format!("atom {}", x.label(&self.sig))))
    }

    /// Canonical member denoting `φ_X ∨ φ_Y` (for `X = Y`, the atom
    /// member itself).
    pub fn pair_member(&self, x: Atom, y: Atom) -> Result<usize, ActionError> {
        let (lo, hi) = if x.0 <= y.0 { (x, y) } else { (y, x) };
        let n = self.sig.atom_count();
        self.pair_members[lo.0 as usize * n + hi.0 as usize].ok_or_else(|| {
            ActionError::RichnessViolation(format!(
                "disjunction of atoms {} and {}",
                lo.label(&self.sig),
                hi.label(&self.sig)
            ))
        })
    }

    pub fn atom_count(&self) -> usize {
        self.sig.atom_count()
    }
}

/// Prefer the canonical structural formula; otherwise the first member
/// with exactly the target truth set.
fn find_member(
    formulas: &[Formula],
    truth_sets: &[TruthSet],
    canonical: &Formula,
    target: &TruthSet,
) -> Option<usize> {
    formulas
        .iter()
        .position(|f| f == canonical)
        .or_else(|| truth_sets.iter().position(|ts| ts == target))
}

/// Syntax of actions: `do(φ)` with a menu payload, condition splits on
/// arbitrary formulas, and sequential composition (interpretable but
/// not compilable).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Do(Formula),
    IfThenElse(Formula, Box<Action>, Box<Action>),
    Seq(Box<Action>, Box<Action>),
}

impl Action {
    pub fn ite(cond: Formula, then: Action, els: Action) -> Action {
        Action::IfThenElse(cond, Box::new(then), Box::new(els))
    }

    /// `if cond then act` with the implicit `else do(true)`.
    pub fn if_then(cond: Formula, then: Action) -> Action {
        Action::ite(cond, then, Action::Do(Formula::True))
    }

    pub fn seq(first: Action, second: Action) -> Action {
        Action::Seq(Box::new(first), Box::new(second))
    }

    pub fn is_seq_free(&self) -> bool {
        match self {
            Action::Do(_) => true,
            Action::IfThenElse(_, a, b) => a.is_seq_free() && b.is_seq_free(),
            Action::Seq(..) => false,
        }
    }

    /// Compile to the total atom table. Every `do` payload must be a
    /// menu member; `Seq` has no table.
    pub fn compile(&self, menu: &Menu) -> Result<CompiledAct, ActionError> {
        match self {
            Action::Do(f) => {
                let idx = menu
                    .index_of(f)
                    .ok_or_else(|| ActionError::MenuViolation(f.display(menu.sig()).to_string()))?
                    as u16;
                Ok(CompiledAct {
                    table: vec![idx; menu.atom_count()],
                })
            }
            Action::IfThenElse(cond, a, b) => {
                let ta = a.compile(menu)?;
                let tb = b.compile(menu)?;
                let ts = cond.truth_set(menu.sig());
                let table = (0..menu.atom_count())
                    .map(|x| {
                        if ts.contains(Atom(x as u16)) {
                            ta.table[x]
                        } else {
                            tb.table[x]
                        }
                    })
                    .collect();
                Ok(CompiledAct { table })
            }
            Action::Seq(..) => Err(ActionError::SeqNotCompilable),
        }
    }

    /// Interpret as a state map in a selection model: `do(φ)` selects
    /// the closest φ-state, conditions split on where the state sits,
    /// and `Seq(a, b)` runs `a` then `b`.
    pub fn interpret(&self, sm: &SelectionModel) -> Result<Vec<usize>, ActionError> {
        match self {
            Action::Do(f) => {
                let idx = sm.menu().index_of(f).ok_or_else(|| {
                    ActionError::MenuViolation(f.display(sm.menu().sig()).to_string())
                })?;
                Ok((0..sm.model().num_states())
                    .map(|w| sm.select(w, idx))
                    .collect())
            }
            Action::IfThenElse(cond, a, b) => {
                let ma = a.interpret(sm)?;
                let mb = b.interpret(sm)?;
                let ts = cond.truth_set(sm.menu().sig());
                Ok((0..sm.model().num_states())
                    .map(|w| {
                        if ts.contains(sm.model().state_atom(w)) {
                            ma[w]
                        } else {
                            mb[w]
                        }
                    })
                    .collect())
            }
            Action::Seq(a, b) => {
                let ma = a.interpret(sm)?;
                let mb = b.interpret(sm)?;
                Ok(ma.into_iter().map(|w| mb[w]).collect())
            }
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> ActionDisplay<'a> {
        ActionDisplay { action: self, sig }
    }

    fn fmt_level(
        &self,
        f: &mut std::fmt::Formatter<'_>,
        sig: &Signature,
        branch_pos: bool,
    ) -> std::fmt::Result {
        match self {
            Action::Do(x) => write!(f, "do({})", x.display(sig)),
            Action::IfThenElse(cond, a, b) => {
                write!(f, "if {} then ", cond.display(sig))?;
                a.fmt_level(f, sig, true)?;
                write!(f, " else ")?;
                b.fmt_level(f, sig, true)
            }
            Action::Seq(a, b) => {
                if branch_pos {
                    write!(f, "(")?;
                    self.fmt_level(f, sig, false)?;
                    return write!(f, ")");
                }
                a.fmt_level(f, sig, false)?;
                write!(f, "; ")?;
                b.fmt_level(f, sig, true)
            }
        }
    }
}

pub struct ActionDisplay<'a> {
    action: &'a Action,
    sig: &'a Signature,
}

impl std::fmt::Display for ActionDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.action.fmt_level(f, self.sig, false)
    }
}

/// Parse an action. `;` binds loosest and folds left; `then`/`else`
/// branches take the largest seq-free action, and an omitted `else`
/// means `else do(true)`.
pub fn parse_action(text: &str, sig: &Signature) -> Result<Action, ParseError> {
    let mut p = Parser::new(text, sig)?;
    let act = parse_seq(&mut p)?;
    p.finish()?;
    Ok(act)
}

fn parse_seq(p: &mut Parser) -> Result<Action, ParseError> {
    let mut lhs = parse_branch(p)?;
    while p.eat(&Tok::Semi) {
        let rhs = parse_branch(p)?;
        lhs = Action::seq(lhs, rhs);
    }
    Ok(lhs)
}

fn parse_branch(p: &mut Parser) -> Result<Action, ParseError> {
    match p.peek() {
        Some(Tok::Do) => {
            p.advance();
            p.expect(Tok::LParen)?;
            let f = p.formula()?;
            p.expect(Tok::RParen)?;
            Ok(Action::Do(f))
        }
        Some(Tok::If) => {
            p.advance();
            let cond = p.formula()?;
            p.expect(Tok::Then)?;
            let then = parse_branch(p)?;
            let els = if p.eat(&Tok::Else) {
                parse_branch(p)?
            } else {
                Action::Do(Formula::True)
            };
            Ok(Action::ite(cond, then, els))
        }
        Some(Tok::LParen) => {
            p.advance();
            let inner = parse_seq(p)?;
            p.expect(Tok::RParen)?;
            Ok(inner)
        }
        _ => {
            let pos = p.here();
            Err(p
                .advance()
                .map(|t| ParseError::Unexpected {
                    pos,
                    found: t.to_string(),
                    expected: "an action".to_string(),
                })
                .unwrap_or(ParseError::UnexpectedEnd {
                    expected: "an action".to_string(),
                }))
        }
    }
}

/// The quotient of seq-free actions: a total map atom → menu member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompiledAct {
    /// Menu index per atom, indexed by atom bitmask.
    pub table: Vec<u16>,
}

impl CompiledAct {
    pub fn constant(menu: &Menu, member: usize) -> CompiledAct {
        CompiledAct {
            table: vec![member as u16; menu.atom_count()],
        }
    }

    pub fn value_at(&self, x: Atom) -> usize {
        self.table[x.0 as usize] as usize
    }

    /// The canonical action realizing this table: a right-nested
    /// if-chain over atoms in ascending bitmask order.
    pub fn canonical_action(&self, menu: &Menu) -> Action {
        let order: Vec<Atom> = all_atoms(menu.sig()).collect();
        self.chain_action(menu, &order)
    }

    /// An if-chain visiting atoms in the given order; every order
    /// compiles back to the same table.
    pub fn chain_action(&self, menu: &Menu, order: &[Atom]) -> Action {
        assert_eq!(order.len(), self.table.len());
        let last = order[order.len() - 1];
        let mut act = Action::Do(menu.formula(self.value_at(last)).clone());
        for &x in order[..order.len() - 1].iter().rev() {
            act = Action::ite(
                x.formula(menu.sig()),
                Action::Do(menu.formula(self.value_at(x)).clone()),
                act,
            );
        }
        act
    }
}

/// Total number of tables over the menu, `|F|^(2^|Φ|)`.
pub fn act_space_size(menu: &Menu) -> BigUint {
    BigUint::from(menu.len()).pow(menu.atom_count() as u32)
}

/// Enumerate every table exactly once, lexicographically by the
/// atom-indexed tuple of menu indices (atom 0 most significant).
pub fn act_space(menu: &Menu, cap: u64) -> Result<ActSpace, ActionError> {
    let cardinality = act_space_size(menu);
    if cardinality > BigUint::from(cap) {
        return Err(ActionError::CapExceeded {
            cardinality: cardinality.to_string(),
            cap,
        });
    }
    Ok(ActSpace {
        menu_len: menu.len() as u16,
        next: Some(vec![0; menu.atom_count()]),
    })
}

pub struct ActSpace {
    menu_len: u16,
    next: Option<Vec<u16>>,
}

impl Iterator for ActSpace {
    type Item = CompiledAct;

    fn next(&mut self) -> Option<CompiledAct> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        // Increment like a base-|F| counter, least significant last.
        let mut i = succ.len();
        loop {
            if i == 0 {
                self.next = None;
                break;
            }
            i -= 1;
            if succ[i] + 1 < self.menu_len {
                succ[i] += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(CompiledAct { table: current })
    }
}

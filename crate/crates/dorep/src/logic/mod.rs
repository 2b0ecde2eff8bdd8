//! Finite propositional signatures, formulas, truth-table semantics.
//!
//! A [`Signature`] fixes an ordered set of primitive propositions (at most
//! 16, so an [`Atom`], one full truth assignment, packs into a `u16`
//! bitmask). Formulas are plain ASTs; their semantics is the [`TruthSet`]
//! of satisfying atoms, and entailment/equivalence are subset/equality
//! checks on those sets. Everything else in the crate sits on top of this.

mod parse;

pub use parse::{parse_formula, ParseError};
pub(crate) use parse::{Parser, Tok};

use crate::bitset::BitSet;
use thiserror::Error;

/// Hard cap on signature size: atoms must fit a 16-bit mask and every
/// check in the crate enumerates all `2^|props|` atoms.
pub const MAX_PROPS: usize = 16;

/// Words that the formula/action grammars claim for themselves.
const RESERVED: &[&str] = &["true", "false", "do", "if", "then", "else"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("proposition name {0:?} is not a valid identifier")]
    BadName(String),
    #[error("proposition name {0:?} is a reserved word")]
    Reserved(String),
    #[error("duplicate proposition name {0:?}")]
    Duplicate(String),
    #[error("too many propositions: {0} (maximum {MAX_PROPS})")]
    TooMany(usize),
}

/// An ordered set of proposition names. The ordering is fixed at
/// construction and is the canonical order used for atom bitmasks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    props: Vec<String>,
}

impl Signature {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, SignatureError> {
        let props: Vec<String> = names.into_iter().map(Into::into).collect();
        if props.len() > MAX_PROPS {
            return Err(SignatureError::TooMany(props.len()));
        }
        for (i, name) in props.iter().enumerate() {
            if !is_ident(name) {
                return Err(SignatureError::BadName(name.clone()));
            }
            if RESERVED.contains(&name.as_str()) {
                return Err(SignatureError::Reserved(name.clone()));
            }
            if props[..i].contains(name) {
                return Err(SignatureError::Duplicate(name.clone()));
            }
        }
        Ok(Signature { props })
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn props(&self) -> &[String] {
        &self.props
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.props[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.props.iter().position(|p| p == name)
    }

    /// Number of atoms, `2^|props|`.
    pub fn atom_count(&self) -> usize {
        1 << self.props.len()
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// One complete truth assignment: bit `i` set means proposition `i` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub u16);

impl Atom {
    pub fn contains(&self, prop: usize) -> bool {
        self.0 & (1 << prop) != 0
    }

    /// The conjunction of literals fixing every proposition, in
    /// signature order: positive for members, negated otherwise.
    /// Over the empty signature this is `true`.
    pub fn formula(&self, sig: &Signature) -> Formula {
        let lits = (0..sig.len()).map(|i| {
            if self.contains(i) {
                Formula::Prop(i)
            } else {
                Formula::not(Formula::Prop(i))
            }
        });
        lits.reduce(Formula::and).unwrap_or(Formula::True)
    }

    /// Set-style label, e.g. `{}`, `{p}`, `{p,q}`.
    pub fn label(&self, sig: &Signature) -> String {
        let members: Vec<&str> = (0..sig.len())
            .filter(|i| self.contains(*i))
            .map(|i| sig.name(i))
            .collect();
        format!("{{{}}}", members.join(","))
    }

    pub fn parse_label(text: &str, sig: &Signature) -> Option<Atom> {
        let inner = text.strip_prefix('{')?.strip_suffix('}')?;
        let mut mask = 0u16;
        if !inner.is_empty() {
            for part in inner.split(',') {
                let idx = sig.index_of(part.trim())?;
                mask |= 1 << idx;
            }
        }
        Some(Atom(mask))
    }
}

/// All atoms of the signature in ascending bitmask order.
pub fn all_atoms(sig: &Signature) -> impl Iterator<Item = Atom> {
    (0..sig.atom_count() as u16).map(Atom)
}

/// A propositional formula over some signature. `Prop` holds the index
/// of the proposition in the owning [`Signature`]; parsing resolves
/// names, printing needs the signature back (see [`Formula::display`]).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Prop(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }
    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }
    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }
    pub fn implies(f: Formula, g: Formula) -> Formula {
        Formula::Implies(Box::new(f), Box::new(g))
    }
    pub fn iff(f: Formula, g: Formula) -> Formula {
        Formula::Iff(Box::new(f), Box::new(g))
    }

    /// Truth value under a single assignment.
    pub fn eval_at(&self, atom: Atom) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Prop(i) => atom.contains(*i),
            Formula::Not(f) => !f.eval_at(atom),
            Formula::And(f, g) => f.eval_at(atom) && g.eval_at(atom),
            Formula::Or(f, g) => f.eval_at(atom) || g.eval_at(atom),
            Formula::Implies(f, g) => !f.eval_at(atom) || g.eval_at(atom),
            Formula::Iff(f, g) => f.eval_at(atom) == g.eval_at(atom),
        }
    }

    /// The set of satisfying atoms, computed by structural recursion on
    /// the formula with set operations at each connective.
    pub fn truth_set(&self, sig: &Signature) -> TruthSet {
        let n = sig.atom_count();
        match self {
            Formula::True => TruthSet::full(sig),
            Formula::False => TruthSet::empty(sig),
            Formula::Prop(i) => {
                let mut bits = BitSet::empty(n);
                for a in 0..n {
                    if Atom(a as u16).contains(*i) {
                        bits.insert(a);
                    }
                }
                TruthSet { bits }
            }
            Formula::Not(f) => TruthSet {
                bits: f.truth_set(sig).bits.complement(),
            },
            Formula::And(f, g) => TruthSet {
                bits: f.truth_set(sig).bits.intersect(&g.truth_set(sig).bits),
            },
            Formula::Or(f, g) => TruthSet {
                bits: f.truth_set(sig).bits.union(&g.truth_set(sig).bits),
            },
            Formula::Implies(f, g) => TruthSet {
                bits: f
                    .truth_set(sig)
                    .bits
                    .complement()
                    .union(&g.truth_set(sig).bits),
            },
            Formula::Iff(f, g) => {
                let a = f.truth_set(sig).bits;
                let b = g.truth_set(sig).bits;
                TruthSet {
                    bits: a.intersect(&b).union(&a.complement().intersect(&b.complement())),
                }
            }
        }
    }

    pub fn is_satisfiable(&self, sig: &Signature) -> bool {
        !self.truth_set(sig).is_empty()
    }

    /// `self ⊨ other`: every satisfying atom of `self` satisfies `other`.
    pub fn entails(&self, other: &Formula, sig: &Signature) -> bool {
        self.truth_set(sig).bits.is_subset(&other.truth_set(sig).bits)
    }

    /// Mutual entailment.
    pub fn equivalent(&self, other: &Formula, sig: &Signature) -> bool {
        self.truth_set(sig) == other.truth_set(sig)
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, sig }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            Formula::Not(..) => 5,
            _ => 6,
        }
    }

    fn fmt_prec(&self, f: &mut std::fmt::Formatter<'_>, sig: &Signature, ctx: u8) -> std::fmt::Result {
        let prec = self.prec();
        if prec < ctx {
            write!(f, "(")?;
            self.fmt_prec(f, sig, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Prop(i) => write!(f, "{}", sig.name(*i)),
            Formula::Not(x) => {
                write!(f, "!")?;
                x.fmt_prec(f, sig, 5)
            }
            // Left-associative connectives print the left child at their
            // own level and the right one tighter, so reparsing rebuilds
            // the same tree; `->` is right-associative, mirrored.
            Formula::And(l, r) => {
                l.fmt_prec(f, sig, 4)?;
                write!(f, " & ")?;
                r.fmt_prec(f, sig, 5)
            }
            Formula::Or(l, r) => {
                l.fmt_prec(f, sig, 3)?;
                write!(f, " | ")?;
                r.fmt_prec(f, sig, 4)
            }
            Formula::Implies(l, r) => {
                l.fmt_prec(f, sig, 3)?;
                write!(f, " -> ")?;
                r.fmt_prec(f, sig, 2)
            }
            Formula::Iff(l, r) => {
                l.fmt_prec(f, sig, 1)?;
                write!(f, " <-> ")?;
                r.fmt_prec(f, sig, 2)
            }
        }
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
}

impl std::fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.formula.fmt_prec(f, self.sig, 0)
    }
}

/// Semantics of a formula: the set of atoms that satisfy it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruthSet {
    pub(crate) bits: BitSet,
}

impl TruthSet {
    pub fn empty(sig: &Signature) -> Self {
        TruthSet {
            bits: BitSet::empty(sig.atom_count()),
        }
    }

    pub fn full(sig: &Signature) -> Self {
        TruthSet {
            bits: BitSet::full(sig.atom_count()),
        }
    }

    pub fn from_atoms(sig: &Signature, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut bits = BitSet::empty(sig.atom_count());
        for a in atoms {
            bits.insert(a.0 as usize);
        }
        TruthSet { bits }
    }

    pub fn contains(&self, atom: Atom) -> bool {
        self.bits.contains(atom.0 as usize)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        self.bits.iter().map(|i| Atom(i as u16))
    }

    pub fn is_subset(&self, other: &TruthSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &TruthSet) -> TruthSet {
        TruthSet {
            bits: self.bits.union(&other.bits),
        }
    }
}

//! Decision theory over a finite propositional language of action.
//!
//! Actions are built from `do(φ)` primitives ("make φ true") whose
//! underspecified effects are resolved by Stalnaker-style selection
//! functions: `do(φ)` maps each state to the closest φ-state. The crate
//! provides
//!
//! - the propositional substrate ([`logic`]) and the action algebra
//!   with its compilation to atom-indexed tables ([`actions`]),
//! - selection models, well-order families, and their structural
//!   checks ([`models`]),
//! - preference relations over compiled acts, conditional preference,
//!   and the closeness relation they induce ([`preferences`]),
//! - checkers for the four decision axioms (cancellation, centering,
//!   sufficiently specific conditions, closeness transitivity), each
//!   returning a pass or a self-contained counterexample ([`axioms`]),
//! - constructive synthesis of a subjective-expected-utility
//!   representation from a preference relation, with an exact linear
//!   feasibility solver underneath ([`representation`], [`feasibility`]),
//! - file formats and the batch pipeline behind the `dorep` binary
//!   ([`io`], [`pipeline`], [`cli`]).
//!
//! All arithmetic is exact rational; identical seeds give byte-identical
//! outputs.

mod bitset;

pub mod actions;
pub mod axioms;
pub mod cli;
pub mod feasibility;
pub mod io;
pub mod logic;
pub mod models;
pub mod pipeline;
pub mod preferences;
pub mod rat;
pub mod representation;

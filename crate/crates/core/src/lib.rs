//! Bisimulation minimization of Kripke structures.
//!
//! The crate computes the smallest Kripke structure that is bisimulation
//! equivalent to a given one: for finite structures directly, and for
//! infinite structures presented by a simple graph grammar by first folding
//! the grammar into a finite structure.
//!
//! - [`kripke`]: data model, `.kripke` text format, DOT export, coalgebra view.
//! - [`bisim`]: bisimulation relations, bisimilarity, equivalence.
//! - [`minimize`]: partition refinement, quotients, isomorphism.
//! - [`unwind`]: finite-depth unwinding trees.
//! - [`grammar`]: `.kgram` grammars, folding and bounded unfolding.
//! - [`ctl`]: CTL parser and explicit-state checker.

pub mod bisim;
pub mod ctl;
pub mod error;
pub mod grammar;
pub mod kripke;
pub mod minimize;
pub mod unwind;

pub use error::{Error, GrammarError, Result};
pub use kripke::{KripkeBuilder, KripkeStructure};

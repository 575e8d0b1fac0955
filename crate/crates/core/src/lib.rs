//! Deep two-terminal fuzzy systems.
//!
//! A system is an undirected graph with an input and an output terminal
//! whose edges carry membership variables or counted calls to other systems.
//! Its transmission is the max over input-output chains of the min along each
//! chain. It can be computed symbolically ([`chain::derive_ftf`],
//! [`recursion::symbolic_expand`]), by budgeted recursion
//! ([`recursion::eval_system`], [`trace::trace_eval`]) or by max-min closure
//! ([`closure::transmission`]); [`oracle`] and [`check`] cross-check them.

pub mod chain;
pub mod check;
pub mod cli;
pub mod closure;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod membership;
pub mod oracle;
pub mod random;
pub mod recursion;
pub mod system;
pub mod trace;

pub use error::{Error, Result};
pub use expr::{Atom, FtfExpr, Notation, Term};
pub use membership::{Assignment, Membership};
pub use system::{FuzzySystem, SystemRegistry};

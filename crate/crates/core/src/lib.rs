//! Finite-tree analysis for logic programs over rational trees.
//!
//! The crate provides the concrete solved-form semantics, a BDD library for
//! Boolean formulas, the set-sharing/freeness/linearity domain, the
//! finite-tree component combined with it, and finiteness and groundness
//! dependency domains, together with a small Prolog-subset analyzer.

pub mod analyzer;
pub mod boolfun;
pub mod concrete;
pub mod deps;
pub mod gen;
pub mod hp;
pub mod parse;
pub mod program;
pub mod report;
pub mod sfl;
pub mod subst;
pub mod term;

pub use concrete::{rat_unify, ClashFailure};
pub use subst::{check_rsubst, Binding, RSubst, SubstError};
pub use term::{Term, Var, VarRegistry, VarSet};
pub use analyzer::{analyze, Analyzer, Domain, Options};
pub use parse::{parse_program, SyntaxError};
pub use program::{Goal, PredId, Program};
pub use report::{build_report, render_text, Report};

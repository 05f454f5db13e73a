//! DATALOG with constraints (DC): an answer-set programming system whose
//! programs are propositional clauses plus Horn rules.
//!
//! A theory has four parts. Constraint clauses and select (cardinality)
//! constraints restrict a guessed set `M` of constraint atoms; Horn rules
//! close `M` into its least model; post-constraints must hold in that
//! closure. The crate provides:
//!
//! * [`model`]: theories, least models, and the answer-set check,
//! * [`format`]: the line-oriented propositional text format,
//! * [`ground`]: the predicate-level language and its grounder,
//! * [`solve`]: a Davis-Putnam search with lookahead,
//! * [`bench`]: generators for the standard benchmark families.
//!
//! The book under `book/` explains each piece in more depth; its code
//! listings are compiled as doctests of this crate.

pub mod bench;
pub mod diagnostic;
pub mod format;
pub mod ground;
pub mod model;
pub mod solve;

pub use model::{
    is_answer_set, least_model, Atom, AtomKind, CandidateSet, Literal, Theory, TheoryError, Verdict,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/theories.md")]
    mod theories {}
    #[doc = include_str!("../../../book/src/format.md")]
    mod format {}
    #[doc = include_str!("../../../book/src/grounding.md")]
    mod grounding {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

//! The DC theory data model and its answer-set semantics.

mod atoms;
mod horn;
mod semantics;
mod theory;

use thiserror::Error;

pub use atoms::{Atom, AtomKind, AtomTable, Literal};
pub use horn::{least_model, HornIndex};
pub(crate) use semantics::evaluate;
pub use semantics::{
    brute_force_answer_sets, check_pre_constraints, is_answer_set, CandidateSet, ClosureResult,
    Verdict, Violation, BRUTE_FORCE_LIMIT,
};
pub use theory::{
    CanonicalTheory, Clause, ClauseRole, HornRule, SelectConstraint, Theory, TheoryBuilder,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("atom `{0}` is declared twice")]
    DuplicateAtom(String),
    #[error("atom `{0}` is not declared")]
    UndeclaredAtom(String),
    #[error("atom id {0} is out of range")]
    UnknownAtom(u32),
    #[error("atom `{atom}` has kind {found}, expected {expected}")]
    KindMismatch {
        atom: String,
        expected: AtomKind,
        found: AtomKind,
    },
    #[error("select lower bound {lower} exceeds upper bound {upper}")]
    InvalidSelect { lower: usize, upper: usize },
    #[error("`{0}` is not a constraint atom of the theory")]
    InvalidAtom(String),
    #[error("{atoms} constraint atoms exceed the exhaustive-search limit of {limit}")]
    TooLarge { atoms: usize, limit: usize },
}

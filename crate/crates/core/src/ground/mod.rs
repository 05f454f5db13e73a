//! The predicate-level DC language and its grounder.
//!
//! A program lists EDB facts, finite domains, typed variables, and schemas
//! (`c:` clauses, `h:` Horn rules, `p:` post-constraints, `s:` selects)
//! guarded by EDB lookups and comparisons:
//!
//! ```text
//! #domain vertex = edge[1].
//! #var X, Y, Z : vertex.
//! edge(1,2). edge(2,3). edge(3,1). start(1).
//! c: -hc(X,Y) | -hc(X,Z) :- edge(X,Y), edge(X,Z), Y < Z.
//! h: hc(X,Y) -> vstd(Y) :- start(X), edge(X,Y).
//! s: 1 1 Y : color(X,Y) :- .
//! ```
//!
//! Grounding instantiates every schema over the cross product of its
//! variables' domains, keeps the instances whose guard holds, and emits the
//! corresponding propositional theory.

mod ast;
mod eval;
mod grounder;
mod parse;

use thiserror::Error;

use crate::model::TheoryError;

pub use ast::{
    ArithOp, CmpOp, Const, DomainSource, Edb, Expr, Guard, GuardItem, PredAtom, PredicateProgram,
    Schema, SchemaBody, SchemaLiteral,
};
pub use eval::{
    compute_ranges, eval_expr, eval_guard, eval_guard_item, ground_atom_name, Ranges, Substitution,
};
pub use grounder::ground;
pub use parse::parse_program;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("type error: {message} under {substitution}")]
    Type {
        message: String,
        substitution: String,
    },
    #[error("integer overflow evaluating `{expr}` under {substitution}")]
    Overflow { expr: String, substitution: String },
    #[error("variable `{var}` is unbound under {substitution}")]
    Unbound { var: String, substitution: String },
    #[error("schema on line {line}: {source}")]
    Theory {
        line: usize,
        #[source]
        source: TheoryError,
    },
}

//! The line-oriented propositional DC format.
//!
//! ```text
//! dc 1.0
//! % comments run to the end of the line
//! #atoms c: a b c        % constraint atoms
//! #atoms h: d            % Horn atoms
//! c: -a b                % constraint clause  ¬a ∨ b
//! s: 1 2 : a b c         % select: between 1 and 2 of {a, b, c}
//! h: a b -> d            % Horn rule  a ∧ b → d
//! p: -d c                % post-constraint  ¬d ∨ c
//! ```
//!
//! Atoms must be declared before use. Names match
//! `[A-Za-z_][A-Za-z0-9_()'",.]*`, so ground atoms such as `hc(1,2)` are
//! single tokens.

mod parse;

use std::fmt::Write;

use crate::diagnostic::{Diagnostic, DiagnosticKind};
use crate::model::{AtomKind, Clause, Theory};

pub use parse::parse_theory;

pub const HEADER: &str = "dc 1.0";

pub fn is_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || "_()'\",.".contains(c))
}

fn write_literals(out: &mut String, theory: &Theory, clause: &Clause) {
    for lit in clause.literals() {
        out.push(' ');
        if !lit.is_positive() {
            out.push('-');
        }
        out.push_str(theory.atoms().name(lit.atom()));
    }
}

/// Canonical text for `theory`: atoms in id order, then constraint clauses,
/// selects, Horn rules and post-constraints, each in theory order.
pub fn serialize_theory(theory: &Theory) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for (kind, tag) in [(AtomKind::Constraint, "c:"), (AtomKind::Horn, "h:")] {
        out.push_str("#atoms ");
        out.push_str(tag);
        for (_, name, _) in theory.atoms().iter().filter(|&(_, _, k)| k == kind) {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
    }
    for clause in theory.constraints() {
        out.push_str("c:");
        write_literals(&mut out, theory, clause);
        out.push('\n');
    }
    for select in theory.selects() {
        let _ = write!(out, "s: {} {} :", select.lower(), select.upper());
        for &a in select.scope() {
            out.push(' ');
            out.push_str(theory.atoms().name(a));
        }
        out.push('\n');
    }
    for rule in theory.horn() {
        out.push_str("h:");
        for &a in rule.body() {
            out.push(' ');
            out.push_str(theory.atoms().name(a));
        }
        out.push_str(" -> ");
        out.push_str(theory.atoms().name(rule.head()));
        out.push('\n');
    }
    for clause in theory.post() {
        out.push_str("p:");
        write_literals(&mut out, theory, clause);
        out.push('\n');
    }
    out
}

/// Lint an in-memory theory. Warnings cover unused declarations, tautologies
/// and selects with an empty scope; errors cover kind violations.
pub fn validate_theory(theory: &Theory) -> Vec<Diagnostic> {
    let atoms = theory.atoms();
    let mut out = Vec::new();
    for a in theory.unused_atoms() {
        out.push(Diagnostic::warning(
            DiagnosticKind::UnusedAtom,
            None,
            format!("atom `{}` is declared but never used", atoms.name(a)),
        ));
    }
    for (i, clause) in theory.constraints().iter().enumerate() {
        if let Some(lit) = clause
            .literals()
            .iter()
            .find(|l| atoms.kind(l.atom()) != AtomKind::Constraint)
        {
            out.push(Diagnostic::error(
                DiagnosticKind::Kind,
                None,
                format!(
                    "constraint clause {i} mentions Horn atom `{}`",
                    atoms.name(lit.atom())
                ),
            ));
        }
    }
    for (label, clauses) in [
        ("constraint", theory.constraints()),
        ("post", theory.post()),
    ] {
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_tautology() {
                out.push(Diagnostic::warning(
                    DiagnosticKind::Tautology,
                    None,
                    format!("{label} clause {i} is a tautology"),
                ));
            }
        }
    }
    for (i, select) in theory.selects().iter().enumerate() {
        if select.scope().is_empty() {
            out.push(Diagnostic::warning(
                DiagnosticKind::EmptySelect,
                None,
                format!("select {i} has an empty scope"),
            ));
        }
        if select.lower() > select.upper() {
            out.push(Diagnostic::error(
                DiagnosticKind::Syntax,
                None,
                format!("select {i} has lower bound above upper bound"),
            ));
        }
        if let Some(&a) = select
            .scope()
            .iter()
            .find(|&&a| atoms.kind(a) != AtomKind::Constraint)
        {
            out.push(Diagnostic::error(
                DiagnosticKind::Kind,
                None,
                format!("select {i} ranges over Horn atom `{}`", atoms.name(a)),
            ));
        }
    }
    for (i, rule) in theory.horn().iter().enumerate() {
        if atoms.kind(rule.head()) != AtomKind::Horn {
            out.push(Diagnostic::error(
                DiagnosticKind::Kind,
                None,
                format!(
                    "rule {i} derives constraint atom `{}`",
                    atoms.name(rule.head())
                ),
            ));
        }
    }
    out
}

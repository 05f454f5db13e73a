use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use indexmap::IndexMap;

use crate::diagnostic::{Diagnostic, DiagnosticKind};

use super::ast::*;
use super::GroundError;

/// A binding of variables to constants.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: HashMap<String, Const>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: &str, value: Const) {
        self.bindings.insert(var.to_string(), value);
    }

    pub fn unbind(&mut self, var: &str) {
        self.bindings.remove(var);
    }

    pub fn get(&self, var: &str) -> Option<&Const> {
        self.bindings.get(var)
    }
}

impl<'a, I> From<I> for Substitution
where
    I: IntoIterator<Item = (&'a str, Const)>,
{
    fn from(pairs: I) -> Self {
        let mut s = Substitution::new();
        for (v, c) in pairs {
            s.bind(v, c);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pairs: Vec<_> = self.bindings.iter().collect();
        pairs.sort();
        f.write_str("{")?;
        for (i, (v, c)) in pairs.into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}→{c}")?;
        }
        f.write_str("}")
    }
}

/// Resolved variable ranges.
#[derive(Debug, Clone, Default)]
pub struct Ranges {
    /// Domain name to its constants, in domain order.
    pub domains: IndexMap<String, Vec<Const>>,
    /// Variable name to the constants it ranges over.
    pub vars: IndexMap<String, Vec<Const>>,
    /// One `EmptyDomain` warning per empty domain.
    pub warnings: Vec<Diagnostic>,
}

/// Resolves every domain declaration and variable range. Explicit domains
/// keep declaration order; column domains keep first-occurrence order among
/// the EDB facts. Duplicates are dropped.
pub fn compute_ranges(program: &PredicateProgram) -> Ranges {
    let mut ranges = Ranges::default();
    for (name, source) in &program.domains {
        let mut values: Vec<Const> = Vec::new();
        let mut push = |c: &Const| {
            if !values.contains(c) {
                values.push(c.clone());
            }
        };
        match source {
            DomainSource::Explicit(list) => list.iter().for_each(&mut push),
            DomainSource::Column { pred, column } => {
                for (p, args) in program.edb.facts() {
                    if p == pred {
                        if let Some(c) = args.get(column.wrapping_sub(1)) {
                            push(c);
                        }
                    }
                }
            }
        }
        if values.is_empty() {
            ranges.warnings.push(Diagnostic::warning(
                DiagnosticKind::EmptyDomain,
                None,
                format!("domain `{name}` is empty"),
            ));
        }
        ranges.domains.insert(name.clone(), values);
    }
    for (var, domain) in &program.var_decls {
        let values = ranges.domains.get(domain).cloned().unwrap_or_default();
        ranges.vars.insert(var.clone(), values);
    }
    ranges
}

fn unbound(var: &str, sub: &Substitution) -> GroundError {
    GroundError::Unbound {
        var: var.to_string(),
        substitution: sub.to_string(),
    }
}

pub fn eval_expr(expr: &Expr, sub: &Substitution) -> Result<Const, GroundError> {
    match expr {
        Expr::Var(v) => sub.get(v).cloned().ok_or_else(|| unbound(v, sub)),
        Expr::Const(c) => Ok(c.clone()),
        Expr::Binary(op, l, r) => {
            let (l, r) = (eval_expr(l, sub)?, eval_expr(r, sub)?);
            let (Const::Int(a), Const::Int(b)) = (&l, &r) else {
                return Err(GroundError::Type {
                    message: format!("arithmetic on non-integer constant in `{expr}`"),
                    substitution: sub.to_string(),
                });
            };
            let value = match op {
                ArithOp::Add => a.checked_add(*b),
                ArithOp::Sub => a.checked_sub(*b),
                ArithOp::Mul => a.checked_mul(*b),
            };
            value.map(Const::Int).ok_or_else(|| GroundError::Overflow {
                expr: expr.to_string(),
                substitution: sub.to_string(),
            })
        }
    }
}

fn compare(op: CmpOp, l: &Const, r: &Const, sub: &Substitution) -> Result<bool, GroundError> {
    let ordering = match (l, r) {
        (Const::Int(a), Const::Int(b)) => a.cmp(b),
        (Const::Sym(a), Const::Sym(b)) => a.cmp(b),
        _ => match op {
            CmpOp::Eq => return Ok(false),
            CmpOp::Ne => return Ok(true),
            _ => {
                return Err(GroundError::Type {
                    message: format!("cannot order integer against symbol ({l} vs {r})"),
                    substitution: sub.to_string(),
                })
            }
        },
    };
    Ok(match op {
        CmpOp::Eq => ordering == Ordering::Equal,
        CmpOp::Ne => ordering != Ordering::Equal,
        CmpOp::Lt => ordering == Ordering::Less,
        CmpOp::Le => ordering != Ordering::Greater,
        CmpOp::Gt => ordering == Ordering::Greater,
        CmpOp::Ge => ordering != Ordering::Less,
    })
}

pub fn eval_guard_item(
    item: &GuardItem,
    sub: &Substitution,
    edb: &Edb,
) -> Result<bool, GroundError> {
    match item {
        GuardItem::Edb { atom, negated } => {
            let args = atom
                .args
                .iter()
                .map(|a| eval_expr(a, sub))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(edb.contains(&atom.pred, &args) != *negated)
        }
        GuardItem::Compare { left, op, right } => {
            compare(*op, &eval_expr(left, sub)?, &eval_expr(right, sub)?, sub)
        }
    }
}

/// Evaluates a guard conjunction left to right, stopping at the first false
/// conjunct.
pub fn eval_guard(guard: &[GuardItem], sub: &Substitution, edb: &Edb) -> Result<bool, GroundError> {
    for item in guard {
        if !eval_guard_item(item, sub, edb)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Name of the ground instance of `atom` under `sub`, e.g. `hc(1,2)`.
pub fn ground_atom_name(atom: &PredAtom, sub: &Substitution) -> Result<String, GroundError> {
    if atom.args.is_empty() {
        return Ok(atom.pred.clone());
    }
    let mut name = atom.pred.clone();
    name.push('(');
    for (i, arg) in atom.args.iter().enumerate() {
        if i > 0 {
            name.push(',');
        }
        match eval_expr(arg, sub)? {
            Const::Int(n) if n < 0 => {
                return Err(GroundError::Type {
                    message: format!(
                        "negative constant {n} cannot appear in atom `{}`",
                        atom.pred
                    ),
                    substitution: sub.to_string(),
                })
            }
            c => name.push_str(&c.to_string()),
        }
    }
    name.push(')');
    Ok(name)
}

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;

use crate::model::AtomKind;

/// A constant of the predicate language.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    Int(i64),
    Sym(String),
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Int(n) => write!(f, "{n}"),
            Const::Sym(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Const {
    fn from(n: i64) -> Self {
        Const::Int(n)
    }
}

impl From<&str> for Const {
    fn from(s: &str) -> Self {
        Const::Sym(s.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Integer arithmetic over variables and constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String),
    Const(Const),
    Binary(ArithOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            Expr::Var(v) => f(v),
            Expr::Const(_) => {}
            Expr::Binary(_, l, r) => {
                l.visit_vars(f);
                r.visit_vars(f);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Binary(op, l, r) => {
                let op = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                    ArithOp::Mul => "*",
                };
                write!(f, "({l} {op} {r})")
            }
        }
    }
}

/// `pred(arg, ...)` with arguments that may still contain variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredAtom {
    pub pred: String,
    pub args: Vec<Expr>,
}

impl PredAtom {
    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        for arg in &self.args {
            arg.visit_vars(f);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

/// One conjunct of a guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardItem {
    /// An EDB lookup, negated under the closed-world reading when
    /// `negated` is set.
    Edb {
        atom: PredAtom,
        negated: bool,
    },
    Compare {
        left: Expr,
        op: CmpOp,
        right: Expr,
    },
}

impl GuardItem {
    pub fn visit_vars<'a>(&'a self, f: &mut impl FnMut(&'a str)) {
        match self {
            GuardItem::Edb { atom, .. } => atom.visit_vars(f),
            GuardItem::Compare { left, right, .. } => {
                left.visit_vars(f);
                right.visit_vars(f);
            }
        }
    }
}

pub type Guard = Vec<GuardItem>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaLiteral {
    pub atom: PredAtom,
    pub positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemaBody {
    Clause(Vec<SchemaLiteral>),
    Horn {
        body: Vec<PredAtom>,
        head: PredAtom,
    },
    Post(Vec<SchemaLiteral>),
    /// For every binding of the free variables, between `lower` and `upper`
    /// instances of `target` over the `bound` variables are true.
    Select {
        lower: usize,
        upper: usize,
        bound: Vec<String>,
        target: PredAtom,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub body: SchemaBody,
    pub guard: Guard,
    /// Source line of the statement, for diagnostics.
    pub line: usize,
}

impl Schema {
    /// Variables in order of first occurrence: body first, then guard.
    pub fn variables<'a>(&'a self) -> Vec<&'a str> {
        let mut seen: Vec<&str> = Vec::new();
        let mut push = |v: &'a str| {
            if !seen.contains(&v) {
                seen.push(v);
            }
        };
        match &self.body {
            SchemaBody::Clause(lits) | SchemaBody::Post(lits) => {
                for lit in lits {
                    lit.atom.visit_vars(&mut push);
                }
            }
            SchemaBody::Horn { body, head } => {
                for a in body {
                    a.visit_vars(&mut push);
                }
                head.visit_vars(&mut push);
            }
            SchemaBody::Select { bound, target, .. } => {
                target.visit_vars(&mut push);
                for v in bound {
                    push(v.as_str());
                }
            }
        }
        for item in &self.guard {
            item.visit_vars(&mut push);
        }
        seen
    }

    pub fn atoms(&self) -> Vec<&PredAtom> {
        match &self.body {
            SchemaBody::Clause(lits) | SchemaBody::Post(lits) => {
                lits.iter().map(|l| &l.atom).collect()
            }
            SchemaBody::Horn { body, head } => body.iter().chain(std::iter::once(head)).collect(),
            SchemaBody::Select { target, .. } => vec![target],
        }
    }
}

/// Where a domain's constants come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DomainSource {
    Explicit(Vec<Const>),
    /// Constants of a 1-based column of an EDB predicate, in order of first
    /// occurrence among the facts.
    Column {
        pred: String,
        column: usize,
    },
}

/// Ground input facts, kept in source order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Edb {
    facts: Vec<(String, Vec<Const>)>,
    index: HashMap<String, HashSet<Vec<Const>>>,
    arity: HashMap<String, usize>,
}

impl Edb {
    /// Adds a fact; returns false (and stores nothing) when the predicate is
    /// already known with a different arity.
    pub fn insert(&mut self, pred: &str, args: Vec<Const>) -> bool {
        match self.arity.get(pred) {
            Some(&n) if n != args.len() => return false,
            Some(_) => {}
            None => {
                self.arity.insert(pred.to_string(), args.len());
            }
        }
        if self
            .index
            .entry(pred.to_string())
            .or_default()
            .insert(args.clone())
        {
            self.facts.push((pred.to_string(), args));
        }
        true
    }

    pub fn contains(&self, pred: &str, args: &[Const]) -> bool {
        self.index.get(pred).is_some_and(|set| set.contains(args))
    }

    pub fn arity(&self, pred: &str) -> Option<usize> {
        self.arity.get(pred).copied()
    }

    pub fn facts(&self) -> impl Iterator<Item = (&str, &[Const])> + '_ {
        self.facts.iter().map(|(p, a)| (p.as_str(), a.as_slice()))
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }
}

/// A parsed predicate-level program: EDB facts, domains, typed variables and
/// IDB schemas.
#[derive(Debug, Clone, Default)]
pub struct PredicateProgram {
    pub edb: Edb,
    pub domains: IndexMap<String, DomainSource>,
    /// Variable name to domain name.
    pub var_decls: IndexMap<String, String>,
    pub idb: Vec<Schema>,
    /// Kind and arity of every IDB predicate. Predicates that head some Horn
    /// schema are Horn; all others are constraint predicates.
    pub idb_preds: IndexMap<String, (AtomKind, usize)>,
}

impl PredicateProgram {
    pub fn count_schemas(&self, pick: impl Fn(&SchemaBody) -> bool) -> usize {
        self.idb.iter().filter(|s| pick(&s.body)).count()
    }
}

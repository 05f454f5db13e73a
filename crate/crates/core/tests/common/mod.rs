//! Random theories and naive reference semantics shared by the test suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use dc_core::{Atom, AtomKind, Literal, Theory};
use proptest::prelude::*;

/// Shape of a random theory. Atom indices below `nc` are constraint atoms,
/// the rest Horn atoms; out-of-range indices are reduced modulo the
/// relevant count when the theory is built.
#[derive(Debug, Clone)]
pub struct Recipe {
    pub nc: usize,
    pub nh: usize,
    pub clauses: Vec<Vec<(usize, bool)>>,
    pub rules: Vec<(Vec<usize>, usize)>,
    pub posts: Vec<Vec<(usize, bool)>>,
    pub selects: Vec<(usize, usize, Vec<usize>)>,
}

/// Mostly two and three literals, occasionally a unit or a long clause.
fn clause_len() -> impl Strategy<Value = usize> {
    prop_oneof![1 => Just(1usize), 6 => 2usize..=3, 2 => 4usize..=5]
}

pub fn recipe(
    max_c: usize,
    max_clauses: usize,
    max_rules: usize,
    max_posts: usize,
    max_selects: usize,
) -> impl Strategy<Value = Recipe> {
    let lit = || (0usize..64, any::<bool>());
    (
        1..=max_c,
        0usize..=4,
        prop::collection::vec(
            clause_len().prop_flat_map(move |n| prop::collection::vec(lit(), n)),
            0..=max_clauses,
        ),
        prop::collection::vec(
            (prop::collection::vec(0usize..64, 0..=3), 0usize..64),
            0..=max_rules,
        ),
        prop::collection::vec(prop::collection::vec(lit(), 1..=3), 0..=max_posts),
        prop::collection::vec(
            (
                0usize..2,
                0usize..4,
                prop::collection::vec(0usize..64, 1..=5),
            ),
            0..=max_selects,
        ),
    )
        .prop_map(|(nc, nh, clauses, rules, posts, selects)| Recipe {
            nc,
            nh,
            clauses,
            rules,
            posts,
            selects,
        })
}

/// Theories within the limits of the oracle-equivalence suite.
pub fn small_theory() -> impl Strategy<Value = Recipe> {
    recipe(12, 20, 8, 4, 3)
}

impl Recipe {
    pub fn build(&self) -> Theory {
        let mut b = Theory::builder();
        let c: Vec<Atom> = (0..self.nc)
            .map(|i| b.declare(&format!("c{i}"), AtomKind::Constraint).unwrap())
            .collect();
        let h: Vec<Atom> = (0..self.nh)
            .map(|i| b.declare(&format!("h{i}"), AtomKind::Horn).unwrap())
            .collect();
        let all: Vec<Atom> = c.iter().chain(&h).copied().collect();
        for clause in &self.clauses {
            b.constraint(clause.iter().map(|&(a, s)| Literal::new(c[a % c.len()], s)))
                .unwrap();
        }
        if !h.is_empty() {
            for (body, head) in &self.rules {
                b.rule(body.iter().map(|&a| all[a % all.len()]), h[head % h.len()])
                    .unwrap();
            }
        }
        for clause in &self.posts {
            b.post(
                clause
                    .iter()
                    .map(|&(a, s)| Literal::new(all[a % all.len()], s)),
            )
            .unwrap();
        }
        for (lo, extra, scope) in &self.selects {
            b.select(*lo, lo + extra, scope.iter().map(|&a| c[a % c.len()]))
                .unwrap();
        }
        b.build()
    }
}

/// Least model by naive iteration: apply every rule until nothing changes.
pub fn naive_least_model(theory: &Theory, seed: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    let mut model = seed.clone();
    loop {
        let mut changed = false;
        for rule in theory.horn() {
            if rule.body().iter().all(|a| model.contains(a)) && model.insert(rule.head()) {
                changed = true;
            }
        }
        if !changed {
            return model;
        }
    }
}

fn clause_holds(lits: &[Literal], set: &BTreeSet<Atom>) -> bool {
    lits.iter()
        .any(|l| set.contains(&l.atom()) == l.is_positive())
}

/// The answer-set definition read off literally.
pub fn naive_is_answer_set(theory: &Theory, m: &BTreeSet<Atom>) -> bool {
    theory
        .constraints()
        .iter()
        .all(|c| clause_holds(c.literals(), m))
        && theory.selects().iter().all(|s| {
            let n = s.scope().iter().filter(|a| m.contains(a)).count();
            s.lower() <= n && n <= s.upper()
        })
        && {
            let closure = naive_least_model(theory, m);
            theory
                .post()
                .iter()
                .all(|c| clause_holds(c.literals(), &closure))
        }
}

/// Constraint atoms mentioned anywhere in the theory.
pub fn mentioned_constraint_atoms(theory: &Theory) -> Vec<Atom> {
    let mut seen = BTreeSet::new();
    for c in theory.constraints().iter().chain(theory.post()) {
        seen.extend(c.literals().iter().map(|l| l.atom()));
    }
    for s in theory.selects() {
        seen.extend(s.scope().iter().copied());
    }
    for r in theory.horn() {
        seen.extend(r.body().iter().copied());
    }
    seen.into_iter()
        .filter(|&a| theory.atoms().kind(a) == AtomKind::Constraint)
        .collect()
}

/// Every answer set, by trying all subsets of the mentioned constraint atoms.
pub fn naive_answer_sets(theory: &Theory) -> BTreeSet<BTreeSet<Atom>> {
    let atoms = mentioned_constraint_atoms(theory);
    assert!(atoms.len() <= 20);
    (0u32..1 << atoms.len())
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, &a)| a)
                .collect::<BTreeSet<Atom>>()
        })
        .filter(|m| naive_is_answer_set(theory, m))
        .collect()
}

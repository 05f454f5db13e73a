//! Answer-set semantics: the pre-constraint check, the closure check, and an
//! exhaustive enumerator used as a reference oracle.

use std::collections::BTreeSet;
use std::fmt;

use super::{Atom, AtomKind, HornIndex, Theory, TheoryError};

/// A guessed set of constraint atoms. Every other atom is false.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateSet {
    trues: BTreeSet<Atom>,
}

impl CandidateSet {
    pub fn new(trues: impl IntoIterator<Item = Atom>) -> Self {
        CandidateSet {
            trues: trues.into_iter().collect(),
        }
    }

    /// Resolves atom names against the theory's table.
    pub fn from_names<'a>(
        theory: &Theory,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<Self, TheoryError> {
        names
            .into_iter()
            .map(|n| {
                theory
                    .atoms()
                    .lookup(n)
                    .ok_or_else(|| TheoryError::UndeclaredAtom(n.to_string()))
            })
            .collect::<Result<BTreeSet<_>, _>>()
            .map(|trues| CandidateSet { trues })
    }

    pub fn trues(&self) -> &BTreeSet<Atom> {
        &self.trues
    }

    pub fn contains(&self, atom: Atom) -> bool {
        self.trues.contains(&atom)
    }

    pub fn len(&self) -> usize {
        self.trues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trues.is_empty()
    }

    /// Atom names, sorted lexicographically.
    pub fn names(&self, theory: &Theory) -> Vec<String> {
        let mut names: Vec<String> = self
            .trues
            .iter()
            .map(|&a| theory.atoms().name(a).to_string())
            .collect();
        names.sort();
        names
    }
}

/// The Horn closure of a candidate set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClosureResult {
    /// Candidate atoms together with everything derived from them.
    pub closure: BTreeSet<Atom>,
    /// The Horn atoms of `closure`.
    pub derived: BTreeSet<Atom>,
}

/// The first constraint a candidate set fails, by index into the theory's
/// respective list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Constraint(usize),
    Select(usize),
    Post(usize),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Constraint(i) => write!(f, "constraint clause {i} is falsified"),
            Violation::Select(i) => write!(f, "select constraint {i} is out of bounds"),
            Violation::Post(i) => write!(f, "post-constraint {i} fails on the closure"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Yes(ClosureResult),
    No(Violation),
}

impl Verdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }
}

fn truth_vector(theory: &Theory, m: &CandidateSet) -> Vec<bool> {
    let mut truth = vec![false; theory.atoms().len()];
    for &a in m.trues() {
        if a.index() < truth.len() {
            truth[a.index()] = true;
        }
    }
    truth
}

fn first_pre_violation(theory: &Theory, truth: &[bool]) -> Option<Violation> {
    if let Some(i) = theory
        .constraints()
        .iter()
        .position(|c| !c.satisfied_by(|a| truth[a.index()]))
    {
        return Some(Violation::Constraint(i));
    }
    theory
        .selects()
        .iter()
        .position(|s| !s.admits(s.scope().iter().filter(|a| truth[a.index()]).count()))
        .map(Violation::Select)
}

/// Condition one of the semantics: every constraint clause holds and every
/// select admits the number of true scope atoms, reading atoms outside `m`
/// as false.
pub fn check_pre_constraints(m: &CandidateSet, theory: &Theory) -> bool {
    first_pre_violation(theory, &truth_vector(theory, m)).is_none()
}

/// Decides whether `m` is an answer set of `theory`, in time linear in the
/// size of the theory. `m` may only contain constraint atoms that occur in
/// the theory.
pub fn is_answer_set(theory: &Theory, m: &CandidateSet) -> Result<Verdict, TheoryError> {
    let occurring = theory.occurring();
    for &a in m.trues() {
        theory.atoms().check(a)?;
        if theory.atoms().kind(a) == AtomKind::Horn || !occurring[a.index()] {
            return Err(TheoryError::InvalidAtom(theory.atoms().name(a).to_string()));
        }
    }
    let index = HornIndex::new(theory.horn(), theory.atoms().len());
    Ok(evaluate(theory, &index, truth_vector(theory, m)))
}

/// Core of [`is_answer_set`] over a truth vector that already holds the
/// candidate set. The vector is consumed and extended to the closure.
pub(crate) fn evaluate(theory: &Theory, index: &HornIndex, mut truth: Vec<bool>) -> Verdict {
    if let Some(v) = first_pre_violation(theory, &truth) {
        return Verdict::No(v);
    }
    let candidates: Vec<bool> = truth.clone();
    index.close(std::iter::empty(), &mut truth);
    if let Some(i) = theory
        .post()
        .iter()
        .position(|c| !c.satisfied_by(|a| truth[a.index()]))
    {
        return Verdict::No(Violation::Post(i));
    }
    let mut result = ClosureResult::default();
    for (i, (&t, &c)) in truth.iter().zip(&candidates).enumerate() {
        if t {
            result.closure.insert(Atom::new(i));
            if !c {
                result.derived.insert(Atom::new(i));
            }
        }
    }
    Verdict::Yes(result)
}

/// Largest number of constraint atoms [`brute_force_answer_sets`] accepts.
pub const BRUTE_FORCE_LIMIT: usize = 25;

/// Every answer set of `theory`, found by trying all subsets of its
/// constraint atoms. Subsets are visited in binary counting order with the
/// lowest atom id as the least significant bit; at most `cap` answer sets are
/// returned.
pub fn brute_force_answer_sets(
    theory: &Theory,
    cap: usize,
) -> Result<Vec<CandidateSet>, TheoryError> {
    let atoms = theory.constraint_atoms();
    if atoms.len() > BRUTE_FORCE_LIMIT {
        return Err(TheoryError::TooLarge {
            atoms: atoms.len(),
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let index = HornIndex::new(theory.horn(), theory.atoms().len());
    let mut found = Vec::new();
    for mask in 0u64..(1u64 << atoms.len()) {
        if found.len() >= cap {
            break;
        }
        let mut truth = vec![false; theory.atoms().len()];
        for (bit, &a) in atoms.iter().enumerate() {
            truth[a.index()] = mask >> bit & 1 == 1;
        }
        if evaluate(theory, &index, truth).is_yes() {
            found.push(CandidateSet::new(
                atoms
                    .iter()
                    .enumerate()
                    .filter(|&(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &a)| a),
            ));
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Literal;

    struct Abc {
        theory: Theory,
        a: Atom,
        b: Atom,
        c: Atom,
    }

    fn abc(build: impl FnOnce(&mut crate::model::TheoryBuilder, Atom, Atom, Atom)) -> Abc {
        let mut t = Theory::builder();
        let a = t.declare("a", AtomKind::Constraint).unwrap();
        let b = t.declare("b", AtomKind::Constraint).unwrap();
        let c = t.declare("c", AtomKind::Constraint).unwrap();
        build(&mut t, a, b, c);
        Abc {
            theory: t.build(),
            a,
            b,
            c,
        }
    }

    #[test]
    fn implication_clause_rejects_a_alone() {
        let x = abc(|t, a, b, _| {
            t.constraint([a.negative(), b.positive()]).unwrap();
        });
        assert!(!check_pre_constraints(&CandidateSet::new([x.a]), &x.theory));
        assert!(check_pre_constraints(
            &CandidateSet::new([x.a, x.b]),
            &x.theory
        ));
    }

    #[test]
    fn select_bounds() {
        let x = abc(|t, a, b, c| {
            t.select(1, 2, [a, b, c]).unwrap();
        });
        let check =
            |m: &[Atom]| check_pre_constraints(&CandidateSet::new(m.iter().copied()), &x.theory);
        assert!(check(&[x.a, x.b]));
        assert!(!check(&[]));
        assert!(!check(&[x.a, x.b, x.c]));
    }

    #[test]
    fn empty_theory_accepts_empty_set() {
        let t = Theory::default();
        assert!(check_pre_constraints(&CandidateSet::default(), &t));
        assert_eq!(
            is_answer_set(&t, &CandidateSet::default()).unwrap(),
            Verdict::Yes(ClosureResult::default())
        );
    }

    #[test]
    fn horn_atoms_are_not_candidates() {
        let mut t = Theory::builder();
        let a = t.declare("a", AtomKind::Constraint).unwrap();
        let h = t.declare("h", AtomKind::Horn).unwrap();
        t.rule([a], h).unwrap();
        let t = t.build();
        assert!(matches!(
            is_answer_set(&t, &CandidateSet::new([h])),
            Err(TheoryError::InvalidAtom(_))
        ));
    }

    #[test]
    fn brute_force_order_and_cap() {
        let x = abc(|t, a, b, _| {
            t.constraint([a.positive(), b.positive()]).unwrap();
        });
        let _ = x.c;
        let all = brute_force_answer_sets(&x.theory, usize::MAX).unwrap();
        assert_eq!(
            all,
            vec![
                CandidateSet::new([x.a]),
                CandidateSet::new([x.b]),
                CandidateSet::new([x.a, x.b]),
            ]
        );
        assert_eq!(brute_force_answer_sets(&x.theory, 2).unwrap().len(), 2);
    }

    #[test]
    fn contradiction_has_no_answer_sets() {
        let x = abc(|t, a, _, _| {
            t.constraint([a.positive()]).unwrap();
            t.constraint([a.negative()]).unwrap();
        });
        assert!(brute_force_answer_sets(&x.theory, usize::MAX)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn brute_force_refuses_large_theories() {
        let mut t = Theory::builder();
        let lits: Vec<Literal> = (0..26)
            .map(|i| {
                t.declare(&format!("x{i}"), AtomKind::Constraint)
                    .unwrap()
                    .positive()
            })
            .collect();
        t.constraint(lits).unwrap();
        assert!(matches!(
            brute_force_answer_sets(&t.build(), 1),
            Err(TheoryError::TooLarge { atoms: 26, .. })
        ));
    }

    #[test]
    fn post_violation_is_reported() {
        let mut t = Theory::builder();
        let a = t.declare("a", AtomKind::Constraint).unwrap();
        let h = t.declare("h", AtomKind::Horn).unwrap();
        t.rule([a], h).unwrap();
        t.post([h.positive()]).unwrap();
        let t = t.build();
        assert_eq!(
            is_answer_set(&t, &CandidateSet::default()).unwrap(),
            Verdict::No(Violation::Post(0))
        );
        match is_answer_set(&t, &CandidateSet::new([a])).unwrap() {
            Verdict::Yes(c) => {
                assert_eq!(c.closure, [a, h].into_iter().collect());
                assert_eq!(c.derived, [h].into_iter().collect());
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

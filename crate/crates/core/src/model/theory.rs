use std::collections::BTreeSet;

use indexmap::IndexSet;

use super::{Atom, AtomKind, AtomTable, Literal, TheoryError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClauseRole {
    /// Member of the constraint part, checked against the candidate set.
    Constraint,
    /// Post-constraint, checked against the Horn closure.
    Post,
}

/// A disjunction of literals. Literals are kept sorted and free of
/// duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
    role: ClauseRole,
}

impl Clause {
    pub fn new(role: ClauseRole, literals: impl IntoIterator<Item = Literal>) -> Self {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort();
        literals.dedup();
        Clause { literals, role }
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn role(&self) -> ClauseRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// True when the clause contains some atom in both polarities.
    pub fn is_tautology(&self) -> bool {
        // sorted by (atom, polarity), so complementary pairs are adjacent
        self.literals.windows(2).any(|w| w[0].atom() == w[1].atom())
    }

    pub fn satisfied_by(&self, mut value: impl FnMut(Atom) -> bool) -> bool {
        self.literals.iter().any(|l| l.holds(value(l.atom())))
    }
}

/// `body_1 ∧ … ∧ body_k → head`. An empty body makes the rule a fact.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HornRule {
    body: Vec<Atom>,
    head: Atom,
}

impl HornRule {
    pub fn new(body: impl IntoIterator<Item = Atom>, head: Atom) -> Self {
        let mut body: Vec<Atom> = body.into_iter().collect();
        body.sort();
        body.dedup();
        HornRule { body, head }
    }

    pub fn body(&self) -> &[Atom] {
        &self.body
    }

    pub fn head(&self) -> Atom {
        self.head
    }
}

/// Between `lower` and `upper` atoms of `scope` are true.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SelectConstraint {
    lower: usize,
    upper: usize,
    scope: Vec<Atom>,
}

impl SelectConstraint {
    /// Builds a normalized select: the scope is sorted and de-duplicated and
    /// `upper` is clamped to the scope size (but never below `lower`, so a
    /// select whose lower bound exceeds its scope stays unsatisfiable).
    pub fn new(
        lower: usize,
        upper: usize,
        scope: impl IntoIterator<Item = Atom>,
    ) -> Result<Self, TheoryError> {
        if lower > upper {
            return Err(TheoryError::InvalidSelect { lower, upper });
        }
        let mut scope: Vec<Atom> = scope.into_iter().collect();
        scope.sort();
        scope.dedup();
        let upper = upper.min(scope.len()).max(lower);
        Ok(SelectConstraint {
            lower,
            upper,
            scope,
        })
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn scope(&self) -> &[Atom] {
        &self.scope
    }

    pub fn admits(&self, true_count: usize) -> bool {
        self.lower <= true_count && true_count <= self.upper
    }
}

/// A propositional DC theory: constraint clauses, selects, Horn rules and
/// post-constraints over one atom table.
///
/// Theories are built through [`TheoryBuilder`], which enforces the kind
/// discipline and removes duplicate clauses, rules and selects.
#[derive(Debug, Clone, Default)]
pub struct Theory {
    atoms: AtomTable,
    constraints: Vec<Clause>,
    selects: Vec<SelectConstraint>,
    horn: Vec<HornRule>,
    post: Vec<Clause>,
}

impl Theory {
    pub fn builder() -> TheoryBuilder {
        TheoryBuilder::default()
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn constraints(&self) -> &[Clause] {
        &self.constraints
    }

    pub fn selects(&self) -> &[SelectConstraint] {
        &self.selects
    }

    pub fn horn(&self) -> &[HornRule] {
        &self.horn
    }

    pub fn post(&self) -> &[Clause] {
        &self.post
    }

    /// Flags, per atom id, whether the atom occurs anywhere in the theory.
    pub fn occurring(&self) -> Vec<bool> {
        let mut seen = vec![false; self.atoms.len()];
        for clause in self.constraints.iter().chain(&self.post) {
            for lit in clause.literals() {
                seen[lit.atom().index()] = true;
            }
        }
        for select in &self.selects {
            for &a in select.scope() {
                seen[a.index()] = true;
            }
        }
        for rule in &self.horn {
            seen[rule.head().index()] = true;
            for &a in rule.body() {
                seen[a.index()] = true;
            }
        }
        seen
    }

    /// Constraint atoms that occur in the theory, in id order. These are the
    /// atoms a candidate answer set ranges over.
    pub fn constraint_atoms(&self) -> Vec<Atom> {
        self.occurring_of_kind(AtomKind::Constraint)
    }

    /// Horn atoms that occur in the theory, in id order.
    pub fn horn_atoms(&self) -> Vec<Atom> {
        self.occurring_of_kind(AtomKind::Horn)
    }

    fn occurring_of_kind(&self, kind: AtomKind) -> Vec<Atom> {
        self.occurring()
            .into_iter()
            .enumerate()
            .filter(|&(i, seen)| seen && self.atoms.kind(Atom::new(i)) == kind)
            .map(|(i, _)| Atom::new(i))
            .collect()
    }

    /// Declared atoms that occur nowhere in the theory.
    pub fn unused_atoms(&self) -> Vec<Atom> {
        self.occurring()
            .into_iter()
            .enumerate()
            .filter(|&(_, seen)| !seen)
            .map(|(i, _)| Atom::new(i))
            .collect()
    }

    /// Id-independent view of the theory, used to compare theories up to a
    /// renumbering of atoms.
    pub fn canonical(&self) -> CanonicalTheory {
        let name = |a: Atom| self.atoms.name(a).to_string();
        let clause = |c: &Clause| {
            c.literals()
                .iter()
                .map(|l| (name(l.atom()), l.is_positive()))
                .collect::<BTreeSet<_>>()
        };
        CanonicalTheory {
            atoms: self
                .atoms
                .iter()
                .map(|(_, n, k)| (n.to_string(), k))
                .collect(),
            constraints: self.constraints.iter().map(clause).collect(),
            selects: self
                .selects
                .iter()
                .map(|s| {
                    (
                        s.lower(),
                        s.upper(),
                        s.scope().iter().map(|&a| name(a)).collect(),
                    )
                })
                .collect(),
            horn: self
                .horn
                .iter()
                .map(|r| (r.body().iter().map(|&a| name(a)).collect(), name(r.head())))
                .collect(),
            post: self.post.iter().map(clause).collect(),
        }
    }
}

type NamedClause = BTreeSet<(String, bool)>;

/// Theory contents keyed by atom names rather than ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalTheory {
    pub atoms: BTreeSet<(String, AtomKind)>,
    pub constraints: BTreeSet<NamedClause>,
    pub selects: BTreeSet<(usize, usize, BTreeSet<String>)>,
    pub horn: BTreeSet<(BTreeSet<String>, String)>,
    pub post: BTreeSet<NamedClause>,
}

#[derive(Debug, Clone, Default)]
pub struct TheoryBuilder {
    atoms: AtomTable,
    constraints: IndexSet<Clause>,
    selects: IndexSet<SelectConstraint>,
    horn: IndexSet<HornRule>,
    post: IndexSet<Clause>,
}

impl TheoryBuilder {
    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn declare(&mut self, name: &str, kind: AtomKind) -> Result<Atom, TheoryError> {
        self.atoms.declare(name, kind)
    }

    pub fn intern(&mut self, name: &str, kind: AtomKind) -> Result<Atom, TheoryError> {
        self.atoms.intern(name, kind)
    }

    /// Adds a constraint clause; every atom must be of constraint kind.
    pub fn constraint(
        &mut self,
        literals: impl IntoIterator<Item = Literal>,
    ) -> Result<&mut Self, TheoryError> {
        let clause = Clause::new(ClauseRole::Constraint, literals);
        for lit in clause.literals() {
            self.expect_kind(lit.atom(), AtomKind::Constraint)?;
        }
        self.constraints.insert(clause);
        Ok(self)
    }

    /// Adds a post-constraint clause over atoms of either kind.
    pub fn post(
        &mut self,
        literals: impl IntoIterator<Item = Literal>,
    ) -> Result<&mut Self, TheoryError> {
        let clause = Clause::new(ClauseRole::Post, literals);
        for lit in clause.literals() {
            self.atoms.check(lit.atom())?;
        }
        self.post.insert(clause);
        Ok(self)
    }

    pub fn rule(
        &mut self,
        body: impl IntoIterator<Item = Atom>,
        head: Atom,
    ) -> Result<&mut Self, TheoryError> {
        let rule = HornRule::new(body, head);
        self.expect_kind(head, AtomKind::Horn)?;
        for &a in rule.body() {
            self.atoms.check(a)?;
        }
        self.horn.insert(rule);
        Ok(self)
    }

    pub fn select(
        &mut self,
        lower: usize,
        upper: usize,
        scope: impl IntoIterator<Item = Atom>,
    ) -> Result<&mut Self, TheoryError> {
        let select = SelectConstraint::new(lower, upper, scope)?;
        for &a in select.scope() {
            self.expect_kind(a, AtomKind::Constraint)?;
        }
        self.selects.insert(select);
        Ok(self)
    }

    fn expect_kind(&self, atom: Atom, kind: AtomKind) -> Result<(), TheoryError> {
        self.atoms.check(atom)?;
        let found = self.atoms.kind(atom);
        if found == kind {
            Ok(())
        } else {
            Err(TheoryError::KindMismatch {
                atom: self.atoms.name(atom).to_string(),
                expected: kind,
                found,
            })
        }
    }

    pub fn build(self) -> Theory {
        Theory {
            atoms: self.atoms,
            constraints: self.constraints.into_iter().collect(),
            selects: self.selects.into_iter().collect(),
            horn: self.horn.into_iter().collect(),
            post: self.post.into_iter().collect(),
        }
    }
}

use std::collections::HashMap;
use std::fmt;
use std::ops::Not;

use super::TheoryError;

/// Index of an atom in its owning [`AtomTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub(crate) u32);

impl Atom {
    pub fn new(index: usize) -> Self {
        Atom(u32::try_from(index).expect("atom index exceeds u32"))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn positive(self) -> Literal {
        Literal::new(self, true)
    }

    pub fn negative(self) -> Literal {
        Literal::new(self, false)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Which half of the atom partition an atom lives in.
///
/// Constraint atoms are the ones a candidate answer set guesses; Horn atoms
/// are only ever derived by Horn rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    Constraint,
    Horn,
}

impl fmt::Display for AtomKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AtomKind::Constraint => f.write_str("constraint"),
            AtomKind::Horn => f.write_str("horn"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    atom: Atom,
    positive: bool,
}

impl Literal {
    pub fn new(atom: Atom, positive: bool) -> Self {
        Literal { atom, positive }
    }

    #[inline]
    pub fn atom(self) -> Atom {
        self.atom
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.positive
    }

    /// Truth value of this literal when its atom has value `atom_value`.
    #[inline]
    pub fn holds(self, atom_value: bool) -> bool {
        atom_value == self.positive
    }
}

impl Not for Literal {
    type Output = Literal;

    fn not(self) -> Literal {
        Literal {
            atom: self.atom,
            positive: !self.positive,
        }
    }
}

/// Names and kinds of every declared atom.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    kinds: Vec<AtomKind>,
    index: HashMap<String, Atom>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares a fresh atom. Redeclaring a name is an error, even with the
    /// same kind.
    pub fn declare(&mut self, name: &str, kind: AtomKind) -> Result<Atom, TheoryError> {
        if self.index.contains_key(name) {
            return Err(TheoryError::DuplicateAtom(name.to_string()));
        }
        Ok(self.push(name, kind))
    }

    /// Returns the atom called `name`, declaring it with `kind` if needed.
    /// An existing atom of a different kind is a kind error.
    pub fn intern(&mut self, name: &str, kind: AtomKind) -> Result<Atom, TheoryError> {
        match self.index.get(name) {
            Some(&atom) if self.kind(atom) == kind => Ok(atom),
            Some(&atom) => Err(TheoryError::KindMismatch {
                atom: name.to_string(),
                expected: kind,
                found: self.kind(atom),
            }),
            None => Ok(self.push(name, kind)),
        }
    }

    fn push(&mut self, name: &str, kind: AtomKind) -> Atom {
        let atom = Atom::new(self.names.len());
        self.names.push(name.to_string());
        self.kinds.push(kind);
        self.index.insert(name.to_string(), atom);
        atom
    }

    pub fn lookup(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.index()]
    }

    pub fn kind(&self, atom: Atom) -> AtomKind {
        self.kinds[atom.index()]
    }

    pub fn contains(&self, atom: Atom) -> bool {
        atom.index() < self.names.len()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Atom, &str, AtomKind)> + '_ {
        self.names
            .iter()
            .zip(&self.kinds)
            .enumerate()
            .map(|(i, (name, &kind))| (Atom::new(i), name.as_str(), kind))
    }

    pub(crate) fn check(&self, atom: Atom) -> Result<(), TheoryError> {
        if self.contains(atom) {
            Ok(())
        } else {
            Err(TheoryError::UnknownAtom(atom.0))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_declaration_is_rejected() {
        let mut table = AtomTable::new();
        table.declare("a", AtomKind::Constraint).unwrap();
        assert!(matches!(
            table.declare("a", AtomKind::Constraint),
            Err(TheoryError::DuplicateAtom(_))
        ));
    }

    #[test]
    fn intern_checks_kind() {
        let mut table = AtomTable::new();
        let a = table.intern("a", AtomKind::Horn).unwrap();
        assert_eq!(table.intern("a", AtomKind::Horn).unwrap(), a);
        assert!(matches!(
            table.intern("a", AtomKind::Constraint),
            Err(TheoryError::KindMismatch { .. })
        ));
    }

    #[test]
    fn literal_negation() {
        let a = Atom::new(3);
        assert_eq!(!a.positive(), a.negative());
        assert!(a.negative().holds(false));
        assert!(!a.negative().holds(true));
    }
}

//! Least models of Horn programs by counter-based forward chaining.
//!
//! Every rule keeps the number of body atoms not yet derived. Deriving an
//! atom decrements the counter of each rule watching it, and a rule whose
//! counter reaches zero derives its head. Each rule is visited once per body
//! atom, so a closure costs time linear in the total size of the program.

use std::collections::BTreeSet;

use super::{Atom, HornRule};

/// Body-atom occurrence index over a fixed set of Horn rules.
#[derive(Debug, Clone)]
pub struct HornIndex {
    heads: Vec<Atom>,
    body_len: Vec<u32>,
    watchers: Vec<Vec<u32>>,
    facts: Vec<u32>,
}

impl HornIndex {
    /// `num_atoms` must exceed every atom id mentioned by `rules`.
    pub fn new(rules: &[HornRule], num_atoms: usize) -> Self {
        let mut watchers = vec![Vec::new(); num_atoms];
        let mut facts = Vec::new();
        for (r, rule) in rules.iter().enumerate() {
            let r = r as u32;
            if rule.body().is_empty() {
                facts.push(r);
            }
            for &a in rule.body() {
                watchers[a.index()].push(r);
            }
        }
        HornIndex {
            heads: rules.iter().map(HornRule::head).collect(),
            body_len: rules.iter().map(|r| r.body().len() as u32).collect(),
            watchers,
            facts,
        }
    }

    pub fn num_atoms(&self) -> usize {
        self.watchers.len()
    }

    pub fn num_rules(&self) -> usize {
        self.heads.len()
    }

    pub fn head(&self, rule: u32) -> Atom {
        self.heads[rule as usize]
    }

    pub fn body_len(&self, rule: u32) -> u32 {
        self.body_len[rule as usize]
    }

    /// Rules whose body contains `atom`.
    pub fn watchers(&self, atom: Atom) -> &[u32] {
        &self.watchers[atom.index()]
    }

    /// Rules with an empty body.
    pub fn facts(&self) -> &[u32] {
        &self.facts
    }

    /// Closes `member` under the rules, after first adding every atom of
    /// `seed`. `member` is indexed by atom id and may already contain atoms;
    /// those are treated as part of the seed.
    pub fn close(&self, seed: impl IntoIterator<Item = Atom>, member: &mut [bool]) {
        let mut missing = self.body_len.clone();
        let mut queue: Vec<Atom> = Vec::new();
        for (i, &m) in member.iter().enumerate() {
            if m {
                queue.push(Atom::new(i));
            }
        }
        for a in seed {
            if !member[a.index()] {
                member[a.index()] = true;
                queue.push(a);
            }
        }
        for &r in &self.facts {
            let head = self.heads[r as usize];
            if !member[head.index()] {
                member[head.index()] = true;
                queue.push(head);
            }
        }
        while let Some(a) = queue.pop() {
            for &r in &self.watchers[a.index()] {
                let slot = &mut missing[r as usize];
                *slot -= 1;
                if *slot == 0 {
                    let head = self.heads[r as usize];
                    if !member[head.index()] {
                        member[head.index()] = true;
                        queue.push(head);
                    }
                }
            }
        }
    }
}

/// The least set of atoms containing `seed` and closed under `rules`.
pub fn least_model(rules: &[HornRule], seed: &BTreeSet<Atom>) -> BTreeSet<Atom> {
    let num_atoms = rules
        .iter()
        .flat_map(|r| r.body().iter().copied().chain(std::iter::once(r.head())))
        .chain(seed.iter().copied())
        .map(|a| a.index() + 1)
        .max()
        .unwrap_or(0);
    let index = HornIndex::new(rules, num_atoms);
    let mut member = vec![false; num_atoms];
    index.close(seed.iter().copied(), &mut member);
    member
        .into_iter()
        .enumerate()
        .filter(|&(_, m)| m)
        .map(|(i, _)| Atom::new(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(ids: &[usize]) -> BTreeSet<Atom> {
        ids.iter().map(|&i| Atom::new(i)).collect()
    }

    fn rule(body: &[usize], head: usize) -> HornRule {
        HornRule::new(body.iter().map(|&i| Atom::new(i)), Atom::new(head))
    }

    #[test]
    fn chain_closure() {
        // a=0, b=1, c=2
        let rules = [rule(&[0], 1), rule(&[1], 2)];
        assert_eq!(least_model(&rules, &atoms(&[0])), atoms(&[0, 1, 2]));
    }

    #[test]
    fn empty_seed_fires_nothing() {
        let rules = [rule(&[0], 1)];
        assert_eq!(least_model(&rules, &atoms(&[])), atoms(&[]));
    }

    #[test]
    fn facts_fire_unconditionally() {
        let rules = [rule(&[], 1), rule(&[1], 2)];
        assert_eq!(least_model(&rules, &atoms(&[])), atoms(&[1, 2]));
    }

    #[test]
    fn hamilton_triangle() {
        // hc(1,2)=0 hc(2,3)=1 hc(3,1)=2 vstd(1)=3 vstd(2)=4 vstd(3)=5
        let rules = [rule(&[0], 4), rule(&[4, 1], 5), rule(&[5, 2], 3)];
        assert_eq!(
            least_model(&rules, &atoms(&[0, 1, 2])),
            atoms(&[0, 1, 2, 3, 4, 5])
        );
        assert_eq!(least_model(&rules, &atoms(&[0])), atoms(&[0, 4]));
    }

    #[test]
    fn cyclic_rules_need_external_support() {
        let rules = [rule(&[0], 1), rule(&[1], 0)];
        assert_eq!(least_model(&rules, &atoms(&[])), atoms(&[]));
        assert_eq!(least_model(&rules, &atoms(&[1])), atoms(&[0, 1]));
    }
}

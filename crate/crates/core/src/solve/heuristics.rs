//! Constraint weights, literal ranking, lookahead and branch selection.

use num_rational::Ratio;

use crate::model::{Atom, Literal};

use super::state::Conflict;
use super::Solver;

/// A constraint of the theory, by index into its respective list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintRef {
    Clause(usize),
    Select(usize),
    Post(usize),
}

/// What a tentative assignment achieved before being undone.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ProbeResult {
    /// Literals propagation added beyond the probed one.
    pub forced: usize,
    /// Clauses and selects that became satisfied.
    pub satisfied: usize,
}

impl ProbeResult {
    pub fn score(&self) -> usize {
        self.forced + self.satisfied
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchStats {
    pub atom: Atom,
    pub on_true: ProbeResult,
    pub on_false: ProbeResult,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lookahead {
    /// Both polarities of some atom fail under the current assignment.
    Conflict,
    /// Statistics for every tested atom; empty when no atom is unassigned.
    Candidates(Vec<BranchStats>),
}

/// Weight unit when the exact common denominator would exceed `u64`.
const FIXED_POINT: u128 = 1 << 60;

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Solver<'_> {
    /// Unassigned scope of an unsatisfied constraint, or `None` once it is
    /// satisfied or fully assigned.
    fn free_count(&self, c: ConstraintRef) -> Option<usize> {
        let st = &self.state;
        let free = match c {
            ConstraintRef::Clause(i) => {
                if !st.clause_live[i] || st.clause_true[i] > 0 {
                    return None;
                }
                st.theory.constraints()[i].len() - st.clause_false[i] as usize
            }
            ConstraintRef::Select(i) => {
                let sel = &st.theory.selects()[i];
                let t = st.sel_true[i] as usize;
                let open = st.select_unassigned(i);
                if t >= sel.lower() && t + open <= sel.upper() {
                    return None;
                }
                open
            }
            ConstraintRef::Post(i) => {
                if !st.post_live[i] {
                    return None;
                }
                let mut open = 0;
                for &l in st.theory.post()[i].literals() {
                    match st.three_valued(l) {
                        1 => return None,
                        0 => open += 1,
                        _ => {}
                    }
                }
                open
            }
        };
        (free > 0).then_some(free)
    }

    fn type_factor(&self, c: ConstraintRef) -> u32 {
        let f = self.config.type_factors;
        match c {
            ConstraintRef::Clause(_) => f.clause,
            ConstraintRef::Select(_) => f.select,
            ConstraintRef::Post(_) => f.post,
        }
    }

    /// `type_factor / free` for an unsatisfied constraint with free atoms,
    /// `None` otherwise.
    pub fn constraint_weight(&mut self, c: ConstraintRef) -> Option<Ratio<u64>> {
        self.state.ensure_upper();
        let free = self.free_count(c)?;
        Some(Ratio::new(u64::from(self.type_factor(c)), free as u64))
    }

    fn all_constraints(&self) -> impl Iterator<Item = ConstraintRef> {
        let t = self.state.theory;
        (0..t.constraints().len())
            .map(ConstraintRef::Clause)
            .chain((0..t.selects().len()).map(ConstraintRef::Select))
            .chain((0..t.post().len()).map(ConstraintRef::Post))
    }

    /// Adds every unsatisfied constraint's weight to the literals it credits.
    /// Weights are integers in units of `1/L`, where `L` is the least common
    /// multiple of the free counts in play, or in units of `2^-60` (rounded
    /// down per constraint) if that multiple exceeds `u64`.
    fn accumulate_weights(&mut self) {
        self.state.ensure_upper();
        self.weights.iter_mut().for_each(|w| *w = 0);
        let active: Vec<(ConstraintRef, usize)> = self
            .all_constraints()
            .filter_map(|c| self.free_count(c).map(|f| (c, f)))
            .collect();
        let mut unit: u128 = 1;
        for &(_, free) in &active {
            let free = free as u128;
            unit = unit / gcd(unit, free) * free;
            if unit > u128::from(u64::MAX) {
                unit = FIXED_POINT;
                break;
            }
        }
        let st = &self.state;
        for (c, free) in active {
            let share = u128::from(self.type_factor(c)) * (unit / free as u128);
            let mut credit = |l: Literal| {
                self.weights[2 * l.atom().index() + usize::from(l.is_positive())] += share
            };
            match c {
                ConstraintRef::Clause(i) => st.theory.constraints()[i]
                    .literals()
                    .iter()
                    .filter(|l| st.is_unassigned(l.atom()))
                    .for_each(|&l| credit(l)),
                ConstraintRef::Post(i) => st.theory.post()[i]
                    .literals()
                    .iter()
                    .filter(|l| st.is_decision[l.atom().index()] && st.is_unassigned(l.atom()))
                    .for_each(|&l| credit(l)),
                ConstraintRef::Select(i) => {
                    let sel = &st.theory.selects()[i];
                    let t = st.sel_true[i] as usize;
                    let open = st.select_unassigned(i);
                    let need_more = t < sel.lower();
                    let too_many = t + open > sel.upper();
                    for &a in sel.scope() {
                        if st.is_unassigned(a) {
                            if need_more {
                                credit(a.positive());
                            }
                            if too_many {
                                credit(a.negative());
                            }
                        }
                    }
                }
            }
        }
    }

    /// The `count` heaviest literals over unassigned constraint atoms. Ties
    /// go to the lower atom id, then to the positive literal.
    pub fn rank_literals(&mut self, count: usize) -> Vec<Literal> {
        self.accumulate_weights();
        let mut lits: Vec<(u128, Literal)> = Vec::new();
        for &a in &self.state.decision_atoms {
            if self.state.is_unassigned(a) {
                for lit in [a.positive(), a.negative()] {
                    let w = self.weights[2 * a.index() + usize::from(lit.is_positive())];
                    lits.push((w, lit));
                }
            }
        }
        lits.sort_by(|(wa, la), (wb, lb)| {
            wb.cmp(wa)
                .then(la.atom().cmp(&lb.atom()))
                .then(lb.is_positive().cmp(&la.is_positive()))
        });
        lits.into_iter().take(count).map(|(_, l)| l).collect()
    }

    /// Asserts `lit`, propagates, records the effect and undoes everything.
    /// `None` means propagation hit a conflict.
    fn probe(&mut self, lit: Literal) -> Option<ProbeResult> {
        self.state.stats.lookahead_tests += 1;
        let mark = self.state.trail.len();
        let before = self.state.satisfied;
        self.state.assign(lit);
        let result = self.state.propagate().ok().map(|()| ProbeResult {
            forced: self.state.trail.len() - mark - 1,
            satisfied: self.state.satisfied.saturating_sub(before),
        });
        self.state.undo_to(mark);
        result
    }

    /// Tests both polarities of the top-ranked atoms. An atom failing in
    /// one polarity is asserted in the other and ranking starts over; an
    /// atom failing in both makes the current assignment a dead end.
    pub fn lookahead(&mut self) -> Lookahead {
        'restart: loop {
            let count = self.config.lookahead_count;
            let mut atoms: Vec<Atom> = Vec::with_capacity(count);
            for lit in self.rank_literals(2 * count) {
                if !atoms.contains(&lit.atom()) {
                    atoms.push(lit.atom());
                    if atoms.len() == count {
                        break;
                    }
                }
            }
            let mut stats = Vec::with_capacity(atoms.len());
            for atom in atoms {
                match (self.probe(atom.positive()), self.probe(atom.negative())) {
                    (None, None) => return Lookahead::Conflict,
                    (Some(on_true), Some(on_false)) => stats.push(BranchStats {
                        atom,
                        on_true,
                        on_false,
                    }),
                    (t, _) => {
                        let lit = Literal::new(atom, t.is_some());
                        self.state.stats.propagations += 1;
                        self.state.assign(lit);
                        if self.state.propagate().is_err() {
                            return Lookahead::Conflict;
                        }
                        continue 'restart;
                    }
                }
            }
            return Lookahead::Candidates(stats);
        }
    }

    pub(super) fn propagate_state(&mut self) -> Result<(), Conflict> {
        self.state.propagate()
    }
}

/// Picks the branching literal from lookahead statistics, scoring each
/// polarity by forced plus satisfied. The atom with the best worse-polarity
/// score wins, then the best better-polarity score, then the lower atom id.
/// Its higher-scoring polarity is tried first, true on ties.
pub fn choose_branch(stats: &[BranchStats]) -> Option<Literal> {
    let key = |s: &BranchStats| {
        let (t, f) = (s.on_true.score(), s.on_false.score());
        (t.min(f), t.max(f))
    };
    let best = stats.iter().reduce(|best, s| {
        let (kb, ks) = (key(best), key(s));
        if ks > kb || (ks == kb && s.atom < best.atom) {
            s
        } else {
            best
        }
    })?;
    let positive = best.on_true.score() >= best.on_false.score();
    Some(Literal::new(best.atom, positive))
}

//! Assignment state: the trail, counter-based constraint tracking, and the
//! two Horn closures.

use crate::model::{Atom, AtomKind, HornIndex, Literal, Theory};

use super::config::SolveStats;

/// Constraint that became unsatisfiable under the current assignment, by
/// index into the theory's respective list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conflict {
    Constraint(usize),
    Select(usize),
    Post(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(super) struct Level {
    pub trail_start: usize,
    pub decision: Literal,
    pub flipped: bool,
}

const UNSET: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

pub(super) struct State<'t> {
    pub theory: &'t Theory,
    pub index: HornIndex,
    pub value: Vec<i8>,
    pub is_decision: Vec<bool>,
    pub decision_atoms: Vec<Atom>,
    /// Per atom: (clause, polarity) for every live constraint clause.
    clause_occ: Vec<Vec<(u32, bool)>>,
    pub clause_live: Vec<bool>,
    pub clause_true: Vec<u32>,
    pub clause_false: Vec<u32>,
    sel_occ: Vec<Vec<u32>>,
    pub sel_true: Vec<u32>,
    pub sel_false: Vec<u32>,
    sel_sat: Vec<bool>,
    pub post_live: Vec<bool>,
    pub satisfied: usize,
    in_horn_body: Vec<bool>,
    rules_by_head: Vec<Vec<u32>>,
    support: bool,
    support_seen: Vec<bool>,
    /// Least model of the rules over the true constraint atoms, maintained
    /// incrementally. Constraint atoms are members exactly when true.
    pub lower: Vec<bool>,
    missing: Vec<u32>,
    derived: Vec<Atom>,
    /// Least model over the constraint atoms not assigned false; rebuilt
    /// lazily when `upper_dirty`.
    pub upper: Vec<bool>,
    upper_dirty: bool,
    pub trail: Vec<Literal>,
    derived_mark: Vec<usize>,
    qhead: usize,
    pub levels: Vec<Level>,
    pub stats: SolveStats,
}

impl<'t> State<'t> {
    pub fn new(theory: &'t Theory, support: bool) -> Self {
        let n = theory.atoms().len();
        let index = HornIndex::new(theory.horn(), n);
        let occurring = theory.occurring();
        let is_decision: Vec<bool> = (0..n)
            .map(|i| occurring[i] && theory.atoms().kind(Atom::new(i)) == AtomKind::Constraint)
            .collect();
        let decision_atoms = (0..n).filter(|&i| is_decision[i]).map(Atom::new).collect();

        let mut clause_occ = vec![Vec::new(); n];
        let clause_live: Vec<bool> = theory
            .constraints()
            .iter()
            .map(|c| !c.is_tautology())
            .collect();
        for (c, clause) in theory.constraints().iter().enumerate() {
            if clause_live[c] {
                for l in clause.literals() {
                    clause_occ[l.atom().index()].push((c as u32, l.is_positive()));
                }
            }
        }
        let mut sel_occ = vec![Vec::new(); n];
        for (s, sel) in theory.selects().iter().enumerate() {
            for a in sel.scope() {
                sel_occ[a.index()].push(s as u32);
            }
        }
        let mut in_horn_body = vec![false; n];
        let mut rules_by_head = vec![Vec::new(); n];
        for (r, rule) in theory.horn().iter().enumerate() {
            for a in rule.body() {
                in_horn_body[a.index()] = true;
            }
            rules_by_head[rule.head().index()].push(r as u32);
        }
        let nc = theory.constraints().len();
        let ns = theory.selects().len();
        let mut state = State {
            theory,
            missing: theory
                .horn()
                .iter()
                .map(|r| r.body().len() as u32)
                .collect(),
            index,
            value: vec![UNSET; n],
            is_decision,
            decision_atoms,
            clause_occ,
            clause_true: clause_live.iter().map(|&live| u32::from(!live)).collect(),
            clause_false: vec![0; nc],
            clause_live,
            sel_occ,
            sel_true: vec![0; ns],
            sel_false: vec![0; ns],
            sel_sat: vec![false; ns],
            post_live: theory.post().iter().map(|c| !c.is_tautology()).collect(),
            satisfied: 0,
            in_horn_body,
            rules_by_head,
            support,
            support_seen: vec![false; n],
            lower: vec![false; n],
            derived: Vec::new(),
            upper: vec![false; n],
            upper_dirty: true,
            trail: Vec::new(),
            derived_mark: Vec::new(),
            qhead: 0,
            levels: Vec::new(),
            stats: SolveStats::default(),
        };
        state.satisfied = state.clause_live.iter().filter(|&&l| !l).count();
        for s in 0..ns {
            state.sel_sat[s] = state.select_satisfied(s);
            state.satisfied += usize::from(state.sel_sat[s]);
        }
        for i in 0..state.index.facts().len() {
            let head = state.index.head(state.index.facts()[i]);
            state.derive(head);
        }
        state
    }

    pub fn literal_value(&self, lit: Literal) -> i8 {
        let v = self.value[lit.atom().index()];
        if lit.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn is_unassigned(&self, atom: Atom) -> bool {
        self.value[atom.index()] == UNSET
    }

    /// Three-valued truth of any literal: constraint atoms read the
    /// assignment; Horn atoms are true in the lower closure, false outside
    /// the upper one, and unknown in between. Requires a clean upper closure.
    pub fn three_valued(&self, lit: Literal) -> i8 {
        let a = lit.atom();
        let v = if self.theory.atoms().kind(a) == AtomKind::Constraint {
            self.value[a.index()]
        } else if self.lower[a.index()] {
            TRUE
        } else if !self.upper[a.index()] {
            FALSE
        } else {
            UNSET
        };
        if lit.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn select_unassigned(&self, s: usize) -> usize {
        self.theory.selects()[s].scope().len() - (self.sel_true[s] + self.sel_false[s]) as usize
    }

    fn select_satisfied(&self, s: usize) -> bool {
        let sel = &self.theory.selects()[s];
        let t = self.sel_true[s] as usize;
        t >= sel.lower() && t + self.select_unassigned(s) <= sel.upper()
    }

    fn derive(&mut self, head: Atom) {
        if self.lower[head.index()] {
            return;
        }
        self.lower[head.index()] = true;
        self.derived.push(head);
        let mut stack = vec![head];
        while let Some(a) = stack.pop() {
            for i in 0..self.index.watchers(a).len() {
                let r = self.index.watchers(a)[i] as usize;
                self.missing[r] -= 1;
                if self.missing[r] == 0 {
                    let h = self.index.head(r as u32);
                    if !self.lower[h.index()] {
                        self.lower[h.index()] = true;
                        self.derived.push(h);
                        stack.push(h);
                    }
                }
            }
        }
    }

    fn retract_watchers(&mut self, a: Atom) {
        for &r in self.index.watchers(a) {
            self.missing[r as usize] += 1;
        }
    }

    pub fn assign(&mut self, lit: Literal) {
        let a = lit.atom();
        debug_assert!(self.is_unassigned(a), "atom assigned twice");
        self.value[a.index()] = if lit.is_positive() { TRUE } else { FALSE };
        self.trail.push(lit);
        self.derived_mark.push(self.derived.len());
        for i in 0..self.clause_occ[a.index()].len() {
            let (c, pos) = self.clause_occ[a.index()][i];
            let c = c as usize;
            if pos == lit.is_positive() {
                if self.clause_true[c] == 0 {
                    self.satisfied += 1;
                }
                self.clause_true[c] += 1;
            } else {
                self.clause_false[c] += 1;
            }
        }
        for i in 0..self.sel_occ[a.index()].len() {
            let s = self.sel_occ[a.index()][i] as usize;
            if lit.is_positive() {
                self.sel_true[s] += 1;
            } else {
                self.sel_false[s] += 1;
            }
            self.refresh_select(s);
        }
        if lit.is_positive() {
            self.lower[a.index()] = true;
            for i in 0..self.index.watchers(a).len() {
                let r = self.index.watchers(a)[i];
                self.missing[r as usize] -= 1;
                if self.missing[r as usize] == 0 {
                    self.derive(self.index.head(r));
                }
            }
        } else if self.in_horn_body[a.index()] {
            self.upper_dirty = true;
        }
    }

    fn refresh_select(&mut self, s: usize) {
        let now = self.select_satisfied(s);
        if now != self.sel_sat[s] {
            self.sel_sat[s] = now;
            if now {
                self.satisfied += 1;
            } else {
                self.satisfied -= 1;
            }
        }
    }

    /// Undoes assignments until the trail has `len` entries.
    pub fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let lit = self.trail.pop().unwrap();
            let mark = self.derived_mark.pop().unwrap();
            while self.derived.len() > mark {
                let h = self.derived.pop().unwrap();
                self.lower[h.index()] = false;
                self.retract_watchers(h);
            }
            let a = lit.atom();
            if lit.is_positive() {
                self.lower[a.index()] = false;
                self.retract_watchers(a);
            } else if self.in_horn_body[a.index()] {
                self.upper_dirty = true;
            }
            for i in 0..self.clause_occ[a.index()].len() {
                let (c, pos) = self.clause_occ[a.index()][i];
                let c = c as usize;
                if pos == lit.is_positive() {
                    self.clause_true[c] -= 1;
                    if self.clause_true[c] == 0 {
                        self.satisfied -= 1;
                    }
                } else {
                    self.clause_false[c] -= 1;
                }
            }
            self.value[a.index()] = UNSET;
            for i in 0..self.sel_occ[a.index()].len() {
                let s = self.sel_occ[a.index()][i] as usize;
                if lit.is_positive() {
                    self.sel_true[s] -= 1;
                } else {
                    self.sel_false[s] -= 1;
                }
                self.refresh_select(s);
            }
        }
        self.qhead = self.qhead.min(len);
    }

    pub fn ensure_upper(&mut self) {
        if !self.upper_dirty {
            return;
        }
        self.upper.iter_mut().for_each(|u| *u = false);
        for &a in &self.decision_atoms {
            if self.value[a.index()] != FALSE {
                self.upper[a.index()] = true;
            }
        }
        self.index.close(std::iter::empty(), &mut self.upper);
        self.upper_dirty = false;
    }

    fn force(&mut self, lit: Literal) {
        self.stats.propagations += 1;
        self.assign(lit);
    }

    fn check_clause(&mut self, c: usize) -> Result<(), Conflict> {
        if self.clause_true[c] > 0 {
            return Ok(());
        }
        let clause = &self.theory.constraints()[c];
        let len = clause.len() as u32;
        let falses = self.clause_false[c];
        if falses == len {
            return Err(Conflict::Constraint(c));
        }
        if falses + 1 == len {
            let lit = clause
                .literals()
                .iter()
                .copied()
                .find(|&l| self.is_unassigned(l.atom()))
                .expect("unit clause has an unassigned literal");
            self.force(lit);
        }
        Ok(())
    }

    fn check_select(&mut self, s: usize) -> Result<(), Conflict> {
        let sel = &self.theory.selects()[s];
        let t = self.sel_true[s] as usize;
        let open = self.select_unassigned(s);
        if t > sel.upper() || t + open < sel.lower() {
            return Err(Conflict::Select(s));
        }
        if open == 0 {
            return Ok(());
        }
        let polarity = if t == sel.upper() {
            false
        } else if t + open == sel.lower() {
            true
        } else {
            return Ok(());
        };
        let theory = self.theory;
        for &a in theory.selects()[s].scope() {
            if self.is_unassigned(a) {
                self.force(Literal::new(a, polarity));
            }
        }
        Ok(())
    }

    /// Checks every constraint once; used before the first propagation, when
    /// unit clauses and saturated selects have no trail entry to trigger them.
    pub fn initial_checks(&mut self) -> Result<(), Conflict> {
        for c in 0..self.theory.constraints().len() {
            if self.clause_live[c] {
                self.check_clause(c)?;
            }
        }
        for s in 0..self.theory.selects().len() {
            self.check_select(s)?;
        }
        Ok(())
    }

    /// Runs unit propagation, select propagation and post-constraint
    /// propagation to a fixpoint.
    pub fn propagate(&mut self) -> Result<(), Conflict> {
        loop {
            while self.qhead < self.trail.len() {
                let lit = self.trail[self.qhead];
                self.qhead += 1;
                let a = lit.atom().index();
                for i in 0..self.clause_occ[a].len() {
                    let (c, pos) = self.clause_occ[a][i];
                    if pos != lit.is_positive() {
                        self.check_clause(c as usize)?;
                    }
                }
                for i in 0..self.sel_occ[a].len() {
                    self.check_select(self.sel_occ[a][i] as usize)?;
                }
            }
            if !self.propagate_posts()? {
                return Ok(());
            }
        }
    }

    /// One pass over the post-constraints. Returns whether anything was
    /// forced.
    fn propagate_posts(&mut self) -> Result<bool, Conflict> {
        if self.theory.post().is_empty() {
            return Ok(false);
        }
        self.ensure_upper();
        let theory = self.theory;
        let mut forced = false;
        let mut needed = Vec::new();
        for (p, clause) in theory.post().iter().enumerate() {
            if !self.post_live[p] {
                continue;
            }
            let mut unknown = None;
            let mut unknowns = 0;
            let mut holds = false;
            for &l in clause.literals() {
                match self.three_valued(l) {
                    TRUE => {
                        holds = true;
                        break;
                    }
                    UNSET => {
                        unknowns += 1;
                        unknown = Some(l);
                    }
                    _ => {}
                }
            }
            if holds {
                continue;
            }
            match (unknowns, unknown) {
                (0, _) => return Err(Conflict::Post(p)),
                (1, Some(l)) if self.is_decision[l.atom().index()] => {
                    self.force(l);
                    forced = true;
                    self.ensure_upper();
                }
                (1, Some(l)) if self.support && l.is_positive() => needed.push((l.atom(), p)),
                _ => {}
            }
        }
        if !needed.is_empty() {
            self.ensure_upper();
            forced |= self.propagate_support(needed)?;
        }
        Ok(forced)
    }

    /// Support propagation from Horn atoms every answer set extending the
    /// assignment must derive. A needed atom outside the lower closure with
    /// a single rule whose body lies within the upper closure makes that
    /// whole body needed: its constraint atoms are forced true and its Horn
    /// atoms become needed in turn. `origin` names the post-constraint that
    /// started each chain.
    fn propagate_support(&mut self, mut stack: Vec<(Atom, usize)>) -> Result<bool, Conflict> {
        let theory = self.theory;
        let mut forced = false;
        let mut seen = std::mem::take(&mut self.support_seen);
        let mut touched = Vec::new();
        let result = loop {
            let Some((h, origin)) = stack.pop() else {
                break Ok(forced);
            };
            if self.lower[h.index()] || seen[h.index()] {
                continue;
            }
            seen[h.index()] = true;
            touched.push(h);
            let mut support = None;
            let mut count = 0;
            for &r in &self.rules_by_head[h.index()] {
                if theory.horn()[r as usize]
                    .body()
                    .iter()
                    .all(|a| self.upper[a.index()])
                {
                    count += 1;
                    support = Some(r);
                    if count > 1 {
                        break;
                    }
                }
            }
            match (count, support) {
                (0, _) => break Err(Conflict::Post(origin)),
                (1, Some(r)) => {
                    for &a in theory.horn()[r as usize].body() {
                        if self.lower[a.index()] {
                            continue;
                        }
                        if self.is_decision[a.index()] {
                            self.force(a.positive());
                            forced = true;
                        } else {
                            stack.push((a, origin));
                        }
                    }
                }
                _ => {}
            }
        };
        for h in touched {
            seen[h.index()] = false;
        }
        self.support_seen = seen;
        result
    }

    pub fn decide(&mut self, lit: Literal) {
        self.levels.push(Level {
            trail_start: self.trail.len(),
            decision: lit,
            flipped: false,
        });
        self.assign(lit);
    }

    /// Undoes the most recent unflipped decision and asserts its negation.
    /// Returns false when every decision has been flipped.
    pub fn backtrack(&mut self) -> bool {
        while let Some(level) = self.levels.pop() {
            if level.flipped {
                continue;
            }
            self.stats.backtracks += 1;
            self.undo_to(level.trail_start);
            let flipped = !level.decision;
            self.levels.push(Level {
                trail_start: level.trail_start,
                decision: flipped,
                flipped: true,
            });
            self.assign(flipped);
            return true;
        }
        self.undo_to(0);
        false
    }

    /// Backtracks until propagation succeeds. Returns false once the search
    /// space is exhausted.
    pub fn backtrack_and_propagate(&mut self) -> bool {
        loop {
            if !self.backtrack() {
                return false;
            }
            if self.propagate().is_ok() {
                return true;
            }
        }
    }

    /// Truth vector over all atoms with the true constraint atoms set.
    pub fn candidate_truth(&self) -> Vec<bool> {
        self.value.iter().map(|&v| v == TRUE).collect()
    }

    /// Recomputes every counter and both closures from scratch and panics on
    /// any disagreement with the incremental state.
    pub fn check_invariants(&mut self) {
        let theory = self.theory;
        for (c, clause) in theory.constraints().iter().enumerate() {
            if !self.clause_live[c] {
                continue;
            }
            let t = clause
                .literals()
                .iter()
                .filter(|&&l| self.literal_value(l) == TRUE)
                .count();
            let f = clause
                .literals()
                .iter()
                .filter(|&&l| self.literal_value(l) == FALSE)
                .count();
            assert_eq!(self.clause_true[c] as usize, t, "true count of clause {c}");
            assert_eq!(
                self.clause_false[c] as usize, f,
                "false count of clause {c}"
            );
        }
        for (s, sel) in theory.selects().iter().enumerate() {
            let t = sel
                .scope()
                .iter()
                .filter(|a| self.value[a.index()] == TRUE)
                .count();
            let f = sel
                .scope()
                .iter()
                .filter(|a| self.value[a.index()] == FALSE)
                .count();
            assert_eq!(self.sel_true[s] as usize, t, "true count of select {s}");
            assert_eq!(self.sel_false[s] as usize, f, "false count of select {s}");
            assert_eq!(self.sel_sat[s], self.select_satisfied(s));
        }
        let mut lower = self.candidate_truth();
        self.index.close(std::iter::empty(), &mut lower);
        assert_eq!(lower, self.lower, "lower closure drifted");
        self.upper_dirty = true;
        self.ensure_upper();
        assert!(
            self.lower.iter().zip(&self.upper).all(|(&l, &u)| !l || u),
            "lower closure escapes upper closure"
        );
        for (i, &v) in self.value.iter().enumerate() {
            let on_trail = self.trail.iter().find(|l| l.atom().index() == i);
            match on_trail {
                Some(l) => assert_eq!(v, if l.is_positive() { TRUE } else { FALSE }),
                None => assert_eq!(v, UNSET),
            }
        }
    }
}

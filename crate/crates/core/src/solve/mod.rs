//! A DPLL-style search for answer sets with lookahead branching.
//!
//! The solver assigns only constraint atoms. After every assignment it
//! propagates constraint clauses and selects, and keeps two Horn closures:
//! the *lower* closure over the atoms assigned true and the *upper* closure
//! over the atoms not assigned false. A post-constraint with no literal true
//! in the lower closure and every Horn literal falsified by the upper one
//! either fails or forces its last open constraint literal.
//!
//! Branching atoms come from a weighted ranking of the unsatisfied
//! constraints; the top candidates are tried in both polarities and the one
//! whose weaker polarity simplifies the theory most is chosen.
//!
//! ```
//! use dc_core::format::parse_theory;
//! use dc_core::solve::{solve, SolverConfig, Status};
//!
//! let theory = parse_theory("dc 1.0\n#atoms c: a b\n#atoms h:\nc: a b\nc: -a -b\n").unwrap();
//! let outcome = solve(&theory, &SolverConfig::default());
//! assert_eq!(outcome.status, Status::Sat);
//! assert_eq!(outcome.witness.unwrap().0.names(&theory), ["a"]);
//! ```

mod config;
mod heuristics;
mod state;

use std::time::Instant;

use crate::model::{evaluate, is_answer_set, Atom, CandidateSet, Literal, Theory, Verdict};

pub use config::{
    Enumeration, SolveOutcome, SolveStats, SolverConfig, Status, TypeFactors, DEFAULT_LOOKAHEAD,
};
pub use heuristics::{choose_branch, BranchStats, ConstraintRef, Lookahead, ProbeResult};
pub use state::Conflict;

use state::State;

/// Search state over one theory.
pub struct Solver<'t> {
    state: State<'t>,
    config: SolverConfig,
    weights: Vec<u128>,
    started: bool,
}

enum Leaf {
    Stop,
    Continue,
}

impl<'t> Solver<'t> {
    pub fn new(theory: &'t Theory, config: SolverConfig) -> Self {
        Solver {
            weights: vec![0; 2 * theory.atoms().len()],
            state: State::new(theory, config.support_propagation),
            config,
            started: false,
        }
    }

    pub fn theory(&self) -> &'t Theory {
        self.state.theory
    }

    pub fn stats(&self) -> &SolveStats {
        &self.state.stats
    }

    /// The current value of a constraint atom, `None` if unassigned.
    pub fn value(&self, atom: Atom) -> Option<bool> {
        match self.state.value[atom.index()] {
            0 => None,
            v => Some(v > 0),
        }
    }

    /// Asserts `lit` without propagating. Panics if its atom is already
    /// assigned or is not a constraint atom occurring in the theory.
    pub fn assert_literal(&mut self, lit: Literal) {
        assert!(
            self.state.is_decision[lit.atom().index()],
            "only occurring constraint atoms can be assigned"
        );
        self.state.assign(lit);
    }

    /// Propagates to a fixpoint and returns the literals it forced, in the
    /// order they were assigned.
    pub fn propagate(&mut self) -> Result<Vec<Literal>, Conflict> {
        let start = self.state.trail.len();
        if !self.started {
            self.started = true;
            self.state.initial_checks()?;
        }
        self.propagate_state()?;
        Ok(self.state.trail[start..].to_vec())
    }

    /// Searches for one answer set.
    pub fn solve(mut self) -> SolveOutcome {
        let started = Instant::now();
        let mut witness = None;
        let status = self.search(|cand, closure| {
            witness = Some((cand, closure));
            Leaf::Stop
        });
        let mut stats = self.state.stats;
        stats.elapsed = started.elapsed();
        let status = match status {
            Status::Sat if witness.is_none() => Status::Unsat,
            s => s,
        };
        SolveOutcome {
            status,
            witness,
            stats,
        }
    }

    /// Collects up to `k` answer sets.
    pub fn enumerate(mut self, k: usize) -> Enumeration {
        let started = Instant::now();
        let mut models = Vec::new();
        let status = if k == 0 {
            Status::Sat
        } else {
            self.search(|cand, _| {
                models.push(cand);
                if models.len() >= k {
                    Leaf::Stop
                } else {
                    Leaf::Continue
                }
            })
        };
        let mut stats = self.state.stats;
        stats.elapsed = started.elapsed();
        let status = match status {
            Status::LimitReached => Status::LimitReached,
            _ if models.is_empty() && k > 0 => Status::Unsat,
            _ => Status::Sat,
        };
        Enumeration {
            models,
            status,
            stats,
        }
    }

    fn after_propagation(&mut self) {
        if self.config.check_invariants {
            self.state.check_invariants();
        }
    }

    /// Runs the search, reporting each answer set to `leaf`. Returns `Sat`
    /// when `leaf` stopped it or the space is exhausted, `LimitReached` when
    /// the decision budget ran out.
    fn search(
        &mut self,
        mut leaf: impl FnMut(CandidateSet, crate::model::ClosureResult) -> Leaf,
    ) -> Status {
        if self.propagate().is_err() {
            return Status::Sat;
        }
        self.after_propagation();
        loop {
            match self.lookahead() {
                Lookahead::Conflict => {
                    if !self.state.backtrack_and_propagate() {
                        return Status::Sat;
                    }
                }
                Lookahead::Candidates(stats) if stats.is_empty() => {
                    let theory = self.state.theory;
                    let truth = self.state.candidate_truth();
                    if let Verdict::Yes(closure) = evaluate(theory, &self.state.index, truth) {
                        let cand = CandidateSet::new(
                            self.state
                                .trail
                                .iter()
                                .filter(|l| l.is_positive())
                                .map(|l| l.atom()),
                        );
                        let confirmed = is_answer_set(theory, &cand)
                            .map(|v| v.is_yes())
                            .unwrap_or(false);
                        assert!(
                            confirmed,
                            "solver produced a candidate that is not an answer set"
                        );
                        if let Leaf::Stop = leaf(cand, closure) {
                            return Status::Sat;
                        }
                    }
                    if !self.state.backtrack_and_propagate() {
                        return Status::Sat;
                    }
                }
                Lookahead::Candidates(stats) => {
                    if self
                        .config
                        .max_decisions
                        .is_some_and(|m| self.state.stats.decisions >= m)
                    {
                        return Status::LimitReached;
                    }
                    let lit = choose_branch(&stats).expect("non-empty statistics");
                    self.state.stats.decisions += 1;
                    self.state.decide(lit);
                    if self.state.propagate().is_err() && !self.state.backtrack_and_propagate() {
                        return Status::Sat;
                    }
                }
            }
            self.after_propagation();
        }
    }
}

/// Finds one answer set of `theory`.
pub fn solve(theory: &Theory, config: &SolverConfig) -> SolveOutcome {
    Solver::new(theory, config.clone()).solve()
}

/// Finds up to `k` answer sets of `theory`, each exactly once.
pub fn enumerate(theory: &Theory, k: usize, config: &SolverConfig) -> Enumeration {
    Solver::new(theory, config.clone()).enumerate(k)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use num_rational::Ratio;

    use super::*;
    use crate::format::parse_theory;
    use crate::model::brute_force_answer_sets;

    fn theory(body: &str) -> Theory {
        parse_theory(&format!("dc 1.0\n{body}")).unwrap()
    }

    fn lit(t: &Theory, name: &str) -> Literal {
        let (name, positive) = match name.strip_prefix('-') {
            Some(n) => (n, false),
            None => (name, true),
        };
        Literal::new(t.atoms().lookup(name).unwrap(), positive)
    }

    fn names(t: &Theory, lits: &[Literal]) -> Vec<String> {
        lits.iter()
            .map(|l| {
                let n = t.atoms().name(l.atom());
                if l.is_positive() {
                    n.to_string()
                } else {
                    format!("-{n}")
                }
            })
            .collect()
    }

    fn config() -> SolverConfig {
        SolverConfig::default().with_invariant_checks(true)
    }

    #[test]
    fn unit_propagation_chains() {
        let t = theory("#atoms c: a b\n#atoms h:\nc: a\nc: -a b\n");
        let mut s = Solver::new(&t, config());
        let forced = s.propagate().unwrap();
        assert_eq!(names(&t, &forced), ["a", "b"]);
    }

    #[test]
    fn saturated_select_forces_the_rest() {
        let t = theory("#atoms c: a b c\n#atoms h:\ns: 2 2 : a b c\n");
        let mut s = Solver::new(&t, config());
        assert!(s.propagate().unwrap().is_empty());
        s.assert_literal(lit(&t, "-a"));
        assert_eq!(names(&t, &s.propagate().unwrap()), ["b", "c"]);
    }

    #[test]
    fn select_upper_bound_forces_false() {
        let t = theory("#atoms c: a b c\n#atoms h:\ns: 0 1 : a b c\n");
        let mut s = Solver::new(&t, config());
        s.propagate().unwrap();
        s.assert_literal(lit(&t, "b"));
        assert_eq!(names(&t, &s.propagate().unwrap()), ["-a", "-c"]);
    }

    const HAMILTON_TRIANGLE: &str = "\
#atoms c: hc(1,2) hc(2,3) hc(3,1)
#atoms h: vstd(1) vstd(2) vstd(3)
h: hc(1,2) -> vstd(2)
h: vstd(2) hc(2,3) -> vstd(3)
h: vstd(3) hc(3,1) -> vstd(1)
p: vstd(1)
p: vstd(2)
p: vstd(3)
";

    #[test]
    fn open_horn_literals_force_nothing() {
        let t = theory(HAMILTON_TRIANGLE);
        let mut s = Solver::new(&t, config().with_support_propagation(false));
        assert!(s.propagate().unwrap().is_empty());
    }

    #[test]
    fn needed_atoms_force_their_only_support() {
        let t = theory(HAMILTON_TRIANGLE);
        let mut s = Solver::new(&t, config());
        let mut forced = names(&t, &s.propagate().unwrap());
        forced.sort();
        assert_eq!(forced, ["hc(1,2)", "hc(2,3)", "hc(3,1)"]);
    }

    #[test]
    fn two_supports_force_nothing() {
        let t = theory("#atoms c: a b\n#atoms h: x\nh: a -> x\nh: b -> x\np: x\n");
        let mut s = Solver::new(&t, config());
        assert!(s.propagate().unwrap().is_empty());
        s.assert_literal(lit(&t, "-a"));
        assert_eq!(names(&t, &s.propagate().unwrap()), ["b"]);
    }

    #[test]
    fn post_constraint_forces_its_last_constraint_literal() {
        let t = theory("#atoms c: a b\n#atoms h: x\nh: a -> x\np: x b\n");
        let mut s = Solver::new(&t, config());
        assert!(s.propagate().unwrap().is_empty());
        s.assert_literal(lit(&t, "-a"));
        assert_eq!(names(&t, &s.propagate().unwrap()), ["b"]);
    }

    #[test]
    fn dropping_an_edge_of_the_only_cycle_conflicts() {
        let t = theory(HAMILTON_TRIANGLE);
        let mut s = Solver::new(&t, config().with_support_propagation(false));
        s.started = true;
        s.assert_literal(lit(&t, "-hc(1,2)"));
        assert_eq!(s.propagate(), Err(Conflict::Post(0)));
    }

    #[test]
    fn constraint_weights() {
        let t = theory("#atoms c: a b c d\n#atoms h:\nc: a b\ns: 1 1 : b c d\n");
        let mut s = Solver::new(&t, config());
        assert_eq!(
            s.constraint_weight(ConstraintRef::Clause(0)),
            Some(Ratio::new(1, 2))
        );
        assert_eq!(
            s.constraint_weight(ConstraintRef::Select(0)),
            Some(Ratio::new(2, 3))
        );
        s.assert_literal(lit(&t, "a"));
        assert_eq!(s.constraint_weight(ConstraintRef::Clause(0)), None);
    }

    #[test]
    fn ranking_prefers_shared_literals() {
        let t = theory("#atoms c: a b c\n#atoms h:\nc: a b\nc: a c\n");
        let mut s = Solver::new(&t, config());
        let ranked = s.rank_literals(3);
        assert_eq!(names(&t, &ranked), ["a", "b", "c"]);
        let all = s.rank_literals(10);
        assert_eq!(names(&t, &all), ["a", "b", "c", "-a", "-b", "-c"]);
    }

    #[test]
    fn failed_literal_in_both_polarities_is_a_conflict() {
        let t = theory("#atoms c: a b\n#atoms h:\nc: a b\nc: a -b\nc: -a b\nc: -a -b\n");
        let mut s = Solver::new(&t, config());
        s.propagate().unwrap();
        assert_eq!(s.lookahead(), Lookahead::Conflict);
    }

    #[test]
    fn failed_literal_forces_the_other_polarity() {
        let t = theory("#atoms c: a b c\n#atoms h:\nc: -a b\nc: -a -b\nc: b c\n");
        let mut s = Solver::new(&t, config());
        s.propagate().unwrap();
        let Lookahead::Candidates(stats) = s.lookahead() else {
            panic!("unexpected conflict");
        };
        assert_eq!(s.value(t.atoms().lookup("a").unwrap()), Some(false));
        assert!(stats
            .iter()
            .all(|b| b.atom != t.atoms().lookup("a").unwrap()));
    }

    #[test]
    fn branch_choice_maximises_the_weaker_polarity() {
        let stats = [
            BranchStats {
                atom: Atom::new(0),
                on_true: ProbeResult {
                    forced: 3,
                    satisfied: 2,
                },
                on_false: ProbeResult {
                    forced: 1,
                    satisfied: 1,
                },
            },
            BranchStats {
                atom: Atom::new(1),
                on_true: ProbeResult {
                    forced: 2,
                    satisfied: 2,
                },
                on_false: ProbeResult {
                    forced: 2,
                    satisfied: 2,
                },
            },
        ];
        assert_eq!(choose_branch(&stats), Some(Atom::new(1).positive()));
        let lopsided = [BranchStats {
            atom: Atom::new(4),
            on_true: ProbeResult {
                forced: 0,
                satisfied: 1,
            },
            on_false: ProbeResult {
                forced: 2,
                satisfied: 0,
            },
        }];
        assert_eq!(choose_branch(&lopsided), Some(Atom::new(4).negative()));
        assert_eq!(choose_branch(&[]), None);
    }

    #[test]
    fn contradiction_is_unsat() {
        let t = theory("#atoms c: a\n#atoms h:\nc: a\nc: -a\n");
        let out = solve(&t, &config());
        assert_eq!(out.status, Status::Unsat);
        assert!(out.witness.is_none());
    }

    #[test]
    fn disjunction_has_three_answer_sets() {
        let t = theory("#atoms c: a b\n#atoms h:\nc: a b\n");
        let e = enumerate(&t, 10, &config());
        assert_eq!(e.status, Status::Sat);
        let found: BTreeSet<CandidateSet> = e.models.into_iter().collect();
        let oracle: BTreeSet<CandidateSet> = brute_force_answer_sets(&t, usize::MAX)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(found.len(), 3);
        assert_eq!(found, oracle);
    }

    #[test]
    fn enumeration_stops_at_k() {
        let t = theory("#atoms c: a b\n#atoms h:\nc: a b\n");
        assert_eq!(enumerate(&t, 2, &config()).models.len(), 2);
    }

    #[test]
    fn hamilton_triangle_solves() {
        let t = theory(HAMILTON_TRIANGLE);
        let out = solve(&t, &config());
        assert_eq!(out.status, Status::Sat);
        let (m, closure) = out.witness.unwrap();
        assert_eq!(m.names(&t), ["hc(1,2)", "hc(2,3)", "hc(3,1)"]);
        assert_eq!(closure.derived.len(), 3);
    }

    #[test]
    fn empty_theory_has_the_empty_answer_set() {
        let t = theory("#atoms c:\n#atoms h:\n");
        let e = enumerate(&t, 5, &config());
        assert_eq!(e.models, [CandidateSet::default()]);
    }

    #[test]
    fn decision_limit() {
        let t = theory("#atoms c: a b c d\n#atoms h:\nc: a b c d\nc: -a -b\n");
        let out = solve(&t, &config().with_max_decisions(0));
        // either propagation settles it or the budget runs out immediately
        assert!(matches!(out.status, Status::LimitReached | Status::Sat));
        let e = enumerate(&t, 100, &config().with_max_decisions(1));
        assert_eq!(e.status, Status::LimitReached);
    }

    #[test]
    fn atoms_outside_every_constraint_stay_false() {
        let t = theory("#atoms c: a b\n#atoms h: x\nh: a -> x\np: x\n");
        // b is unused and never assigned
        let e = enumerate(&t, 10, &config());
        assert_eq!(e.models.len(), 1);
        assert_eq!(e.models[0].names(&t), ["a"]);
    }
}

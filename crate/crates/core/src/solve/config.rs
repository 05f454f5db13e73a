use std::time::Duration;

use crate::model::{CandidateSet, ClosureResult};

/// Multipliers applied to a constraint's weight by constraint type.
///
/// Only ratios matter: scaling all three by the same positive factor leaves
/// every ranking unchanged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TypeFactors {
    pub clause: u32,
    pub select: u32,
    pub post: u32,
}

impl Default for TypeFactors {
    fn default() -> Self {
        TypeFactors {
            clause: 1,
            select: 2,
            post: 1,
        }
    }
}

impl TypeFactors {
    pub fn scaled(self, by: u32) -> Self {
        TypeFactors {
            clause: self.clause * by,
            select: self.select * by,
            post: self.post * by,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    /// Atoms tested per lookahead round.
    pub lookahead_count: usize,
    /// Give up after this many branching decisions.
    pub max_decisions: Option<u64>,
    pub type_factors: TypeFactors,
    /// Force the body of the only rule left able to derive a Horn atom that
    /// some post-constraint needs. Off, post-constraints force only their
    /// last open constraint literal.
    pub support_propagation: bool,
    /// Recount every counter and recompute both closures after each
    /// propagation fixpoint, panicking on any mismatch. Expensive.
    pub check_invariants: bool,
}

pub const DEFAULT_LOOKAHEAD: usize = 16;

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            lookahead_count: DEFAULT_LOOKAHEAD,
            max_decisions: None,
            type_factors: TypeFactors::default(),
            support_propagation: true,
            check_invariants: cfg!(debug_assertions),
        }
    }
}

impl SolverConfig {
    pub fn with_lookahead(mut self, count: usize) -> Self {
        assert!(count >= 1, "lookahead_count must be positive");
        self.lookahead_count = count;
        self
    }

    pub fn with_max_decisions(mut self, limit: u64) -> Self {
        self.max_decisions = Some(limit);
        self
    }

    pub fn with_type_factors(mut self, factors: TypeFactors) -> Self {
        self.type_factors = factors;
        self
    }

    pub fn with_support_propagation(mut self, on: bool) -> Self {
        self.support_propagation = on;
        self
    }

    pub fn with_invariant_checks(mut self, on: bool) -> Self {
        self.check_invariants = on;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    LimitReached,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub decisions: u64,
    /// Literals assigned by propagation, probes included.
    pub propagations: u64,
    /// Tentative assignments made during lookahead.
    pub lookahead_tests: u64,
    pub backtracks: u64,
    pub elapsed: Duration,
}

impl SolveStats {
    /// The counters without the wall-clock time, for reproducibility checks.
    pub fn counters(&self) -> [u64; 4] {
        [
            self.decisions,
            self.propagations,
            self.lookahead_tests,
            self.backtracks,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub status: Status,
    pub witness: Option<(CandidateSet, ClosureResult)>,
    pub stats: SolveStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub models: Vec<CandidateSet>,
    /// `Sat` if at least one model was found and the search stopped because
    /// `k` models were reached or the space was exhausted; `Unsat` if the
    /// space held none; `LimitReached` if the decision limit cut it short.
    pub status: Status,
    pub stats: SolveStats,
}

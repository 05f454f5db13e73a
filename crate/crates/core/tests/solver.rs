mod common;

use std::collections::BTreeSet;

use common::{naive_answer_sets, naive_is_answer_set, small_theory};
use dc_core::format::parse_theory;
use dc_core::solve::{enumerate, solve, SolverConfig, Status, TypeFactors};
use dc_core::{Atom, Theory};
use proptest::prelude::*;

fn model_sets(theory: &Theory, config: &SolverConfig) -> (Status, Vec<BTreeSet<Atom>>) {
    let e = enumerate(theory, usize::MAX, config);
    (
        e.status,
        e.models.into_iter().map(|m| m.trues().clone()).collect(),
    )
}

fn as_set(models: Vec<BTreeSet<Atom>>) -> BTreeSet<BTreeSet<Atom>> {
    let n = models.len();
    let set: BTreeSet<_> = models.into_iter().collect();
    assert_eq!(set.len(), n, "enumeration repeated an answer set");
    set
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn enumeration_equals_brute_force(r in small_theory()) {
        let t = r.build();
        let (status, models) = model_sets(&t, &SolverConfig::default());
        let expected = naive_answer_sets(&t);
        prop_assert_eq!(status, if expected.is_empty() { Status::Unsat } else { Status::Sat });
        prop_assert_eq!(as_set(models), expected);
    }

    #[test]
    fn solve_agrees_with_brute_force(r in small_theory()) {
        let t = r.build();
        let outcome = solve(&t, &SolverConfig::default());
        let expected = naive_answer_sets(&t);
        match outcome.witness {
            Some((m, closure)) => {
                prop_assert_eq!(outcome.status, Status::Sat);
                prop_assert!(naive_is_answer_set(&t, m.trues()));
                prop_assert!(m.trues().is_subset(&closure.closure));
            }
            None => {
                prop_assert_eq!(outcome.status, Status::Unsat);
                prop_assert!(expected.is_empty());
            }
        }
    }

    #[test]
    fn lookahead_width_does_not_change_answer_sets(r in small_theory()) {
        let t = r.build();
        let narrow = model_sets(&t, &SolverConfig::default().with_lookahead(1));
        let wide = model_sets(&t, &SolverConfig::default());
        prop_assert_eq!(narrow.0, wide.0);
        prop_assert_eq!(as_set(narrow.1), as_set(wide.1));
    }

    #[test]
    fn support_propagation_does_not_change_answer_sets(r in small_theory()) {
        let t = r.build();
        let plain = model_sets(&t, &SolverConfig::default().with_support_propagation(false));
        let full = model_sets(&t, &SolverConfig::default());
        prop_assert_eq!(as_set(plain.1), as_set(full.1));
    }

    #[test]
    fn scaling_type_factors_changes_nothing(r in small_theory(), k in 2u32..7) {
        let t = r.build();
        let base = SolverConfig::default();
        let scaled = base.clone().with_type_factors(TypeFactors::default().scaled(k));
        let a = enumerate(&t, usize::MAX, &base);
        let b = enumerate(&t, usize::MAX, &scaled);
        prop_assert_eq!(a.models, b.models);
        prop_assert_eq!(a.stats.counters(), b.stats.counters());
    }

    #[test]
    fn enumeration_is_deterministic(r in small_theory()) {
        let t = r.build();
        let a = enumerate(&t, usize::MAX, &SolverConfig::default());
        let b = enumerate(&t, usize::MAX, &SolverConfig::default());
        prop_assert_eq!(a.models, b.models);
        prop_assert_eq!(a.stats.counters(), b.stats.counters());
    }

    #[test]
    fn enumeration_prefix_matches_limit(r in small_theory(), k in 1usize..4) {
        let t = r.build();
        let all = enumerate(&t, usize::MAX, &SolverConfig::default());
        let some = enumerate(&t, k, &SolverConfig::default());
        let n = k.min(all.models.len());
        prop_assert_eq!(&some.models[..], &all.models[..n]);
    }
}

#[test]
fn decision_limit_reports_limit_reached() {
    let t =
        parse_theory("dc 1.0\n#atoms c: a b c d\n#atoms h:\nc: a b\nc: c d\nc: -a -b\nc: -c -d\n")
            .unwrap();
    let out = enumerate(
        &t,
        usize::MAX,
        &SolverConfig::default().with_max_decisions(1),
    );
    assert_eq!(out.status, Status::LimitReached);
    assert!(out.stats.decisions <= 1);
    assert_eq!(
        enumerate(&t, usize::MAX, &SolverConfig::default())
            .models
            .len(),
        4
    );
}

#[test]
fn contradiction_is_unsat_without_decisions() {
    let t = parse_theory("dc 1.0\n#atoms c: a\n#atoms h:\nc: a\nc: -a\n").unwrap();
    let out = solve(&t, &SolverConfig::default());
    assert_eq!(out.status, Status::Unsat);
    assert_eq!(out.stats.decisions, 0);
    assert!(out.witness.is_none());
}

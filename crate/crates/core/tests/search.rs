use std::time::Duration;

use bolforge_core::search::{
    enumerate, find_first, ClassConstraint, Limits, SearchError, SearchSpec, Target,
};

#[test]
fn results_do_not_depend_on_worker_count() {
    for (n, class) in [(6, ClassConstraint::None), (8, ClassConstraint::LeftBol), (8, ClassConstraint::RightBol)] {
        let one = enumerate(&SearchSpec::enumerate(n, class).with_workers(1)).unwrap();
        let many = enumerate(&SearchSpec::enumerate(n, class).with_workers(8)).unwrap();
        assert_eq!(one.representatives, many.representatives);
        assert_eq!(one.stats, many.stats);
    }
}

#[test]
fn find_first_is_deterministic() {
    let spec = SearchSpec::find(6, ClassConstraint::None, Target::CommutantNotSubloop);
    let first = find_first(&spec.clone().with_workers(1)).unwrap();
    for workers in [2, 4, 8] {
        let again = find_first(&spec.clone().with_workers(workers)).unwrap();
        assert_eq!(again.witnesses, first.witnesses);
    }
    assert!(!first.exhausted);
}

#[test]
fn node_budget_is_reported() {
    let spec = SearchSpec::enumerate(7, ClassConstraint::None).with_limits(Limits {
        max_nodes: 5_000,
        max_wall: Duration::from_secs(60),
    });
    match enumerate(&spec) {
        Err(SearchError::BudgetExhausted { partial }) => {
            assert!(!partial.exhausted);
            assert!(partial.stats.nodes >= 5_000);
            for l in &partial.representatives {
                assert_eq!(l.order(), 7);
            }
        }
        other => panic!("expected budget exhaustion, got {other:?}"),
    }
}

#[test]
fn find_with_budget_does_not_claim_absence() {
    let spec = SearchSpec::find(9, ClassConstraint::None, Target::ConjectureWitness).with_limits(Limits {
        max_nodes: 2_000,
        max_wall: Duration::from_secs(60),
    });
    assert!(matches!(find_first(&spec), Err(SearchError::BudgetExhausted { .. })));
}

#[test]
fn conjecture_witness_absent_up_to_nine() {
    for n in 1..=9 {
        match find_first(&SearchSpec::find(n, ClassConstraint::LeftBol, Target::ConjectureWitness)) {
            Err(SearchError::NotFound { .. }) => {}
            other => panic!("order {n}: {other:?}"),
        }
    }
}

#[test]
fn invalid_specs_are_rejected() {
    let bad = [
        SearchSpec::enumerate(0, ClassConstraint::None),
        SearchSpec::enumerate(11, ClassConstraint::None),
        SearchSpec::enumerate(4, ClassConstraint::None).with_workers(0),
        SearchSpec::enumerate(4, ClassConstraint::None).with_limits(Limits {
            max_nodes: 0,
            max_wall: Duration::from_secs(1),
        }),
    ];
    for spec in bad {
        assert!(matches!(enumerate(&spec), Err(SearchError::InvalidSpec(_))), "{spec:?}");
    }
    let find = SearchSpec::find(4, ClassConstraint::None, Target::CommutantNotSubloop);
    assert!(matches!(enumerate(&find), Err(SearchError::InvalidSpec(_))));
    assert!(matches!(
        find_first(&SearchSpec::enumerate(4, ClassConstraint::None)),
        Err(SearchError::InvalidSpec(_))
    ));
}

#[test]
fn order_nine_bol_loops_are_groups() {
    let r = enumerate(&SearchSpec::enumerate(9, ClassConstraint::LeftBol)).unwrap();
    let groups = enumerate(&SearchSpec::enumerate(9, ClassConstraint::Associative)).unwrap();
    assert_eq!(r.representatives, groups.representatives);
    assert_eq!(r.representatives.len(), 2);
}

#[test]
fn order_eight_right_bol_commutants_are_all_subloops() {
    let spec = SearchSpec::find(8, ClassConstraint::RightBol, Target::CommutantNotSubloop).with_workers(1);
    assert!(matches!(find_first(&spec), Err(SearchError::NotFound { .. })));
}

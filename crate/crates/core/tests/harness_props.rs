use proptest::prelude::*;

use mutlearn_core::harness::{verdict, Status};
use mutlearn_core::lang::TestOutcome;

fn outcome() -> impl Strategy<Value = TestOutcome> {
    (0u8..12, any::<bool>(), prop_oneof![Just(0u64), 1u64..50]).prop_map(|(t, passed, visits)| TestOutcome {
        test_id: format!("T.test{t}"),
        passed,
        visits,
        error: None,
    })
}

fn suite() -> impl Strategy<Value = Vec<TestOutcome>> {
    prop::collection::vec(outcome(), 0..10).prop_map(|mut v| {
        v.sort_by(|a, b| a.test_id.cmp(&b.test_id));
        v.dedup_by(|a, b| a.test_id == b.test_id);
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn zero_visit_failures_never_matter(tests in suite(), at in any::<prop::sample::Index>()) {
        let flaky = TestOutcome { test_id: "Flaky.testSometimes".into(), passed: false, visits: 0, error: None };
        let mut with = tests.clone();
        with.insert(at.index(tests.len() + 1), flaky);
        let a = verdict(1, "OP", 0, &tests, &[]);
        let b = verdict(1, "OP", 0, &with, &[]);
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(&a.killing_tests, &b.killing_tests);
        prop_assert_eq!(&a.covering_tests, &b.covering_tests);
        prop_assert!(b.disregarded_failures.contains(&"Flaky.testSometimes".to_string()));
    }

    #[test]
    fn adding_a_test_never_unkills(tests in suite(), extra in outcome()) {
        prop_assume!(tests.iter().all(|t| t.test_id != extra.test_id));
        let before = verdict(1, "OP", 0, &tests, &[]);
        let mut more = tests.clone();
        more.push(extra);
        let after = verdict(1, "OP", 0, &more, &[]);
        if before.status == Status::Killed {
            prop_assert_eq!(after.status, Status::Killed);
        }
        if before.status == Status::Survived {
            prop_assert_ne!(after.status, Status::NotCovered);
        }
    }

    #[test]
    fn verdict_fields_are_consistent(tests in suite(), excluded in prop::collection::vec(0u8..12, 0..4)) {
        let excluded: Vec<String> = excluded.iter().map(|t| format!("T.test{t}")).collect();
        let v = verdict(9, "OP", 3, &tests, &excluded);
        for (t, n) in &v.killing_tests {
            prop_assert!(*n > 0);
            prop_assert!(v.covering_tests.contains(&(t.clone(), *n)));
        }
        let named = v.killing_tests.iter().chain(&v.covering_tests).map(|(t, _)| t).chain(&v.disregarded_failures);
        for t in named {
            prop_assert!(!excluded.contains(t));
        }
        let expect = if !v.killing_tests.is_empty() {
            Status::Killed
        } else if v.covering_tests.is_empty() {
            Status::NotCovered
        } else {
            Status::Survived
        };
        prop_assert_eq!(v.status, expect);
    }
}

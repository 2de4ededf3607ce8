use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use mutlearn_core::harness::{MutantVerdict, Status};
use mutlearn_core::report::{
    aggregate, coverage_summary, expanding_series, kill_report_csv, kill_report_text, series_csv,
};

fn verdicts() -> impl Strategy<Value = Vec<MutantVerdict>> {
    let one = (0u8..5, 0u8..3, 1u32..30, prop::collection::btree_map(0u8..8, 1u64..20, 0..4), any::<bool>());
    prop::collection::vec(one, 0..300).prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (op, st, day, cover, kills))| {
                let covering: Vec<(String, u64)> = cover.into_iter().map(|(t, n)| (format!("T.t{t}"), n)).collect();
                let status = match st {
                    _ if covering.is_empty() => Status::NotCovered,
                    0 if kills => Status::Killed,
                    _ => Status::Survived,
                };
                let killing = if status == Status::Killed { covering[..1].to_vec() } else { Vec::new() };
                MutantVerdict {
                    mutant_id: i as u64 + 1,
                    operator: format!("OP{op}"),
                    timestamp: day,
                    status,
                    killing_tests: killing,
                    covering_tests: covering,
                    disregarded_failures: Vec::new(),
                }
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn kill_report_matches_recount(vs in verdicts(), floor in 0usize..40) {
        let r = aggregate(&vs, floor);
        let mut recount: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
        for v in &vs {
            let e = recount.entry(&v.operator).or_default();
            e[v.status as usize] += 1;
        }
        prop_assert_eq!(r.rows.len(), recount.len());
        let mut sums = [0usize; 4];
        for row in &r.rows {
            let c = recount[row.operator.as_str()];
            prop_assert_eq!((row.killed, row.survived, row.not_covered), (c[0], c[1], c[2]));
            prop_assert_eq!(row.killed + row.survived + row.not_covered, row.occurrence);
            prop_assert!((0.0..=1.0).contains(&row.kill_rate()));
            prop_assert_eq!(row.low_sample, row.occurrence < floor);
            for (s, x) in sums.iter_mut().zip([row.occurrence, row.killed, row.survived, row.not_covered]) {
                *s += x;
            }
        }
        prop_assert_eq!([r.totals.occurrence, r.totals.killed, r.totals.survived, r.totals.not_covered], sums);
        prop_assert_eq!(kill_report_text(&r), kill_report_text(&aggregate(&vs, floor)));
        prop_assert_eq!(kill_report_csv(&r), kill_report_csv(&aggregate(&vs, floor)));
    }

    #[test]
    fn series_ends_at_kill_rate(vs in verdicts()) {
        let s = expanding_series(&vs);
        let r = aggregate(&vs, 0);
        for row in &r.rows {
            let points = &s[&row.operator];
            prop_assert!(points.windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert_eq!(points.last().unwrap().1, row.kill_rate());
        }
        prop_assert_eq!(series_csv(&s), series_csv(&expanding_series(&vs)));
    }

    #[test]
    fn coverage_partition(vs in verdicts()) {
        let c = coverage_summary(&vs);
        let pairs: usize = vs.iter().map(|v| v.covering_tests.len()).sum();
        let killed: usize = vs.iter().filter(|v| v.status == Status::Killed).map(|v| v.covering_tests.len()).sum();
        let visits: u64 = vs.iter().flat_map(|v| &v.covering_tests).map(|(_, n)| n).sum();
        let tests: BTreeSet<&String> = vs.iter().flat_map(|v| &v.covering_tests).map(|(t, _)| t).collect();
        prop_assert_eq!(c.covering_pairs, pairs);
        prop_assert_eq!(c.covering_pairs_killed, killed);
        prop_assert_eq!(c.covering_pairs_killed + c.covering_pairs_surviving, c.covering_pairs);
        prop_assert_eq!(c.total_visits, visits);
        prop_assert_eq!(c.unique_tests, tests.len());
    }
}

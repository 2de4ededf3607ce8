//! Aggregation of verdicts into kill-rate tables, expanding-average series,
//! survivor reports and coverage summaries. Every output is a pure function
//! of its input verdicts.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::harness::{MutantVerdict, Status};
use crate::mutagen::MutantRecord;

/// Reporting floor used for headline tables.
pub const DEFAULT_OCCURRENCE_FLOOR: usize = 100;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KillRow {
    pub operator: String,
    pub occurrence: usize,
    pub killed: usize,
    pub survived: usize,
    pub not_covered: usize,
    pub low_sample: bool,
}

impl KillRow {
    /// Killed over all evaluated mutants.
    pub fn kill_rate(&self) -> f64 {
        ratio(self.killed, self.occurrence)
    }

    /// Killed over covered mutants only.
    pub fn covered_kill_rate(&self) -> f64 {
        ratio(self.killed, self.killed + self.survived)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct KillReport {
    /// One row per operator, sorted by name.
    pub rows: Vec<KillRow>,
    pub totals: KillRow,
}

impl KillReport {
    /// Rows at or above the occurrence floor.
    pub fn headline(&self) -> impl Iterator<Item = &KillRow> {
        self.rows.iter().filter(|r| !r.low_sample)
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Per-operator counts. Operators with fewer than `floor` mutants are flagged
/// `low_sample`.
pub fn aggregate(verdicts: &[MutantVerdict], floor: usize) -> KillReport {
    let mut by_op: BTreeMap<&str, KillRow> = BTreeMap::new();
    for v in verdicts {
        let row = by_op.entry(&v.operator).or_insert_with(|| KillRow {
            operator: v.operator.clone(),
            ..Default::default()
        });
        row.occurrence += 1;
        match v.status {
            Status::Killed => row.killed += 1,
            Status::Survived => row.survived += 1,
            Status::NotCovered => row.not_covered += 1,
        }
    }
    let mut totals = KillRow {
        operator: "TOTAL".into(),
        ..Default::default()
    };
    let rows: Vec<KillRow> = by_op
        .into_values()
        .map(|mut r| {
            r.low_sample = r.occurrence < floor;
            totals.occurrence += r.occurrence;
            totals.killed += r.killed;
            totals.survived += r.survived;
            totals.not_covered += r.not_covered;
            r
        })
        .collect();
    KillReport { rows, totals }
}

/// Kill report as aligned text. Low-sample rows are listed after the table.
pub fn kill_report_text(r: &KillReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>10} {:>8} {:>8} {:>11} {:>9} {:>12}",
        "operator", "occurrence", "killed", "survived", "not_covered", "kill_rate", "covered_rate"
    );
    let line = |out: &mut String, row: &KillRow| {
        let _ = writeln!(
            out,
            "{:<24} {:>10} {:>8} {:>8} {:>11} {:>9.4} {:>12.4}",
            row.operator,
            row.occurrence,
            row.killed,
            row.survived,
            row.not_covered,
            row.kill_rate(),
            row.covered_kill_rate()
        );
    };
    for row in r.headline() {
        line(&mut out, row);
    }
    line(&mut out, &r.totals);
    let low: Vec<&KillRow> = r.rows.iter().filter(|r| r.low_sample).collect();
    if !low.is_empty() {
        let _ = writeln!(out, "\nbelow occurrence floor:");
        for row in low {
            line(&mut out, row);
        }
    }
    out
}

/// Kill report as comma-separated values, one row per operator plus totals.
pub fn kill_report_csv(r: &KillReport) -> String {
    let mut out = String::from("operator,occurrence,killed,survived,not_covered,kill_rate,covered_kill_rate,low_sample\n");
    for row in r.rows.iter().chain(core::iter::once(&r.totals)) {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6},{:.6},{}",
            row.operator,
            row.occurrence,
            row.killed,
            row.survived,
            row.not_covered,
            row.kill_rate(),
            row.covered_kill_rate(),
            row.low_sample
        );
    }
    out
}

/// Operator to `(day, cumulative kill rate)` for each day with at least one
/// cumulative mutant.
pub type ExpandingSeries = BTreeMap<String, Vec<(u32, f64)>>;

pub fn expanding_series(verdicts: &[MutantVerdict]) -> ExpandingSeries {
    let mut per: BTreeMap<&str, BTreeMap<u32, (usize, usize)>> = BTreeMap::new();
    for v in verdicts {
        let day = per.entry(&v.operator).or_default().entry(v.timestamp).or_default();
        day.1 += 1;
        if v.status == Status::Killed {
            day.0 += 1;
        }
    }
    per.into_iter()
        .map(|(op, days)| {
            let (mut k, mut n) = (0, 0);
            let points = days
                .into_iter()
                .map(|(d, (dk, dn))| {
                    k += dk;
                    n += dn;
                    (d, ratio(k, n))
                })
                .collect();
            (op.into(), points)
        })
        .collect()
}

/// Series as CSV with columns `operator,day,kill_rate`.
pub fn series_csv(s: &ExpandingSeries) -> String {
    let mut out = String::from("operator,day,kill_rate\n");
    for (op, points) in s {
        for (d, r) in points {
            let _ = writeln!(out, "{op},{d},{r:.6}");
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CoverageSummary {
    /// Distinct tests with at least one visit to any mutant.
    pub unique_tests: usize,
    /// Sum of visits over all covering pairs.
    pub total_visits: u64,
    /// `(test, mutant)` pairs with at least one visit.
    pub covering_pairs: usize,
    pub covering_pairs_killed: usize,
    pub covering_pairs_surviving: usize,
}

pub fn coverage_summary(verdicts: &[MutantVerdict]) -> CoverageSummary {
    let mut tests = BTreeSet::new();
    let mut s = CoverageSummary::default();
    for v in verdicts {
        for (t, n) in &v.covering_tests {
            tests.insert(t.as_str());
            s.total_visits += n;
            s.covering_pairs += 1;
            match v.status {
                Status::Killed => s.covering_pairs_killed += 1,
                _ => s.covering_pairs_surviving += 1,
            }
        }
    }
    s.unique_tests = tests.len();
    s
}

pub fn coverage_summary_text(s: &CoverageSummary) -> String {
    format!(
        "unique_tests,total_visits,covering_pairs,covering_pairs_killed,covering_pairs_surviving\n{},{},{},{},{}\n",
        s.unique_tests, s.total_visits, s.covering_pairs, s.covering_pairs_killed, s.covering_pairs_surviving
    )
}

/// Developer-facing report of surviving mutants with the tests that covered
/// them, followed by mutants no test reached.
pub fn survivor_report(verdicts: &[MutantVerdict], mutants: &[MutantRecord]) -> String {
    let find = |id: u64| mutants.iter().find(|m| m.mutant_id == id);
    let mut out = String::new();
    let survivors: Vec<&MutantVerdict> = verdicts.iter().filter(|v| v.status == Status::Survived).collect();
    let _ = writeln!(out, "Surviving mutants: {}", survivors.len());
    for v in &survivors {
        let _ = writeln!(out, "\n== mutant {} ({}) ==", v.mutant_id, v.operator);
        if let Some(t) = crate::operators::template(&v.operator) {
            let _ = writeln!(out, "template: {t}");
        }
        match find(v.mutant_id) {
            Some(m) => {
                let _ = writeln!(out, "file: {}", m.file);
                out.push_str(&m.diff_text);
                if !m.diff_text.ends_with('\n') && !m.diff_text.is_empty() {
                    out.push('\n');
                }
            }
            None => {
                let _ = writeln!(out, "(mutant record not available)");
            }
        }
        let n = v.covering_tests.len();
        let _ = writeln!(
            out,
            "{n} different test{} covered this mutation but failed to kill it:",
            if n == 1 { "" } else { "s" }
        );
        for (t, visits) in &v.covering_tests {
            let _ = writeln!(out, "  {t}: {visits} visit{}", if *visits == 1 { "" } else { "s" });
        }
    }
    let uncovered: Vec<&MutantVerdict> = verdicts.iter().filter(|v| v.status == Status::NotCovered).collect();
    let _ = writeln!(out, "\nNo coverage: {}", uncovered.len());
    for v in uncovered {
        let file = find(v.mutant_id).map_or("?", |m| m.file.as_str());
        let _ = writeln!(out, "  mutant {} ({}) in {}", v.mutant_id, v.operator, file);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn v(id: u64, op: &str, day: u32, status: Status, cov: &[(&str, u64)]) -> MutantVerdict {
        let covering: Vec<(String, u64)> = cov.iter().map(|(t, n)| (t.to_string(), *n)).collect();
        MutantVerdict {
            mutant_id: id,
            operator: op.into(),
            timestamp: day,
            status,
            killing_tests: if status == Status::Killed { covering[..1].to_vec() } else { vec![] },
            covering_tests: covering,
            disregarded_failures: vec![],
        }
    }

    #[test]
    fn empty() {
        assert!(aggregate(&[], 100).is_empty());
        assert!(expanding_series(&[]).is_empty());
        assert_eq!(coverage_summary(&[]), CoverageSummary::default());
    }

    #[test]
    fn half_killed() {
        let vs: Vec<_> = (0..20)
            .map(|i| v(i, "OP", 1, if i < 10 { Status::Killed } else { Status::Survived }, &[("T.t", 1)]))
            .collect();
        let r = aggregate(&vs, 10);
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].kill_rate(), 0.5);
        assert!(!r.rows[0].low_sample);
        assert!(aggregate(&vs, 100).rows[0].low_sample);
    }

    #[test]
    fn single_day_series() {
        let s = expanding_series(&[v(1, "OP", 1, Status::Killed, &[("T.t", 1)])]);
        assert_eq!(s["OP"], vec![(1, 1.0)]);
    }

    #[test]
    fn survivors_and_uncovered() {
        let vs = [
            v(1, "OP", 1, Status::Survived, &[("A.t1", 2), ("A.t2", 1), ("A.t3", 5)]),
            v(2, "OP", 1, Status::NotCovered, &[]),
        ];
        let text = survivor_report(&vs, &[]);
        assert!(text.contains("3 different tests covered this mutation but failed to kill it"));
        assert!(text.contains("  A.t3: 5 visits"));
        let (surv, none) = text.split_once("No coverage").unwrap();
        assert!(!surv.contains("mutant 2"));
        assert!(none.contains("mutant 2"));
    }
}

//! Test execution against the baseline and against mutants, and the
//! visit-gated verdict rules.
//!
//! A failing test only counts against a mutant if it executed the mutated
//! code at least once. Failures with zero visits are recorded as disregarded.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::glob;
use crate::lang::{self, TestOutcome};
use crate::mutagen::{MutantRecord, Validity};
use crate::tree::Node;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Killed,
    Survived,
    NotCovered,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Killed => "KILLED",
            Status::Survived => "SURVIVED",
            Status::NotCovered => "NOT_COVERED",
        }
    }

    pub fn from_name(s: &str) -> Option<Status> {
        match s {
            "KILLED" => Some(Status::Killed),
            "SURVIVED" => Some(Status::Survived),
            "NOT_COVERED" => Some(Status::NotCovered),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantVerdict {
    pub mutant_id: u64,
    pub operator: String,
    pub timestamp: u32,
    pub status: Status,
    /// `(test, visits)` for failing tests that visited the mutant.
    pub killing_tests: Vec<(String, u64)>,
    /// `(test, visits)` for every test that visited the mutant.
    pub covering_tests: Vec<(String, u64)>,
    /// Failing tests that never visited the mutant.
    pub disregarded_failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaselineProfile {
    pub outcomes: Vec<TestOutcome>,
    pub excluded_tests: Vec<String>,
}

impl BaselineProfile {
    pub fn is_green(&self) -> bool {
        self.excluded_tests.is_empty()
    }

    pub fn is_excluded(&self, test: &str) -> bool {
        self.excluded_tests.iter().any(|t| t == test)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HarnessError {
    #[error("mutant {0} is not valid")]
    InvalidMutant(u64),
    #[error("mutant {0} does not parse: {1}")]
    Parse(u64, String),
}

/// Runs one test and reports how often instrumentation id `mutant` was hit.
pub trait TestRunner {
    fn run(&self, program: &Node, test_id: &str, mutant: Option<u64>) -> TestOutcome;
}

/// The MiniJ interpreter with a step budget per test.
#[derive(Clone, Copy, Debug)]
pub struct Interpreter {
    pub budget: u64,
}

impl Default for Interpreter {
    fn default() -> Self {
        Interpreter {
            budget: lang::DEFAULT_STEP_BUDGET,
        }
    }
}

impl TestRunner for Interpreter {
    fn run(&self, program: &Node, test_id: &str, mutant: Option<u64>) -> TestOutcome {
        let mut hits = 0u64;
        let mut sink = |id: u64| {
            if Some(id) == mutant {
                hits += 1;
            }
        };
        let mut out = lang::evaluate_test_with(program, test_id, &mut sink, self.budget);
        out.visits = hits;
        out
    }
}

/// Tests whose id matches `filter` (all of them without a filter).
pub fn select_tests(tests: &[String], filter: Option<&str>) -> Vec<String> {
    tests
        .iter()
        .filter(|t| filter.is_none_or(|f| glob::matches(f, t)))
        .cloned()
        .collect()
}

/// Run every test once on the unmutated program.
pub fn run_baseline(program: &Node, tests: &[String], runner: &dyn TestRunner) -> BaselineProfile {
    let outcomes: Vec<TestOutcome> = tests.iter().map(|t| runner.run(program, t, None)).collect();
    let excluded_tests = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.test_id.clone())
        .collect();
    BaselineProfile {
        outcomes,
        excluded_tests,
    }
}

/// Assemble a verdict from per-test outcomes, ignoring excluded tests.
pub fn verdict(
    mutant_id: u64,
    operator: &str,
    timestamp: u32,
    outcomes: &[TestOutcome],
    excluded: &[String],
) -> MutantVerdict {
    let mut v = MutantVerdict {
        mutant_id,
        operator: operator.to_string(),
        timestamp,
        status: Status::NotCovered,
        killing_tests: Vec::new(),
        covering_tests: Vec::new(),
        disregarded_failures: Vec::new(),
    };
    for o in outcomes.iter().filter(|o| !excluded.contains(&o.test_id)) {
        if o.visits > 0 {
            v.covering_tests.push((o.test_id.clone(), o.visits));
            if !o.passed {
                v.killing_tests.push((o.test_id.clone(), o.visits));
            }
        } else if !o.passed {
            v.disregarded_failures.push(o.test_id.clone());
        }
    }
    v.status = if !v.killing_tests.is_empty() {
        Status::Killed
    } else if !v.covering_tests.is_empty() {
        Status::Survived
    } else {
        Status::NotCovered
    };
    v
}

/// Run the non-excluded tests against one mutant.
pub fn run_mutant(
    mutant: &MutantRecord,
    tests: &[String],
    baseline: &BaselineProfile,
    runner: &dyn TestRunner,
) -> Result<MutantVerdict, HarnessError> {
    if mutant.validity != Validity::Valid {
        return Err(HarnessError::InvalidMutant(mutant.mutant_id));
    }
    let program = lang::parse(&mutant.mutated_source)
        .map_err(|e| HarnessError::Parse(mutant.mutant_id, e.to_string()))?;
    let outcomes: Vec<TestOutcome> = tests
        .iter()
        .filter(|t| !baseline.is_excluded(t))
        .map(|t| runner.run(&program, t, Some(mutant.mutant_id)))
        .collect();
    Ok(verdict(
        mutant.mutant_id,
        &mutant.operator,
        mutant.timestamp,
        &outcomes,
        &baseline.excluded_tests,
    ))
}

/// Sequential campaign over valid mutants, in input order. Errors are kept
/// per mutant.
pub fn run_campaign(
    mutants: &[MutantRecord],
    tests: &[String],
    baseline: &BaselineProfile,
    runner: &dyn TestRunner,
) -> Vec<Result<MutantVerdict, HarnessError>> {
    mutants
        .iter()
        .filter(|m| m.validity == Validity::Valid)
        .map(|m| run_mutant(m, tests, baseline, runner))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mutagen::{self, MutationTarget};
    use crate::operators::builtin_operators;
    use alloc::vec;

    const SRC: &str = r#"
class Acc {
    int total;
    boolean flag;
    int add(int k) {
        for (int i = 0; i < k; i++) {
            total += 1;
        }
        return total;
    }
    int pick(boolean c) {
        if (c == true) {
            return 1;
        }
        return 2;
    }
    int unused() {
        return 7;
    }
    boolean testAdd() {
        return add(10) == 10;
    }
    boolean testPick() {
        return pick(true) == 1;
    }
    boolean testPickWeak() {
        return pick(false) > 0;
    }
}
"#;

    fn mutants(op: &str) -> Vec<MutantRecord> {
        let ops: Vec<_> = builtin_operators().into_iter().filter(|p| p.name == op).collect();
        let cfg = mutagen::GenerateConfig {
            max_per_target: 100,
            ..Default::default()
        };
        let targets = [MutationTarget {
            file: "acc.mj".into(),
            line_ranges: None,
            timestamp: 0,
        }];
        let none = |_: &str, _: &str, _: &str| String::new();
        mutagen::generate(&targets, &ops, &cfg, &mut |_| Ok(SRC.to_string()), &none).records
    }

    fn setup() -> (Vec<String>, BaselineProfile) {
        let p = lang::parse(SRC).unwrap();
        let tests = lang::list_tests(&p);
        let b = run_baseline(&p, &tests, &Interpreter::default());
        (tests, b)
    }

    #[test]
    fn green_baseline_is_deterministic() {
        let (tests, b) = setup();
        assert!(b.is_green());
        let p = lang::parse(SRC).unwrap();
        assert_eq!(run_baseline(&p, &tests, &Interpreter::default()), b);
    }

    #[test]
    fn flip_is_killed_by_asserting_test() {
        let (tests, b) = setup();
        let m = &mutants("FLIP_TRUE_FALSE")[0];
        let v = run_mutant(m, &tests, &b, &Interpreter::default()).unwrap();
        assert_eq!(v.status, Status::Killed);
        assert_eq!(v.killing_tests, vec![("Acc.testPick".to_string(), 1)]);
        assert_eq!(v.covering_tests.len(), 2);
    }

    #[test]
    fn dead_code_not_covered() {
        let (tests, b) = setup();
        let ms = mutants("LITERAL_TO_ZERO");
        let m = ms.iter().find(|m| m.original_snippet == "7").unwrap();
        let v = run_mutant(m, &tests, &b, &Interpreter::default()).unwrap();
        assert_eq!(v.status, Status::NotCovered);
        assert!(v.covering_tests.is_empty());
    }

    #[test]
    fn loop_visits_are_counted() {
        let (tests, b) = setup();
        let ms = mutants("LITERAL_TO_ZERO");
        let m = ms.iter().find(|m| m.original_snippet == "1" && m.mutated_source.contains("total += __mut")).unwrap();
        let v = run_mutant(m, &tests, &b, &Interpreter::default()).unwrap();
        assert_eq!(v.status, Status::Killed);
        assert_eq!(v.covering_tests, vec![("Acc.testAdd".to_string(), 10)]);
    }

    #[test]
    fn red_baseline_excludes_tests() {
        let src = SRC.replace("return pick(false) > 0;", "return pick(false) > 5;");
        let p = lang::parse(&src).unwrap();
        let tests = lang::list_tests(&p);
        let b = run_baseline(&p, &tests, &Interpreter::default());
        assert_eq!(b.excluded_tests, ["Acc.testPickWeak"]);
        let outcomes = [TestOutcome {
            test_id: "Acc.testPickWeak".into(),
            passed: false,
            visits: 3,
            error: None,
        }];
        let v = verdict(1, "X", 0, &outcomes, &b.excluded_tests);
        assert_eq!(v.status, Status::NotCovered);
        assert!(v.disregarded_failures.is_empty() && v.covering_tests.is_empty());
    }

    struct Flaky<'a>(&'a dyn TestRunner, &'a str);

    impl TestRunner for Flaky<'_> {
        fn run(&self, program: &Node, test_id: &str, mutant: Option<u64>) -> TestOutcome {
            let mut o = self.0.run(program, test_id, mutant);
            if test_id == self.1 && mutant.is_some() && o.visits == 0 {
                o.passed = false;
            }
            o
        }
    }

    #[test]
    fn zero_visit_failure_is_disregarded() {
        let (tests, b) = setup();
        let base = Interpreter::default();
        for m in mutants("LITERAL_TO_ZERO") {
            let plain = run_mutant(&m, &tests, &b, &base).unwrap();
            let flaky = run_mutant(&m, &tests, &b, &Flaky(&base, "Acc.testAdd")).unwrap();
            assert_eq!(plain.status, flaky.status);
            assert_eq!(plain.killing_tests, flaky.killing_tests);
            assert_eq!(plain.covering_tests, flaky.covering_tests);
        }
    }

    #[test]
    fn test_filter() {
        let tests = vec!["A.testX".to_string(), "B.testY".to_string()];
        assert_eq!(select_tests(&tests, Some("A.*")), ["A.testX"]);
        assert_eq!(select_tests(&tests, None).len(), 2);
    }
}

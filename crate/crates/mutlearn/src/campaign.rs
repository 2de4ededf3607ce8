//! Baselines and the parallel mutant campaign. Verdicts come back in input
//! order whatever the thread count.

use std::collections::BTreeMap;

use anyhow::{anyhow, Result};
use rayon::prelude::*;

use mutlearn_core::harness::{self, BaselineProfile, HarnessError, Interpreter, MutantVerdict};
use mutlearn_core::lang;
use mutlearn_core::mutagen::{MutantRecord, Validity};

/// The interpreter recurses on nested calls; worker threads get room for it.
const STACK_BYTES: usize = 64 << 20;

#[derive(Clone, Debug)]
pub struct Suite {
    pub tests: Vec<String>,
    pub baseline: BaselineProfile,
}

pub struct Campaign {
    /// Per source file.
    pub suites: BTreeMap<String, Suite>,
    /// One entry per valid mutant, in input order.
    pub results: Vec<Result<MutantVerdict, HarnessError>>,
    pub invalid: usize,
}

impl Campaign {
    pub fn red_tests(&self) -> Vec<String> {
        self.suites.values().flat_map(|s| s.baseline.excluded_tests.iter().cloned()).collect()
    }

    pub fn verdicts(&self) -> Vec<MutantVerdict> {
        self.results.iter().filter_map(|r| r.as_ref().ok().cloned()).collect()
    }
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .stack_size(STACK_BYTES)
        .build()
        .expect("thread pool")
}

/// Baseline every file in `sources`.
pub fn baselines(
    sources: &BTreeMap<String, String>,
    filter: Option<&str>,
    runner: &Interpreter,
    threads: usize,
) -> Result<BTreeMap<String, Suite>> {
    let parsed = sources
        .iter()
        .map(|(p, s)| lang::parse(s).map(|t| (p.clone(), t)).map_err(|e| anyhow!("{p}:{e}")))
        .collect::<Result<Vec<_>>>()?;
    let suites = pool(threads).install(|| {
        parsed
            .par_iter()
            .map(|(path, tree)| {
                let tests = harness::select_tests(&lang::list_tests(tree), filter);
                let baseline = harness::run_baseline(tree, &tests, runner);
                (path.clone(), Suite { tests, baseline })
            })
            .collect::<Vec<_>>()
    });
    Ok(suites.into_iter().collect())
}

/// Every valid mutant against its file's suite. Mutants of files without a
/// suite are an error.
pub fn run(
    mutants: &[MutantRecord],
    suites: BTreeMap<String, Suite>,
    runner: &Interpreter,
    threads: usize,
) -> Result<Campaign> {
    if let Some(m) = mutants.iter().find(|m| !suites.contains_key(&m.file)) {
        return Err(anyhow!("mutant {} refers to unknown file {}", m.mutant_id, m.file));
    }
    let valid: Vec<&MutantRecord> = mutants.iter().filter(|m| m.validity == Validity::Valid).collect();
    let results = pool(threads).install(|| {
        valid
            .par_iter()
            .map(|m| {
                let s = &suites[&m.file];
                harness::run_mutant(m, &s.tests, &s.baseline, runner)
            })
            .collect()
    });
    Ok(Campaign {
        suites,
        results,
        invalid: mutants.len() - valid.len(),
    })
}

//! Run configuration from a TOML file. Command-line flags take precedence
//! over file values, which take precedence over the defaults below.
//!
//! ```toml
//! seed = 42
//! cluster_threshold = 0.4
//! min_support = 3
//! max_patterns = 50
//! arid_names = ["log", "logger.*", "__mut", "__mut_visit"]
//! max_per_target = 1
//! shuffle = false
//! test_filter = "*Test.test*"
//! jobs = 4
//! occurrence_floor = 100
//! step_budget = 1000000
//! ```

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

use mutlearn_core::learn::LearnConfig;
use mutlearn_core::mutagen::{default_arid, GenerateConfig};
use mutlearn_core::report::DEFAULT_OCCURRENCE_FLOOR;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "MUTLEARN_CONFIG";

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub cluster_threshold: f64,
    pub min_support: usize,
    pub max_patterns: usize,
    pub arid_names: Vec<String>,
    pub max_per_target: usize,
    pub shuffle: bool,
    pub test_filter: Option<String>,
    /// Campaign threads; 0 means one per CPU.
    pub jobs: usize,
    pub occurrence_floor: usize,
    pub step_budget: u64,
    pub corpus: Option<PathBuf>,
    pub src: Option<PathBuf>,
    pub patterns: Option<PathBuf>,
    pub mutants: Option<PathBuf>,
    pub results: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let learn = LearnConfig::default();
        RunConfig {
            seed: 0,
            cluster_threshold: learn.cluster_threshold,
            min_support: learn.min_support,
            max_patterns: learn.max_patterns,
            arid_names: default_arid(),
            max_per_target: 1,
            shuffle: false,
            test_filter: None,
            jobs: 0,
            occurrence_floor: DEFAULT_OCCURRENCE_FLOOR,
            step_budget: mutlearn_core::lang::DEFAULT_STEP_BUDGET,
            corpus: None,
            src: None,
            patterns: None,
            mutants: None,
            results: None,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = RunConfig::parse(&text).with_context(|| format!("config {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut cfg.corpus,
            &mut cfg.src,
            &mut cfg.patterns,
            &mut cfg.mutants,
            &mut cfg.results,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    /// The explicit path, else `$MUTLEARN_CONFIG`, else defaults.
    pub fn resolve(explicit: Option<&Path>) -> Result<RunConfig> {
        match explicit {
            Some(p) => RunConfig::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => RunConfig::load(Path::new(&p)),
                _ => Ok(RunConfig::default()),
            },
        }
    }

    pub fn learn(&self) -> LearnConfig {
        LearnConfig {
            cluster_threshold: self.cluster_threshold,
            min_support: self.min_support,
            max_patterns: self.max_patterns,
        }
    }

    pub fn generate(&self) -> GenerateConfig {
        GenerateConfig {
            seed: self.seed,
            shuffle: self.shuffle,
            max_per_target: self.max_per_target,
            arid: self.arid_names.clone(),
            first_id: 1,
        }
    }

    pub fn threads(&self) -> usize {
        if self.jobs == 0 {
            std::thread::available_parallelism().map_or(1, |n| n.get())
        } else {
            self.jobs
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_defaults() {
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn keys_override() {
        let c = RunConfig::parse("seed = 9\nmax_per_target = 3\ntest_filter = \"A.*\"\n").unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.generate().max_per_target, 3);
        assert_eq!(c.test_filter.as_deref(), Some("A.*"));
        assert_eq!(c.learn(), LearnConfig::default());
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(RunConfig::parse("sead = 1").is_err());
    }

    #[test]
    fn paths_relative_to_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.toml");
        std::fs::write(&path, "src = \"project\"\n").unwrap();
        assert_eq!(RunConfig::load(&path).unwrap().src, Some(dir.path().join("project")));
    }
}

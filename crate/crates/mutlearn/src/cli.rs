//! Command line: `learn`, `list-patterns`, `annotate`, `mutate`, `run`,
//! `report`, `check`, `validate-catalog` and `gen-corpus`.
//!
//! Exit codes: 0 success, 1 usage, 2 input error, 3 red baseline,
//! 4 internal invariant violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mutlearn_core::gen::{self, GenConfig};
use mutlearn_core::harness::{Interpreter, Status};
use mutlearn_core::learn::{self, Direction, EditPattern};
use mutlearn_core::mutagen::{self, MutationTarget, Validity};
use mutlearn_core::{lang, operators, report};

use crate::config::{RunConfig, CONFIG_ENV};
use crate::project::Project;
use crate::{bundle, campaign, corpus, diffs, formats, simulate};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RED_BASELINE: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

type Outcome = Result<(), Failure>;

fn fail(code: i32, error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code,
        error: error.into(),
    }
}

fn input(error: impl Into<anyhow::Error>) -> Failure {
    fail(EXIT_INPUT, error)
}

fn usage(msg: &str) -> Failure {
    fail(EXIT_USAGE, anyhow!("{msg}"))
}

#[derive(Parser, Debug)]
#[command(name = "mutlearn", version, about = "Learn mutation operators from bug fixes and run mutation campaigns")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = CONFIG_ENV, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Learn edit patterns from a corpus of before/after pairs.
    Learn(LearnArgs),
    /// Print a pattern file or the built-in catalog.
    ListPatterns(ListArgs),
    /// Rename a pattern or change its provenance tag.
    Annotate(AnnotateArgs),
    /// Generate instrumented mutants.
    Mutate(MutateArgs),
    /// Run the baseline and every mutant, writing a results stream.
    Run(RunArgs),
    /// Kill-rate, survivor, series and coverage reports from a results stream.
    Report(ReportArgs),
    /// Check MiniJ files and list their tests.
    Check(CheckArgs),
    /// Apply every built-in operator to its bundled host program.
    ValidateCatalog,
    /// Write a corpus of pairs made by applying one pattern to random programs.
    GenCorpus(GenCorpusArgs),
}

#[derive(Args, Debug)]
pub struct LearnArgs {
    #[arg(long, value_name = "DIR")]
    pub corpus: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    /// Learn bug-introducing operators by reading each fix backwards.
    #[arg(long)]
    pub reverse: bool,
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long)]
    pub min_support: Option<usize>,
    #[arg(long)]
    pub max_patterns: Option<usize>,
}

#[derive(Args, Debug)]
pub struct PatternSource {
    /// Use the built-in catalog.
    #[arg(long, conflicts_with = "patterns")]
    pub builtin: bool,
    #[arg(long, value_name = "FILE")]
    pub patterns: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ListArgs {
    #[command(flatten)]
    pub source: PatternSource,
    /// Also write the patterns as a pattern file.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnnotateArgs {
    #[arg(value_name = "FILE")]
    pub patterns: PathBuf,
    /// Pattern name or 1-based position.
    #[arg(long)]
    pub select: String,
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long)]
    pub provenance: Option<String>,
    /// Output file; the input is rewritten when omitted.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct MutateArgs {
    #[arg(long, value_name = "DIR")]
    pub src: Option<PathBuf>,
    #[command(flatten)]
    pub source: PatternSource,
    /// JSON list of `{path, ranges, timestamp}`; whole files when omitted.
    #[arg(long, value_name = "FILE", conflicts_with = "simulate_days")]
    pub targets: Option<PathBuf>,
    /// Draw random line-range targets for this many days.
    #[arg(long, value_name = "DAYS")]
    pub simulate_days: Option<u32>,
    #[arg(long, default_value_t = 100, requires = "simulate_days")]
    pub per_day: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Shuffle the operator order per target.
    #[arg(long)]
    pub shuffle: bool,
    #[arg(long)]
    pub max_per_target: Option<usize>,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long, value_name = "DIR")]
    pub mutants: Option<PathBuf>,
    #[arg(long, value_name = "DIR")]
    pub src: Option<PathBuf>,
    /// Worker threads; 0 means one per CPU.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Only run tests whose `Class.method` id matches this glob.
    #[arg(long, value_name = "GLOB")]
    pub test_filter: Option<String>,
    /// Run even if some tests fail on the unmutated sources.
    #[arg(long)]
    pub allow_red_baseline: bool,
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    #[arg(long, value_name = "FILE")]
    pub results: Option<PathBuf>,
    /// Mutant directory, needed for `--survivors`.
    #[arg(long, value_name = "DIR")]
    pub mutants: Option<PathBuf>,
    #[arg(long)]
    pub survivors: bool,
    #[arg(long)]
    pub series: bool,
    #[arg(long)]
    pub coverage: bool,
    /// Operators with fewer mutants are left out of the headline table.
    #[arg(long)]
    pub floor: Option<usize>,
    /// Directory for report files; printed to stdout when omitted.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(value_name = "PATH", required = true)]
    pub paths: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenCorpusArgs {
    /// Pattern to apply.
    #[arg(long)]
    pub operator: String,
    #[command(flatten)]
    pub source: PatternSource,
    #[arg(long, default_value_t = 20)]
    pub pairs: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write pairs in the fixing direction (mutated program first).
    #[arg(long)]
    pub fix: bool,
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {:#}", f.error);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let cfg = RunConfig::resolve(cli.config.as_deref()).map_err(input)?;
    match cli.command {
        Command::Learn(a) => learn_cmd(&cfg, a, out, err),
        Command::ListPatterns(a) => list_cmd(&cfg, a, out),
        Command::Annotate(a) => annotate_cmd(a, out),
        Command::Mutate(a) => mutate_cmd(&cfg, a, out, err),
        Command::Run(a) => run_cmd(&cfg, a, out, err),
        Command::Report(a) => report_cmd(&cfg, a, out),
        Command::Check(a) => check_cmd(a, out),
        Command::ValidateCatalog => validate_cmd(out),
        Command::GenCorpus(a) => gen_corpus_cmd(&cfg, a, out),
    }
}

fn io(e: std::io::Error) -> Failure {
    fail(EXIT_INPUT, e)
}

fn write_file(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(input)
}

fn path_or(flag: Option<PathBuf>, cfg: &Option<PathBuf>, name: &str) -> Result<PathBuf, Failure> {
    flag.or_else(|| cfg.clone())
        .ok_or_else(|| usage(&format!("--{name} is required (or set `{name}` in the config)")))
}

/// Load a pattern file, rejecting patterns whose after side uses unbound holes.
pub fn load_patterns(path: &Path) -> anyhow::Result<Vec<EditPattern>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let pats = learn::decode_mpat(&text).map_err(|e| anyhow!("{}:{}:{}: {}", path.display(), e.line, e.col, e.message))?;
    for p in &pats {
        if let Some(h) = p.free_holes().first() {
            bail!("{}: pattern `{}` uses hole {h} only on its after side", path.display(), p.name);
        }
    }
    Ok(pats)
}

fn patterns_from(src: &PatternSource, cfg: &RunConfig) -> Result<Vec<EditPattern>, Failure> {
    if src.builtin {
        return Ok(operators::builtin_operators());
    }
    let path = path_or(src.patterns.clone(), &cfg.patterns, "patterns")
        .map_err(|_| usage("one of --builtin or --patterns is required"))?;
    load_patterns(&path).map_err(input)
}

fn learn_cmd(cfg: &RunConfig, a: LearnArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let dir = path_or(a.corpus, &cfg.corpus, "corpus")?;
    let corpus = corpus::load(&dir).map_err(input)?;
    for w in &corpus.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    // Reversed learning diffs each fix backwards, so code a fix adds stays
    // bound by the before side of the learned operator.
    let edits = learn::pair_edits(corpus.pairs.iter().map(|p| {
        if a.reverse {
            (p.name.as_str(), &p.after, &p.before)
        } else {
            (p.name.as_str(), &p.before, &p.after)
        }
    }));
    if edits.is_empty() {
        return Err(input(anyhow!("no edits in {} ({} pairs)", dir.display(), corpus.pairs.len())));
    }
    let mut lc = cfg.learn();
    lc.cluster_threshold = a.threshold.unwrap_or(lc.cluster_threshold);
    lc.min_support = a.min_support.unwrap_or(lc.min_support);
    lc.max_patterns = a.max_patterns.unwrap_or(lc.max_patterns);
    let clusters = learn::cluster_detailed(&edits, &lc);
    let mut kept = Vec::new();
    let mut rows = String::new();
    let _ = writeln!(rows, "{:<4} {:<12} {:>7} {:>6}  PROVENANCE", "RANK", "NAME", "SUPPORT", "COST");
    for (rank, c) in clusters.iter().enumerate() {
        let mut p = c.pattern.clone();
        if a.reverse {
            p.direction = Direction::Introducing;
        }
        let _ = writeln!(
            rows,
            "{:<4} {:<12} {:>7} {:>6.3}  {}",
            rank + 1,
            p.name,
            p.support,
            c.mean_cost,
            short_provenance(&p.provenance)
        );
        kept.push(p);
    }
    write_file(&a.out, &learn::encode_mpat(&kept))?;
    let _ = writeln!(out, "{} pairs, {} edits, {} patterns", corpus.pairs.len(), edits.len(), kept.len());
    let _ = out.write_all(rows.as_bytes());
    Ok(())
}

/// `a+b+c` as `a (+2)`.
fn short_provenance(p: &str) -> String {
    let mut parts = p.split('+');
    let first = parts.next().unwrap_or_default();
    match parts.count() {
        0 => first.to_string(),
        n => format!("{first} (+{n})"),
    }
}

fn pattern_table(pats: &[EditPattern]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<22} {:>7}  {:<11}  {:<10}  DESCRIPTION", "NAME", "SUPPORT", "DIRECTION", "PROVENANCE");
    for p in pats {
        let desc = operators::template(&p.name).map_or_else(|| p.key(), str::to_string);
        let _ = writeln!(
            s,
            "{:<22} {:>7}  {:<11}  {:<10}  {desc}",
            p.name,
            p.support,
            p.direction.name(),
            short_provenance(&p.provenance)
        );
    }
    s
}

fn list_cmd(cfg: &RunConfig, a: ListArgs, out: &mut dyn Write) -> Outcome {
    let pats = patterns_from(&a.source, cfg)?;
    if let Some(path) = &a.out {
        write_file(path, &learn::encode_mpat(&pats))?;
    }
    let _ = out.write_all(pattern_table(&pats).as_bytes());
    Ok(())
}

fn annotate_cmd(a: AnnotateArgs, out: &mut dyn Write) -> Outcome {
    let mut pats = load_patterns(&a.patterns).map_err(input)?;
    let idx = match a.select.parse::<usize>() {
        Ok(n) if (1..=pats.len()).contains(&n) => n - 1,
        _ => pats
            .iter()
            .position(|p| p.name == a.select)
            .ok_or_else(|| input(anyhow!("no pattern `{}` in {}", a.select, a.patterns.display())))?,
    };
    if let Some(name) = a.name {
        if name.trim().is_empty() {
            return Err(usage("--name must not be empty"));
        }
        if pats.iter().enumerate().any(|(i, p)| i != idx && p.name == name) {
            return Err(input(anyhow!("a pattern named `{name}` already exists")));
        }
        pats[idx].name = name;
    }
    if let Some(prov) = a.provenance {
        pats[idx].provenance = prov;
    }
    write_file(a.out.as_ref().unwrap_or(&a.patterns), &learn::encode_mpat(&pats))?;
    let _ = out.write_all(pattern_table(&pats[idx..=idx]).as_bytes());
    Ok(())
}

fn load_project(flag: Option<PathBuf>, cfg: &RunConfig) -> Result<Project, Failure> {
    let dir = path_or(flag, &cfg.src, "src")?;
    let project = Project::load(&dir).map_err(input)?;
    if project.files.is_empty() {
        return Err(input(anyhow!("no .mj files under {}", dir.display())));
    }
    Ok(project)
}

fn mutate_cmd(cfg: &RunConfig, a: MutateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let project = load_project(a.src, cfg)?;
    project.check().map_err(input)?;
    let pats = patterns_from(&a.source, cfg)?;
    if let Some(p) = pats.iter().find(|p| p.direction == Direction::Fixing) {
        return Err(input(anyhow!(
            "pattern `{}` is in the fixing direction; learn with --reverse to get an operator",
            p.name
        )));
    }
    let mut gcfg = cfg.generate();
    gcfg.seed = a.seed.unwrap_or(gcfg.seed);
    gcfg.shuffle |= a.shuffle;
    gcfg.max_per_target = a.max_per_target.unwrap_or(gcfg.max_per_target);
    let targets: Vec<MutationTarget> = if let Some(path) = &a.targets {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(input)?;
        formats::read_targets(&text).map_err(input)?
    } else if let Some(days) = a.simulate_days {
        simulate::targets(&project.line_counts(), days, a.per_day, gcfg.seed)
    } else {
        project
            .files
            .keys()
            .map(|f| MutationTarget {
                file: f.clone(),
                line_ranges: None,
                timestamp: 0,
            })
            .collect()
    };
    let mut load = |f: &str| project.files.get(f).cloned().ok_or_else(|| format!("no such file in project: {f}"));
    let generated = mutagen::generate(&targets, &pats, &gcfg, &mut load, &diffs::Unified);
    for (file, why) in &generated.skipped {
        let _ = writeln!(err, "warning: {file}: {why}");
    }
    bundle::write(&a.out, &generated.records).map_err(input)?;
    let valid = generated.records.iter().filter(|r| r.validity == Validity::Valid).count();
    let _ = writeln!(
        out,
        "{} mutants ({} valid) from {} targets",
        generated.records.len(),
        valid,
        targets.len()
    );
    for p in &pats {
        let n = generated.records.iter().filter(|r| r.operator == p.name).count();
        let _ = writeln!(out, "  {:<22} {n}", p.name);
    }
    if valid != generated.records.len() {
        return Err(fail(
            EXIT_INVARIANT,
            anyhow!("{} mutants failed the syntax check", generated.records.len() - valid),
        ));
    }
    Ok(())
}

fn run_cmd(cfg: &RunConfig, a: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let project = load_project(a.src, cfg)?;
    let mdir = path_or(a.mutants, &cfg.mutants, "mutants")?;
    let mutants = bundle::read(&mdir).map_err(input)?;
    let threads = RunConfig {
        jobs: a.jobs.unwrap_or(cfg.jobs),
        ..RunConfig::default()
    }
    .threads();
    let filter = a.test_filter.or_else(|| cfg.test_filter.clone());
    let runner = Interpreter {
        budget: cfg.step_budget,
    };
    let suites = campaign::baselines(&project.files, filter.as_deref(), &runner, threads).map_err(input)?;
    let red: Vec<&String> = suites.values().flat_map(|s| &s.baseline.excluded_tests).collect();
    if !red.is_empty() {
        for t in &red {
            let _ = writeln!(err, "baseline failure: {t}");
        }
        if !a.allow_red_baseline {
            return Err(fail(
                EXIT_RED_BASELINE,
                anyhow!("{} tests fail on the unmutated sources (use --allow-red-baseline to exclude them)", red.len()),
            ));
        }
    }
    let c = campaign::run(&mutants, suites, &runner, threads).map_err(input)?;
    let verdicts = c.verdicts();
    write_file(&a.out, &formats::write_results(&verdicts))?;
    let count = |s: Status| verdicts.iter().filter(|v| v.status == s).count();
    let _ = writeln!(
        out,
        "{} mutants: {} killed, {} survived, {} not covered, {} invalid skipped",
        verdicts.len(),
        count(Status::Killed),
        count(Status::Survived),
        count(Status::NotCovered),
        c.invalid
    );
    let errors: Vec<String> = c.results.iter().filter_map(|r| r.as_ref().err().map(|e| e.to_string())).collect();
    if !errors.is_empty() {
        for e in &errors {
            let _ = writeln!(err, "harness error: {e}");
        }
        return Err(fail(EXIT_INVARIANT, anyhow!("{} mutants could not be run", errors.len())));
    }
    Ok(())
}

fn report_cmd(cfg: &RunConfig, a: ReportArgs, out: &mut dyn Write) -> Outcome {
    let path = path_or(a.results, &cfg.results, "results")?;
    let text = fs::read_to_string(&path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(input)?;
    let verdicts = formats::read_results(&text).map_err(input)?;
    let kill = report::aggregate(&verdicts, a.floor.unwrap_or(cfg.occurrence_floor));
    let mut files: Vec<(&str, String)> = vec![
        ("kill_report.txt", report::kill_report_text(&kill)),
        ("kill_report.csv", report::kill_report_csv(&kill)),
    ];
    if a.survivors {
        let dir = path_or(a.mutants, &cfg.mutants, "mutants")?;
        let mutants = bundle::read(&dir).map_err(input)?;
        files.push(("survivors.txt", report::survivor_report(&verdicts, &mutants)));
    }
    if a.series {
        files.push(("series.csv", report::series_csv(&report::expanding_series(&verdicts))));
    }
    if a.coverage {
        files.push(("coverage.txt", report::coverage_summary_text(&report::coverage_summary(&verdicts))));
    }
    match &a.out {
        Some(dir) => {
            for (name, text) in &files {
                write_file(&dir.join(name), text)?;
            }
            let _ = out.write_all(files[0].1.as_bytes());
        }
        None => {
            for (name, text) in files.iter().filter(|(n, _)| *n != "kill_report.csv") {
                let _ = writeln!(out, "== {name}");
                let _ = out.write_all(text.as_bytes());
            }
        }
    }
    Ok(())
}

fn check_cmd(a: CheckArgs, out: &mut dyn Write) -> Outcome {
    let mut bad = 0;
    for root in &a.paths {
        let files: Vec<(String, String)> = if root.is_dir() {
            Project::load(root)
                .map_err(input)?
                .files
                .into_iter()
                .map(|(p, s)| (root.join(p).display().to_string(), s))
                .collect()
        } else {
            let s = fs::read_to_string(root)
                .with_context(|| format!("reading {}", root.display()))
                .map_err(input)?;
            vec![(root.display().to_string(), s)]
        };
        for (name, src) in files {
            match lang::syntax_check(&src).and_then(|()| lang::parse(&src)) {
                Ok(tree) => {
                    let _ = writeln!(out, "{name}: ok, {} tests", lang::list_tests(&tree).len());
                }
                Err(e) => {
                    bad += 1;
                    let _ = writeln!(out, "{name}:{e}");
                }
            }
        }
    }
    if bad > 0 {
        return Err(input(anyhow!("{bad} files failed the check")));
    }
    Ok(())
}

fn validate_cmd(out: &mut dyn Write) -> Outcome {
    let checks = operators::validate_catalog();
    let yes = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(out, "{:<22} {:>5}  MATCHED  VALID", "OPERATOR", "SITES");
    for c in &checks {
        let _ = write!(out, "{:<22} {:>5}  {:<7}  {}", c.operator, c.sites, yes(c.matched), yes(c.valid));
        match &c.problem {
            Some(p) => writeln!(out, "  {p}"),
            None => writeln!(out),
        }
        .ok();
    }
    let ok = checks.iter().filter(|c| c.matched && c.valid).count();
    let _ = writeln!(out, "{ok}/{} operators matched and valid", checks.len());
    if ok != checks.len() {
        return Err(fail(EXIT_INVARIANT, anyhow!("catalog validation failed")));
    }
    Ok(())
}

fn gen_corpus_cmd(cfg: &RunConfig, a: GenCorpusArgs, out: &mut dyn Write) -> Outcome {
    let pats = if a.source.builtin || (a.source.patterns.is_none() && cfg.patterns.is_none()) {
        operators::builtin_operators()
    } else {
        patterns_from(&a.source, cfg)?
    };
    let op = pats
        .iter()
        .find(|p| p.name == a.operator)
        .ok_or_else(|| input(anyhow!("no pattern named `{}`", a.operator)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed.unwrap_or(cfg.seed));
    let mut pairs = Vec::new();
    for i in 0..a.pairs {
        let (host, mutated) = gen::seeded_pair(&mut rng, &GenConfig::default(), op)
            .ok_or_else(|| input(anyhow!("no host program with a `{}` site", op.name)))?;
        let print = |n| lang::print(n).map_err(|e| fail(EXIT_INVARIANT, anyhow!("{e:?}")));
        let (h, m) = (print(&host)?, print(&mutated)?);
        let name = format!("{}-{:04}", op.name.to_ascii_lowercase(), i + 1);
        pairs.push(if a.fix { (name, m, h) } else { (name, h, m) });
    }
    corpus::write(&a.out, &pairs).map_err(input)?;
    let _ = writeln!(out, "{} pairs written to {}", pairs.len(), a.out.display());
    Ok(())
}

mod common;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::Command;

use common::{cli, golden, ok, read, sample_project};
use mutlearn::formats;
use mutlearn_core::harness::Status;

fn tree(dir: &Path) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().display().to_string(), read(&p));
            }
        }
    }
    out
}

fn mutate_sample(out: &Path) -> String {
    ok(&[
        &"mutate",
        &"--src",
        &sample_project(),
        &"--builtin",
        &"--seed",
        &"42",
        &"--max-per-target",
        &"400",
        &"--out",
        &out,
    ])
    .stdout
}

#[test]
fn sample_pipeline_matches_goldens() {
    let t = tempfile::tempdir().unwrap();
    let m = t.path().join("mutants");
    let summary = mutate_sample(&m);
    golden("mutate_summary.txt", &summary);
    golden("manifest.jsonl", &read(m.join("manifest.jsonl")));

    let r1 = t.path().join("r1.jsonl");
    let r8 = t.path().join("r8.jsonl");
    ok(&[&"run", &"--mutants", &m, &"--src", &sample_project(), &"--jobs", &"1", &"--out", &r1]);
    ok(&[&"run", &"--mutants", &m, &"--src", &sample_project(), &"--jobs", &"8", &"--out", &r8]);
    assert_eq!(read(&r1), read(&r8));
    golden("results.jsonl", &read(&r1));

    let rep = t.path().join("rep");
    ok(&[
        &"report",
        &"--results",
        &r1,
        &"--mutants",
        &m,
        &"--survivors",
        &"--series",
        &"--coverage",
        &"--floor",
        &"10",
        &"--out",
        &rep,
    ]);
    let files = tree(&rep);
    assert_eq!(
        files.keys().collect::<Vec<_>>(),
        ["coverage.txt", "kill_report.csv", "kill_report.txt", "series.csv", "survivors.txt"]
    );
    golden("survivors.txt", &files["survivors.txt"]);
    golden("kill_report.txt", &files["kill_report.txt"]);
    golden("coverage.txt", &files["coverage.txt"]);

    let verdicts = formats::read_results(&read(&r1)).unwrap();
    let survived = verdicts.iter().filter(|v| v.status == Status::Survived).count();
    let blocks = files["survivors.txt"].matches("\n== mutant ").count();
    assert_eq!(blocks, survived);
}

#[test]
fn results_stream_follows_schema() {
    let t = tempfile::tempdir().unwrap();
    let m = t.path().join("m");
    mutate_sample(&m);
    let r = t.path().join("r.jsonl");
    ok(&[&"run", &"--mutants", &m, &"--src", &sample_project(), &"--out", &r]);
    let keys = [
        "mutant_id",
        "operator",
        "status",
        "timestamp",
        "killing_tests",
        "covering_tests",
        "disregarded_failures",
    ];
    for line in read(&r).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        let mut want = keys.to_vec();
        want.sort_unstable();
        assert_eq!(obj.keys().map(String::as_str).collect::<Vec<_>>(), want);
        let mut at = 0;
        for k in keys {
            let pos = line.find(&format!("\"{k}\":")).unwrap();
            assert!(pos >= at, "{k} out of order in {line}");
            at = pos;
        }
        assert!(["KILLED", "SURVIVED", "NOT_COVERED"].contains(&obj["status"].as_str().unwrap()));
        for list in ["killing_tests", "covering_tests"] {
            for e in obj[list].as_array().unwrap() {
                assert!(e["test"].is_string());
                assert!(e["visits"].as_u64().unwrap() > 0);
            }
        }
    }
}

#[test]
fn mutate_is_deterministic() {
    let t = tempfile::tempdir().unwrap();
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    mutate_sample(&a);
    mutate_sample(&b);
    assert_eq!(tree(&a), tree(&b));
    mutate_sample(&a);
    assert_eq!(tree(&a), tree(&b));
}

#[test]
fn one_line_target_gives_at_most_one_mutant() {
    let t = tempfile::tempdir().unwrap();
    for line in [1, 12, 40, 77] {
        let targets = t.path().join("targets.json");
        fs::write(&targets, format!(r#"[{{"path": "account.mj", "ranges": [[{line}, {line}]], "timestamp": 3}}]"#)).unwrap();
        let out = t.path().join(format!("m{line}"));
        ok(&[&"mutate", &"--src", &sample_project(), &"--builtin", &"--targets", &targets, &"--out", &out]);
        let manifest = read(out.join("manifest.jsonl"));
        assert!(manifest.lines().count() <= 1);
        for l in manifest.lines() {
            let rec: formats::RecordJson = serde_json::from_str(l).unwrap();
            assert_eq!(rec.timestamp, 3);
        }
    }
}

#[test]
fn red_baseline_exits_three() {
    let t = tempfile::tempdir().unwrap();
    let src = t.path().join("src");
    fs::create_dir(&src).unwrap();
    fs::write(
        src.join("a.mj"),
        "class A { int f() { return 1 + 1; } boolean testOk() { return f() == 2; } boolean testRed() { return f() == 3; } }",
    )
    .unwrap();
    let m = t.path().join("m");
    ok(&[&"mutate", &"--src", &src, &"--builtin", &"--max-per-target", &"10", &"--out", &m]);
    let r = t.path().join("r.jsonl");
    let red = cli(&[&"run", &"--mutants", &m, &"--src", &src, &"--out", &r]);
    assert_eq!(red.code, 3);
    assert!(red.stderr.contains("A.testRed"));
    ok(&[&"run", &"--mutants", &m, &"--src", &src, &"--allow-red-baseline", &"--out", &r]);
    let text = read(&r);
    assert!(!text.is_empty());
    assert!(!text.contains("testRed"));
}

#[test]
fn learn_seeded_corpus() {
    let t = tempfile::tempdir().unwrap();
    let c = t.path().join("corpus");
    ok(&[&"gen-corpus", &"--operator", &"TERNARY_IF_RIGHT", &"--pairs", &"20", &"--seed", &"5", &"--out", &c]);
    let p = t.path().join("p.mpat");
    let r = ok(&[&"learn", &"--corpus", &c, &"--out", &p]);
    assert!(r.stdout.starts_with("20 pairs, 20 edits, 1 patterns\n"));
    let pats = mutlearn::cli::load_patterns(&p).unwrap();
    assert_eq!(pats.len(), 1);
    assert_eq!(pats[0].support, 20);
}

#[test]
fn reversed_null_check_insertions_give_null_check_removal() {
    let t = tempfile::tempdir().unwrap();
    let c = t.path().join("corpus");
    ok(&[&"gen-corpus", &"--operator", &"REMOVE_NULL_CHECK", &"--pairs", &"20", &"--seed", &"1", &"--fix", &"--out", &c]);
    let p = t.path().join("p.mpat");
    ok(&[&"learn", &"--corpus", &c, &"--out", &p, &"--reverse"]);
    let top = &mutlearn::cli::load_patterns(&p).unwrap()[0];
    let builtin = mutlearn_core::operators::builtin_operators();
    let seed = builtin.iter().find(|p| p.name == "REMOVE_NULL_CHECK").unwrap();
    assert!(top.alpha_eq(seed), "{top}");
    assert_eq!(top.direction, mutlearn_core::learn::Direction::Introducing);
}

#[test]
fn learn_warns_and_fails_without_edits() {
    let t = tempfile::tempdir().unwrap();
    let p = t.path().join("p.mpat");
    let r = cli(&[&"learn", &"--corpus", &t.path(), &"--out", &p]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("no edits"));
    fs::write(t.path().join("x.before.mj"), "class A { }").unwrap();
    fs::write(t.path().join("same.before.mj"), "class A { }").unwrap();
    fs::write(t.path().join("same.after.mj"), "class A { }").unwrap();
    let r = cli(&[&"learn", &"--corpus", &t.path(), &"--out", &p]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("warning: x: missing"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cli(&[&"mutate", &"--bogus"]).code, 1);
    assert_eq!(cli(&[&"frobnicate"]).code, 1);
    assert_eq!(cli(&[&"list-patterns"]).code, 1);
    let help = cli(&[&"--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("validate-catalog"));
}

#[test]
fn malformed_results_name_the_line() {
    let t = tempfile::tempdir().unwrap();
    let r = t.path().join("r.jsonl");
    fs::write(
        &r,
        "{\"mutant_id\":1,\"operator\":\"X\",\"status\":\"KILLED\",\"timestamp\":0,\"killing_tests\":[],\"covering_tests\":[],\"disregarded_failures\":[]}\nnot json\n",
    )
    .unwrap();
    let out = cli(&[&"report", &"--results", &r]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("results line 2"), "{}", out.stderr);
}

#[test]
fn bad_pattern_file_is_located() {
    let t = tempfile::tempdir().unwrap();
    let p = t.path().join("p.mpat");
    fs::write(&p, "(pattern\n  (name \"X\")\n  (bogus").unwrap();
    let out = cli(&[&"mutate", &"--src", &sample_project(), &"--patterns", &p, &"--out", &t.path().join("m")]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("p.mpat:3:"), "{}", out.stderr);
}

#[test]
fn builtin_catalog_exports_and_annotates() {
    let t = tempfile::tempdir().unwrap();
    let p = t.path().join("cat.mpat");
    let listing = ok(&[&"list-patterns", &"--builtin", &"--out", &p]).stdout;
    assert_eq!(listing.lines().count(), 20);
    assert_eq!(mutlearn::cli::load_patterns(&p).unwrap(), mutlearn_core::operators::builtin_operators());
    ok(&[&"annotate", &p, &"--select", &"3", &"--name", &"DROP_BREAK", &"--provenance", &"review"]);
    let pats = mutlearn::cli::load_patterns(&p).unwrap();
    assert_eq!((pats[2].name.as_str(), pats[2].provenance.as_str()), ("DROP_BREAK", "review"));
    assert_eq!(cli(&[&"annotate", &p, &"--select", &"DROP_BREAK", &"--name", &"REMOVE_RETURN"]).code, 2);
}

#[test]
fn check_and_catalog_validation() {
    let r = ok(&[&"check", &sample_project()]);
    assert_eq!(r.stdout.lines().count(), 5);
    let v = ok(&[&"validate-catalog"]);
    assert!(v.stdout.ends_with("19/19 operators matched and valid\n"));
    let t = tempfile::tempdir().unwrap();
    let bad = t.path().join("bad.mj");
    fs::write(&bad, "class A { void f() { int x = ; } }").unwrap();
    assert_eq!(cli(&[&"check", &bad]).code, 2);
}

#[test]
fn binary_reads_config_from_environment() {
    let t = tempfile::tempdir().unwrap();
    let cfg = t.path().join("m.toml");
    fs::write(
        &cfg,
        format!("seed = 7\nmax_per_target = 2\nsrc = {:?}\n", sample_project().display().to_string()),
    )
    .unwrap();
    let out = t.path().join("m");
    let status = Command::new(env!("CARGO_BIN_EXE_mutlearn"))
        .args(["mutate", "--builtin", "--out"])
        .arg(&out)
        .env("MUTLEARN_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert_eq!(read(out.join("manifest.jsonl")).lines().count(), 10);
    let usage = Command::new(env!("CARGO_BIN_EXE_mutlearn")).arg("run").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}

//! Mutant directories: `<out>/<id>/{source.mj, record.json, diff.patch}`
//! plus `<out>/manifest.jsonl` with one `record.json` line per mutant in id
//! order.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};

use mutlearn_core::mutagen::MutantRecord;

use crate::formats::RecordJson;

pub const MANIFEST: &str = "manifest.jsonl";

pub fn manifest(records: &[MutantRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(&RecordJson::from(r)).expect("serializable"));
        out.push('\n');
    }
    out
}

/// Write bundles, replacing any bundles and manifest already in `out`.
pub fn write(out: &Path, records: &[MutantRecord]) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for entry in fs::read_dir(out)? {
        let entry = entry?;
        let name = entry.file_name();
        let stale = name.to_str().is_some_and(|n| !n.is_empty() && n.bytes().all(|b| b.is_ascii_digit()));
        if stale && entry.file_type()?.is_dir() {
            fs::remove_dir_all(entry.path())?;
        }
    }
    for r in records {
        let dir = out.join(r.mutant_id.to_string());
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("source.mj"), &r.mutated_source)?;
        let mut json = serde_json::to_string_pretty(&RecordJson::from(r)).expect("serializable");
        json.push('\n');
        fs::write(dir.join("record.json"), json)?;
        fs::write(dir.join("diff.patch"), &r.diff_text)?;
    }
    fs::write(out.join(MANIFEST), manifest(records))?;
    Ok(())
}

/// Read every bundle listed in the manifest.
pub fn read(dir: &Path) -> Result<Vec<MutantRecord>> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: RecordJson =
            serde_json::from_str(line).with_context(|| format!("{} line {}", path.display(), i + 1))?;
        let bundle = dir.join(rec.id.to_string());
        let source = fs::read_to_string(bundle.join("source.mj"))
            .with_context(|| format!("reading {}", bundle.join("source.mj").display()))?;
        let diff = fs::read_to_string(bundle.join("diff.patch")).unwrap_or_default();
        out.push(rec.into_record(source, diff)?);
    }
    if let Some(w) = out.windows(2).find(|w| w[0].mutant_id >= w[1].mutant_id) {
        bail!("{}: mutant ids out of order at {}", path.display(), w[1].mutant_id);
    }
    Ok(out)
}

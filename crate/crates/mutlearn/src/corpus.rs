//! Training corpora: a directory of `NAME.before.mj` / `NAME.after.mj` pairs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use mutlearn_core::{lang, Node};

pub struct Pair {
    pub name: String,
    pub before: Node,
    pub after: Node,
}

#[derive(Default)]
pub struct Corpus {
    pub pairs: Vec<Pair>,
    /// One message per file or pair that was skipped.
    pub warnings: Vec<String>,
}

fn parse(path: &Path) -> Result<Node, String> {
    let src = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    lang::parse(&src).map_err(|e| format!("{}:{e}", path.display()))
}

/// Load pairs sorted by name. Unpaired and unparsable files become warnings.
pub fn load(dir: &Path) -> Result<Corpus> {
    let mut sides: BTreeMap<String, (Option<PathBuf>, Option<PathBuf>)> = BTreeMap::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        let Some(file) = path.file_name().and_then(|f| f.to_str()).map(str::to_string) else {
            continue;
        };
        if let Some(name) = file.strip_suffix(".before.mj") {
            sides.entry(name.to_string()).or_default().0 = Some(path);
        } else if let Some(name) = file.strip_suffix(".after.mj") {
            sides.entry(name.to_string()).or_default().1 = Some(path);
        }
    }
    let mut out = Corpus::default();
    for (name, (b, a)) in sides {
        let (Some(b), Some(a)) = (b, a) else {
            out.warnings.push(format!("{name}: missing .before.mj or .after.mj, skipped"));
            continue;
        };
        match (parse(&b), parse(&a)) {
            (Ok(before), Ok(after)) => out.pairs.push(Pair { name, before, after }),
            (Err(e), _) | (_, Err(e)) => out.warnings.push(format!("{name}: {e}, skipped")),
        }
    }
    Ok(out)
}

/// Write `pairs` as a corpus directory.
pub fn write(dir: &Path, pairs: &[(String, String, String)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, before, after) in pairs {
        fs::write(dir.join(format!("{name}.before.mj")), before)?;
        fs::write(dir.join(format!("{name}.after.mj")), after)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_and_warnings() {
        let dir = tempfile::tempdir().unwrap();
        let a = "class A { int f() { return 1; } }";
        let b = "class A { int f() { return 2; } }";
        write(dir.path(), &[("p1".into(), a.into(), b.into())]).unwrap();
        fs::write(dir.path().join("lonely.before.mj"), a).unwrap();
        fs::write(dir.path().join("bad.before.mj"), "class {").unwrap();
        fs::write(dir.path().join("bad.after.mj"), a).unwrap();
        let c = load(dir.path()).unwrap();
        assert_eq!(c.pairs.len(), 1);
        assert_eq!(c.pairs[0].name, "p1");
        assert_eq!(c.warnings.len(), 2);
        assert!(c.warnings[0].starts_with("bad: "));
        assert!(c.warnings[1].starts_with("lonely: "));
    }
}

//! A project is a directory of `.mj` files. Each file is a standalone
//! program whose test methods form its test suite.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context, Result};

use mutlearn_core::{lang, Node};

#[derive(Clone, Debug, Default)]
pub struct Project {
    /// Source text by `/`-separated path relative to the project root.
    pub files: BTreeMap<String, String>,
}

fn collect(root: &Path, dir: &Path, out: &mut BTreeMap<String, String>) -> Result<()> {
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry?.path();
        if path.is_dir() {
            collect(root, &path, out)?;
        } else if path.extension().is_some_and(|e| e == "mj") {
            let rel = path.strip_prefix(root).expect("under root");
            let key = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
            let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
            out.insert(key, text);
        }
    }
    Ok(())
}

impl Project {
    pub fn load(root: &Path) -> Result<Project> {
        let mut files = BTreeMap::new();
        collect(root, root, &mut files)?;
        Ok(Project { files })
    }

    /// Parse and fully check every file.
    pub fn check(&self) -> Result<BTreeMap<String, Node>> {
        let mut out = BTreeMap::new();
        for (path, src) in &self.files {
            lang::syntax_check(src).map_err(|e| anyhow!("{path}:{e}"))?;
            out.insert(path.clone(), lang::parse(src).map_err(|e| anyhow!("{path}:{e}"))?);
        }
        Ok(out)
    }

    pub fn line_counts(&self) -> Vec<(String, usize)> {
        self.files.iter().map(|(p, s)| (p.clone(), s.lines().count())).collect()
    }
}

//! Unified diffs for mutant bundles and survivor reports.

use similar::TextDiff;

/// Unified diff of `old` to `new` with three lines of context.
pub fn unified(file: &str, old: &str, new: &str) -> String {
    TextDiff::from_lines(old, new)
        .unified_diff()
        .context_radius(3)
        .header(&format!("a/{file}"), &format!("b/{file}"))
        .to_string()
}

/// [`unified`] as a [`mutlearn_core::mutagen::DiffRenderer`].
pub struct Unified;

impl mutlearn_core::mutagen::DiffRenderer for Unified {
    fn render(&self, file: &str, old: &str, new: &str) -> String {
        unified(file, old, new)
    }
}

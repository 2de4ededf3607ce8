//! Simulated daily change streams: each day draws random line ranges from the
//! project as stand-ins for that day's diffs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mutlearn_core::mutagen::MutationTarget;

/// `per_day` targets for each of `days` days over `files` (`(path, line count)`).
/// Ranges span 1 to 5 lines and carry their day (from 1) as timestamp.
pub fn targets(files: &[(String, usize)], days: u32, per_day: usize, seed: u64) -> Vec<MutationTarget> {
    let files: Vec<&(String, usize)> = files.iter().filter(|(_, n)| *n > 0).collect();
    let mut out = Vec::new();
    if files.is_empty() {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for day in 1..=days {
        for _ in 0..per_day {
            let (path, lines) = files[rng.gen_range(0..files.len())];
            let start = rng.gen_range(1..=*lines);
            let end = (start + rng.gen_range(0..5)).min(*lines);
            out.push(MutationTarget {
                file: path.clone(),
                line_ranges: Some(vec![(start, end)]),
                timestamp: day,
            });
        }
    }
    out
}

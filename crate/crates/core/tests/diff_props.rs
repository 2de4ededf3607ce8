use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mutlearn_core::diff::{diff, extract_edits, map_nodes, replay};
use mutlearn_core::gen::{program_with, seeded_pair, GenConfig};
use mutlearn_core::operators::builtin_operators;
use mutlearn_core::Node;

fn program(seed: u64) -> Node {
    program_with(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::default())
}

fn check(before: &Node, after: &Node) -> Result<(), TestCaseError> {
    let edits = diff(before, after);
    prop_assert_eq!(&replay(before, &edits), after);
    for (i, e) in edits.iter().enumerate() {
        prop_assert_ne!(&e.before, &e.after);
        for (j, f) in edits.iter().enumerate() {
            if i != j {
                prop_assert!(!f.path.starts_with(&e.path), "edit {:?} nested in {:?}", f.path, e.path);
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn operator_edits_replay(seed in any::<u64>(), op in 0usize..19) {
        let ops = builtin_operators();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some((before, after)) = seeded_pair(&mut rng, &GenConfig::default(), &ops[op]) {
            check(&before, &after)?;
            check(&after, &before)?;
        }
    }

    #[test]
    fn unrelated_programs_replay(a in any::<u64>(), b in any::<u64>()) {
        check(&program(a), &program(b))?;
    }

    #[test]
    fn identity_has_no_edits(seed in any::<u64>()) {
        let t = program(seed);
        prop_assert!(extract_edits(&t, &t, &map_nodes(&t, &t)).is_empty());
    }
}

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mutlearn_core::gen::{program_with, GenConfig};
use mutlearn_core::matching::{instantiate, match_all, match_pattern};
use mutlearn_core::operators::builtin_operators;
use mutlearn_core::sexpr::{deserialize, serialize};
use mutlearn_core::tree::Class;
use mutlearn_core::{Node, Sort};

fn program(seed: u64) -> Node {
    program_with(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::default())
}

fn pick(p: &Node, i: prop::sample::Index) -> Node {
    let paths = p.paths();
    p.get(&paths[i.index(paths.len())]).unwrap().clone()
}

/// Replace each non-list descendant with a fresh hole when `mask` says so.
fn generalize(n: &Node, mask: &mut impl Iterator<Item = bool>, next: &mut usize) -> Node {
    let mut out = n.clone();
    for (i, c) in n.children.iter().enumerate() {
        let holeable = !c.kind.is_list();
        out.children[i] = if holeable && mask.next().unwrap_or(false) {
            *next += 1;
            let sort = if c.kind.class() == Class::Stmt { Sort::Stmt } else { Sort::Expr };
            Node::hole(sort, format!("h{next}"))
        } else {
            generalize(c, mask, next)
        };
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sexpr_round_trip(seed in any::<u64>(), i in any::<prop::sample::Index>()) {
        let n = pick(&program(seed), i);
        let text = serialize(&n);
        let back = deserialize(&text).unwrap();
        prop_assert_eq!(&back, &n);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn match_then_instantiate_rebuilds(seed in any::<u64>(), i in any::<prop::sample::Index>(), bits in prop::collection::vec(prop::bool::weighted(0.25), 64)) {
        let target = pick(&program(seed), i);
        let pattern = generalize(&target, &mut bits.into_iter(), &mut 0);
        let b = match_pattern(&pattern, &target).expect("generalization matches its source");
        let rebuilt = instantiate(&pattern, &b).unwrap();
        prop_assert_eq!(&rebuilt, &target);
        rebuilt.validate_shape().unwrap();
        prop_assert_eq!(match_pattern(&pattern, &target), Some(b));
        prop_assert_eq!(match_all(&pattern, &target), match_all(&pattern, &target));
    }

    #[test]
    fn operator_matches_rebuild_their_site(seed in any::<u64>()) {
        let p = program(seed);
        for op in builtin_operators() {
            for path in p.paths() {
                let t = p.get(&path).unwrap();
                for b in match_all(&op.before, t) {
                    prop_assert_eq!(&instantiate(&op.before, &b).unwrap(), t);
                    let after = instantiate(&op.after, &b).unwrap();
                    after.validate_shape().unwrap();
                }
            }
        }
    }

    #[test]
    fn subtree_hash_follows_equality(a in any::<u64>(), b in any::<u64>(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (x, y) = (pick(&program(a), i), pick(&program(b), j));
        if x == y {
            prop_assert_eq!(x.subtree_hash(), y.subtree_hash());
        }
        let mut spanned = mutlearn_core::lang::parse(&mutlearn_core::lang::print(&program(a)).unwrap()).unwrap();
        prop_assert_eq!(spanned.subtree_hash(), program(a).subtree_hash());
        spanned.clear_spans();
        prop_assert_eq!(spanned, program(a));
    }
}

#[test]
fn catalog_sides_round_trip() {
    for op in builtin_operators() {
        for side in [&op.before, &op.after] {
            assert_eq!(&deserialize(&serialize(side)).unwrap(), side);
        }
    }
}

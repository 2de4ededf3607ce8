use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mutlearn_core::gen::{program_with, GenConfig};
use mutlearn_core::lang::{self, evaluate_test, list_tests};
use mutlearn_core::mutagen::mut_call;
use mutlearn_core::{Kind, Node};

fn program(seed: u64) -> Node {
    program_with(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::default())
}

fn outcomes(p: &Node, id: u64) -> Vec<(bool, Option<lang::ErrorKind>, u64)> {
    list_tests(p)
        .iter()
        .map(|t| {
            let mut hits = 0;
            let o = evaluate_test(p, t, &mut |i: u64| hits += u64::from(i == id));
            (o.passed, o.error, hits)
        })
        .collect()
}

/// Paths of expressions whose value is always consumed: Binary operands,
/// call arguments and returned values.
fn value_positions(p: &Node) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    p.visit(&mut |n, path| {
        let take = match n.kind {
            Kind::Binary | Kind::Args => true,
            Kind::Return => n.children[0].kind != Kind::Absent,
            _ => false,
        };
        if take {
            let k = if n.kind == Kind::Return { 1 } else { n.children.len() };
            for i in 0..k {
                let mut q = path.clone();
                q.push(i);
                out.push(q);
            }
        }
    });
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let p = program(seed);
        let text = lang::print(&p).unwrap();
        let mut once = lang::parse(&text).unwrap();
        once.clear_spans();
        prop_assert_eq!(&once, &p);
        let again = lang::print(&once).unwrap();
        prop_assert_eq!(&again, &text);
        lang::syntax_check(&text).unwrap();
    }

    #[test]
    fn evaluation_is_deterministic(seed in any::<u64>()) {
        let p = program(seed);
        for t in list_tests(&p) {
            let a = evaluate_test(&p, &t, &mut |_| {});
            let b = evaluate_test(&p, &t, &mut |_| {});
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn mut_wrapper_is_transparent(seed in any::<u64>(), pick in any::<prop::sample::Index>()) {
        let p = program(seed);
        let sites = value_positions(&p);
        prop_assume!(!sites.is_empty());
        let path = &sites[pick.index(sites.len())];
        let mut wrapped = p.clone();
        let slot = wrapped.get_mut(path).unwrap();
        *slot = mut_call(77, slot.clone());
        let text = lang::print(&wrapped).unwrap();
        lang::syntax_check(&text).unwrap();
        let base = outcomes(&p, 77);
        let inst = outcomes(&wrapped, 77);
        for (b, i) in base.iter().zip(&inst) {
            // A budget timeout can move by the wrapper's own steps.
            if b.1 == Some(lang::ErrorKind::Timeout) || i.1 == Some(lang::ErrorKind::Timeout) {
                continue;
            }
            prop_assert_eq!((b.0, b.1), (i.0, i.1));
            prop_assert_eq!(b.2, 0);
        }
    }

    #[test]
    fn visits_count_loop_iterations(outer in 0u32..6, inner in 0u32..40) {
        let src = format!(
            "class A {{ int n; void f() {{ for (int i = 0; i < {outer}; i++) {{ for (int j = 0; j < {inner}; j++) {{ __mut_visit(5); n = n + __mut(6, 1); }} }} }} \
             boolean testF() {{ f(); return n == {}; }} }}",
            outer * inner
        );
        let p = lang::parse(&src).unwrap();
        let mut seen = std::collections::BTreeMap::new();
        let o = evaluate_test(&p, "A.testF", &mut |id: u64| *seen.entry(id).or_insert(0u64) += 1);
        prop_assert!(o.passed);
        let k = u64::from(outer * inner);
        prop_assert_eq!(seen.get(&5).copied().unwrap_or(0), k);
        prop_assert_eq!(seen.get(&6).copied().unwrap_or(0), k);
    }
}

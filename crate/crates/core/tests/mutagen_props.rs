use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mutlearn_core::gen::{program_with, GenConfig};
use mutlearn_core::lang;
use mutlearn_core::mutagen::{
    apply, default_arid, find_sites, generate, instrument, instrumentation_ids, is_arid, replacement,
    strip_instrumentation, GenerateConfig, MutationTarget, Validity,
};
use mutlearn_core::operators::builtin_operators;
use mutlearn_core::{Kind, Node};

fn program(seed: u64) -> Node {
    program_with(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::default())
}

/// Remove `;` statements from statement lists, where a visit call stands in
/// for them, and unwrap one-statement blocks outside lists, which is how a
/// wrapped statement comes back from stripping.
fn drop_empty(n: &Node) -> Node {
    let mut out = n.clone();
    if n.kind.is_list() {
        out.children.retain(|c| c.kind != Kind::Empty);
    }
    for c in &mut out.children {
        *c = drop_empty(c);
        if !n.kind.is_list() && c.kind == Kind::Block && c.children.len() == 1 && c.children[0].kind != Kind::VarDecl {
            *c = c.children[0].clone();
        }
    }
    out
}

fn first_difference(a: &Node, b: &Node) -> String {
    let (a, b) = (lang::print_pattern(a), lang::print_pattern(b));
    let (la, lb): (Vec<&str>, Vec<&str>) = (a.lines().collect(), b.lines().collect());
    let i = la.iter().zip(&lb).take_while(|(x, y)| x == y).count();
    let from = i.saturating_sub(3);
    format!("got\n{}\nwant\n{}", la[from..(i + 3).min(la.len())].join("\n"), lb[from..(i + 3).min(lb.len())].join("\n"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_site_is_valid_and_reversible(seed in any::<u64>()) {
        let p = program(seed);
        let arid = default_arid();
        let mut id = 1;
        for op in builtin_operators() {
            for site in find_sites(&p, &op, None, &arid) {
                prop_assert!(!is_arid(&p, &site.path, &arid));
                let node = p.get(&site.path).unwrap();
                if op.name == "LITERAL_TO_MINUS_ONE" {
                    prop_assert!(!node.label_str().starts_with('-'));
                }
                if op.name == "LITERAL_TO_ZERO" {
                    prop_assert!(!["0", "0.0"].contains(&node.label_str()));
                }
                let rep = replacement(&op, &site).unwrap();
                let plain = apply(&p, &op, &site).unwrap();
                let inst = instrument(&p, &site.path, &rep, id).unwrap();
                let text = lang::print(&inst).unwrap();
                if let Err(e) = lang::syntax_check(&text) {
                    return Err(TestCaseError::fail(format!("{} at {:?}: {e}\n{text}", op.name, site.path)));
                }
                prop_assert_eq!(instrumentation_ids(&inst), vec![id]);
                let stripped = strip_instrumentation(&inst);
                prop_assert!(
                    drop_empty(&stripped) == drop_empty(&plain),
                    "{}: {}",
                    op.name,
                    first_difference(&stripped, &plain)
                );
                let mut back = plain.clone();
                *back.get_mut(&site.path).unwrap() = node.clone();
                prop_assert_eq!(&back, &p);
                id += 1;
            }
        }
    }

    #[test]
    fn generation_respects_budget_and_ids(seed in any::<u64>(), files in 1usize..4, per in 1usize..4, shuffle in any::<bool>()) {
        let srcs: Vec<String> = (0..files).map(|i| lang::print(&program(seed.wrapping_add(i as u64))).unwrap()).collect();
        let mut targets = Vec::new();
        for (i, s) in srcs.iter().enumerate() {
            let lines = s.lines().count();
            for start in (1..=lines).step_by(7) {
                targets.push(MutationTarget { file: format!("f{i}.mj"), line_ranges: Some(vec![(start, start + 3)]), timestamp: start as u32 });
            }
        }
        let cfg = GenerateConfig { seed, shuffle, max_per_target: per, ..Default::default() };
        let mut load = |f: &str| -> Result<String, String> {
            let i: usize = f[1..f.len() - 3].parse().unwrap();
            Ok(srcs[i].clone())
        };
        let diff = |_: &str, _: &str, _: &str| String::new();
        let g = generate(&targets, &builtin_operators(), &cfg, &mut load, &diff);
        prop_assert!(g.skipped.is_empty());
        prop_assert!(g.records.len() <= targets.len() * per);
        for (k, r) in g.records.iter().enumerate() {
            prop_assert_eq!(r.mutant_id, k as u64 + 1);
            prop_assert_eq!(r.validity, Validity::Valid);
            let t = lang::parse(&r.mutated_source).unwrap();
            prop_assert_eq!(instrumentation_ids(&t), vec![r.mutant_id]);
        }
        let again = generate(&targets, &builtin_operators(), &cfg, &mut load, &diff);
        prop_assert_eq!(g.records, again.records);
    }
}

//! The built-in catalog of named mutation operators.
//!
//! Patterns are stored as `.mpat` text and decoded on demand. Each operator
//! comes with a fixture pair: a minimal host program containing the operator's
//! left-hand template and the program expected after applying it at the first
//! site. The before-hosts double as the catalog's validation programs.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::learn::{decode_mpat, EditPattern};
use crate::mutagen;
use crate::tree::Node;

const CATALOG: &str = include_str!("catalog/builtin.mpat");

/// Operator names in catalog order.
pub const NAMES: [&str; 19] = [
    "LITERAL_TO_MINUS_ONE",
    "LITERAL_TO_ZERO",
    "REMOVE_BREAK",
    "REMOVE_ELSE_BRANCH",
    "REMOVE_RETURN",
    "REMOVE_SWITCH_CASE",
    "REMOVE_THEN_BRANCH",
    "REMOVE_WHOLE_IF_STMT",
    "SWAP_PRIMITIVE_TYPE",
    "CHAINED_CALL_REMOVAL",
    "FLIP_TRUE_FALSE",
    "REMOVE_METHOD_CALL",
    "REMOVE_NULL_CHECK",
    "REMOVE_SYNCHRONIZED",
    "TERNARY_IF_LEFT",
    "TERNARY_IF_RIGHT",
    "NULL_DEREFERENCE",
    "REMOVE_EXPLICIT_CAST",
    "FOR_OFF_BY_ONE",
];

/// The 19 built-in operators, all in the introducing direction. The pattern's
/// `provenance` is its source tag: `d4j`, `fb`, `manual` or `builtin`.
pub fn builtin_operators() -> Vec<EditPattern> {
    decode_mpat(CATALOG).expect("bundled catalog decodes")
}

/// The catalog `.mpat` text exactly as bundled.
pub fn catalog_text() -> &'static str {
    CATALOG
}

/// FOR_OFF_BY_ONE in either direction: `<` to `<=` (the catalog entry), or
/// `<=` to `<` when `inclusive_to_exclusive` is set.
pub fn for_off_by_one(inclusive_to_exclusive: bool) -> EditPattern {
    let mut p = builtin_operators()
        .into_iter()
        .find(|p| p.name == "FOR_OFF_BY_ONE")
        .expect("catalog entry");
    if inclusive_to_exclusive {
        core::mem::swap(&mut p.before.children[1].label, &mut p.after.children[1].label);
    }
    p
}

/// One-line template for an operator, for human-facing reports.
pub fn template(name: &str) -> Option<&'static str> {
    Some(match name {
        "LITERAL_TO_MINUS_ONE" => "1 -> -1",
        "LITERAL_TO_ZERO" => "x -> 0",
        "REMOVE_BREAK" => "case 1: A(); break; case 2: B(); -> case 1: A(); case 2: B();",
        "REMOVE_ELSE_BRANCH" => "else { ... } -> else { ; }",
        "REMOVE_RETURN" => "return; -> ;",
        "REMOVE_SWITCH_CASE" => "case 1: A(); break; case 2: B(); -> case 1: A(); B();",
        "REMOVE_THEN_BRANCH" => "if (A) { ... } -> if (A) { ; }",
        "REMOVE_WHOLE_IF_STMT" => "if (A) { ... } else if (B) { ... } else { C(); } -> ;",
        "SWAP_PRIMITIVE_TYPE" => "double a; -> int a;",
        "CHAINED_CALL_REMOVAL" => "a.b(1).b(2).c(); -> a.b(1).c();",
        "FLIP_TRUE_FALSE" => "if (a == true) -> if (a == false)",
        "REMOVE_METHOD_CALL" => "a(); -> ;",
        "REMOVE_NULL_CHECK" => "if (variable == null) { ... } -> ;",
        "REMOVE_SYNCHRONIZED" => "synchronized Object foo() { ... } -> Object foo() { ... }",
        "TERNARY_IF_LEFT" => "a ? b : c -> b",
        "TERNARY_IF_RIGHT" => "a ? b : c -> c",
        "NULL_DEREFERENCE" => "String s; -> @Nullable String s; s.toString();",
        "REMOVE_EXPLICIT_CAST" => "(T) a -> a",
        "FOR_OFF_BY_ONE" => "for (i = 0; i < n; i++) -> for (i = 0; i <= n; i++)",
        _ => return None,
    })
}

/// Fixture pairs `(operator, before host, expected after host)`.
pub const FIXTURES: [(&str, &str, &str); 19] = [
    (
        "LITERAL_TO_MINUS_ONE",
        "class H { int b; void f() { int a = b + 1; } }",
        "class H { int b; void f() { int a = b + -1; } }",
    ),
    (
        "LITERAL_TO_ZERO",
        "class H { int b; void f() { int a = b + 1; } }",
        "class H { int b; void f() { int a = b + 0; } }",
    ),
    (
        "REMOVE_BREAK",
        "class H { void A() { } void B() { } void f(int k) { switch (k) { case 1: A(); break; case 2: B(); } } }",
        "class H { void A() { } void B() { } void f(int k) { switch (k) { case 1: A(); case 2: B(); } } }",
    ),
    (
        "REMOVE_ELSE_BRANCH",
        "class H { void A() { } void B() { } void f(boolean c) { if (c) { A(); } else { B(); } } }",
        "class H { void A() { } void B() { } void f(boolean c) { if (c) { A(); } else { ; } } }",
    ),
    (
        "REMOVE_RETURN",
        "class H { void f() { return; } }",
        "class H { void f() { ; } }",
    ),
    (
        "REMOVE_SWITCH_CASE",
        "class H { void A() { } void B() { } void f(int k) { switch (k) { case 1: A(); break; case 2: B(); } } }",
        "class H { void A() { } void B() { } void f(int k) { switch (k) { case 1: A(); B(); } } }",
    ),
    (
        "REMOVE_THEN_BRANCH",
        "class H { void A() { } void f(boolean c) { if (c) { A(); } } }",
        "class H { void A() { } void f(boolean c) { if (c) { ; } } }",
    ),
    (
        "REMOVE_WHOLE_IF_STMT",
        "class H { void A() { } void B() { } void C() { } void f(boolean a, boolean b) { if (a) { A(); } else if (b) { B(); } else { C(); } } }",
        "class H { void A() { } void B() { } void C() { } void f(boolean a, boolean b) { ; } }",
    ),
    (
        "SWAP_PRIMITIVE_TYPE",
        "class H { void f() { double a; } }",
        "class H { void f() { int a; } }",
    ),
    (
        "CHAINED_CALL_REMOVAL",
        "class H { H b(int x) { return this; } void c() { } void f() { H a = new H(); a.b(1).b(2).c(); } }",
        "class H { H b(int x) { return this; } void c() { } void f() { H a = new H(); a.b(1).c(); } }",
    ),
    (
        "FLIP_TRUE_FALSE",
        "class H { boolean f(boolean a) { if (a == true) { return true; } return false; } }",
        "class H { boolean f(boolean a) { if (a == false) { return true; } return false; } }",
    ),
    (
        "REMOVE_METHOD_CALL",
        "class H { void a() { } void f() { a(); } }",
        "class H { void a() { } void f() { ; } }",
    ),
    (
        "REMOVE_NULL_CHECK",
        "class H { void f(String variable) { if (variable == null) { return; } } }",
        "class H { void f(String variable) { ; } }",
    ),
    (
        "REMOVE_SYNCHRONIZED",
        "class H { synchronized Object foo() { return null; } }",
        "class H { Object foo() { return null; } }",
    ),
    (
        "TERNARY_IF_LEFT",
        "class H { int f(boolean a, int b, int c) { return a ? b : c; } }",
        "class H { int f(boolean a, int b, int c) { return b; } }",
    ),
    (
        "TERNARY_IF_RIGHT",
        "class H { int f(boolean a, int b, int c) { return a ? b : c; } }",
        "class H { int f(boolean a, int b, int c) { return c; } }",
    ),
    (
        "NULL_DEREFERENCE",
        "class H { void f() { String s; } }",
        "class H { void f() { @Nullable String s; s.toString(); } }",
    ),
    (
        "REMOVE_EXPLICIT_CAST",
        "class H { double f(int a) { return (double) a; } }",
        "class H { double f(int a) { return a; } }",
    ),
    (
        "FOR_OFF_BY_ONE",
        "class H { void f(int n) { for (int i = 0; i < n; i++) { } } }",
        "class H { void f(int n) { for (int i = 0; i <= n; i++) { } } }",
    ),
];

/// Per-operator validation outcome on its bundled host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogCheck {
    pub operator: String,
    pub sites: usize,
    pub matched: bool,
    pub valid: bool,
    pub problem: Option<String>,
}

/// Apply `op` at its first site in `host`, without instrumentation.
pub fn apply_first(op: &EditPattern, host: &Node) -> Option<Node> {
    let site = mutagen::find_sites(host, op, None, &mutagen::default_arid()).into_iter().next()?;
    mutagen::apply(host, op, &site).ok()
}

/// Check every operator on its bundled host: at least one site, and every
/// site yields a program that passes `syntax_check`.
pub fn validate_catalog() -> Vec<CatalogCheck> {
    let ops = builtin_operators();
    FIXTURES
        .iter()
        .map(|(name, host, _)| {
            let op = ops.iter().find(|p| p.name == *name);
            let mut check = CatalogCheck {
                operator: name.to_string(),
                sites: 0,
                matched: false,
                valid: false,
                problem: None,
            };
            let Some(op) = op else {
                check.problem = Some("missing from catalog".into());
                return check;
            };
            match validate_on(op, host) {
                Ok(n) => {
                    check.sites = n;
                    check.matched = n > 0;
                    check.valid = n > 0;
                    if n == 0 {
                        check.problem = Some("no match site on host".into());
                    }
                }
                Err((n, e)) => {
                    check.sites = n;
                    check.matched = n > 0;
                    check.problem = Some(e);
                }
            }
            check
        })
        .collect()
}

/// Number of sites of `op` in `src`, or the first failure.
pub fn validate_on(op: &EditPattern, src: &str) -> Result<usize, (usize, String)> {
    let tree = crate::lang::parse(src).map_err(|e| (0, alloc::format!("host: {e}")))?;
    let sites = mutagen::find_sites(&tree, op, None, &mutagen::default_arid());
    for (i, site) in sites.iter().enumerate() {
        let mutated = mutagen::apply(&tree, op, site).map_err(|e| (sites.len(), e.to_string()))?;
        let text = crate::lang::print(&mutated).map_err(|e| (sites.len(), e.to_string()))?;
        if let Err(e) = crate::lang::syntax_check(&text) {
            return Err((sites.len(), alloc::format!("site {i}: {e}")));
        }
    }
    Ok(sites.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learn::{encode_mpat, Direction};

    fn tree(src: &str) -> Node {
        let mut t = crate::lang::parse(src).unwrap();
        t.clear_spans();
        t
    }

    #[test]
    fn names_and_direction() {
        let ops = builtin_operators();
        let names: Vec<&str> = ops.iter().map(|p| p.name.as_str()).collect();
        assert_eq!(names, NAMES);
        assert!(ops.iter().all(|p| p.direction == Direction::Introducing));
        assert!(ops.iter().all(|p| template(&p.name).is_some()));
    }

    #[test]
    fn mpat_round_trip() {
        let ops = builtin_operators();
        assert_eq!(decode_mpat(&encode_mpat(&ops)).unwrap(), ops);
    }

    #[test]
    fn fixtures_apply_exactly() {
        let ops = builtin_operators();
        for (name, before, after) in FIXTURES {
            let op = ops.iter().find(|p| p.name == name).unwrap();
            let mut got = apply_first(op, &tree(before)).unwrap_or_else(|| panic!("{name}: no site"));
            got.clear_spans();
            assert_eq!(got, tree(after), "{name}");
            crate::lang::syntax_check(after).unwrap();
        }
    }

    #[test]
    fn catalog_validates() {
        for c in validate_catalog() {
            assert!(c.matched && c.valid, "{c:?}");
        }
    }

    #[test]
    fn empty_host_has_no_sites() {
        let host = tree("class E { }");
        for op in builtin_operators() {
            assert_eq!(validate_on(&op, "class E { }"), Ok(0), "{}", op.name);
            assert!(apply_first(&op, &host).is_none());
        }
    }

    #[test]
    fn else_branch_needs_else() {
        let op = &builtin_operators()[3];
        assert_eq!(op.name, "REMOVE_ELSE_BRANCH");
        assert_eq!(validate_on(op, "class H { void f(boolean c) { if (c) { f(c); } } }"), Ok(0));
    }

    #[test]
    fn literals_skip_self_mutants() {
        let ops = builtin_operators();
        let host = "class H { int f() { int a = -1; double z = 0.0; return 0; } }";
        assert_eq!(validate_on(&ops[0], host), Ok(1));
        assert_eq!(validate_on(&ops[1], host), Ok(1));
    }

    #[test]
    fn off_by_one_variant() {
        let p = for_off_by_one(true);
        let host = "class H { void f(int n) { for (int i = 0; i <= n; i++) { } } }";
        let got = apply_first(&p, &tree(host)).unwrap();
        assert_eq!(
            crate::lang::print(&got).unwrap(),
            crate::lang::print(&tree("class H { void f(int n) { for (int i = 0; i < n; i++) { } } }")).unwrap()
        );
    }
}

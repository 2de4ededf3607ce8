//! MiniJ: a small Java subset with a parser, canonical printer, light static
//! checker and deterministic interpreter.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::tree::{Kind, Node};

pub mod check;
pub mod interp;
pub mod lexer;
pub mod parser;
pub mod printer;

pub use interp::{ErrorKind, RuntimeError, Value, VisitSink, DEFAULT_STEP_BUDGET};
pub use parser::{parse_expr, parse_stmts, parse_syntax};
pub use printer::{print, print_pattern, PrintError};

/// A positioned parse or check failure. Lines and columns are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

impl SyntaxError {
    pub fn at(src: &str, offset: usize, expected: &str) -> SyntaxError {
        let (line, col) = crate::sexpr::line_col(src, offset.min(src.len()));
        SyntaxError {
            line,
            col,
            expected: expected.to_string(),
        }
    }
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: expected {}", self.line, self.col, self.expected)
    }
}

/// Parse a compilation unit, rejecting conditions that are not boolean.
pub fn parse(src: &str) -> Result<Node, SyntaxError> {
    let unit = parse_syntax(src)?;
    check::check(&unit, src, check::Mode::Conditions)?;
    Ok(unit)
}

/// Parse and apply every static rule.
pub fn syntax_check(src: &str) -> Result<(), SyntaxError> {
    let unit = parse_syntax(src)?;
    check::check(&unit, src, check::Mode::Full)
}

/// Zero-argument boolean methods named `test*`, as `Class.method`, in source order.
pub fn list_tests(program: &Node) -> Vec<String> {
    let mut out = Vec::new();
    for class in &program.children {
        let cname = class.children[1].label_str();
        for m in &class.children[2].children {
            let name = m.children[2].label_str();
            if m.kind == Kind::MethodDecl
                && name.starts_with("test")
                && m.children[1].label_str() == "boolean"
                && m.children[3].children.is_empty()
            {
                out.push(alloc::format!("{cname}.{name}"));
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestOutcome {
    pub test_id: String,
    pub passed: bool,
    pub visits: u64,
    pub error: Option<ErrorKind>,
}

/// Run one test with the default step budget.
pub fn evaluate_test(program: &Node, test_id: &str, sink: &mut dyn VisitSink) -> TestOutcome {
    evaluate_test_with(program, test_id, sink, DEFAULT_STEP_BUDGET)
}

pub fn evaluate_test_with(
    program: &Node,
    test_id: &str,
    sink: &mut dyn VisitSink,
    budget: u64,
) -> TestOutcome {
    let (class, method) = test_id.split_once('.').unwrap_or(("", test_id));
    let mut it = interp::Interpreter::new(program, sink);
    it.budget = budget;
    let result = it
        .instantiate(class, Vec::new())
        .and_then(|this| match this {
            Value::Object(o) => it.invoke(class, Some(o), method, Vec::new()),
            _ => unreachable!("instantiate returns an object"),
        });
    let (passed, error) = match result {
        Ok(v) => (v == Value::Bool(true), None),
        Err(e) => (false, Some(e.kind)),
    };
    TestOutcome {
        test_id: test_id.to_string(),
        passed,
        visits: it.visits,
        error,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeMap;

    fn run(src: &str, test: &str) -> (TestOutcome, BTreeMap<u64, u64>) {
        let p = parse(src).unwrap();
        let mut seen = BTreeMap::new();
        let out = evaluate_test(&p, test, &mut |id| *seen.entry(id).or_insert(0) += 1);
        (out, seen)
    }

    #[test]
    fn parses_var_decl() {
        let p = parse("class A { void f() { int a = b + 1; } }").unwrap();
        let body = &p.children[0].children[2].children[0].children[4];
        assert_eq!(
            crate::sexpr::serialize(&body.children[0]),
            r#"(VarDecl (Modifiers) (Type "int") (Ident "a") (Binary "+" (Ident "b") (IntLit "1")))"#
        );
    }

    #[test]
    fn empty_file_is_error() {
        assert!(parse("").is_err());
    }

    #[test]
    fn non_boolean_ternary_condition() {
        let e = parse("class A { int g() { return 1 ? 2 : 3; } }").unwrap_err();
        assert_eq!(e.expected, "boolean condition");
        assert_eq!((e.line, e.col), (1, 28));
    }

    #[test]
    fn break_outside_loop() {
        let src = "class A { void f() { break; } }";
        assert!(parse(src).is_ok());
        assert!(syntax_check(src).is_err());
        assert!(syntax_check("class A { void f() { while (true) { break; } } }").is_ok());
    }

    #[test]
    fn static_rules() {
        assert!(syntax_check("class A { void f() { return 1; } }").is_err());
        assert!(syntax_check("class A { int f() { return; } }").is_err());
        assert!(syntax_check("class A { int f() { return x; } }").is_err());
        assert!(syntax_check("class A { int x; int f() { return x; } }").is_ok());
        assert!(syntax_check("class A { void f() { int a = 1; int a = 2; } }").is_err());
        assert!(syntax_check("class A { void f() { g(); } }").is_err());
        assert!(syntax_check("class A { void f() { { int a = 1; } int a = 2; } }").is_ok());
    }

    #[test]
    fn lists_tests_in_order() {
        let p = parse(
            "class A { boolean testFoo() { return true; } int helper() { return 1; } \
             boolean testBar() { return false; } boolean testArg(int x) { return true; } }",
        )
        .unwrap();
        assert_eq!(list_tests(&p), ["A.testFoo", "A.testBar"]);
        assert!(list_tests(&parse("class B { void f() { } }").unwrap()).is_empty());
    }

    #[test]
    fn trivial_test_passes() {
        let (o, seen) = run("class A { boolean testT() { return 1 + 1 == 2; } }", "A.testT");
        assert!(o.passed);
        assert_eq!(o.visits, 0);
        assert!(seen.is_empty());
    }

    #[test]
    fn mut_call_visits_once() {
        let (o, seen) = run(
            "class A { boolean g() { return __mut(7, true); } boolean testT() { return g(); } }",
            "A.testT",
        );
        assert!(o.passed);
        assert_eq!(seen[&7], 1);
    }

    #[test]
    fn loop_visits_counted() {
        let (o, seen) = run(
            "class A { boolean testT() { int s = 0; for (int i = 0; i < 1000; i++) { __mut_visit(3); s += i; } return s == 499500; } }",
            "A.testT",
        );
        assert!(o.passed);
        assert_eq!(o.visits, 1000);
        assert_eq!(seen[&3], 1000);
    }

    #[test]
    fn runtime_errors_fail() {
        let (o, _) = run("class A { boolean testT() { int z = 0; return 1 / z == 0; } }", "A.testT");
        assert_eq!((o.passed, o.error), (false, Some(ErrorKind::DivisionByZero)));
        let (o, _) = run(
            "class A { boolean testT() { String s = null; return s.length() == 0; } }",
            "A.testT",
        );
        assert_eq!(o.error, Some(ErrorKind::NullDereference));
        let (o, _) = run("class A { boolean testT() { while (true) { } } }", "A.testT");
        assert_eq!(o.error, Some(ErrorKind::Timeout));
        let (o, _) = run("class A { boolean testT() { return testT(); } }", "A.testT");
        assert_eq!(o.error, Some(ErrorKind::StackOverflow));
        let (o, _) = run("class A { boolean testT() { int a = 1.5; return true; } }", "A.testT");
        assert_eq!(o.error, Some(ErrorKind::TypeError));
    }

    #[test]
    fn semantics() {
        let src = r#"
class P {
    int x;
    int y;
    int sum() { return x + y; }
}
class A {
    int f(int k) {
        switch (k) {
            case 1:
                return 10;
            case 2:
            case 3:
                return 20;
            default:
                return 30;
        }
    }
    boolean testAll() {
        P p = new P(2, 3);
        double d = 7 / 2;
        int t = (int) 3.9;
        String s = "a" + 1 + true;
        int c = 0;
        c += 2;
        c -= 1;
        return p.sum() == 5 && d == 3.0 && t == 3 && s.equals("a1true") && f(2) == 20 && f(9) == 30 && c == 1 && -7 / 2 == -3 && -7 % 2 == -1;
    }
}
"#;
        let (o, _) = run(src, "A.testAll");
        assert!(o.passed, "{o:?}");
    }
}

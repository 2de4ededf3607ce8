//! Canonical pretty-printer. `parse(print(t)) == t` for every hole-free tree
//! the parser can produce.

use alloc::string::String;

use super::parser::binary_prec;
use crate::tree::{Kind, Node, Sort};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot print tree containing hole {0}")]
pub struct PrintError(pub String);

/// Print a hole-free tree. Any node kind is accepted; a `CompilationUnit`
/// yields a whole source file.
pub fn print(node: &Node) -> Result<String, PrintError> {
    if let Some((id, _)) = node.holes().into_iter().next() {
        return Err(PrintError(id));
    }
    Ok(render(node))
}

/// Print a pattern side, rendering holes as `$id` (and Seq holes as `$id...`).
pub fn print_pattern(node: &Node) -> String {
    render(node)
}

fn render(node: &Node) -> String {
    let mut p = Printer {
        out: String::new(),
        indent: 0,
    };
    p.any(node);
    if p.out.ends_with('\n') && node.kind != Kind::CompilationUnit {
        p.out.pop();
    }
    p.out
}

struct Printer {
    out: String,
    indent: usize,
}

fn prec(n: &Node) -> u8 {
    match n.kind {
        Kind::Assign => 1,
        Kind::Ternary => 2,
        Kind::Binary => binary_prec(n.label_str()).unwrap_or(3),
        Kind::Unary | Kind::Cast => 9,
        Kind::Update | Kind::Call | Kind::FieldAccess => 10,
        _ => 11,
    }
}

fn is_statement_context(n: &Node) -> bool {
    matches!(n.kind, Kind::Hole(Sort::Stmt) | Kind::Hole(Sort::Seq))
        || n.kind.class() == crate::tree::Class::Stmt
}

impl Printer {
    fn w(&mut self, s: &str) {
        self.out.push_str(s);
    }

    fn line_start(&mut self) {
        for _ in 0..self.indent {
            self.out.push_str("    ");
        }
    }

    fn any(&mut self, n: &Node) {
        match n.kind {
            Kind::CompilationUnit => {
                for (i, c) in n.children.iter().enumerate() {
                    if i > 0 {
                        self.w("\n");
                    }
                    self.class(c);
                }
            }
            Kind::ClassDecl => self.class(n),
            Kind::FieldDecl | Kind::MethodDecl => self.member(n),
            Kind::Case => self.case(n),
            Kind::Modifiers => self.modifiers(n),
            Kind::Type => self.w(n.label_str()),
            Kind::Params => self.params(n),
            Kind::Param => self.param(n),
            Kind::Args => self.args(n),
            Kind::Absent => {}
            Kind::Default => self.w("default"),
            Kind::Members | Kind::Cases | Kind::CaseBody => {
                for c in &n.children {
                    self.any(c);
                }
            }
            Kind::Modifier | Kind::Annotation => self.modifier(n),
            _ if is_statement_context(n) => self.stmt(n),
            _ => self.expr(n, 0),
        }
    }

    fn hole(&mut self, n: &Node) {
        self.w("$");
        self.w(n.label_str());
        if n.hole_sort() == Some(Sort::Seq) {
            self.w("...");
        }
    }

    fn class(&mut self, n: &Node) {
        if n.is_hole() {
            self.line_start();
            self.hole(n);
            self.w("\n");
            return;
        }
        self.line_start();
        self.modifiers(&n.children[0]);
        self.w("class ");
        self.expr(&n.children[1], 0);
        self.w(" {\n");
        self.indent += 1;
        let mut first = true;
        for m in &n.children[2].children {
            if !first && m.kind == Kind::MethodDecl {
                self.w("\n");
            }
            first = false;
            self.member(m);
        }
        self.indent -= 1;
        self.line_start();
        self.w("}\n");
    }

    fn modifier(&mut self, m: &Node) {
        match m.kind {
            Kind::Annotation => {
                self.w("@");
                self.w(m.label_str());
                if !m.children[0].children.is_empty() {
                    self.args(&m.children[0]);
                }
            }
            Kind::Hole(_) => self.hole(m),
            _ => self.w(m.label_str()),
        }
    }

    fn modifiers(&mut self, n: &Node) {
        if n.is_hole() {
            self.hole(n);
            self.w(" ");
            return;
        }
        for m in &n.children {
            self.modifier(m);
            self.w(" ");
        }
    }

    fn member(&mut self, n: &Node) {
        self.line_start();
        if n.is_hole() {
            self.hole(n);
            self.w("\n");
            return;
        }
        self.modifiers(&n.children[0]);
        self.any(&n.children[1]);
        self.w(" ");
        self.expr(&n.children[2], 0);
        if n.kind == Kind::MethodDecl {
            self.params(&n.children[3]);
            self.w(" ");
            self.block(&n.children[4]);
            self.w("\n");
        } else {
            if n.children[3].kind != Kind::Absent {
                self.w(" = ");
                self.expr(&n.children[3], 1);
            }
            self.w(";\n");
        }
    }

    fn params(&mut self, n: &Node) {
        self.w("(");
        if n.is_hole() {
            self.hole(n);
        } else {
            for (i, p) in n.children.iter().enumerate() {
                if i > 0 {
                    self.w(", ");
                }
                self.param(p);
            }
        }
        self.w(")");
    }

    fn param(&mut self, p: &Node) {
        if p.is_hole() {
            self.hole(p);
            return;
        }
        self.any(&p.children[0]);
        self.w(" ");
        self.expr(&p.children[1], 0);
    }

    /// `{ ... }` starting at the current column, closing brace indented.
    fn block(&mut self, n: &Node) {
        if n.is_hole() {
            self.hole(n);
            return;
        }
        self.w("{\n");
        self.indent += 1;
        for s in &n.children {
            self.stmt(s);
        }
        self.indent -= 1;
        self.line_start();
        self.w("}");
    }

    /// Body of if/while/for: blocks stay on the header line, other
    /// statements go on their own indented line.
    fn body(&mut self, n: &Node) {
        if n.kind == Kind::Block {
            self.w(" ");
            self.block(n);
        } else {
            self.w("\n");
            self.indent += 1;
            self.stmt(n);
            self.indent -= 1;
            self.out.pop();
        }
    }

    fn var_decl_inline(&mut self, n: &Node) {
        self.modifiers(&n.children[0]);
        self.any(&n.children[1]);
        self.w(" ");
        self.expr(&n.children[2], 0);
        if n.children[3].kind != Kind::Absent {
            self.w(" = ");
            self.expr(&n.children[3], 1);
        }
    }

    /// One statement, starting with indentation and ending with a newline.
    fn stmt(&mut self, n: &Node) {
        self.line_start();
        self.stmt_inline(n);
        self.w("\n");
    }

    fn stmt_inline(&mut self, n: &Node) {
        match n.kind {
            Kind::Hole(_) => self.hole(n),
            Kind::Block => self.block(n),
            Kind::Empty => self.w(";"),
            Kind::Break => self.w("break;"),
            Kind::VarDecl => {
                self.var_decl_inline(n);
                self.w(";");
            }
            Kind::ExprStmt => {
                self.expr(&n.children[0], 0);
                self.w(";");
            }
            Kind::Return => {
                self.w("return");
                if n.children[0].kind != Kind::Absent {
                    self.w(" ");
                    self.expr(&n.children[0], 0);
                }
                self.w(";");
            }
            Kind::If => {
                self.w("if (");
                self.expr(&n.children[0], 0);
                self.w(")");
                self.body(&n.children[1]);
                let els = &n.children[2];
                if els.kind != Kind::Absent {
                    if n.children[1].kind == Kind::Block {
                        self.w(" else");
                    } else {
                        self.w("\n");
                        self.line_start();
                        self.w("else");
                    }
                    if els.kind == Kind::If {
                        self.w(" ");
                        self.stmt_inline(els);
                    } else {
                        self.body(els);
                    }
                }
            }
            Kind::While => {
                self.w("while (");
                self.expr(&n.children[0], 0);
                self.w(")");
                self.body(&n.children[1]);
            }
            Kind::For => {
                self.w("for (");
                let init = &n.children[0];
                match init.kind {
                    Kind::Absent => {}
                    Kind::VarDecl => self.var_decl_inline(init),
                    Kind::ExprStmt => self.expr(&init.children[0], 0),
                    _ => self.any(init),
                }
                self.w(";");
                if n.children[1].kind != Kind::Absent {
                    self.w(" ");
                    self.expr(&n.children[1], 0);
                }
                self.w(";");
                if n.children[2].kind != Kind::Absent {
                    self.w(" ");
                    self.expr(&n.children[2], 0);
                }
                self.w(")");
                self.body(&n.children[3]);
            }
            Kind::Switch => {
                self.w("switch (");
                self.expr(&n.children[0], 0);
                self.w(") {\n");
                self.indent += 1;
                let cases = &n.children[1];
                if cases.is_hole() {
                    self.line_start();
                    self.hole(cases);
                    self.w("\n");
                } else {
                    for c in &cases.children {
                        self.case(c);
                    }
                }
                self.indent -= 1;
                self.line_start();
                self.w("}");
            }
            _ => self.expr(n, 0),
        }
    }

    fn case(&mut self, c: &Node) {
        self.line_start();
        if c.is_hole() {
            self.hole(c);
            self.w("\n");
            return;
        }
        match c.children[0].kind {
            Kind::Default => self.w("default:\n"),
            _ => {
                self.w("case ");
                self.expr(&c.children[0], 3);
                self.w(":\n");
            }
        }
        self.indent += 1;
        let body = &c.children[1];
        if body.is_hole() {
            self.stmt(body);
        } else {
            for s in &body.children {
                self.stmt(s);
            }
        }
        self.indent -= 1;
    }

    fn args(&mut self, n: &Node) {
        self.w("(");
        if n.is_hole() {
            self.hole(n);
        } else {
            for (i, a) in n.children.iter().enumerate() {
                if i > 0 {
                    self.w(", ");
                }
                self.expr(a, 1);
            }
        }
        self.w(")");
    }

    /// Print `n`, parenthesized when its precedence is below `min`.
    fn expr(&mut self, n: &Node, min: u8) {
        if n.is_hole() {
            self.hole(n);
            return;
        }
        let p = prec(n);
        let paren = p < min;
        if paren {
            self.w("(");
        }
        match n.kind {
            Kind::Ident | Kind::IntLit | Kind::DoubleLit | Kind::BoolLit => self.w(n.label_str()),
            Kind::StrLit => {
                self.w("\"");
                for ch in n.label_str().chars() {
                    match ch {
                        '"' => self.w("\\\""),
                        '\\' => self.w("\\\\"),
                        '\n' => self.w("\\n"),
                        '\t' => self.w("\\t"),
                        c => self.out.push(c),
                    }
                }
                self.w("\"");
            }
            Kind::NullLit => self.w("null"),
            Kind::This => self.w("this"),
            Kind::Binary => {
                self.expr(&n.children[0], p);
                self.w(" ");
                self.w(n.label_str());
                self.w(" ");
                self.expr(&n.children[1], p + 1);
            }
            Kind::Unary => {
                self.w(n.label_str());
                self.unary_operand(&n.children[0], n.label_str() == "-");
            }
            Kind::Cast => {
                self.w("(");
                self.any(&n.children[0]);
                self.w(") ");
                self.unary_operand(&n.children[1], false);
            }
            Kind::Update => {
                self.expr(&n.children[0], 10);
                self.w(n.label_str());
            }
            Kind::Assign => {
                self.expr(&n.children[0], 10);
                self.w(" ");
                self.w(n.label_str());
                self.w(" ");
                self.expr(&n.children[1], 1);
            }
            Kind::Ternary => {
                self.expr(&n.children[0], 3);
                self.w(" ? ");
                self.expr(&n.children[1], 1);
                self.w(" : ");
                self.expr(&n.children[2], 2);
            }
            Kind::FieldAccess => {
                self.expr(&n.children[0], 10);
                self.w(".");
                self.expr(&n.children[1], 0);
            }
            Kind::Call => {
                if n.children[0].kind != Kind::Absent {
                    self.expr(&n.children[0], 10);
                    self.w(".");
                }
                self.expr(&n.children[1], 0);
                self.args(&n.children[2]);
            }
            Kind::New => {
                self.w("new ");
                self.any(&n.children[0]);
                self.args(&n.children[1]);
            }
            _ => self.any(n),
        }
        if paren {
            self.w(")");
        }
    }

    /// Operands of unary minus and casts must not start with `-`: `--x`
    /// would lex as a decrement and `-(1)` would fold into a literal.
    fn unary_operand(&mut self, e: &Node, after_minus: bool) {
        let numeric = matches!(e.kind, Kind::IntLit | Kind::DoubleLit);
        let neg = numeric && e.label_str().starts_with('-')
            || e.kind == Kind::Unary && e.label_str() == "-";
        if (after_minus && numeric) || neg {
            self.w("(");
            self.expr(e, 0);
            self.w(")");
        } else {
            self.expr(e, 9);
        }
    }
}

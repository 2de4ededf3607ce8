//! Recursive-descent parser for MiniJ.
//!
//! Expression precedence, loosest first:
//!
//! | level | operators                  | assoc |
//! |-------|----------------------------|-------|
//! | 1     | `=` `+=` `-=`              | right |
//! | 2     | `?:`                       | right |
//! | 3     | `\|\|`                     | left  |
//! | 4     | `&&`                       | left  |
//! | 5     | `==` `!=`                  | left  |
//! | 6     | `<` `<=` `>` `>=`          | left  |
//! | 7     | `+` `-`                    | left  |
//! | 8     | `*` `/` `%`                | left  |
//! | 9     | unary `!` `-`, cast `(T)e` | right |
//! | 10    | `.f` `.m(..)` `x++` `x--`  | left  |
//!
//! A `-` written directly before a numeric literal is folded into the
//! literal (`-1` is `IntLit "-1"`).

use alloc::vec;
use alloc::vec::Vec;

use super::lexer::{lex, Tok, Token};
use super::SyntaxError;
use crate::tree::{Kind, Node, Span};

pub const KEYWORDS: &[&str] = &[
    "class", "if", "else", "while", "for", "switch", "case", "default", "break", "return", "new",
    "null", "true", "false", "this", "synchronized", "public", "private", "protected", "static",
    "final",
];

pub const MODIFIERS: &[&str] = &["public", "private", "protected", "static", "final", "synchronized"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

pub(crate) fn binary_prec(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 3,
        "&&" => 4,
        "==" | "!=" => 5,
        "<" | "<=" | ">" | ">=" => 6,
        "+" | "-" => 7,
        "*" | "/" | "%" => 8,
        _ => return None,
    })
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    last_end: usize,
}

type PResult<T> = Result<T, SyntaxError>;

pub fn parse_syntax(src: &str) -> PResult<Node> {
    let toks = lex(src)?;
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        last_end: 0,
    };
    p.unit()
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, n: usize) -> &Token {
        &self.toks[(self.pos + n).min(self.toks.len() - 1)]
    }

    fn at(&self, text: &str) -> bool {
        self.peek().is(text)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        self.last_end = t.end;
        t
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn err(&self, expected: &str) -> SyntaxError {
        SyntaxError::at(self.src, self.peek().start, expected)
    }

    fn expect(&mut self, text: &str) -> PResult<Token> {
        if self.at(text) {
            Ok(self.bump())
        } else {
            Err(self.err(&alloc::format!("'{text}'")))
        }
    }

    fn start(&self) -> usize {
        self.peek().start
    }

    fn finish(&self, node: Node, start: usize) -> Node {
        node.with_span(Span::new(start, self.last_end.max(start)))
    }

    fn name(&mut self) -> PResult<Node> {
        let t = self.peek();
        if t.tok == Tok::Ident && !is_keyword(&t.text) {
            let t = self.bump();
            Ok(Node::atom(Kind::Ident, t.text).with_span(Span::new(t.start, t.end)))
        } else {
            Err(self.err("identifier"))
        }
    }

    fn unit(&mut self) -> PResult<Node> {
        let start = self.start();
        let mut classes = Vec::new();
        while self.peek().tok != Tok::Eof {
            classes.push(self.class()?);
        }
        if classes.is_empty() {
            return Err(self.err("class declaration"));
        }
        Ok(self.finish(Node::new(Kind::CompilationUnit, classes), start))
    }

    fn modifiers(&mut self) -> PResult<Node> {
        let start = self.start();
        let mut mods = Vec::new();
        loop {
            let t = self.peek();
            if t.tok == Tok::Ident && MODIFIERS.contains(&t.text.as_str()) {
                let t = self.bump();
                mods.push(Node::atom(Kind::Modifier, t.text).with_span(Span::new(t.start, t.end)));
            } else if t.is("@") {
                let s = self.start();
                self.bump();
                let name = self.name()?;
                let args = if self.at("(") {
                    self.args()?
                } else {
                    Node::new(Kind::Args, vec![])
                };
                let ann = Node::labeled(Kind::Annotation, name.label_str(), vec![args]);
                mods.push(self.finish(ann, s));
            } else {
                break;
            }
        }
        Ok(self.finish(Node::new(Kind::Modifiers, mods), start))
    }

    fn class(&mut self) -> PResult<Node> {
        let start = self.start();
        let mods = self.modifiers()?;
        self.expect("class")?;
        let name = self.name()?;
        let mstart = self.start();
        self.expect("{")?;
        let mut members = Vec::new();
        while !self.at("}") {
            if self.peek().tok == Tok::Eof {
                return Err(self.err("'}'"));
            }
            members.push(self.member()?);
        }
        self.bump();
        let members = self.finish(Node::new(Kind::Members, members), mstart);
        Ok(self.finish(Node::new(Kind::ClassDecl, vec![mods, name, members]), start))
    }

    fn ty(&mut self) -> PResult<Node> {
        let t = self.peek();
        if t.tok == Tok::Ident && !is_keyword(&t.text) {
            let t = self.bump();
            Ok(Node::atom(Kind::Type, t.text).with_span(Span::new(t.start, t.end)))
        } else {
            Err(self.err("type"))
        }
    }

    fn member(&mut self) -> PResult<Node> {
        let start = self.start();
        let mods = self.modifiers()?;
        let ty = self.ty()?;
        let name = self.name()?;
        if self.at("(") {
            let pstart = self.start();
            self.bump();
            let mut params = Vec::new();
            if !self.at(")") {
                loop {
                    let s = self.start();
                    let pty = self.ty()?;
                    let pname = self.name()?;
                    params.push(self.finish(Node::new(Kind::Param, vec![pty, pname]), s));
                    if !self.eat(",") {
                        break;
                    }
                }
            }
            self.expect(")")?;
            let params = self.finish(Node::new(Kind::Params, params), pstart);
            let body = self.block()?;
            Ok(self.finish(Node::new(Kind::MethodDecl, vec![mods, ty, name, params, body]), start))
        } else {
            let init = if self.eat("=") { self.expr()? } else { Node::absent() };
            self.expect(";")?;
            Ok(self.finish(Node::new(Kind::FieldDecl, vec![mods, ty, name, init]), start))
        }
    }

    fn block(&mut self) -> PResult<Node> {
        let start = self.start();
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.at("}") {
            if self.peek().tok == Tok::Eof {
                return Err(self.err("'}'"));
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(self.finish(Node::new(Kind::Block, stmts), start))
    }

    fn starts_decl(&self) -> bool {
        let t = self.peek();
        if t.is("@") || t.is("final") {
            return true;
        }
        let n = self.peek_at(1);
        t.tok == Tok::Ident && !is_keyword(&t.text) && n.tok == Tok::Ident && !is_keyword(&n.text)
    }

    fn var_decl(&mut self) -> PResult<Node> {
        let start = self.start();
        let mods = self.modifiers()?;
        let ty = self.ty()?;
        let name = self.name()?;
        let init = if self.eat("=") { self.expr()? } else { Node::absent() };
        Ok(self.finish(Node::new(Kind::VarDecl, vec![mods, ty, name, init]), start))
    }

    fn paren_expr(&mut self) -> PResult<Node> {
        self.expect("(")?;
        let e = self.expr()?;
        self.expect(")")?;
        Ok(e)
    }

    fn stmt(&mut self) -> PResult<Node> {
        let start = self.start();
        let t = self.peek().clone();
        let node = match t.text.as_str() {
            "{" if t.tok == Tok::Punct => return self.block(),
            ";" if t.tok == Tok::Punct => {
                self.bump();
                Node::leaf(Kind::Empty)
            }
            "if" => {
                self.bump();
                let c = self.paren_expr()?;
                let then = self.stmt()?;
                let els = if self.eat("else") { self.stmt()? } else { Node::absent() };
                Node::new(Kind::If, vec![c, then, els])
            }
            "while" => {
                self.bump();
                let c = self.paren_expr()?;
                let body = self.stmt()?;
                Node::new(Kind::While, vec![c, body])
            }
            "for" => {
                self.bump();
                self.expect("(")?;
                let init = if self.at(";") {
                    Node::absent()
                } else if self.starts_decl() {
                    self.var_decl()?
                } else {
                    let s = self.start();
                    let e = self.expr()?;
                    self.finish(Node::new(Kind::ExprStmt, vec![e]), s)
                };
                self.expect(";")?;
                let cond = if self.at(";") { Node::absent() } else { self.expr()? };
                self.expect(";")?;
                let update = if self.at(")") { Node::absent() } else { self.expr()? };
                self.expect(")")?;
                let body = self.stmt()?;
                Node::new(Kind::For, vec![init, cond, update, body])
            }
            "switch" => {
                self.bump();
                let scrutinee = self.paren_expr()?;
                let cstart = self.start();
                self.expect("{")?;
                let mut cases = Vec::new();
                while !self.at("}") {
                    cases.push(self.case()?);
                }
                self.bump();
                let cases = self.finish(Node::new(Kind::Cases, cases), cstart);
                Node::new(Kind::Switch, vec![scrutinee, cases])
            }
            "return" => {
                self.bump();
                let e = if self.at(";") { Node::absent() } else { self.expr()? };
                self.expect(";")?;
                Node::new(Kind::Return, vec![e])
            }
            "break" => {
                self.bump();
                self.expect(";")?;
                Node::leaf(Kind::Break)
            }
            _ if self.starts_decl() => {
                let d = self.var_decl()?;
                self.expect(";")?;
                d
            }
            _ => {
                let e = self.expr()?;
                self.expect(";")?;
                Node::new(Kind::ExprStmt, vec![e])
            }
        };
        Ok(self.finish(node, start))
    }

    fn case(&mut self) -> PResult<Node> {
        let start = self.start();
        let label = if self.eat("case") {
            self.binary(3)?
        } else if self.at("default") {
            let t = self.bump();
            Node::leaf(Kind::Default).with_span(Span::new(t.start, t.end))
        } else {
            return Err(self.err("'case' or 'default'"));
        };
        self.expect(":")?;
        let bstart = self.start();
        let mut body = Vec::new();
        while !(self.at("case") || self.at("default") || self.at("}")) {
            if self.peek().tok == Tok::Eof {
                return Err(self.err("'}'"));
            }
            body.push(self.stmt()?);
        }
        let body = self.finish(Node::new(Kind::CaseBody, body), bstart);
        Ok(self.finish(Node::new(Kind::Case, vec![label, body]), start))
    }

    pub fn expr(&mut self) -> PResult<Node> {
        let start = self.start();
        let lhs = self.ternary()?;
        for op in ["=", "+=", "-="] {
            if self.at(op) {
                if !matches!(lhs.kind, Kind::Ident | Kind::FieldAccess) {
                    return Err(SyntaxError::at(self.src, start, "assignable expression"));
                }
                self.bump();
                let rhs = self.expr()?;
                return Ok(self.finish(Node::labeled(Kind::Assign, op, vec![lhs, rhs]), start));
            }
        }
        Ok(lhs)
    }

    fn ternary(&mut self) -> PResult<Node> {
        let start = self.start();
        let c = self.binary(3)?;
        if self.eat("?") {
            let a = self.expr()?;
            self.expect(":")?;
            let b = self.ternary()?;
            return Ok(self.finish(Node::new(Kind::Ternary, vec![c, a, b]), start));
        }
        Ok(c)
    }

    fn binary(&mut self, min: u8) -> PResult<Node> {
        let start = self.start();
        let mut lhs = self.unary()?;
        loop {
            let t = self.peek();
            let Some(prec) = (t.tok == Tok::Punct).then(|| binary_prec(&t.text)).flatten() else {
                break;
            };
            if prec < min {
                break;
            }
            let op = self.bump().text;
            let rhs = self.binary(prec + 1)?;
            lhs = self.finish(Node::labeled(Kind::Binary, op, vec![lhs, rhs]), start);
        }
        Ok(lhs)
    }

    fn is_cast(&self) -> bool {
        if !(self.at("(") && self.peek_at(1).tok == Tok::Ident && self.peek_at(2).is(")")) {
            return false;
        }
        let ty = &self.peek_at(1).text;
        if is_keyword(ty) {
            return false;
        }
        if matches!(ty.as_str(), "int" | "double" | "boolean" | "String") {
            return true;
        }
        let next = self.peek_at(3);
        match next.tok {
            Tok::Ident | Tok::Int | Tok::Double | Tok::Str => true,
            Tok::Punct => next.text == "(" || next.text == "!",
            Tok::Eof => false,
        }
    }

    fn unary(&mut self) -> PResult<Node> {
        let start = self.start();
        if self.at("!") {
            self.bump();
            let e = self.unary()?;
            return Ok(self.finish(Node::labeled(Kind::Unary, "!", vec![e]), start));
        }
        if self.at("-") {
            let next = self.peek_at(1);
            if matches!(next.tok, Tok::Int | Tok::Double) && next.start == self.peek().end {
                self.bump();
                let lit = self.bump();
                let kind = if lit.tok == Tok::Int { Kind::IntLit } else { Kind::DoubleLit };
                let node = Node::atom(kind, alloc::format!("-{}", lit.text))
                    .with_span(Span::new(start, lit.end));
                return self.postfix(node, start);
            }
            self.bump();
            let e = self.unary()?;
            return Ok(self.finish(Node::labeled(Kind::Unary, "-", vec![e]), start));
        }
        if self.is_cast() {
            self.bump();
            let ty = self.ty()?;
            self.bump();
            let e = self.unary()?;
            return Ok(self.finish(Node::new(Kind::Cast, vec![ty, e]), start));
        }
        let p = self.primary()?;
        self.postfix(p, start)
    }

    fn postfix(&mut self, mut e: Node, start: usize) -> PResult<Node> {
        loop {
            if self.eat(".") {
                let name = self.name()?;
                e = if self.at("(") {
                    let args = self.args()?;
                    Node::new(Kind::Call, vec![e, name, args])
                } else {
                    Node::new(Kind::FieldAccess, vec![e, name])
                };
                e = self.finish(e, start);
            } else if self.at("++") || self.at("--") {
                if !matches!(e.kind, Kind::Ident | Kind::FieldAccess) {
                    return Err(self.err("assignable expression before ++/--"));
                }
                let op = self.bump().text;
                e = self.finish(Node::labeled(Kind::Update, op, vec![e]), start);
            } else {
                return Ok(e);
            }
        }
    }

    fn args(&mut self) -> PResult<Node> {
        let start = self.start();
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.at(")") {
            loop {
                args.push(self.expr()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(self.finish(Node::new(Kind::Args, args), start))
    }

    fn primary(&mut self) -> PResult<Node> {
        let start = self.start();
        let t = self.peek().clone();
        let node = match t.tok {
            Tok::Int => {
                self.bump();
                Node::atom(Kind::IntLit, t.text)
            }
            Tok::Double => {
                self.bump();
                Node::atom(Kind::DoubleLit, t.text)
            }
            Tok::Str => {
                self.bump();
                Node::atom(Kind::StrLit, t.text)
            }
            Tok::Punct if t.text == "(" => {
                self.bump();
                let e = self.expr()?;
                self.expect(")")?;
                return Ok(e);
            }
            Tok::Ident => match t.text.as_str() {
                "true" | "false" => {
                    self.bump();
                    Node::atom(Kind::BoolLit, t.text)
                }
                "null" => {
                    self.bump();
                    Node::leaf(Kind::NullLit)
                }
                "this" => {
                    self.bump();
                    Node::leaf(Kind::This)
                }
                "new" => {
                    self.bump();
                    let ty = self.ty()?;
                    let args = self.args()?;
                    Node::new(Kind::New, vec![ty, args])
                }
                _ => {
                    let name = self.name()?;
                    if self.at("(") {
                        let args = self.args()?;
                        let recv = Node::absent();
                        Node::new(Kind::Call, vec![recv, name, args])
                    } else {
                        return Ok(name);
                    }
                }
            },
            _ => return Err(self.err("expression")),
        };
        Ok(self.finish(node, start))
    }
}

/// Parse a standalone expression (used by tests and pattern authoring).
pub fn parse_expr(src: &str) -> PResult<Node> {
    let toks = lex(src)?;
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        last_end: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.err("end of input"));
    }
    Ok(e)
}

/// Parse a sequence of statements (used by tests and pattern authoring).
pub fn parse_stmts(src: &str) -> PResult<Vec<Node>> {
    let toks = lex(src)?;
    let mut p = Parser {
        src,
        toks,
        pos: 0,
        last_end: 0,
    };
    let mut out = Vec::new();
    while p.peek().tok != Tok::Eof {
        out.push(p.stmt()?);
    }
    Ok(out)
}

//! Random generator of well-formed MiniJ programs.
//!
//! Generated programs pass [`crate::lang::syntax_check`], terminate, and
//! contain the shapes targeted by the operator catalog (ternaries, casts,
//! null checks, switches, chained calls and so on). Every `if`, loop and
//! case body is a block, so printing never produces a dangling `else`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tree::{Kind, Node};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum T {
    Int,
    Double,
    Bool,
    Str,
}

impl T {
    fn name(self) -> &'static str {
        match self {
            T::Int => "int",
            T::Double => "double",
            T::Bool => "boolean",
            T::Str => "String",
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub max_classes: usize,
    pub max_fields: usize,
    pub max_methods: usize,
    pub max_tests: usize,
    pub max_stmts: usize,
    pub max_depth: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_classes: 2,
            max_fields: 3,
            max_methods: 4,
            max_tests: 3,
            max_stmts: 5,
            max_depth: 3,
        }
    }
}

#[derive(Clone)]
struct Var {
    name: String,
    ty: T,
    maybe_null: bool,
    mutable: bool,
}

#[derive(Clone)]
struct Sig {
    name: String,
    ret: Option<T>,
    params: Vec<T>,
}

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    cfg: GenConfig,
    fields: Vec<Var>,
    methods: Vec<Sig>,
    scopes: Vec<Vec<Var>>,
    fresh: usize,
    loops: usize,
    ret: Option<T>,
}

fn ty(t: T) -> Node {
    Node::atom(Kind::Type, t.name())
}
fn mods(names: &[&str]) -> Node {
    Node::new(
        Kind::Modifiers,
        names.iter().map(|m| Node::atom(Kind::Modifier, *m)).collect(),
    )
}
fn bin(op: &str, l: Node, r: Node) -> Node {
    Node::labeled(Kind::Binary, op, vec![l, r])
}
fn call(recv: Node, name: &str, args: Vec<Node>) -> Node {
    Node::new(Kind::Call, vec![recv, Node::ident(name), Node::new(Kind::Args, args)])
}
fn int(i: i64) -> Node {
    Node::atom(Kind::IntLit, i.to_string())
}
fn block(stmts: Vec<Node>) -> Node {
    Node::new(Kind::Block, stmts)
}
fn expr_stmt(e: Node) -> Node {
    Node::new(Kind::ExprStmt, vec![e])
}
fn var_decl(m: Node, t: T, name: &str, init: Option<Node>) -> Node {
    Node::new(
        Kind::VarDecl,
        vec![m, ty(t), Node::ident(name), init.unwrap_or_else(Node::absent)],
    )
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self, prefix: &str) -> String {
        self.fresh += 1;
        format!("{prefix}{}", self.fresh)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn vars(&self, t: T, need_value: bool, need_mutable: bool) -> Vec<Var> {
        self.scopes
            .iter()
            .flatten()
            .chain(self.fields.iter())
            .filter(|v| v.ty == t && !(need_value && v.maybe_null) && !(need_mutable && !v.mutable))
            .cloned()
            .collect()
    }

    fn var_ref(&mut self, v: &Var) -> Node {
        let is_field = !self.scopes.iter().flatten().any(|l| l.name == v.name);
        if is_field && self.chance(0.3) {
            Node::new(Kind::FieldAccess, vec![Node::leaf(Kind::This), Node::ident(&v.name)])
        } else {
            Node::ident(&v.name)
        }
    }

    fn pick_var(&mut self, t: T) -> Option<Node> {
        let vs = self.vars(t, true, false);
        let v = vs.choose(self.rng)?.clone();
        Some(self.var_ref(&v))
    }

    fn leaf(&mut self, t: T) -> Node {
        if self.chance(0.5) {
            if let Some(v) = self.pick_var(t) {
                return v;
            }
        }
        match t {
            T::Int => {
                let i = self.rng.gen_range(-3..20);
                int(i)
            }
            T::Double => {
                let whole = self.rng.gen_range(0..10);
                let frac = self.rng.gen_range(0..10);
                Node::atom(Kind::DoubleLit, format!("{whole}.{frac}"))
            }
            T::Bool => Node::atom(Kind::BoolLit, if self.chance(0.5) { "true" } else { "false" }),
            T::Str => {
                let words = ["a", "b", "hello", "", "x y"];
                Node::atom(Kind::StrLit, *words.choose(self.rng).unwrap())
            }
        }
    }

    fn callable(&self, t: Option<T>) -> Vec<Sig> {
        self.methods.iter().filter(|s| s.ret == t).cloned().collect()
    }

    fn method_call(&mut self, sig: &Sig, d: usize) -> Node {
        let args = sig.params.iter().map(|&p| self.expr(p, d)).collect();
        call(Node::absent(), &sig.name, args)
    }

    fn expr(&mut self, t: T, d: usize) -> Node {
        if d == 0 || self.chance(0.25) {
            return self.leaf(t);
        }
        let d = d - 1;
        let choice = self.rng.gen_range(0..10);
        match t {
            T::Int => match choice {
                0..=2 => {
                    let op = *["+", "-", "*", "+"].choose(self.rng).unwrap();
                    bin(op, self.expr(T::Int, d), self.expr(T::Int, d))
                }
                3 => {
                    let op = if self.chance(0.5) { "/" } else { "%" };
                    let k = self.rng.gen_range(1..7);
                    bin(op, self.expr(T::Int, d), int(k))
                }
                4 => Node::new(
                    Kind::Ternary,
                    vec![self.expr(T::Bool, d), self.expr(T::Int, d), self.expr(T::Int, d)],
                ),
                5 => Node::new(Kind::Cast, vec![ty(T::Int), self.expr(T::Double, d)]),
                6 => match self.pick_var(T::Str) {
                    Some(s) => call(s, "length", vec![]),
                    None => self.leaf(T::Int),
                },
                7 => match self.callable(Some(T::Int)).choose(self.rng).cloned() {
                    Some(sig) => self.method_call(&sig, d),
                    None => self.leaf(T::Int),
                },
                8 => Node::labeled(Kind::Unary, "-", vec![self.expr(T::Int, d)]),
                _ => {
                    let a = self.expr(T::Int, d);
                    let b = self.expr(T::Int, d);
                    if self.chance(0.5) {
                        call(Node::ident("Math"), "max", vec![a, b])
                    } else {
                        call(Node::ident("Math"), "abs", vec![a])
                    }
                }
            },
            T::Double => match choice {
                0..=3 => {
                    let op = *["+", "-", "*", "/"].choose(self.rng).unwrap();
                    let r = if op == "/" {
                        Node::atom(Kind::DoubleLit, "2.0")
                    } else {
                        self.expr(T::Double, d)
                    };
                    bin(op, self.expr(T::Double, d), r)
                }
                4 | 5 => Node::new(Kind::Cast, vec![ty(T::Double), self.expr(T::Int, d)]),
                6 => Node::new(
                    Kind::Ternary,
                    vec![self.expr(T::Bool, d), self.expr(T::Double, d), self.expr(T::Double, d)],
                ),
                7 => match self.callable(Some(T::Double)).choose(self.rng).cloned() {
                    Some(sig) => self.method_call(&sig, d),
                    None => self.leaf(T::Double),
                },
                _ => bin("+", self.expr(T::Int, d), self.expr(T::Double, d)),
            },
            T::Bool => match choice {
                0..=2 => {
                    let op = *["<", "<=", ">", ">=", "==", "!="].choose(self.rng).unwrap();
                    let t2 = if self.chance(0.8) { T::Int } else { T::Double };
                    bin(op, self.expr(t2, d), self.expr(t2, d))
                }
                3 => bin("&&", self.expr(T::Bool, d), self.expr(T::Bool, d)),
                4 => bin("||", self.expr(T::Bool, d), self.expr(T::Bool, d)),
                5 => Node::labeled(Kind::Unary, "!", vec![self.expr(T::Bool, d)]),
                6 => {
                    let lit = if self.chance(0.5) { "true" } else { "false" };
                    bin(if self.chance(0.7) { "==" } else { "!=" }, self.expr(T::Bool, d), Node::atom(Kind::BoolLit, lit))
                }
                7 => {
                    let strs = self.vars(T::Str, false, false);
                    match strs.choose(self.rng).cloned() {
                        Some(v) => {
                            let r = self.var_ref(&v);
                            bin(if self.chance(0.6) { "==" } else { "!=" }, r, Node::leaf(Kind::NullLit))
                        }
                        None => self.leaf(T::Bool),
                    }
                }
                8 => match self.pick_var(T::Str) {
                    Some(s) => {
                        if self.chance(0.5) {
                            call(s, "isEmpty", vec![])
                        } else {
                            let lit = self.leaf(T::Str);
                            call(s, "equals", vec![lit])
                        }
                    }
                    None => self.leaf(T::Bool),
                },
                _ => match self.callable(Some(T::Bool)).choose(self.rng).cloned() {
                    Some(sig) => self.method_call(&sig, d),
                    None => self.leaf(T::Bool),
                },
            },
            T::Str => match choice {
                0..=3 => {
                    let other = *[T::Int, T::Str, T::Bool].choose(self.rng).unwrap();
                    bin("+", self.expr(T::Str, d), self.expr(other, d))
                }
                4 | 5 => match self.pick_var(T::Str) {
                    Some(s) => {
                        let inner = call(s, "toString", vec![]);
                        if self.chance(0.5) {
                            call(inner, "toString", vec![])
                        } else {
                            inner
                        }
                    }
                    None => self.leaf(T::Str),
                },
                6 => Node::new(
                    Kind::Ternary,
                    vec![self.expr(T::Bool, d), self.expr(T::Str, d), self.expr(T::Str, d)],
                ),
                7 => Node::new(Kind::Cast, vec![ty(T::Str), self.expr(T::Str, d)]),
                8 => match self.callable(Some(T::Str)).choose(self.rng).cloned() {
                    Some(sig) => self.method_call(&sig, d),
                    None => self.leaf(T::Str),
                },
                _ => self.leaf(T::Str),
            },
        }
    }

    fn any_type(&mut self) -> T {
        *[T::Int, T::Int, T::Double, T::Bool, T::Str].choose(self.rng).unwrap()
    }

    fn declare(&mut self, name: &str, t: T, maybe_null: bool, mutable: bool) {
        self.scopes.last_mut().unwrap().push(Var {
            name: name.to_string(),
            ty: t,
            maybe_null,
            mutable,
        });
    }

    fn scoped_block(&mut self, depth: usize, n: usize) -> Node {
        self.scopes.push(Vec::new());
        let mut out = Vec::new();
        for _ in 0..n {
            out.extend(self.stmt(depth));
        }
        self.scopes.pop();
        block(out)
    }

    fn stmt(&mut self, depth: usize) -> Vec<Node> {
        let d = self.cfg.max_depth;
        let leafy = depth == 0;
        let choice = self.rng.gen_range(0..if leafy { 6 } else { 14 });
        match choice {
            0 | 1 => {
                let t = self.any_type();
                let name = self.fresh("v");
                if self.chance(0.15) {
                    self.declare(&name, t, true, true);
                    return vec![var_decl(mods(&[]), t, &name, None)];
                }
                let init = self.expr(t, d);
                let fin = self.chance(0.15);
                self.declare(&name, t, false, !fin);
                vec![var_decl(mods(if fin { &["final"] } else { &[] }), t, &name, Some(init))]
            }
            2 => {
                let t = self.any_type();
                let targets = self.vars(t, false, true);
                let Some(v) = targets.choose(self.rng).cloned() else {
                    return self.stmt(0);
                };
                let target = self.var_ref(&v);
                let numeric = matches!(t, T::Int | T::Double) && !v.maybe_null;
                let op = if numeric && self.chance(0.4) {
                    if self.chance(0.5) { "+=" } else { "-=" }
                } else {
                    "="
                };
                let value = self.expr(t, d);
                vec![expr_stmt(Node::labeled(Kind::Assign, op, vec![target, value]))]
            }
            3 => {
                let targets = self.vars(T::Int, true, true);
                match targets.choose(self.rng).cloned() {
                    Some(v) => {
                        let target = self.var_ref(&v);
                        let op = if self.chance(0.5) { "++" } else { "--" };
                        vec![expr_stmt(Node::labeled(Kind::Update, op, vec![target]))]
                    }
                    None => self.stmt(0),
                }
            }
            4 => {
                let sigs = self.callable(None);
                if let Some(sig) = sigs.choose(self.rng).cloned() {
                    if self.chance(0.6) {
                        let mut c = self.method_call(&sig, 1);
                        if self.chance(0.4) {
                            c.children[0] = Node::leaf(Kind::This);
                        }
                        return vec![expr_stmt(c)];
                    }
                }
                let msg = self.expr(T::Str, 1);
                let c = if self.chance(0.5) {
                    call(Node::ident("Logger"), "log", vec![msg])
                } else {
                    call(Node::absent(), "log", vec![msg])
                };
                vec![expr_stmt(c)]
            }
            5 => {
                let strs = self.vars(T::Str, false, true);
                match strs.choose(self.rng).cloned() {
                    Some(v) => {
                        let target = self.var_ref(&v);
                        let fix = expr_stmt(Node::labeled(
                            Kind::Assign,
                            "=",
                            vec![target.clone(), Node::atom(Kind::StrLit, "fixed")],
                        ));
                        let cond = bin("==", target, Node::leaf(Kind::NullLit));
                        let mut body = vec![fix];
                        if self.chance(0.5) {
                            body.insert(0, expr_stmt(call(Node::absent(), "log", vec![Node::atom(Kind::StrLit, "null")])));
                        }
                        vec![Node::new(Kind::If, vec![cond, block(body), Node::absent()])]
                    }
                    None => self.stmt(0),
                }
            }
            6 | 7 => {
                let cond = self.expr(T::Bool, d);
                let n = self.rng.gen_range(1..3);
                let then = self.scoped_block(depth - 1, n);
                let els = match self.rng.gen_range(0..4) {
                    0 | 1 => Node::absent(),
                    2 => {
                        let n = self.rng.gen_range(1..3);
                        self.scoped_block(depth - 1, n)
                    }
                    _ => {
                        let mut inner = self.stmt_if(depth - 1);
                        inner.pop().unwrap()
                    }
                };
                vec![Node::new(Kind::If, vec![cond, then, els])]
            }
            8 => {
                let counter = self.fresh("w");
                let bound = self.rng.gen_range(1..6);
                let decl = var_decl(mods(&[]), T::Int, &counter, Some(int(0)));
                self.declare(&counter, T::Int, false, false);
                let mut cond = bin("<", Node::ident(&counter), int(bound));
                if self.chance(0.3) {
                    cond = bin("&&", cond, self.expr(T::Bool, 1));
                }
                self.loops += 1;
                let n = self.rng.gen_range(1..3);
                let mut body = self.scoped_block(depth - 1, n);
                self.loops -= 1;
                body.children.push(expr_stmt(Node::labeled(Kind::Update, "++", vec![Node::ident(&counter)])));
                vec![decl, Node::new(Kind::While, vec![cond, body])]
            }
            9 => {
                let i = self.fresh("i");
                let bound = self.rng.gen_range(0..6);
                let op = if self.chance(0.6) { "<" } else { "<=" };
                self.scopes.push(Vec::new());
                self.declare(&i, T::Int, false, false);
                let init = var_decl(mods(&[]), T::Int, &i, Some(int(0)));
                let cond = bin(op, Node::ident(&i), int(bound));
                let update = Node::labeled(Kind::Update, "++", vec![Node::ident(&i)]);
                self.loops += 1;
                let n = self.rng.gen_range(1..3);
                let body = self.scoped_block(depth - 1, n);
                self.loops -= 1;
                self.scopes.pop();
                vec![Node::new(Kind::For, vec![init, cond, update, body])]
            }
            10 => {
                let scrut = self.expr(T::Int, 1);
                let n = self.rng.gen_range(1..4);
                let mut labels: Vec<i64> = (0..6).collect();
                labels.shuffle(self.rng);
                let mut cases = Vec::new();
                self.scopes.push(Vec::new());
                for &label in labels.iter().take(n) {
                    let k = self.rng.gen_range(0..3);
                    self.scopes.push(Vec::new());
                    let mut body = Vec::new();
                    for _ in 0..k {
                        body.extend(self.stmt_simple());
                    }
                    self.scopes.pop();
                    if self.chance(0.8) {
                        body.push(Node::leaf(Kind::Break));
                    }
                    cases.push(Node::new(Kind::Case, vec![int(label), Node::new(Kind::CaseBody, body)]));
                }
                if self.chance(0.5) {
                    self.scopes.push(Vec::new());
                    let body = self.stmt_simple();
                    self.scopes.pop();
                    cases.push(Node::new(Kind::Case, vec![Node::leaf(Kind::Default), Node::new(Kind::CaseBody, body)]));
                }
                self.scopes.pop();
                vec![Node::new(Kind::Switch, vec![scrut, Node::new(Kind::Cases, cases)])]
            }
            11 => {
                let cond = self.expr(T::Bool, 1);
                let exit = if self.loops > 0 && self.chance(0.5) {
                    Node::leaf(Kind::Break)
                } else if self.ret.is_none() {
                    Node::new(Kind::Return, vec![Node::absent()])
                } else {
                    let t = self.ret.unwrap();
                    Node::new(Kind::Return, vec![self.expr(t, 1)])
                };
                vec![Node::new(Kind::If, vec![cond, block(vec![exit]), Node::absent()])]
            }
            12 => {
                let t = if self.chance(0.5) { T::Double } else { T::Int };
                let name = self.fresh("v");
                let init = if t == T::Double && self.chance(0.5) {
                    Node::new(Kind::Cast, vec![ty(T::Double), self.expr(T::Int, 1)])
                } else {
                    self.expr(t, d)
                };
                self.declare(&name, t, false, true);
                vec![var_decl(mods(&[]), t, &name, Some(init))]
            }
            _ => {
                let name = self.fresh("v");
                self.declare(&name, T::Str, true, true);
                vec![var_decl(mods(&[]), T::Str, &name, None)]
            }
        }
    }

    fn stmt_if(&mut self, depth: usize) -> Vec<Node> {
        let cond = self.expr(T::Bool, 2);
        let then = self.scoped_block(depth.saturating_sub(1), 1);
        let els = if self.chance(0.5) {
            self.scoped_block(depth.saturating_sub(1), 1)
        } else {
            Node::absent()
        };
        vec![Node::new(Kind::If, vec![cond, then, els])]
    }

    fn stmt_simple(&mut self) -> Vec<Node> {
        self.stmt(0)
    }

    fn method(&mut self, sig: &Sig, is_test: bool) -> Node {
        self.scopes = vec![Vec::new()];
        self.loops = 0;
        self.ret = sig.ret;
        let mut params = Vec::new();
        for &p in &sig.params {
            let name = self.fresh("p");
            self.declare(&name, p, false, true);
            params.push(Node::new(Kind::Param, vec![ty(p), Node::ident(&name)]));
        }
        let n = self.rng.gen_range(1..=self.cfg.max_stmts);
        let mut body = Vec::new();
        for _ in 0..n {
            let depth = self.rng.gen_range(0..=2);
            body.extend(self.stmt(depth));
        }
        if let Some(t) = sig.ret {
            let e = self.expr(t, self.cfg.max_depth);
            body.push(Node::new(Kind::Return, vec![e]));
        }
        let mut m = Vec::new();
        if !is_test {
            if self.chance(0.2) {
                m.push(Node::labeled(Kind::Annotation, "Override", vec![Node::new(Kind::Args, vec![])]));
            }
            if self.chance(0.5) {
                m.push(Node::atom(Kind::Modifier, if self.chance(0.5) { "public" } else { "private" }));
            }
            if self.chance(0.2) {
                m.push(Node::atom(Kind::Modifier, "synchronized"));
            }
        }
        let ret = sig.ret.map_or_else(|| Node::atom(Kind::Type, "void"), ty);
        Node::new(
            Kind::MethodDecl,
            vec![
                Node::new(Kind::Modifiers, m),
                ret,
                Node::ident(&sig.name),
                Node::new(Kind::Params, params),
                block(body),
            ],
        )
    }

    fn class(&mut self, name: &str) -> Node {
        self.fields.clear();
        self.methods.clear();
        let mut members = Vec::new();
        let nf = self.rng.gen_range(0..=self.cfg.max_fields);
        self.scopes = vec![Vec::new()];
        for _ in 0..nf {
            let t = self.any_type();
            let fname = self.fresh("f");
            let init = self.leaf(t);
            let m = if self.chance(0.3) { mods(&["private"]) } else { mods(&[]) };
            members.push(Node::new(Kind::FieldDecl, vec![m, ty(t), Node::ident(&fname), init]));
            self.fields.push(Var {
                name: fname,
                ty: t,
                maybe_null: false,
                mutable: true,
            });
        }
        let nm = self.rng.gen_range(1..=self.cfg.max_methods);
        for _ in 0..nm {
            let ret = if self.chance(0.3) { None } else { Some(self.any_type()) };
            let np = self.rng.gen_range(0..3);
            let params = (0..np).map(|_| self.any_type()).collect();
            let sig = Sig {
                name: self.fresh("m"),
                ret,
                params,
            };
            members.push(self.method(&sig, false));
            self.methods.push(sig);
        }
        let nt = self.rng.gen_range(1..=self.cfg.max_tests);
        for _ in 0..nt {
            let sig = Sig {
                name: self.fresh("test"),
                ret: Some(T::Bool),
                params: Vec::new(),
            };
            members.push(self.method(&sig, true));
        }
        Node::new(
            Kind::ClassDecl,
            vec![mods(&[]), Node::ident(name), Node::new(Kind::Members, members)],
        )
    }
}

/// Generate a program from `rng`.
pub fn program_with<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Node {
    let mut g = Gen {
        rng,
        cfg: cfg.clone(),
        fields: Vec::new(),
        methods: Vec::new(),
        scopes: Vec::new(),
        fresh: 0,
        loops: 0,
        ret: None,
    };
    let n = g.rng.gen_range(1..=cfg.max_classes.max(1));
    let classes = (0..n).map(|i| g.class(&format!("C{i}"))).collect();
    Node::new(Kind::CompilationUnit, classes)
}

/// Generate a program from a seed with the default configuration.
pub fn program(seed: u64) -> Node {
    program_with(&mut ChaCha8Rng::seed_from_u64(seed), &GenConfig::default())
}

/// A before/after pair made by applying `pattern` at a random site of a random
/// program: hosts are drawn until one has a site outside test methods.
pub fn seeded_pair<R: Rng>(
    rng: &mut R,
    cfg: &GenConfig,
    pattern: &crate::learn::EditPattern,
) -> Option<(Node, Node)> {
    for _ in 0..200 {
        let host = program_with(rng, cfg);
        let sites = crate::mutagen::find_sites(&host, pattern, None, &crate::mutagen::default_arid());
        if sites.is_empty() {
            continue;
        }
        let site = &sites[rng.gen_range(0..sites.len())];
        let after = crate::mutagen::apply(&host, pattern, site).ok()?;
        return Some((host, after));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::{list_tests, parse, print, syntax_check};

    #[test]
    fn programs_are_valid_and_round_trip() {
        for seed in 0..200 {
            let p = program(seed);
            p.validate_shape().unwrap();
            let text = print(&p).unwrap();
            if let Err(e) = syntax_check(&text) {
                panic!("seed {seed}: {e}\n{text}");
            }
            let mut back = parse(&text).unwrap();
            back.clear_spans();
            assert_eq!(back, p, "seed {seed}\n{text}");
            assert!(!list_tests(&p).is_empty());
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(program(7), program(7));
        assert_ne!(program(7), program(8));
    }
}

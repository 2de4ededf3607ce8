//! Light static checks run after parsing.
//!
//! Only boolean contexts are typed (conditions of `if`, `while`, `for` and
//! `?:`); everything else is checked dynamically by the interpreter.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::SyntaxError;
use crate::tree::{Kind, Node};

/// Receivers usable without a declaration.
pub const BUILTIN_RECEIVERS: &[&str] = &["Logger", "Math"];
/// Functions callable without a receiver.
pub const BUILTIN_FUNCTIONS: &[&str] = &["log", "__mut", "__mut_visit"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Int,
    Double,
    Bool,
    Str,
    Void,
    Null,
    Class(String),
    Unknown,
}

impl Ty {
    pub fn from_name(name: &str) -> Ty {
        match name {
            "int" => Ty::Int,
            "double" => Ty::Double,
            "boolean" => Ty::Bool,
            "String" => Ty::Str,
            "void" => Ty::Void,
            other => Ty::Class(other.to_string()),
        }
    }
}

#[derive(Default)]
pub(crate) struct ClassInfo {
    pub fields: BTreeMap<String, Ty>,
    pub methods: BTreeMap<String, (Ty, usize)>,
}

pub(crate) fn class_table(unit: &Node) -> BTreeMap<String, ClassInfo> {
    let mut out = BTreeMap::new();
    for class in &unit.children {
        let mut info = ClassInfo::default();
        for m in &class.children[2].children {
            let name = m.children[2].label_str().to_string();
            let ty = Ty::from_name(m.children[1].label_str());
            match m.kind {
                Kind::FieldDecl => {
                    info.fields.insert(name, ty);
                }
                Kind::MethodDecl => {
                    info.methods.insert(name, (ty, m.children[3].children.len()));
                }
                _ => {}
            }
        }
        out.insert(class.children[1].label_str().to_string(), info);
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Only boolean-condition typing; unknown names are tolerated.
    Conditions,
    /// All static rules.
    Full,
}

struct Checker<'a> {
    src: &'a str,
    mode: Mode,
    classes: BTreeMap<String, ClassInfo>,
    class: String,
    ret: Ty,
    scopes: Vec<BTreeMap<String, Ty>>,
    loops: usize,
    switches: usize,
}

type CResult<T> = Result<T, SyntaxError>;

pub(crate) fn check(unit: &Node, src: &str, mode: Mode) -> CResult<()> {
    let mut c = Checker {
        src,
        mode,
        classes: class_table(unit),
        class: String::new(),
        ret: Ty::Void,
        scopes: Vec::new(),
        loops: 0,
        switches: 0,
    };
    for class in &unit.children {
        c.class = class.children[1].label_str().to_string();
        let mut seen = BTreeMap::new();
        for m in &class.children[2].children {
            let name = m.children[2].label_str();
            if c.mode == Mode::Full {
                if seen.insert((m.kind, name), ()).is_some() {
                    return Err(c.err(m, &format!("a unique member name (duplicate `{name}`)")));
                }
                c.check_type(&m.children[1], m.kind == Kind::MethodDecl)?;
            }
            c.modifiers(&m.children[0])?;
            match m.kind {
                Kind::FieldDecl => {
                    c.scopes.clear();
                    c.scopes.push(BTreeMap::new());
                    if m.children[3].kind != Kind::Absent {
                        c.expr(&m.children[3])?;
                    }
                }
                Kind::MethodDecl => c.method(m)?,
                _ => {}
            }
        }
    }
    Ok(())
}

impl<'a> Checker<'a> {
    fn err(&self, at: &Node, expected: &str) -> SyntaxError {
        SyntaxError::at(self.src, at.span.map_or(0, |s| s.start), expected)
    }

    fn full(&self) -> bool {
        self.mode == Mode::Full
    }

    fn check_type(&self, ty: &Node, allow_void: bool) -> CResult<()> {
        let name = ty.label_str();
        let ok = match name {
            "int" | "double" | "boolean" | "String" | "Object" => true,
            "void" => allow_void,
            other => self.classes.contains_key(other),
        };
        if ok {
            Ok(())
        } else {
            Err(self.err(ty, &format!("a known type (found `{name}`)")))
        }
    }

    fn modifiers(&mut self, mods: &Node) -> CResult<()> {
        for m in &mods.children {
            if m.kind == Kind::Annotation {
                for a in &m.children[0].children {
                    self.expr(a)?;
                }
            }
        }
        Ok(())
    }

    fn lookup(&self, name: &str) -> Option<Ty> {
        for scope in self.scopes.iter().rev() {
            if let Some(t) = scope.get(name) {
                return Some(t.clone());
            }
        }
        self.classes.get(&self.class)?.fields.get(name).cloned()
    }

    fn declare(&mut self, name_node: &Node, ty: Ty) -> CResult<()> {
        let name = name_node.label_str();
        if self.full() && self.scopes.iter().any(|s| s.contains_key(name)) {
            return Err(self.err(name_node, &format!("a fresh local name (`{name}` already declared)")));
        }
        self.scopes
            .last_mut()
            .expect("scope")
            .insert(name.to_string(), ty);
        Ok(())
    }

    fn method(&mut self, m: &Node) -> CResult<()> {
        self.ret = Ty::from_name(m.children[1].label_str());
        self.scopes.clear();
        self.scopes.push(BTreeMap::new());
        self.loops = 0;
        self.switches = 0;
        for p in &m.children[3].children {
            if self.full() {
                self.check_type(&p.children[0], false)?;
            }
            self.declare(&p.children[1], Ty::from_name(p.children[0].label_str()))?;
        }
        self.block(&m.children[4])
    }

    fn block(&mut self, b: &Node) -> CResult<()> {
        self.scopes.push(BTreeMap::new());
        let r = b.children.iter().try_for_each(|s| self.stmt(s));
        self.scopes.pop();
        r
    }

    fn condition(&mut self, e: &Node) -> CResult<()> {
        match self.expr(e)? {
            Ty::Bool | Ty::Unknown => Ok(()),
            _ => Err(self.err(e, "boolean condition")),
        }
    }

    fn var_decl(&mut self, d: &Node) -> CResult<()> {
        self.modifiers(&d.children[0])?;
        if self.full() {
            self.check_type(&d.children[1], false)?;
        }
        if d.children[3].kind != Kind::Absent {
            self.expr(&d.children[3])?;
        }
        self.declare(&d.children[2], Ty::from_name(d.children[1].label_str()))
    }

    fn stmt(&mut self, s: &Node) -> CResult<()> {
        match s.kind {
            Kind::Block => self.block(s),
            Kind::Empty => Ok(()),
            Kind::VarDecl => self.var_decl(s),
            Kind::ExprStmt => self.expr(&s.children[0]).map(drop),
            Kind::If => {
                self.condition(&s.children[0])?;
                self.scoped_stmt(&s.children[1])?;
                if s.children[2].kind != Kind::Absent {
                    self.scoped_stmt(&s.children[2])?;
                }
                Ok(())
            }
            Kind::While => {
                self.condition(&s.children[0])?;
                self.loops += 1;
                let r = self.scoped_stmt(&s.children[1]);
                self.loops -= 1;
                r
            }
            Kind::For => {
                self.scopes.push(BTreeMap::new());
                let r = (|| {
                    match s.children[0].kind {
                        Kind::Absent => {}
                        Kind::VarDecl => self.var_decl(&s.children[0])?,
                        _ => self.stmt(&s.children[0])?,
                    }
                    if s.children[1].kind != Kind::Absent {
                        self.condition(&s.children[1])?;
                    }
                    if s.children[2].kind != Kind::Absent {
                        self.expr(&s.children[2])?;
                    }
                    self.loops += 1;
                    let r = self.scoped_stmt(&s.children[3]);
                    self.loops -= 1;
                    r
                })();
                self.scopes.pop();
                r
            }
            Kind::Switch => {
                self.expr(&s.children[0])?;
                self.switches += 1;
                self.scopes.push(BTreeMap::new());
                let mut labels: Vec<(Kind, &str)> = Vec::new();
                let r = s.children[1].children.iter().try_for_each(|c| {
                    let label = &c.children[0];
                    if self.full() {
                        if !matches!(label.kind, Kind::Default | Kind::IntLit | Kind::StrLit) {
                            return Err(self.err(label, "a constant case label"));
                        }
                        let key = (label.kind, label.label_str());
                        if labels.contains(&key) {
                            return Err(self.err(label, "a distinct case label"));
                        }
                        labels.push(key);
                    }
                    if label.kind != Kind::Default {
                        self.expr(label)?;
                    }
                    c.children[1].children.iter().try_for_each(|st| self.stmt(st))
                });
                self.scopes.pop();
                self.switches -= 1;
                r
            }
            Kind::Return => {
                let has_value = s.children[0].kind != Kind::Absent;
                if has_value {
                    self.expr(&s.children[0])?;
                }
                if self.full() {
                    let void = self.ret == Ty::Void;
                    if void && has_value {
                        return Err(self.err(s, "`return;` in a void method"));
                    }
                    if !void && !has_value {
                        return Err(self.err(s, "a return value"));
                    }
                }
                Ok(())
            }
            Kind::Break => {
                if self.full() && self.loops == 0 && self.switches == 0 {
                    return Err(self.err(s, "`break` inside a loop or switch"));
                }
                Ok(())
            }
            _ => Err(self.err(s, "statement")),
        }
    }

    fn scoped_stmt(&mut self, s: &Node) -> CResult<()> {
        self.scopes.push(BTreeMap::new());
        let r = self.stmt(s);
        self.scopes.pop();
        r
    }

    fn expr(&mut self, e: &Node) -> CResult<Ty> {
        Ok(match e.kind {
            Kind::IntLit => Ty::Int,
            Kind::DoubleLit => Ty::Double,
            Kind::BoolLit => Ty::Bool,
            Kind::StrLit => Ty::Str,
            Kind::NullLit => Ty::Null,
            Kind::This => Ty::Class(self.class.clone()),
            Kind::Ident => {
                let name = e.label_str();
                match self.lookup(name) {
                    Some(t) => t,
                    None if BUILTIN_RECEIVERS.contains(&name) => Ty::Unknown,
                    None if self.full() => {
                        return Err(self.err(e, &format!("a declared name (found `{name}`)")))
                    }
                    None => Ty::Unknown,
                }
            }
            Kind::Binary => {
                let l = self.expr(&e.children[0])?;
                let r = self.expr(&e.children[1])?;
                match e.label_str() {
                    "&&" | "||" | "==" | "!=" | "<" | "<=" | ">" | ">=" => Ty::Bool,
                    "+" if l == Ty::Str || r == Ty::Str => Ty::Str,
                    _ => match (l, r) {
                        (Ty::Int, Ty::Int) => Ty::Int,
                        (Ty::Int | Ty::Double, Ty::Int | Ty::Double) => Ty::Double,
                        _ => Ty::Unknown,
                    },
                }
            }
            Kind::Unary => {
                let t = self.expr(&e.children[0])?;
                if e.label_str() == "!" {
                    Ty::Bool
                } else {
                    t
                }
            }
            Kind::Update => self.expr(&e.children[0])?,
            Kind::Assign => {
                let t = self.expr(&e.children[0])?;
                self.expr(&e.children[1])?;
                t
            }
            Kind::Ternary => {
                self.condition(&e.children[0])?;
                let a = self.expr(&e.children[1])?;
                let b = self.expr(&e.children[2])?;
                if a == b {
                    a
                } else {
                    Ty::Unknown
                }
            }
            Kind::Cast => {
                if self.full() {
                    self.check_type(&e.children[0], false)?;
                }
                self.expr(&e.children[1])?;
                Ty::from_name(e.children[0].label_str())
            }
            Kind::FieldAccess => match self.expr(&e.children[0])? {
                Ty::Class(c) => self
                    .classes
                    .get(&c)
                    .and_then(|i| i.fields.get(e.children[1].label_str()).cloned())
                    .unwrap_or(Ty::Unknown),
                _ => Ty::Unknown,
            },
            Kind::New => {
                if self.full() {
                    let name = e.children[0].label_str();
                    if !self.classes.contains_key(name) {
                        return Err(self.err(&e.children[0], &format!("a declared class (found `{name}`)")));
                    }
                }
                for a in &e.children[1].children {
                    self.expr(a)?;
                }
                Ty::from_name(e.children[0].label_str())
            }
            Kind::Call => self.call(e)?,
            _ => return Err(self.err(e, "expression")),
        })
    }

    fn call(&mut self, e: &Node) -> CResult<Ty> {
        let name = e.children[1].label_str();
        let args = &e.children[2].children;
        let mut arg_tys = Vec::with_capacity(args.len());
        for a in args {
            arg_tys.push(self.expr(a)?);
        }
        if e.children[0].kind == Kind::Absent {
            match name {
                "__mut" => {
                    if self.full() && (args.len() != 2 || args[0].kind != Kind::IntLit) {
                        return Err(self.err(e, "`__mut(<int id>, <expr>)`"));
                    }
                    return Ok(arg_tys.pop().unwrap_or(Ty::Unknown));
                }
                "__mut_visit" => {
                    if self.full() && (args.len() != 1 || args[0].kind != Kind::IntLit) {
                        return Err(self.err(e, "`__mut_visit(<int id>)`"));
                    }
                    return Ok(Ty::Void);
                }
                "log" => return Ok(Ty::Void),
                _ => {}
            }
            let found = self
                .classes
                .get(&self.class)
                .and_then(|c| c.methods.get(name).cloned());
            return match found {
                Some((ty, arity)) => {
                    if self.full() && arity != args.len() {
                        return Err(self.err(e, &format!("{arity} argument(s) to `{name}`")));
                    }
                    Ok(ty)
                }
                None if self.full() => Err(self.err(e, &format!("a declared method (found `{name}`)"))),
                None => Ok(Ty::Unknown),
            };
        }
        let recv = self.expr(&e.children[0])?;
        Ok(match recv {
            Ty::Str => match name {
                "length" => Ty::Int,
                "equals" | "isEmpty" => Ty::Bool,
                "toString" | "concat" => Ty::Str,
                _ => Ty::Unknown,
            },
            Ty::Class(c) => self
                .classes
                .get(&c)
                .and_then(|i| i.methods.get(name).map(|m| m.0.clone()))
                .unwrap_or(match name {
                    "toString" => Ty::Str,
                    "equals" => Ty::Bool,
                    _ => Ty::Unknown,
                }),
            _ => Ty::Unknown,
        })
    }
}

//! Deterministic tree-walking interpreter for MiniJ.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::tree::{Kind, Node};

pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;
const MAX_DEPTH: usize = 100;

/// Receives one call per executed instrumentation site.
pub trait VisitSink {
    fn visit(&mut self, id: u64);
}

impl<F: FnMut(u64)> VisitSink for F {
    fn visit(&mut self, id: u64) {
        self(id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ErrorKind {
    NullDereference,
    DivisionByZero,
    Timeout,
    TypeError,
    UnknownName,
    StackOverflow,
}

impl ErrorKind {
    pub fn name(self) -> &'static str {
        match self {
            ErrorKind::NullDereference => "null-dereference",
            ErrorKind::DivisionByZero => "div-by-zero",
            ErrorKind::Timeout => "timeout",
            ErrorKind::TypeError => "type-error",
            ErrorKind::UnknownName => "unknown-name",
            ErrorKind::StackOverflow => "stack-overflow",
        }
    }

    pub fn from_name(s: &str) -> Option<ErrorKind> {
        [
            ErrorKind::NullDereference,
            ErrorKind::DivisionByZero,
            ErrorKind::Timeout,
            ErrorKind::TypeError,
            ErrorKind::UnknownName,
            ErrorKind::StackOverflow,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuntimeError {
    pub kind: ErrorKind,
    pub message: String,
}

fn fail<T>(kind: ErrorKind, message: impl Into<String>) -> Result<T, RuntimeError> {
    Err(RuntimeError {
        kind,
        message: message.into(),
    })
}

#[derive(Debug)]
pub struct Object {
    pub class: String,
    pub fields: BTreeMap<String, Value>,
}

#[derive(Clone, Debug)]
pub enum Value {
    Int(i64),
    Double(f64),
    Bool(bool),
    Str(Rc<str>),
    Null,
    Object(Rc<RefCell<Object>>),
}

impl PartialEq for Value {
    fn eq(&self, other: &Value) -> bool {
        match (self, other) {
            (Value::Int(a), Value::Int(b)) => a == b,
            (Value::Int(a), Value::Double(b)) | (Value::Double(b), Value::Int(a)) => *a as f64 == *b,
            (Value::Double(a), Value::Double(b)) => a == b,
            (Value::Bool(a), Value::Bool(b)) => a == b,
            (Value::Str(a), Value::Str(b)) => a == b,
            (Value::Null, Value::Null) => true,
            (Value::Object(a), Value::Object(b)) => Rc::ptr_eq(a, b),
            _ => false,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Double(d) => write!(f, "{d:?}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Str(s) => f.write_str(s),
            Value::Null => f.write_str("null"),
            Value::Object(o) => write!(f, "{}@", o.borrow().class),
        }
    }
}

fn default_for(ty: &str) -> Value {
    match ty {
        "int" => Value::Int(0),
        "double" => Value::Double(0.0),
        "boolean" => Value::Bool(false),
        _ => Value::Null,
    }
}

/// Convert `v` for storage in a slot declared as `ty`.
fn coerce(ty: &str, v: Value) -> Result<Value, RuntimeError> {
    let ok = match (ty, &v) {
        ("int", Value::Int(_)) | ("double", Value::Double(_)) | ("boolean", Value::Bool(_)) => true,
        ("double", Value::Int(i)) => return Ok(Value::Double(*i as f64)),
        ("String", Value::Str(_) | Value::Null) => true,
        ("int" | "double" | "boolean" | "String", _) => false,
        ("Object", _) => true,
        (_, Value::Null) => true,
        (class, Value::Object(o)) => o.borrow().class == class,
        _ => false,
    };
    if ok {
        Ok(v)
    } else {
        fail(ErrorKind::TypeError, format!("cannot store {v} in {ty}"))
    }
}

struct ClassDef<'p> {
    fields: Vec<&'p Node>,
    methods: BTreeMap<&'p str, &'p Node>,
}

enum Flow {
    Normal,
    Break,
    Return(Value),
}

struct Frame {
    this: Option<Rc<RefCell<Object>>>,
    class: String,
    scopes: Vec<Vec<(String, String, Value)>>,
}

pub struct Interpreter<'p, 's> {
    classes: BTreeMap<&'p str, ClassDef<'p>>,
    sink: &'s mut dyn VisitSink,
    pub steps: u64,
    pub budget: u64,
    pub visits: u64,
    frames: Vec<Frame>,
}

type R<T> = Result<T, RuntimeError>;

impl<'p, 's> Interpreter<'p, 's> {
    pub fn new(program: &'p Node, sink: &'s mut dyn VisitSink) -> Self {
        let mut classes = BTreeMap::new();
        for c in &program.children {
            let mut def = ClassDef {
                fields: Vec::new(),
                methods: BTreeMap::new(),
            };
            for m in &c.children[2].children {
                match m.kind {
                    Kind::FieldDecl => def.fields.push(m),
                    Kind::MethodDecl => {
                        def.methods.insert(m.children[2].label_str(), m);
                    }
                    _ => {}
                }
            }
            classes.insert(c.children[1].label_str(), def);
        }
        Interpreter {
            classes,
            sink,
            steps: 0,
            budget: DEFAULT_STEP_BUDGET,
            visits: 0,
            frames: Vec::new(),
        }
    }

    fn tick(&mut self) -> R<()> {
        self.steps += 1;
        if self.steps > self.budget {
            return fail(ErrorKind::Timeout, "step budget exhausted");
        }
        Ok(())
    }

    fn frame(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("frame")
    }

    /// Create an instance of `class`, binding `args` to fields in declaration order.
    pub fn instantiate(&mut self, class: &str, args: Vec<Value>) -> R<Value> {
        let Some(def) = self.classes.get(class) else {
            return fail(ErrorKind::UnknownName, format!("class {class}"));
        };
        let fields = def.fields.clone();
        if !args.is_empty() && args.len() != fields.len() {
            return fail(
                ErrorKind::TypeError,
                format!("{class} takes 0 or {} arguments", fields.len()),
            );
        }
        let obj = Rc::new(RefCell::new(Object {
            class: class.to_string(),
            fields: BTreeMap::new(),
        }));
        for f in &fields {
            obj.borrow_mut()
                .fields
                .insert(f.children[2].label_str().to_string(), default_for(f.children[1].label_str()));
        }
        self.frames.push(Frame {
            this: Some(obj.clone()),
            class: class.to_string(),
            scopes: alloc::vec![Vec::new()],
        });
        let r = (|| {
            for f in &fields {
                if f.children[3].kind != Kind::Absent {
                    let v = self.eval(&f.children[3])?;
                    let v = coerce(f.children[1].label_str(), v)?;
                    obj.borrow_mut()
                        .fields
                        .insert(f.children[2].label_str().to_string(), v);
                }
            }
            Ok(())
        })();
        self.frames.pop();
        r?;
        for (f, a) in fields.iter().zip(args) {
            let v = coerce(f.children[1].label_str(), a)?;
            obj.borrow_mut()
                .fields
                .insert(f.children[2].label_str().to_string(), v);
        }
        Ok(Value::Object(obj))
    }

    /// Invoke `method` on an object (or with no receiver for a bare class call).
    pub fn invoke(&mut self, class: &str, this: Option<Rc<RefCell<Object>>>, method: &str, args: Vec<Value>) -> R<Value> {
        let Some(m) = self.classes.get(class).and_then(|c| c.methods.get(method)).copied() else {
            return fail(ErrorKind::UnknownName, format!("method {class}.{method}"));
        };
        let params = &m.children[3].children;
        if params.len() != args.len() {
            return fail(ErrorKind::TypeError, format!("{method} takes {} arguments", params.len()));
        }
        if self.frames.len() >= MAX_DEPTH {
            return fail(ErrorKind::StackOverflow, "call depth exceeded");
        }
        let mut scope = Vec::with_capacity(params.len());
        for (p, a) in params.iter().zip(args) {
            let ty = p.children[0].label_str();
            scope.push((p.children[1].label_str().to_string(), ty.to_string(), coerce(ty, a)?));
        }
        self.frames.push(Frame {
            this,
            class: class.to_string(),
            scopes: alloc::vec![scope],
        });
        let r = self.exec(&m.children[4]);
        self.frames.pop();
        let ret = m.children[1].label_str();
        match r? {
            Flow::Return(v) if ret != "void" => coerce(ret, v),
            Flow::Return(_) | Flow::Normal | Flow::Break if ret == "void" => Ok(Value::Null),
            _ => fail(ErrorKind::TypeError, format!("{method} ended without a value")),
        }
    }

    fn declare(&mut self, name: &str, ty: &str, v: Value) -> R<()> {
        let v = coerce(ty, v)?;
        self.frame()
            .scopes
            .last_mut()
            .expect("scope")
            .push((name.to_string(), ty.to_string(), v));
        Ok(())
    }

    fn exec_scoped(&mut self, s: &Node) -> R<Flow> {
        self.frame().scopes.push(Vec::new());
        let r = self.exec(s);
        self.frame().scopes.pop();
        r
    }

    fn exec(&mut self, s: &Node) -> R<Flow> {
        self.tick()?;
        match s.kind {
            Kind::Block => {
                self.frame().scopes.push(Vec::new());
                let r = self.exec_all(&s.children);
                self.frame().scopes.pop();
                r
            }
            Kind::Empty => Ok(Flow::Normal),
            Kind::VarDecl => {
                let ty = s.children[1].label_str();
                let v = if s.children[3].kind == Kind::Absent {
                    default_for(ty)
                } else {
                    self.eval(&s.children[3])?
                };
                self.declare(s.children[2].label_str(), ty, v)?;
                Ok(Flow::Normal)
            }
            Kind::ExprStmt => {
                self.eval(&s.children[0])?;
                Ok(Flow::Normal)
            }
            Kind::If => {
                if self.cond(&s.children[0])? {
                    self.exec_scoped(&s.children[1])
                } else if s.children[2].kind != Kind::Absent {
                    self.exec_scoped(&s.children[2])
                } else {
                    Ok(Flow::Normal)
                }
            }
            Kind::While => {
                while self.cond(&s.children[0])? {
                    match self.exec_scoped(&s.children[1])? {
                        Flow::Break => break,
                        r @ Flow::Return(_) => return Ok(r),
                        Flow::Normal => {}
                    }
                }
                Ok(Flow::Normal)
            }
            Kind::For => {
                self.frame().scopes.push(Vec::new());
                let r = self.exec_for(s);
                self.frame().scopes.pop();
                r
            }
            Kind::Switch => {
                let v = self.eval(&s.children[0])?;
                let cases = &s.children[1].children;
                let mut start = None;
                for (i, c) in cases.iter().enumerate() {
                    if c.children[0].kind != Kind::Default && self.eval(&c.children[0])? == v {
                        start = Some(i);
                        break;
                    }
                }
                let start = start.or_else(|| cases.iter().position(|c| c.children[0].kind == Kind::Default));
                let Some(start) = start else {
                    return Ok(Flow::Normal);
                };
                self.frame().scopes.push(Vec::new());
                let mut out = Ok(Flow::Normal);
                'cases: for c in &cases[start..] {
                    for st in &c.children[1].children {
                        match self.exec(st) {
                            Ok(Flow::Normal) => {}
                            Ok(Flow::Break) => break 'cases,
                            other => {
                                out = other;
                                break 'cases;
                            }
                        }
                    }
                }
                self.frame().scopes.pop();
                out
            }
            Kind::Return => {
                let v = if s.children[0].kind == Kind::Absent {
                    Value::Null
                } else {
                    self.eval(&s.children[0])?
                };
                Ok(Flow::Return(v))
            }
            Kind::Break => Ok(Flow::Break),
            _ => fail(ErrorKind::TypeError, format!("not a statement: {}", s.kind.name())),
        }
    }

    fn exec_all(&mut self, stmts: &[Node]) -> R<Flow> {
        for st in stmts {
            match self.exec(st)? {
                Flow::Normal => {}
                other => return Ok(other),
            }
        }
        Ok(Flow::Normal)
    }

    fn exec_for(&mut self, s: &Node) -> R<Flow> {
        if s.children[0].kind != Kind::Absent {
            self.exec(&s.children[0])?;
        }
        loop {
            if s.children[1].kind != Kind::Absent && !self.cond(&s.children[1])? {
                break;
            }
            match self.exec_scoped(&s.children[3])? {
                Flow::Break => break,
                r @ Flow::Return(_) => return Ok(r),
                Flow::Normal => {}
            }
            if s.children[2].kind != Kind::Absent {
                self.eval(&s.children[2])?;
            }
        }
        Ok(Flow::Normal)
    }

    fn cond(&mut self, e: &Node) -> R<bool> {
        match self.eval(e)? {
            Value::Bool(b) => Ok(b),
            v => fail(ErrorKind::TypeError, format!("condition is {v}, not boolean")),
        }
    }

    fn read_var(&mut self, name: &str) -> R<Value> {
        let frame = self.frame();
        for scope in frame.scopes.iter().rev() {
            if let Some((_, _, v)) = scope.iter().rev().find(|(n, _, _)| n == name) {
                return Ok(v.clone());
            }
        }
        if let Some(this) = &frame.this {
            if let Some(v) = this.borrow().fields.get(name) {
                return Ok(v.clone());
            }
        }
        fail(ErrorKind::UnknownName, format!("variable {name}"))
    }

    fn field_type(&self, class: &str, field: &str) -> Option<String> {
        self.classes.get(class)?.fields.iter().find_map(|f| {
            (f.children[2].label_str() == field).then(|| f.children[1].label_str().to_string())
        })
    }

    fn write_var(&mut self, name: &str, v: Value) -> R<()> {
        let frame = self.frames.last_mut().expect("frame");
        for scope in frame.scopes.iter_mut().rev() {
            if let Some(slot) = scope.iter_mut().rev().find(|(n, _, _)| n == name) {
                slot.2 = coerce(&slot.1, v)?;
                return Ok(());
            }
        }
        if let Some(this) = frame.this.clone() {
            let class = this.borrow().class.clone();
            if let Some(ty) = self.field_type(&class, name) {
                let v = coerce(&ty, v)?;
                this.borrow_mut().fields.insert(name.to_string(), v);
                return Ok(());
            }
        }
        fail(ErrorKind::UnknownName, format!("variable {name}"))
    }

    fn object(&mut self, recv: &Node) -> R<Rc<RefCell<Object>>> {
        match self.eval(recv)? {
            Value::Object(o) => Ok(o),
            Value::Null => fail(ErrorKind::NullDereference, "field access on null"),
            v => fail(ErrorKind::TypeError, format!("{v} has no fields")),
        }
    }

    fn read_place(&mut self, target: &Node) -> R<Value> {
        match target.kind {
            Kind::Ident => self.read_var(target.label_str()),
            Kind::FieldAccess => {
                let o = self.object(&target.children[0])?;
                let name = target.children[1].label_str();
                let v = o.borrow().fields.get(name).cloned();
                v.map_or_else(|| fail(ErrorKind::UnknownName, format!("field {name}")), Ok)
            }
            _ => fail(ErrorKind::TypeError, "not assignable"),
        }
    }

    fn write_place(&mut self, target: &Node, v: Value) -> R<()> {
        match target.kind {
            Kind::Ident => self.write_var(target.label_str(), v),
            Kind::FieldAccess => {
                let o = self.object(&target.children[0])?;
                let name = target.children[1].label_str();
                let class = o.borrow().class.clone();
                let Some(ty) = self.field_type(&class, name) else {
                    return fail(ErrorKind::UnknownName, format!("field {name}"));
                };
                let v = coerce(&ty, v)?;
                o.borrow_mut().fields.insert(name.to_string(), v);
                Ok(())
            }
            _ => fail(ErrorKind::TypeError, "not assignable"),
        }
    }

    /// Type of the slot behind `target`, used for compound-assignment narrowing.
    fn place_is_int(&mut self, target: &Node) -> R<bool> {
        Ok(matches!(self.read_place(target)?, Value::Int(_)))
    }

    pub fn eval(&mut self, e: &Node) -> R<Value> {
        self.tick()?;
        Ok(match e.kind {
            Kind::IntLit => Value::Int(parse_int(e.label_str())?),
            Kind::DoubleLit => Value::Double(e.label_str().parse().map_err(|_| RuntimeError {
                kind: ErrorKind::TypeError,
                message: format!("bad double {}", e.label_str()),
            })?),
            Kind::BoolLit => Value::Bool(e.label_str() == "true"),
            Kind::StrLit => Value::Str(Rc::from(e.label_str())),
            Kind::NullLit => Value::Null,
            Kind::This => match &self.frame().this {
                Some(o) => Value::Object(o.clone()),
                None => Value::Null,
            },
            Kind::Ident => self.read_var(e.label_str())?,
            Kind::Binary => self.binary(e)?,
            Kind::Unary => match (e.label_str(), self.eval(&e.children[0])?) {
                ("!", Value::Bool(b)) => Value::Bool(!b),
                ("-", Value::Int(i)) => Value::Int(i.wrapping_neg()),
                ("-", Value::Double(d)) => Value::Double(-d),
                (op, v) => return fail(ErrorKind::TypeError, format!("{op}{v}")),
            },
            Kind::Update => {
                let old = self.read_place(&e.children[0])?;
                let delta = if e.label_str() == "++" { 1 } else { -1 };
                let new = match old {
                    Value::Int(i) => Value::Int(i.wrapping_add(delta)),
                    Value::Double(d) => Value::Double(d + delta as f64),
                    ref v => return fail(ErrorKind::TypeError, format!("{v}{}", e.label_str())),
                };
                self.write_place(&e.children[0], new)?;
                old
            }
            Kind::Assign => {
                let target = &e.children[0];
                let v = match e.label_str() {
                    "=" => self.eval(&e.children[1])?,
                    op => {
                        let int_slot = self.place_is_int(target)?;
                        let cur = self.read_place(target)?;
                        let rhs = self.eval(&e.children[1])?;
                        let v = arith(&op[..1], cur, rhs)?;
                        match v {
                            Value::Double(d) if int_slot => Value::Int(d as i64),
                            v => v,
                        }
                    }
                };
                self.write_place(target, v.clone())?;
                v
            }
            Kind::Ternary => {
                if self.cond(&e.children[0])? {
                    self.eval(&e.children[1])?
                } else {
                    self.eval(&e.children[2])?
                }
            }
            Kind::FieldAccess => self.read_place(e)?,
            Kind::Cast => {
                let v = self.eval(&e.children[1])?;
                match (e.children[0].label_str(), v) {
                    ("int", Value::Double(d)) => Value::Int(d as i64),
                    (ty, v) => coerce(ty, v)?,
                }
            }
            Kind::New => {
                let args = self.eval_args(&e.children[1])?;
                self.instantiate(e.children[0].label_str(), args)?
            }
            Kind::Call => self.call(e)?,
            k => return fail(ErrorKind::TypeError, format!("not an expression: {}", k.name())),
        })
    }

    fn eval_args(&mut self, args: &Node) -> R<Vec<Value>> {
        args.children.iter().map(|a| self.eval(a)).collect()
    }

    fn binary(&mut self, e: &Node) -> R<Value> {
        let op = e.label_str();
        if op == "&&" || op == "||" {
            let l = self.cond(&e.children[0])?;
            if (op == "&&") != l {
                return Ok(Value::Bool(l));
            }
            return Ok(Value::Bool(self.cond(&e.children[1])?));
        }
        let l = self.eval(&e.children[0])?;
        let r = self.eval(&e.children[1])?;
        match op {
            "==" => Ok(Value::Bool(l == r)),
            "!=" => Ok(Value::Bool(l != r)),
            "<" | "<=" | ">" | ">=" => {
                let (a, b) = match (&l, &r) {
                    (Value::Int(a), Value::Int(b)) => {
                        let o = a.cmp(b);
                        return Ok(Value::Bool(match op {
                            "<" => o.is_lt(),
                            "<=" => o.is_le(),
                            ">" => o.is_gt(),
                            _ => o.is_ge(),
                        }));
                    }
                    _ => (num(&l)?, num(&r)?),
                };
                Ok(Value::Bool(match op {
                    "<" => a < b,
                    "<=" => a <= b,
                    ">" => a > b,
                    _ => a >= b,
                }))
            }
            _ => arith(op, l, r),
        }
    }

    fn call(&mut self, e: &Node) -> R<Value> {
        let name = e.children[1].label_str();
        let recv = &e.children[0];
        if recv.kind == Kind::Absent {
            match name {
                "__mut" | "__mut_visit" => {
                    let id = match &e.children[2].children[0] {
                        n if n.kind == Kind::IntLit => parse_int(n.label_str())? as u64,
                        _ => return fail(ErrorKind::TypeError, "instrumentation id"),
                    };
                    self.visits += 1;
                    self.sink.visit(id);
                    return match e.children[2].children.get(1) {
                        Some(inner) => self.eval(inner),
                        None => Ok(Value::Null),
                    };
                }
                "log" => {
                    self.eval_args(&e.children[2])?;
                    return Ok(Value::Null);
                }
                _ => {}
            }
            let args = self.eval_args(&e.children[2])?;
            let frame = self.frame();
            let (class, this) = (frame.class.clone(), frame.this.clone());
            return self.invoke(&class, this, name, args);
        }
        if recv.kind == Kind::Ident && self.read_var(recv.label_str()).is_err() {
            let args = self.eval_args(&e.children[2])?;
            return builtin_static(recv.label_str(), name, args);
        }
        let target = self.eval(recv)?;
        let args = self.eval_args(&e.children[2])?;
        match target {
            Value::Null => fail(ErrorKind::NullDereference, format!("{name}() on null")),
            Value::Object(o) => {
                let class = o.borrow().class.clone();
                if self.classes.get(class.as_str()).is_some_and(|c| c.methods.contains_key(name)) {
                    return self.invoke(&class, Some(o), name, args);
                }
                match (name, args.as_slice()) {
                    ("toString", []) => Ok(Value::Str(Rc::from(format!("{class}@").as_str()))),
                    ("equals", [other]) => Ok(Value::Bool(Value::Object(o) == *other)),
                    ("hashCode", []) => Ok(Value::Int(0)),
                    _ => fail(ErrorKind::UnknownName, format!("method {class}.{name}")),
                }
            }
            Value::Str(s) => match (name, args.as_slice()) {
                ("length", []) => Ok(Value::Int(s.chars().count() as i64)),
                ("isEmpty", []) => Ok(Value::Bool(s.is_empty())),
                ("toString", []) => Ok(Value::Str(s)),
                ("equals", [other]) => Ok(Value::Bool(matches!(other, Value::Str(o) if *o == s))),
                ("concat", [other]) => Ok(Value::Str(Rc::from(format!("{s}{other}").as_str()))),
                _ => fail(ErrorKind::UnknownName, format!("String.{name}")),
            },
            v => match (name, args.as_slice()) {
                ("toString", []) => Ok(Value::Str(Rc::from(v.to_string().as_str()))),
                ("equals", [other]) => Ok(Value::Bool(v == *other)),
                _ => fail(ErrorKind::TypeError, format!("{v} has no method {name}")),
            },
        }
    }
}

fn builtin_static(recv: &str, name: &str, args: Vec<Value>) -> R<Value> {
    match (recv, name, args.as_slice()) {
        ("Logger", _, _) => Ok(Value::Null),
        ("Math", "abs", [Value::Int(i)]) => Ok(Value::Int(i.wrapping_abs())),
        ("Math", "abs", [Value::Double(d)]) => Ok(Value::Double(if *d < 0.0 { -d } else { *d })),
        ("Math", "max" | "min", [Value::Int(a), Value::Int(b)]) => {
            Ok(Value::Int(if name == "max" { *a.max(b) } else { *a.min(b) }))
        }
        ("Math", "max" | "min", [a, b]) => {
            let (a, b) = (num(a)?, num(b)?);
            Ok(Value::Double(if (name == "max") == (a > b) { a } else { b }))
        }
        _ => fail(ErrorKind::UnknownName, format!("{recv}.{name}")),
    }
}

fn parse_int(s: &str) -> R<i64> {
    s.parse::<i128>().map(|v| v as i64).map_err(|_| RuntimeError {
        kind: ErrorKind::TypeError,
        message: format!("bad int {s}"),
    })
}

fn num(v: &Value) -> R<f64> {
    match v {
        Value::Int(i) => Ok(*i as f64),
        Value::Double(d) => Ok(*d),
        v => fail(ErrorKind::TypeError, format!("{v} is not a number")),
    }
}

fn arith(op: &str, l: Value, r: Value) -> R<Value> {
    if op == "+" && (matches!(l, Value::Str(_)) || matches!(r, Value::Str(_))) {
        return Ok(Value::Str(Rc::from(format!("{l}{r}").as_str())));
    }
    match (l, r) {
        (Value::Int(a), Value::Int(b)) => Ok(Value::Int(match op {
            "+" => a.wrapping_add(b),
            "-" => a.wrapping_sub(b),
            "*" => a.wrapping_mul(b),
            "/" | "%" if b == 0 => return fail(ErrorKind::DivisionByZero, "integer division by zero"),
            "/" => a.wrapping_div(b),
            "%" => a.wrapping_rem(b),
            _ => return fail(ErrorKind::TypeError, format!("operator {op}")),
        })),
        (l, r) => {
            let (a, b) = (num(&l)?, num(&r)?);
            Ok(Value::Double(match op {
                "+" => a + b,
                "-" => a - b,
                "*" => a * b,
                "/" => a / b,
                "%" => a % b,
                _ => return fail(ErrorKind::TypeError, format!("operator {op}")),
            }))
        }
    }
}

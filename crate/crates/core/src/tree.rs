//! Uniform syntax tree shared by programs, edits and patterns.

use alloc::borrow::ToOwned;
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::hash::Hasher;

use siphasher::sip::SipHasher13;

/// Byte offsets `[start, end)` into the source text a node was parsed from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// What a hole may bind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    /// Exactly one non-statement node: expressions, names, types, case
    /// labels and absent optional slots.
    Expr,
    /// Exactly one statement (or an absent optional slot).
    Stmt,
    /// A possibly empty contiguous run of children of a list node.
    Seq,
}

impl Sort {
    pub fn name(self) -> &'static str {
        match self {
            Sort::Expr => "expr",
            Sort::Stmt => "stmt",
            Sort::Seq => "seq",
        }
    }

    pub fn from_name(s: &str) -> Option<Sort> {
        match s {
            "expr" => Some(Sort::Expr),
            "stmt" => Some(Sort::Stmt),
            "seq" => Some(Sort::Seq),
            _ => None,
        }
    }
}

/// Arity class of a node kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Leaf,
    Fixed(usize),
    List,
}

/// Syntactic category, used for hole sorts and instrumentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Expr,
    Stmt,
    Other,
}

macro_rules! kinds {
    ($($name:ident => $shape:expr, $labeled:expr, $class:expr;)*) => {
        /// Node kinds of the MiniJ grammar plus pattern holes.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Kind {
            $($name,)*
            Hole(Sort),
        }

        impl Kind {
            pub const ALL: &'static [Kind] = &[$(Kind::$name,)*];

            pub fn name(self) -> &'static str {
                match self {
                    $(Kind::$name => stringify!($name),)*
                    Kind::Hole(_) => "?hole",
                }
            }

            pub fn from_name(s: &str) -> Option<Kind> {
                match s {
                    $(stringify!($name) => Some(Kind::$name),)*
                    _ => None,
                }
            }

            pub fn shape(self) -> Shape {
                match self {
                    $(Kind::$name => $shape,)*
                    Kind::Hole(_) => Shape::Leaf,
                }
            }

            /// Whether nodes of this kind carry a label atom.
            pub fn labeled(self) -> bool {
                match self {
                    $(Kind::$name => $labeled,)*
                    Kind::Hole(_) => true,
                }
            }

            pub fn class(self) -> Class {
                match self {
                    $(Kind::$name => $class,)*
                    Kind::Hole(Sort::Stmt) => Class::Stmt,
                    Kind::Hole(_) => Class::Expr,
                }
            }
        }
    };
}

use Class::{Expr as E, Other as O, Stmt as S};
use Shape::{Fixed as F, Leaf as L, List as Li};

kinds! {
    CompilationUnit => Li, false, O;
    ClassDecl => F(3), false, O;
    Members => Li, false, O;
    FieldDecl => F(4), false, O;
    MethodDecl => F(5), false, O;
    Params => Li, false, O;
    Param => F(2), false, O;
    Modifiers => Li, false, O;
    Modifier => L, true, O;
    Annotation => F(1), true, O;
    Type => L, true, O;
    Absent => L, false, O;
    Block => Li, false, S;
    VarDecl => F(4), false, S;
    ExprStmt => F(1), false, S;
    If => F(3), false, S;
    While => F(2), false, S;
    For => F(4), false, S;
    Switch => F(2), false, S;
    Cases => Li, false, O;
    Case => F(2), false, O;
    CaseBody => Li, false, O;
    Default => L, false, O;
    Return => F(1), false, S;
    Break => L, false, S;
    Empty => L, false, S;
    Ident => L, true, E;
    IntLit => L, true, E;
    DoubleLit => L, true, E;
    BoolLit => L, true, E;
    StrLit => L, true, E;
    NullLit => L, false, E;
    This => L, false, E;
    Binary => F(2), true, E;
    Unary => F(1), true, E;
    Update => F(1), true, E;
    Assign => F(2), true, E;
    Ternary => F(3), false, E;
    FieldAccess => F(2), false, E;
    Call => F(3), false, E;
    Args => Li, false, O;
    Cast => F(2), false, E;
    New => F(2), false, E;
}

impl Kind {
    pub fn is_hole(self) -> bool {
        matches!(self, Kind::Hole(_))
    }

    pub fn is_list(self) -> bool {
        self.shape() == Shape::List
    }
}

/// Extra restrictions a catalog hole places on what it binds.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Guard {
    /// If nonempty, the bound node's kind must be one of these.
    pub kinds: Vec<Kind>,
    /// The bound node's label must not match any of these. A trailing `*`
    /// makes the entry a prefix match.
    pub exclude: Vec<String>,
}

impl Guard {
    pub fn admits(&self, node: &Node) -> bool {
        if !self.kinds.is_empty() && !self.kinds.contains(&node.kind) {
            return false;
        }
        let label = node.label.as_deref().unwrap_or("");
        !self.exclude.iter().any(|ex| match ex.strip_suffix('*') {
            Some(prefix) => label.starts_with(prefix),
            None => label == ex,
        })
    }
}

/// Child-index path from a root to a descendant.
pub type Path = Vec<usize>;

/// A syntax tree node. Holes are nodes of kind [`Kind::Hole`] whose label is
/// the hole id.
#[derive(Clone, Debug)]
pub struct Node {
    pub kind: Kind,
    pub label: Option<String>,
    pub children: Vec<Node>,
    pub span: Option<Span>,
    pub guard: Option<Box<Guard>>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.label == other.label
            && self.guard == other.guard
            && self.children == other.children
    }
}

impl Eq for Node {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShapeError {
    #[error("{kind} expects {expected} children, found {found}")]
    Arity {
        kind: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0} must carry a label")]
    MissingLabel(&'static str),
    #[error("{0} must not carry a label")]
    UnexpectedLabel(&'static str),
    #[error("seq hole {0} outside a list node")]
    MisplacedSeq(String),
}

impl Node {
    pub fn new(kind: Kind, children: Vec<Node>) -> Node {
        Node {
            kind,
            label: None,
            children,
            span: None,
            guard: None,
        }
    }

    pub fn labeled(kind: Kind, label: impl Into<String>, children: Vec<Node>) -> Node {
        Node {
            kind,
            label: Some(label.into()),
            children,
            span: None,
            guard: None,
        }
    }

    pub fn leaf(kind: Kind) -> Node {
        Node::new(kind, Vec::new())
    }

    pub fn atom(kind: Kind, label: impl Into<String>) -> Node {
        Node::labeled(kind, label, Vec::new())
    }

    pub fn hole(sort: Sort, id: impl Into<String>) -> Node {
        Node::atom(Kind::Hole(sort), id)
    }

    pub fn guarded_hole(sort: Sort, id: impl Into<String>, guard: Guard) -> Node {
        let mut n = Node::hole(sort, id);
        n.guard = Some(Box::new(guard));
        n
    }

    pub fn ident(name: &str) -> Node {
        Node::atom(Kind::Ident, name)
    }

    pub fn absent() -> Node {
        Node::leaf(Kind::Absent)
    }

    pub fn with_span(mut self, span: Span) -> Node {
        self.span = Some(span);
        self
    }

    pub fn label_str(&self) -> &str {
        self.label.as_deref().unwrap_or("")
    }

    pub fn is_hole(&self) -> bool {
        self.kind.is_hole()
    }

    pub fn hole_sort(&self) -> Option<Sort> {
        match self.kind {
            Kind::Hole(s) => Some(s),
            _ => None,
        }
    }

    pub fn get(&self, path: &[usize]) -> Option<&Node> {
        let mut cur = self;
        for &i in path {
            cur = cur.children.get(i)?;
        }
        Some(cur)
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut Node> {
        let mut cur = self;
        for &i in path {
            cur = cur.children.get_mut(i)?;
        }
        Some(cur)
    }

    /// Total number of nodes in the subtree.
    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Node::size).sum::<usize>()
    }

    /// Number of non-hole nodes.
    pub fn concrete_size(&self) -> usize {
        usize::from(!self.is_hole()) + self.children.iter().map(Node::concrete_size).sum::<usize>()
    }

    pub fn has_holes(&self) -> bool {
        self.is_hole() || self.children.iter().any(Node::has_holes)
    }

    /// Hole ids and sorts in pre-order of first occurrence.
    pub fn holes(&self) -> Vec<(String, Sort)> {
        let mut out: Vec<(String, Sort)> = Vec::new();
        self.visit(&mut |n, _| {
            if let Some(sort) = n.hole_sort() {
                let id = n.label_str();
                if !out.iter().any(|(h, s)| h == id && *s == sort) {
                    out.push((id.to_owned(), sort));
                }
            }
        });
        out
    }

    /// Pre-order traversal with paths.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&'a Node, &Path)) {
        fn go<'a>(n: &'a Node, path: &mut Path, f: &mut dyn FnMut(&'a Node, &Path)) {
            f(n, path);
            for (i, c) in n.children.iter().enumerate() {
                path.push(i);
                go(c, path, f);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), f)
    }

    /// Paths of all nodes in pre-order.
    pub fn paths(&self) -> Vec<Path> {
        let mut out = Vec::new();
        self.visit(&mut |_, p| out.push(p.clone()));
        out
    }

    pub fn clear_spans(&mut self) {
        self.span = None;
        for c in &mut self.children {
            c.clear_spans();
        }
    }

    /// Check kind arities, label placement and Seq-hole placement.
    pub fn validate_shape(&self) -> Result<(), ShapeError> {
        let mut result = Ok(());
        self.visit(&mut |n, _| {
            if result.is_err() {
                return;
            }
            result = n.validate_local();
        });
        result
    }

    pub(crate) fn validate_local(&self) -> Result<(), ShapeError> {
        let name = self.kind.name();
        match self.kind.shape() {
            Shape::Leaf if !self.children.is_empty() => {
                return Err(ShapeError::Arity {
                    kind: name,
                    expected: 0,
                    found: self.children.len(),
                })
            }
            Shape::Fixed(n) if self.children.len() != n => {
                return Err(ShapeError::Arity {
                    kind: name,
                    expected: n,
                    found: self.children.len(),
                })
            }
            _ => {}
        }
        match (self.kind.labeled(), &self.label) {
            (true, None) => return Err(ShapeError::MissingLabel(name)),
            (false, Some(_)) => return Err(ShapeError::UnexpectedLabel(name)),
            _ => {}
        }
        if !self.kind.is_list() {
            if let Some(c) = self.children.iter().find(|c| c.hole_sort() == Some(Sort::Seq)) {
                return Err(ShapeError::MisplacedSeq(c.label_str().to_owned()));
            }
        }
        Ok(())
    }

    /// 64-bit structural digest, insensitive to spans.
    pub fn subtree_hash(&self) -> u64 {
        let mut h = SipHasher13::new_with_keys(0x6d75_746c_6561_726e, 0x7472_6565_6861_7368);
        self.feed(&mut h);
        h.finish()
    }

    fn feed(&self, h: &mut SipHasher13) {
        h.write(self.kind.name().as_bytes());
        if let Kind::Hole(s) = self.kind {
            h.write(s.name().as_bytes());
        }
        match &self.label {
            Some(l) => {
                h.write_u8(1);
                h.write_usize(l.len());
                h.write(l.as_bytes());
            }
            None => h.write_u8(0),
        }
        if let Some(g) = &self.guard {
            for k in &g.kinds {
                h.write(k.name().as_bytes());
            }
            for e in &g.exclude {
                h.write(e.as_bytes());
            }
        }
        h.write_usize(self.children.len());
        for c in &self.children {
            h.write_u64(c.subtree_hash());
        }
    }

    /// Structural equality up to a consistent, sort-preserving renaming of
    /// hole ids.
    pub fn alpha_eq(&self, other: &Node) -> bool {
        let mut fwd = BTreeMap::new();
        let mut back = BTreeMap::new();
        alpha(self, other, &mut fwd, &mut back)
    }
}

pub(crate) fn alpha(
    a: &Node,
    b: &Node,
    fwd: &mut BTreeMap<(String, Sort), String>,
    back: &mut BTreeMap<(String, Sort), String>,
) -> bool {
    if a.kind != b.kind || a.children.len() != b.children.len() || a.guard != b.guard {
        return false;
    }
    if let Kind::Hole(sort) = a.kind {
        let (x, y) = (a.label_str().to_owned(), b.label_str().to_owned());
        let f = fwd.entry((x.clone(), sort)).or_insert_with(|| y.clone());
        let r = back.entry((y.clone(), sort)).or_insert_with(|| x.clone());
        return *f == y && *r == x;
    }
    a.label == b.label
        && a.children
            .iter()
            .zip(&b.children)
            .all(|(c, d)| alpha(c, d, fwd, back))
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::sexpr::serialize(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bin(op: &str, l: Node, r: Node) -> Node {
        Node::labeled(Kind::Binary, op, vec![l, r])
    }

    #[test]
    fn equality_ignores_spans() {
        let a = Node::ident("x").with_span(Span::new(0, 1));
        let b = Node::ident("x").with_span(Span::new(7, 8));
        assert_eq!(a, b);
        assert_eq!(a.subtree_hash(), b.subtree_hash());
    }

    #[test]
    fn literal_sign_is_observable() {
        let one = Node::atom(Kind::IntLit, "1");
        let minus = Node::atom(Kind::IntLit, "-1");
        assert_ne!(one.subtree_hash(), minus.subtree_hash());
    }

    #[test]
    fn operator_changes_hash() {
        let a = bin("+", Node::ident("a"), Node::ident("b"));
        let b = bin("-", Node::ident("a"), Node::ident("b"));
        assert_ne!(a.subtree_hash(), b.subtree_hash());
    }

    #[test]
    fn shape_validation() {
        let bad = Node::labeled(Kind::Binary, "+", vec![Node::ident("a")]);
        assert!(matches!(bad.validate_shape(), Err(ShapeError::Arity { .. })));
        let seq_in_fixed = bin("+", Node::hole(Sort::Seq, "s1"), Node::ident("b"));
        assert!(matches!(
            seq_in_fixed.validate_shape(),
            Err(ShapeError::MisplacedSeq(_))
        ));
        let unlabeled = Node::leaf(Kind::Ident);
        assert!(unlabeled.validate_shape().is_err());
    }

    #[test]
    fn alpha_equivalence_respects_sharing() {
        let p = bin("==", Node::hole(Sort::Expr, "h1"), Node::hole(Sort::Expr, "h1"));
        let q = bin("==", Node::hole(Sort::Expr, "x"), Node::hole(Sort::Expr, "x"));
        let r = bin("==", Node::hole(Sort::Expr, "x"), Node::hole(Sort::Expr, "y"));
        assert!(p.alpha_eq(&q));
        assert!(!p.alpha_eq(&r));
        assert!(!r.alpha_eq(&p));
    }

    #[test]
    fn guard_prefix_exclusion() {
        let g = Guard {
            kinds: vec![Kind::IntLit],
            exclude: vec!["-*".into()],
        };
        assert!(g.admits(&Node::atom(Kind::IntLit, "3")));
        assert!(!g.admits(&Node::atom(Kind::IntLit, "-1")));
        assert!(!g.admits(&Node::atom(Kind::DoubleLit, "3.0")));
    }

    #[test]
    fn holes_in_order() {
        let p = bin(
            "+",
            Node::hole(Sort::Expr, "h2"),
            bin("*", Node::hole(Sort::Expr, "h1"), Node::hole(Sort::Expr, "h2")),
        );
        let hs: Vec<_> = p.holes().into_iter().map(|(h, _)| h).collect();
        assert_eq!(hs, vec!["h2", "h1"]);
    }
}

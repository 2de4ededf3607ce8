//! Symbolic-expression encoding of trees (`.mtree`, and the tree payload of
//! `.mpat` pattern files).
//!
//! ```text
//! (Binary "+" (Ident "b") (IntLit "1"))
//! (?hole expr h1)
//! (?hole expr h1 :kinds IntLit DoubleLit :not "0" "-*")
//! ```

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::tree::{Guard, Kind, Node, Sort};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct SexprError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// A parsed symbolic expression with the byte offset it started at.
#[derive(Debug, Clone, PartialEq)]
pub enum Sexp {
    Atom(String, usize),
    Str(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    pub fn offset(&self) -> usize {
        match self {
            Sexp::Atom(_, o) | Sexp::Str(_, o) | Sexp::List(_, o) => *o,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) | Sexp::Str(a, _) => Some(a),
            _ => None,
        }
    }
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Compact single-line encoding.
pub fn serialize(node: &Node) -> String {
    let mut out = String::new();
    write_node(node, &mut out);
    out
}

fn write_node(node: &Node, out: &mut String) {
    out.push('(');
    if let Kind::Hole(sort) = node.kind {
        out.push_str("?hole ");
        out.push_str(sort.name());
        out.push(' ');
        out.push_str(node.label_str());
        if let Some(g) = &node.guard {
            if !g.kinds.is_empty() {
                out.push_str(" :kinds");
                for k in &g.kinds {
                    out.push(' ');
                    out.push_str(k.name());
                }
            }
            if !g.exclude.is_empty() {
                out.push_str(" :not");
                for e in &g.exclude {
                    out.push(' ');
                    out.push_str(&quote(e));
                }
            }
        }
        out.push(')');
        return;
    }
    out.push_str(node.kind.name());
    if let Some(l) = &node.label {
        out.push(' ');
        out.push_str(&quote(l));
    }
    for c in &node.children {
        out.push(' ');
        write_node(c, out);
    }
    out.push(')');
}

/// Multi-line encoding: nodes whose compact form exceeds `width` columns put
/// each child on its own indented line.
pub fn serialize_pretty(node: &Node, width: usize) -> String {
    let mut out = String::new();
    write_pretty(node, 0, width, &mut out);
    out
}

fn write_pretty(node: &Node, indent: usize, width: usize, out: &mut String) {
    let flat = serialize(node);
    if flat.len() + indent <= width || node.children.is_empty() || node.is_hole() {
        out.push_str(&flat);
        return;
    }
    out.push('(');
    out.push_str(node.kind.name());
    if let Some(l) = &node.label {
        out.push(' ');
        out.push_str(&quote(l));
    }
    for c in &node.children {
        out.push('\n');
        for _ in 0..indent + 2 {
            out.push(' ');
        }
        write_pretty(c, indent + 2, width, out);
    }
    out.push(')');
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn error(&self, at: usize, message: impl Into<String>) -> SexprError {
        let (line, col) = line_col(self.src, at);
        SexprError {
            line,
            col,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() {
            match bytes[self.pos] {
                b' ' | b'\n' | b'\t' | b'\r' => self.pos += 1,
                b';' => {
                    while self.pos < bytes.len() && bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn read(&mut self) -> Result<Sexp, SexprError> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.src.as_bytes();
        match bytes.get(self.pos) {
            None => Err(self.error(start, "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match bytes.get(self.pos) {
                        None => return Err(self.error(start, "unclosed '('")),
                        Some(b')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(b')') => Err(self.error(start, "unexpected ')'")),
            Some(b'"') => {
                self.pos += 1;
                let mut s = String::new();
                let mut chars = self.src[self.pos..].char_indices();
                loop {
                    match chars.next() {
                        None => return Err(self.error(start, "unterminated string")),
                        Some((i, '"')) => {
                            self.pos += i + 1;
                            return Ok(Sexp::Str(s, start));
                        }
                        Some((i, '\\')) => match chars.next() {
                            Some((_, 'n')) => s.push('\n'),
                            Some((_, 't')) => s.push('\t'),
                            Some((_, c @ ('"' | '\\'))) => s.push(c),
                            _ => return Err(self.error(self.pos + i, "bad escape")),
                        },
                        Some((_, c)) => s.push(c),
                    }
                }
            }
            Some(_) => {
                while self.pos < bytes.len()
                    && !matches!(bytes[self.pos], b' ' | b'\n' | b'\t' | b'\r' | b'(' | b')' | b'"')
                {
                    self.pos += 1;
                }
                Ok(Sexp::Atom(self.src[start..self.pos].to_string(), start))
            }
        }
    }
}

pub fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, col)
}

/// Parse every top-level expression in `src`.
pub fn read_all(src: &str) -> Result<Vec<Sexp>, SexprError> {
    let mut r = Reader { src, pos: 0 };
    let mut out = Vec::new();
    loop {
        r.skip_ws();
        if r.pos >= src.len() {
            return Ok(out);
        }
        out.push(r.read()?);
    }
}

/// Convert a parsed expression to a tree; `src` is only used for positions.
pub fn to_node(sx: &Sexp, src: &str) -> Result<Node, SexprError> {
    let err = |at: usize, m: String| {
        let (line, col) = line_col(src, at);
        SexprError {
            line,
            col,
            message: m,
        }
    };
    let (items, at) = match sx {
        Sexp::List(items, at) => (items, *at),
        other => return Err(err(other.offset(), "expected '('".into())),
    };
    let head = items
        .first()
        .and_then(Sexp::as_atom)
        .ok_or_else(|| err(at, "expected node kind".into()))?;
    if head == "?hole" {
        let sort = items
            .get(1)
            .and_then(Sexp::as_atom)
            .and_then(Sort::from_name)
            .ok_or_else(|| err(at, "expected hole sort (expr|stmt|seq)".into()))?;
        let id = items
            .get(2)
            .and_then(Sexp::as_text)
            .ok_or_else(|| err(at, "expected hole id".into()))?;
        let mut guard = Guard::default();
        let mut mode = "";
        for item in &items[3..] {
            match (item, mode) {
                (Sexp::Atom(a, _), _) if a == ":kinds" || a == ":not" => mode = a,
                (Sexp::Atom(a, o), ":kinds") => guard
                    .kinds
                    .push(Kind::from_name(a).ok_or_else(|| err(*o, format!("unknown kind {a}")))?),
                (Sexp::Str(s, _), ":not") => guard.exclude.push(s.clone()),
                (other, _) => return Err(err(other.offset(), "malformed hole guard".into())),
            }
        }
        let mut node = Node::hole(sort, id);
        if guard != Guard::default() {
            node.guard = Some(Box::new(guard));
        }
        return Ok(node);
    }
    let kind = Kind::from_name(head).ok_or_else(|| err(at, format!("unknown node kind {head}")))?;
    let mut rest = &items[1..];
    let mut label = None;
    if let Some(Sexp::Str(s, _)) = rest.first() {
        label = Some(s.clone());
        rest = &rest[1..];
    }
    let children = rest
        .iter()
        .map(|c| to_node(c, src))
        .collect::<Result<Vec<_>, _>>()?;
    let node = Node {
        kind,
        label,
        children,
        span: None,
        guard: None,
    };
    node.validate_local().map_err(|e| err(at, e.to_string()))?;
    Ok(node)
}

/// Decode exactly one tree.
pub fn deserialize(src: &str) -> Result<Node, SexprError> {
    let all = read_all(src)?;
    match all.as_slice() {
        [one] => to_node(one, src),
        [] => Err(SexprError {
            line: 1,
            col: 1,
            message: "empty input".into(),
        }),
        [_, second, ..] => {
            let (line, col) = line_col(src, second.offset());
            Err(SexprError {
                line,
                col,
                message: "trailing input after tree".into(),
            })
        }
    }
}

/// Decode a `.mtree` file: one tree, or several trees in sequence.
pub fn deserialize_many(src: &str) -> Result<Vec<Node>, SexprError> {
    read_all(src)?.iter().map(|s| to_node(s, src)).collect()
}

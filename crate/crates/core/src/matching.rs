//! Structural matching of patterns with holes, and instantiation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::tree::{Class, Kind, Node, Sort};

/// What a hole is bound to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    One(Node),
    Many(Vec<Node>),
}

/// Hole id to bound code.
pub type Binding = BTreeMap<String, Bound>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstantiateError {
    #[error("no binding for hole {0}")]
    MissingHole(String),
    #[error("binding for hole {0} does not fit its sort or position")]
    SortMismatch(String),
}

/// Whether a hole of `sort` may bind `node` (ignoring guards).
pub fn sort_admits(sort: Sort, node: &Node) -> bool {
    if node.kind == Kind::Absent {
        return sort != Sort::Seq;
    }
    match sort {
        Sort::Expr => node.kind.class() != Class::Stmt && !node.kind.is_list(),
        Sort::Stmt => node.kind.class() == Class::Stmt,
        Sort::Seq => false,
    }
}

fn hole_admits(hole: &Node, node: &Node) -> bool {
    let sort = hole.hole_sort().expect("hole");
    sort_admits(sort, node) && hole.guard.as_ref().is_none_or(|g| g.admits(node))
}

type Cont<'a> = &'a mut dyn FnMut(&mut Binding) -> bool;

fn match_node(p: &Node, t: &Node, b: &mut Binding, k: Cont<'_>) -> bool {
    if let Some(sort) = p.hole_sort() {
        if sort == Sort::Seq || !hole_admits(p, t) {
            return false;
        }
        let id = p.label_str();
        return match b.get(id) {
            Some(Bound::One(prev)) => prev == t && k(b),
            Some(Bound::Many(_)) => false,
            None => {
                b.insert(id.into(), Bound::One(t.clone()));
                let stop = k(b);
                b.remove(id);
                stop
            }
        };
    }
    if p.kind != t.kind || p.label != t.label {
        return false;
    }
    match_seq(&p.children, &t.children, b, k)
}

fn match_seq(ps: &[Node], ts: &[Node], b: &mut Binding, k: Cont<'_>) -> bool {
    let Some((first, rest)) = ps.split_first() else {
        return ts.is_empty() && k(b);
    };
    if first.hole_sort() == Some(Sort::Seq) {
        let id = first.label_str();
        if let Some(prev) = b.get(id) {
            let Bound::Many(prev) = prev else {
                return false;
            };
            let n = prev.len();
            return n <= ts.len() && prev[..] == ts[..n] && match_seq(rest, &ts[n..], b, k);
        }
        for n in 0..=ts.len() {
            b.insert(id.into(), Bound::Many(ts[..n].to_vec()));
            let stop = match_seq(rest, &ts[n..], b, k);
            b.remove(id);
            if stop {
                return true;
            }
        }
        return false;
    }
    let Some((t0, trest)) = ts.split_first() else {
        return false;
    };
    match_node(first, t0, b, &mut |b| match_seq(rest, trest, b, k))
}

/// First match of `pattern` against the whole of `target`, under
/// leftmost-shortest Seq binding order.
pub fn match_pattern(pattern: &Node, target: &Node) -> Option<Binding> {
    let mut found = None;
    match_node(pattern, target, &mut Binding::new(), &mut |b| {
        found = Some(b.clone());
        true
    });
    found
}

/// Every match of `pattern` against `target`, in enumeration order, without
/// duplicates.
pub fn match_all(pattern: &Node, target: &Node) -> Vec<Binding> {
    let mut out: Vec<Binding> = Vec::new();
    match_node(pattern, target, &mut Binding::new(), &mut |b| {
        if !out.contains(b) {
            out.push(b.clone());
        }
        false
    });
    out
}

/// Substitute bindings for the holes of `template`.
pub fn instantiate(template: &Node, binding: &Binding) -> Result<Node, InstantiateError> {
    if let Some(sort) = template.hole_sort() {
        let id = template.label_str();
        return match (sort, binding.get(id)) {
            (_, None) => Err(InstantiateError::MissingHole(id.into())),
            (Sort::Seq, Some(_)) => Err(InstantiateError::SortMismatch(id.into())),
            (s, Some(Bound::One(n))) if sort_admits(s, n) => Ok(n.clone()),
            _ => Err(InstantiateError::SortMismatch(id.into())),
        };
    }
    let mut children = Vec::with_capacity(template.children.len());
    for c in &template.children {
        if c.hole_sort() == Some(Sort::Seq) {
            if !template.kind.is_list() {
                return Err(InstantiateError::SortMismatch(c.label_str().into()));
            }
            match binding.get(c.label_str()) {
                Some(Bound::Many(ns)) => children.extend(ns.iter().cloned()),
                Some(Bound::One(_)) => {
                    return Err(InstantiateError::SortMismatch(c.label_str().into()))
                }
                None => return Err(InstantiateError::MissingHole(c.label_str().into())),
            }
        } else {
            children.push(instantiate(c, binding)?);
        }
    }
    Ok(Node {
        kind: template.kind,
        label: template.label.clone(),
        children,
        span: None,
        guard: None,
    })
}

/// Reject list nodes with two adjacent Seq holes (no concrete anchor between
/// them), which would make Seq splits ambiguous.
pub fn check_seq_anchors(pattern: &Node) -> Result<(), String> {
    let mut err = Ok(());
    pattern.visit(&mut |n, _| {
        if err.is_err() {
            return;
        }
        let adjacent = n.children.windows(2).find(|w| {
            w[0].hole_sort() == Some(Sort::Seq) && w[1].hole_sort() == Some(Sort::Seq)
        });
        if let Some(w) = adjacent {
            err = Err(alloc::format!(
                "seq holes {} and {} have no anchor between them",
                w[0].label_str(),
                w[1].label_str()
            ));
        }
    });
    err
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Kind;
    use alloc::vec;

    fn h(id: &str) -> Node {
        Node::hole(Sort::Expr, id)
    }
    fn s(id: &str) -> Node {
        Node::hole(Sort::Seq, id)
    }
    fn id(x: &str) -> Node {
        Node::ident(x)
    }
    fn bin(op: &str, l: Node, r: Node) -> Node {
        Node::labeled(Kind::Binary, op, vec![l, r])
    }
    fn one(b: &Binding, k: &str) -> Node {
        match &b[k] {
            Bound::One(n) => n.clone(),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ternary_binding() {
        let p = Node::new(Kind::Ternary, vec![h("h1"), h("h2"), h("h3")]);
        let t = Node::new(Kind::Ternary, vec![id("a"), id("b"), id("c")]);
        let b = match_pattern(&p, &t).unwrap();
        assert_eq!(one(&b, "h1"), id("a"));
        assert_eq!(one(&b, "h2"), id("b"));
        assert_eq!(one(&b, "h3"), id("c"));
        assert_eq!(instantiate(&h("h2"), &b).unwrap(), id("b"));
        assert_eq!(instantiate(&p, &b).unwrap(), t);
    }

    #[test]
    fn repeated_holes_require_equal_bindings() {
        let p = bin("==", h("h1"), h("h1"));
        let b = match_pattern(&p, &bin("==", id("x"), id("x"))).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(one(&b, "h1"), id("x"));
        assert!(match_pattern(&p, &bin("==", id("x"), id("y"))).is_none());
    }

    #[test]
    fn leftmost_shortest_seq() {
        let stmt = |x: &str| Node::new(Kind::ExprStmt, vec![id(x)]);
        let p = Node::new(Kind::Block, vec![s("s1"), stmt("a"), s("s2")]);
        let t = Node::new(Kind::Block, vec![stmt("a"), stmt("b"), stmt("a")]);
        let all = match_all(&p, &t);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0]["s1"], Bound::Many(vec![]));
        assert_eq!(all[1]["s1"], Bound::Many(vec![stmt("a"), stmt("b")]));
        assert_eq!(match_pattern(&p, &t).unwrap(), all[0]);
    }

    #[test]
    fn sorts_are_enforced() {
        let stmt = Node::new(Kind::ExprStmt, vec![id("a")]);
        assert!(match_pattern(&h("h1"), &stmt).is_none());
        assert!(match_pattern(&Node::hole(Sort::Stmt, "h1"), &stmt).is_some());
        assert!(match_pattern(&Node::hole(Sort::Stmt, "h1"), &id("a")).is_none());
        assert!(match_pattern(&Node::hole(Sort::Stmt, "h1"), &Node::absent()).is_some());
    }

    #[test]
    fn instantiate_errors() {
        let b = Binding::new();
        assert_eq!(
            instantiate(&h("h9"), &b),
            Err(InstantiateError::MissingHole("h9".into()))
        );
        let mut b = Binding::new();
        b.insert("h1".into(), Bound::One(Node::new(Kind::ExprStmt, vec![id("a")])));
        assert_eq!(
            instantiate(&bin("+", h("h1"), id("b")), &b),
            Err(InstantiateError::SortMismatch("h1".into()))
        );
    }

    #[test]
    fn adjacent_seq_rejected() {
        let p = Node::new(Kind::Block, vec![s("s1"), s("s2")]);
        assert!(check_seq_anchors(&p).is_err());
    }
}

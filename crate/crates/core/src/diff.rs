//! Node mapping between before/after trees and concrete edit extraction.
//!
//! Mapping is top-down: equal subtrees map wholesale, nodes of equal kind and
//! label map and recurse, Fixed children pair by position and List children
//! are aligned by a longest common subsequence over subtree hashes. Gaps of
//! equal length between aligned children pair positionally; a gap of unequal
//! length makes the whole list one edit.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::tree::{Node, Path};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NodeMapping {
    forward: BTreeMap<Path, Path>,
}

impl NodeMapping {
    pub fn get(&self, before: &[usize]) -> Option<&Path> {
        self.forward.get(before)
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Path, &Path)> {
        self.forward.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcreteEdit {
    pub before: Node,
    pub after: Node,
    /// Position of `before` in the before tree (and of `after` in the after tree).
    pub path: Path,
    /// Lowest mapped ancestor; equals `path` for whole-list edits.
    pub anchor: Path,
    pub provenance: String,
}

fn map_all(a: &Node, b: &Node, pa: &mut Path, pb: &mut Path, m: &mut NodeMapping) {
    m.forward.insert(pa.clone(), pb.clone());
    for (i, (ca, cb)) in a.children.iter().zip(&b.children).enumerate() {
        pa.push(i);
        pb.push(i);
        map_all(ca, cb, pa, pb, m);
        pa.pop();
        pb.pop();
    }
}

/// Index pairs of a longest common subsequence of `a` and `b`.
fn lcs(a: &[Node], b: &[Node]) -> Vec<(usize, usize)> {
    let ha: Vec<u64> = a.iter().map(Node::subtree_hash).collect();
    let hb: Vec<u64> = b.iter().map(Node::subtree_hash).collect();
    let eq = |i: usize, j: usize| ha[i] == hb[j] && a[i] == b[j];
    let (n, k) = (a.len(), b.len());
    let mut t = alloc::vec![0usize; (n + 1) * (k + 1)];
    let at = |i: usize, j: usize| i * (k + 1) + j;
    for i in (0..n).rev() {
        for j in (0..k).rev() {
            t[at(i, j)] = if eq(i, j) {
                t[at(i + 1, j + 1)] + 1
            } else {
                t[at(i + 1, j)].max(t[at(i, j + 1)])
            };
        }
    }
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < n && j < k {
        if eq(i, j) {
            out.push((i, j));
            i += 1;
            j += 1;
        } else if t[at(i + 1, j)] >= t[at(i, j + 1)] {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

/// Gaps between aligned index pairs, as (before range, after range).
fn gaps(
    pairs: &[(usize, usize)],
    la: usize,
    lb: usize,
) -> Vec<(core::ops::Range<usize>, core::ops::Range<usize>)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    for &(x, y) in pairs.iter().chain(core::iter::once(&(la, lb))) {
        if x > i || y > j {
            out.push((i..x, j..y));
        }
        i = x + 1;
        j = y + 1;
    }
    out
}

fn map_rec(a: &Node, b: &Node, pa: &mut Path, pb: &mut Path, m: &mut NodeMapping) {
    if a == b {
        map_all(a, b, pa, pb, m);
        return;
    }
    if a.kind != b.kind || a.label != b.label {
        return;
    }
    m.forward.insert(pa.clone(), pb.clone());
    let mut pair = |i: usize, j: usize, whole: bool, m: &mut NodeMapping| {
        pa.push(i);
        pb.push(j);
        if whole {
            map_all(&a.children[i], &b.children[j], pa, pb, m);
        } else {
            map_rec(&a.children[i], &b.children[j], pa, pb, m);
        }
        pa.pop();
        pb.pop();
    };
    if a.kind.is_list() {
        let common = lcs(&a.children, &b.children);
        for &(i, j) in &common {
            pair(i, j, true, m);
        }
        for (ra, rb) in gaps(&common, a.children.len(), b.children.len()) {
            if ra.len() == rb.len() {
                for (i, j) in ra.zip(rb) {
                    pair(i, j, false, m);
                }
            }
        }
    } else {
        for i in 0..a.children.len().min(b.children.len()) {
            pair(i, i, false, m);
        }
    }
}

/// Map nodes of `before` to nodes of `after`.
pub fn map_nodes(before: &Node, after: &Node) -> NodeMapping {
    let mut m = NodeMapping::default();
    map_rec(before, after, &mut Vec::new(), &mut Vec::new(), &mut m);
    m
}

fn child(p: &[usize], i: usize) -> Path {
    let mut c = p.to_vec();
    c.push(i);
    c
}

fn edit(a: &Node, b: &Node, path: Path, anchor: Path) -> ConcreteEdit {
    ConcreteEdit {
        before: a.clone(),
        after: b.clone(),
        path,
        anchor,
        provenance: String::new(),
    }
}

fn extract_rec(a: &Node, b: &Node, pa: &Path, pb: &Path, m: &NodeMapping, out: &mut Vec<ConcreteEdit>) {
    if a == b {
        return;
    }
    let mapped = |i: usize| m.get(&child(pa, i)).and_then(|q| {
        (q.len() == pb.len() + 1 && q[..pb.len()] == pb[..]).then(|| q[pb.len()])
    });
    if a.kind.is_list() {
        let pairs: Vec<(usize, usize)> = (0..a.children.len())
            .filter_map(|i| mapped(i).map(|j| (i, j)))
            .collect();
        let gs = gaps(&pairs, a.children.len(), b.children.len());
        if gs.iter().any(|(ra, rb)| ra.len() != rb.len()) || pa != pb {
            out.push(edit(a, b, pa.clone(), pa.clone()));
            return;
        }
        let mut items: Vec<(usize, usize, bool)> = pairs.iter().map(|&(i, j)| (i, j, true)).collect();
        for (ra, rb) in gs {
            items.extend(ra.zip(rb).map(|(i, j)| (i, j, false)));
        }
        items.sort();
        for (i, j, is_mapped) in items {
            if i != j {
                out.push(edit(a, b, pa.clone(), pa.clone()));
                return;
            }
            let (ca, cb) = (&a.children[i], &b.children[j]);
            if is_mapped {
                extract_rec(ca, cb, &child(pa, i), &child(pb, j), m, out);
            } else {
                out.push(edit(ca, cb, child(pa, i), pa.clone()));
            }
        }
        return;
    }
    for (i, (ca, cb)) in a.children.iter().zip(&b.children).enumerate() {
        if mapped(i) == Some(i) {
            extract_rec(ca, cb, &child(pa, i), &child(pb, i), m, out);
        } else {
            out.push(edit(ca, cb, child(pa, i), pa.clone()));
        }
    }
}

/// Minimal changed subtree pairs, sorted by path.
///
/// Edits are reported at positions that exist in both trees, so replacing
/// each `before` at its `path` with `after` turns `before` into `after`.
pub fn extract_edits(before: &Node, after: &Node, mapping: &NodeMapping) -> Vec<ConcreteEdit> {
    let mut out = Vec::new();
    if mapping.get(&[]) != Some(&Vec::new()) {
        if before != after {
            out.push(edit(before, after, Vec::new(), Vec::new()));
        }
        return out;
    }
    extract_rec(before, after, &Vec::new(), &Vec::new(), mapping, &mut out);
    out.sort_by(|x, y| x.path.cmp(&y.path));
    out
}

/// `map_nodes` followed by `extract_edits`.
pub fn diff(before: &Node, after: &Node) -> Vec<ConcreteEdit> {
    extract_edits(before, after, &map_nodes(before, after))
}

/// Replace each edit's `before` by its `after`.
pub fn replay(before: &Node, edits: &[ConcreteEdit]) -> Node {
    let mut t = before.clone();
    for e in edits {
        match t.get_mut(&e.path) {
            Some(slot) => *slot = e.after.clone(),
            None => panic!("edit path {:?} not in tree", e.path),
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parse;
    use crate::tree::Kind;
    use alloc::vec;

    fn p(src: &str) -> Node {
        let mut n = parse(src).unwrap();
        n.clear_spans();
        n
    }

    #[test]
    fn identity() {
        let t = p("class A { void f() { int a = b + 1; } }");
        let m = map_nodes(&t, &t);
        assert_eq!(m.len(), t.size());
        assert!(m.pairs().all(|(x, y)| x == y));
        assert!(extract_edits(&t, &t, &m).is_empty());
    }

    #[test]
    fn logging_pair() {
        let a = p("class A { void f() { int a = b + 1; } }");
        let b = p("class A { void f() { int a = b + MutationTestingLogger.log(0); } }");
        let m = map_nodes(&a, &b);
        let plus: Path = vec![0, 2, 0, 4, 0, 3];
        assert_eq!(a.get(&plus).unwrap().kind, Kind::Binary);
        assert_eq!(m.get(&[plus.clone(), vec![0]].concat()), Some(&[plus.clone(), vec![0]].concat()));
        assert_eq!(m.get(&[plus.clone(), vec![1]].concat()), None);
        let edits = extract_edits(&a, &b, &m);
        assert_eq!(edits.len(), 1);
        assert_eq!(edits[0].before, Node::atom(Kind::IntLit, "1"));
        assert_eq!(edits[0].after.kind, Kind::Call);
        assert_eq!(edits[0].anchor, plus);
        assert_eq!(replay(&a, &edits), b);
    }

    #[test]
    fn two_independent_edits() {
        let a = p("class A { int f(boolean c) { int x = c ? 1 : 2; return x + 1; } }");
        let b = p("class A { int f(boolean c) { int x = 1; return x - 1; } }");
        let edits = diff(&a, &b);
        assert_eq!(edits.len(), 2);
        assert_eq!(edits[0].after, Node::atom(Kind::IntLit, "1"));
        assert_eq!(edits[1].before.label_str(), "+");
        assert_eq!(replay(&a, &edits), b);
    }

    #[test]
    fn list_insertion_anchors_at_list() {
        let a = p("class A { void f() { g(); h(); } void g() { } void h() { } }");
        let b = p("class A { void f() { g(); ; h(); } void g() { } void h() { } }");
        let edits = diff(&a, &b);
        assert_eq!(edits.len(), 1);
        assert_eq!(edits[0].before.kind, Kind::Block);
        assert_eq!(edits[0].path, edits[0].anchor);
        assert_eq!(replay(&a, &edits), b);
    }
}

//! Edit patterns: anti-unification, clustering, reversal and the `.mpat`
//! text format.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::diff::ConcreteEdit;
use crate::matching::{instantiate, match_all};
use crate::sexpr::{self, quote, Sexp, SexprError};
use crate::tree::{alpha, Class, Guard, Kind, Node, Sort};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Fixing,
    Introducing,
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::Fixing => "fixing",
            Direction::Introducing => "introducing",
        }
    }

    pub fn from_name(s: &str) -> Option<Direction> {
        match s {
            "fixing" => Some(Direction::Fixing),
            "introducing" => Some(Direction::Introducing),
            _ => None,
        }
    }

    pub fn flip(self) -> Direction {
        match self {
            Direction::Fixing => Direction::Introducing,
            Direction::Introducing => Direction::Fixing,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditPattern {
    pub name: String,
    pub before: Node,
    pub after: Node,
    pub support: usize,
    pub provenance: String,
    pub direction: Direction,
}

impl EditPattern {
    pub fn from_edit(e: &ConcreteEdit) -> EditPattern {
        let mut before = e.before.clone();
        let mut after = e.after.clone();
        before.clear_spans();
        after.clear_spans();
        EditPattern {
            name: String::new(),
            before,
            after,
            support: 1,
            provenance: e.provenance.clone(),
            direction: Direction::Fixing,
        }
    }

    /// Both sides counted, holes as one node each.
    pub fn size(&self) -> usize {
        self.before.size() + self.after.size()
    }

    /// Hole ids used on the after side but absent from the before side.
    pub fn free_holes(&self) -> Vec<String> {
        let bound = self.before.holes();
        self.after
            .holes()
            .into_iter()
            .filter(|h| !bound.contains(h))
            .map(|h| h.0)
            .collect()
    }

    /// Alpha-equivalence with one renaming shared by both sides.
    pub fn alpha_eq(&self, other: &EditPattern) -> bool {
        let mut fwd = BTreeMap::new();
        let mut back = BTreeMap::new();
        alpha(&self.before, &other.before, &mut fwd, &mut back)
            && alpha(&self.after, &other.after, &mut fwd, &mut back)
    }

    /// Whether some match of the before side on `before`, instantiated into
    /// the after side, reproduces `after`.
    pub fn explains(&self, before: &Node, after: &Node) -> bool {
        match_all(&self.before, before)
            .iter()
            .any(|b| instantiate(&self.after, b).is_ok_and(|got| got == *after))
    }

    /// Rename holes to `h1`, `h2`, ... in order of first occurrence (before side first).
    pub fn canonicalize(&mut self) {
        let mut names: BTreeMap<String, String> = BTreeMap::new();
        let mut rename = |n: &mut Node| {
            fn go(n: &mut Node, names: &mut BTreeMap<String, String>) {
                if n.is_hole() {
                    let next = format!("h{}", names.len() + 1);
                    let id = n.label_str().to_string();
                    let new = names.entry(id).or_insert(next).clone();
                    n.label = Some(new);
                }
                for c in &mut n.children {
                    go(c, names);
                }
            }
            go(n, &mut names);
        };
        rename(&mut self.before);
        rename(&mut self.after);
    }

    /// Serialized form of both sides, used for deterministic tie-breaks.
    pub fn key(&self) -> String {
        format!("{} -> {}", sexpr::serialize(&self.before), sexpr::serialize(&self.after))
    }
}

impl fmt::Display for EditPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LearnError {
    #[error("edit anchors have different kinds ({0} vs {1})")]
    Incompatible(String, String),
    #[error("generalization leaves hole {0} free on the after side")]
    FreeHole(String),
    #[error("hole {0} would be free after reversal")]
    FreeHoleOnReversal(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnConfig {
    pub cluster_threshold: f64,
    pub min_support: usize,
    pub max_patterns: usize,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig {
            cluster_threshold: 0.4,
            min_support: 3,
            max_patterns: 50,
        }
    }
}

enum Key<'a> {
    One(&'a Node, &'a Node),
    Many(&'a [Node], &'a [Node]),
}

impl Key<'_> {
    fn text(&self) -> String {
        let list = |xs: &[Node]| xs.iter().map(sexpr::serialize).collect::<Vec<_>>().join(" ");
        match self {
            Key::One(x, y) => format!("1 {} | {}", sexpr::serialize(x), sexpr::serialize(y)),
            Key::Many(xs, ys) => format!("* {} | {}", list(xs), list(ys)),
        }
    }
}

struct Au {
    table: BTreeMap<String, String>,
    before_holes: Vec<String>,
    in_after: bool,
    free: Option<String>,
}

fn has_seq(xs: &[Node]) -> bool {
    xs.iter().any(|n| n.hole_sort() == Some(Sort::Seq))
}

fn sort_for(x: &Node, y: &Node) -> Option<Sort> {
    let of = |n: &Node| -> Option<Sort> {
        if let Some(s) = n.hole_sort() {
            return Some(s);
        }
        match (n.kind, n.kind.class()) {
            (Kind::Absent, _) => None,
            (_, Class::Stmt) => Some(Sort::Stmt),
            (k, _) if k.is_list() => Some(Sort::Seq),
            _ => Some(Sort::Expr),
        }
    };
    match (of(x), of(y)) {
        (Some(Sort::Seq), _) | (_, Some(Sort::Seq)) => None,
        (Some(a), Some(b)) if a == b => Some(a),
        (Some(a), None) | (None, Some(a)) => Some(a),
        _ => None,
    }
}

impl Au {
    fn hole(&mut self, key: Key, sort: Sort) -> Node {
        let next = format!("g{}", self.table.len() + 1);
        let id = self.table.entry(key.text()).or_insert(next).clone();
        if self.in_after {
            if !self.before_holes.contains(&id) && self.free.is_none() {
                self.free = Some(id.clone());
            }
        } else {
            self.before_holes.push(id.clone());
        }
        Node::hole(sort, id)
    }

    fn node(&mut self, x: &Node, y: &Node) -> Result<Node, LearnError> {
        if x == y && !x.has_holes() {
            return Ok(x.clone());
        }
        if x.is_hole() || y.is_hole() || x.kind != y.kind || x.label != y.label {
            return match sort_for(x, y) {
                Some(sort) => Ok(self.hole(Key::One(x, y), sort)),
                None => Err(LearnError::Incompatible(x.kind.name().into(), y.kind.name().into())),
            };
        }
        if x.kind.is_list()
            && (x.children.len() != y.children.len() || has_seq(&x.children) || has_seq(&y.children))
        {
            if x.kind.class() == Class::Stmt {
                return Ok(self.hole(Key::One(x, y), Sort::Stmt));
            }
            let s = self.seq(&x.children, &y.children);
            return Ok(Node::new(x.kind, s));
        }
        let children = x
            .children
            .iter()
            .zip(&y.children)
            .map(|(a, b)| self.node(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Node {
            kind: x.kind,
            label: x.label.clone(),
            children,
            span: None,
            guard: None,
        })
    }

    /// Generalize two child runs: equal runs stay, equal-length runs go
    /// elementwise, anything else becomes one Seq hole.
    fn seq(&mut self, xs: &[Node], ys: &[Node]) -> Vec<Node> {
        if xs == ys && !has_seq(xs) {
            return xs.to_vec();
        }
        if xs.len() == ys.len() && !has_seq(xs) && !has_seq(ys) {
            let saved = (self.table.clone(), self.before_holes.clone(), self.free.clone());
            let out: Result<Vec<Node>, _> = xs.iter().zip(ys).map(|(a, b)| self.node(a, b)).collect();
            match out {
                Ok(v) => return v,
                Err(_) => {
                    (self.table, self.before_holes, self.free) = saved;
                }
            }
        }
        vec![self.hole(Key::Many(xs, ys), Sort::Seq)]
    }
}

/// Common prefix and suffix lengths of a list edit's two sides.
fn split(b: &[Node], a: &[Node]) -> (usize, usize) {
    let p = b.iter().zip(a).take_while(|(x, y)| x == y).count();
    let max_s = b.len().min(a.len()) - p;
    let s = b
        .iter()
        .rev()
        .zip(a.iter().rev())
        .take(max_s)
        .take_while(|(x, y)| x == y)
        .count();
    (p, s)
}

fn list_edit(au: &mut Au, p1: &EditPattern, p2: &EditPattern) -> (Node, Node) {
    let (b1, a1, b2, a2) = (
        &p1.before.children,
        &p1.after.children,
        &p2.before.children,
        &p2.after.children,
    );
    let (pre1, suf1) = split(b1, a1);
    let (pre2, suf2) = split(b2, a2);
    let ctx = |au: &mut Au, x: &[Node], y: &[Node]| -> Vec<Node> {
        if x == y {
            x.to_vec()
        } else {
            vec![au.hole(Key::Many(x, y), Sort::Seq)]
        }
    };
    let prefix = ctx(au, &b1[..pre1], &b2[..pre2]);
    let suffix = ctx(au, &b1[b1.len() - suf1..], &b2[b2.len() - suf2..]);
    let mid_b = au.seq(&b1[pre1..b1.len() - suf1], &b2[pre2..b2.len() - suf2]);
    au.in_after = true;
    let mid_a = au.seq(&a1[pre1..a1.len() - suf1], &a2[pre2..a2.len() - suf2]);
    let build = |mid: Vec<Node>| {
        let mut cs = prefix.clone();
        cs.extend(mid);
        cs.extend(suffix.iter().cloned());
        Node::new(p1.before.kind, cs)
    };
    (build(mid_b), build(mid_a))
}

/// Least general generalization of two edit patterns, sharing holes between
/// sides so that code moved by the edit is transported.
pub fn anti_unify(p1: &EditPattern, p2: &EditPattern) -> Result<EditPattern, LearnError> {
    let (k1, k2) = (root_kind(&p1.before), root_kind(&p2.before));
    if k1 != k2 {
        return Err(LearnError::Incompatible(k1.name().into(), k2.name().into()));
    }
    let mut au = Au {
        table: BTreeMap::new(),
        before_holes: Vec::new(),
        in_after: false,
        free: None,
    };
    let (before, after) = if p1.before.kind.is_list()
        && p1.after.kind == p1.before.kind
        && p2.after.kind == p2.before.kind
        && p1.before.label == p2.before.label
    {
        list_edit(&mut au, p1, p2)
    } else {
        let before = au.node(&p1.before, &p2.before)?;
        au.in_after = true;
        let after = au.node(&p1.after, &p2.after)?;
        (before, after)
    };
    if let Some(h) = au.free {
        return Err(LearnError::FreeHole(h));
    }
    let before = if before.is_hole() { root_guard(before, k1, &after) } else { before };
    let mut out = EditPattern {
        name: String::new(),
        before,
        after,
        support: p1.support + p2.support,
        provenance: merge_provenance(&p1.provenance, &p2.provenance),
        direction: p1.direction,
    };
    out.canonicalize();
    Ok(out)
}

/// Kind of a before side, looking through a root hole's single-kind guard.
fn root_kind(before: &Node) -> Kind {
    match before.guard.as_deref() {
        Some(g) if before.is_hole() && g.kinds.len() == 1 => g.kinds[0],
        _ => before.kind,
    }
}

/// A root hole keeps the members' kind, and a concrete after side of that
/// kind is excluded so the pattern never rewrites a node into itself.
fn root_guard(hole: Node, kind: Kind, after: &Node) -> Node {
    let mut exclude = Vec::new();
    if after.kind == kind && after.children.is_empty() && !after.has_holes() {
        exclude.extend(after.label.clone());
    }
    Node::guarded_hole(
        hole.hole_sort().unwrap_or(Sort::Expr),
        hole.label_str(),
        Guard {
            kinds: vec![kind],
            exclude,
        },
    )
}

fn tag(p: &str) -> &str {
    p.split(':').next().unwrap_or(p)
}

fn merge_provenance(a: &str, b: &str) -> String {
    let mut tags: Vec<&str> = a.split('+').chain(b.split('+')).map(tag).filter(|t| !t.is_empty()).collect();
    tags.sort_unstable();
    tags.dedup();
    tags.join("+")
}

/// Smallest cost reported for inputs that differ.
pub const MIN_NONZERO_COST: f64 = 1e-6;

/// Fraction of the smaller input's structure lost by generalizing the pair:
/// `1 - |g| / min(|p1|, |p2|)` with holes counted as one node and both sides
/// counted. Incompatible pairs cost 1.
pub fn generalization_cost(p1: &EditPattern, p2: &EditPattern) -> f64 {
    match anti_unify(p1, p2) {
        Ok(g) => cost_of(&g, p1, p2),
        Err(_) => 1.0,
    }
}

fn cost_of(g: &EditPattern, p1: &EditPattern, p2: &EditPattern) -> f64 {
    let identical = p1.before == p2.before && p1.after == p2.after;
    if identical {
        return 0.0;
    }
    let denom = p1.size().min(p2.size()) as f64;
    let raw = 1.0 - g.size() as f64 / denom;
    raw.clamp(MIN_NONZERO_COST, 1.0)
}

/// A learned cluster with the indices of its member edits.
#[derive(Clone, Debug)]
pub struct Cluster {
    pub pattern: EditPattern,
    pub members: Vec<usize>,
    pub mean_cost: f64,
}

struct Candidate {
    cost: f64,
    merged: Option<EditPattern>,
    key: String,
}

fn candidate(a: &EditPattern, b: &EditPattern) -> Candidate {
    match anti_unify(a, b) {
        Ok(g) => Candidate {
            cost: cost_of(&g, a, b),
            key: g.key(),
            merged: Some(g),
        },
        Err(_) => Candidate {
            cost: 1.0,
            merged: None,
            key: String::new(),
        },
    }
}

/// Agglomerative clustering of `edits`, returning clusters ranked by support.
pub fn cluster_detailed(edits: &[ConcreteEdit], cfg: &LearnConfig) -> Vec<Cluster> {
    let singles: Vec<EditPattern> = edits.iter().map(EditPattern::from_edit).collect();
    let mut live: Vec<Option<(EditPattern, Vec<usize>)>> = singles
        .iter()
        .enumerate()
        .map(|(i, p)| Some((p.clone(), vec![i])))
        .collect();
    let n = live.len();
    let mut cands: BTreeMap<(usize, usize), Candidate> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            cands.insert((i, j), candidate(&singles[i], &singles[j]));
        }
    }
    loop {
        let mut best: Option<((usize, usize), &Candidate, usize)> = None;
        for (&(i, j), c) in &cands {
            if c.merged.is_none() || c.cost > cfg.cluster_threshold {
                continue;
            }
            let support = c.merged.as_ref().map_or(0, |m| m.support);
            let better = match best {
                None => true,
                Some((_, b, bs)) => {
                    c.cost < b.cost
                        || (c.cost == b.cost && (support > bs || (support == bs && c.key < b.key)))
                }
            };
            if better {
                best = Some(((i, j), c, support));
            }
        }
        let Some(((i, j), _, _)) = best else {
            break;
        };
        let merged = cands.get(&(i, j)).and_then(|c| c.merged.clone()).expect("merged");
        let mut members = live[i].as_ref().expect("live").1.clone();
        members.extend(live[j].as_ref().expect("live").1.iter().copied());
        let sound = members
            .iter()
            .all(|&m| merged.explains(&singles[m].before, &singles[m].after));
        if !sound {
            let c = cands.get_mut(&(i, j)).expect("candidate");
            c.merged = None;
            c.cost = 1.0;
            continue;
        }
        members.sort_unstable();
        live[j] = None;
        live[i] = Some((merged, members));
        cands.retain(|&(a, b), _| a != j && b != j && a != i && b != i);
        let pi = live[i].as_ref().expect("live").0.clone();
        for (k, slot) in live.iter().enumerate() {
            if k == i {
                continue;
            }
            if let Some((pk, _)) = slot {
                let key = (i.min(k), i.max(k));
                let c = if k < i { candidate(pk, &pi) } else { candidate(&pi, pk) };
                cands.insert(key, c);
            }
        }
    }
    let mut out: Vec<Cluster> = live
        .into_iter()
        .flatten()
        .filter(|(_, members)| members.len() >= cfg.min_support)
        .map(|(mut p, members)| {
            p.support = members.len();
            let mean_cost = members
                .iter()
                .map(|&m| generalization_cost(&p, &singles[m]))
                .sum::<f64>()
                / members.len() as f64;
            Cluster {
                pattern: p,
                members,
                mean_cost,
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.pattern
            .support
            .cmp(&a.pattern.support)
            .then(a.mean_cost.total_cmp(&b.mean_cost))
            .then_with(|| a.pattern.key().cmp(&b.pattern.key()))
    });
    out.truncate(cfg.max_patterns);
    for (rank, c) in out.iter_mut().enumerate() {
        c.pattern.name = format!("LEARNED_{}", rank + 1);
    }
    out
}

/// Concrete edits of each `(name, before, after)` pair, with the pair name as
/// provenance.
pub fn pair_edits<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a Node, &'a Node)>) -> Vec<ConcreteEdit> {
    let mut out = Vec::new();
    for (name, before, after) in pairs {
        for mut e in crate::diff::diff(before, after) {
            e.provenance = name.to_string();
            out.push(e);
        }
    }
    out
}

/// Ranked patterns learned from `edits`.
pub fn cluster(edits: &[ConcreteEdit], cfg: &LearnConfig) -> Vec<EditPattern> {
    cluster_detailed(edits, cfg).into_iter().map(|c| c.pattern).collect()
}

/// Remove holes named in `drop` from list positions.
fn drop_holes(n: &Node, drop: &[String]) -> Result<Node, LearnError> {
    let mut children = Vec::with_capacity(n.children.len());
    for c in &n.children {
        if c.is_hole() && drop.iter().any(|d| d == c.label_str()) {
            if n.kind.is_list() {
                continue;
            }
            return Err(LearnError::FreeHoleOnReversal(c.label_str().to_string()));
        }
        children.push(drop_holes(c, drop)?);
    }
    Ok(Node {
        kind: n.kind,
        label: n.label.clone(),
        children,
        span: n.span,
        guard: n.guard.clone(),
    })
}

/// Swap sides and flip the direction. Holes only on the old before side are
/// dropped when they sit in list positions and the old after side is hole-free.
pub fn reverse(p: &EditPattern) -> Result<EditPattern, LearnError> {
    let after_holes: Vec<String> = p.after.holes().into_iter().map(|h| h.0).collect();
    let only_before: Vec<String> = p
        .before
        .holes()
        .into_iter()
        .map(|h| h.0)
        .filter(|h| !after_holes.contains(h))
        .collect();
    if let Some(h) = only_before.first() {
        if !after_holes.is_empty() {
            return Err(LearnError::FreeHoleOnReversal(h.clone()));
        }
    }
    let new_after = if only_before.is_empty() {
        p.before.clone()
    } else {
        drop_holes(&p.before, &only_before)?
    };
    Ok(EditPattern {
        name: p.name.clone(),
        before: p.after.clone(),
        after: new_after,
        support: p.support,
        provenance: p.provenance.clone(),
        direction: p.direction.flip(),
    })
}

/// Encode patterns as `.mpat` text.
pub fn encode_mpat(patterns: &[EditPattern]) -> String {
    let mut out = String::new();
    for p in patterns {
        out.push_str("(pattern\n");
        out.push_str(&format!("  (name {})\n", quote(&p.name)));
        out.push_str(&format!("  (direction {})\n", p.direction.name()));
        out.push_str(&format!("  (provenance {})\n", quote(&p.provenance)));
        out.push_str(&format!("  (support {})\n", p.support));
        out.push_str(&format!("  (before {})\n", sexpr::serialize(&p.before)));
        out.push_str(&format!("  (after {}))\n", sexpr::serialize(&p.after)));
    }
    out
}

/// Decode `.mpat` text.
pub fn decode_mpat(src: &str) -> Result<Vec<EditPattern>, SexprError> {
    let err = |at: usize, m: &str| {
        let (line, col) = sexpr::line_col(src, at);
        SexprError {
            line,
            col,
            message: m.to_string(),
        }
    };
    let mut out = Vec::new();
    for rec in sexpr::read_all(src)? {
        let Sexp::List(items, at) = &rec else {
            return Err(err(rec.offset(), "expected (pattern ...)"));
        };
        if items.first().and_then(Sexp::as_atom) != Some("pattern") {
            return Err(err(*at, "expected (pattern ...)"));
        }
        let mut fields: BTreeMap<&str, &Sexp> = BTreeMap::new();
        for f in &items[1..] {
            let Sexp::List(kv, fat) = f else {
                return Err(err(f.offset(), "expected (field value)"));
            };
            let (Some(k), Some(v), 2) = (kv.first().and_then(Sexp::as_atom), kv.get(1), kv.len()) else {
                return Err(err(*fat, "expected (field value)"));
            };
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| err(*at, &format!("missing field {k}")));
        let text = |k: &str| -> Result<String, SexprError> {
            let v = get(k)?;
            v.as_text().map(str::to_string).ok_or_else(|| err(v.offset(), &format!("{k} must be text")))
        };
        let direction = Direction::from_name(&text("direction")?)
            .ok_or_else(|| err(*at, "direction must be fixing or introducing"))?;
        let support: usize = text("support")?
            .parse()
            .map_err(|_| err(*at, "support must be a count"))?;
        let before = sexpr::to_node(get("before")?, src)?;
        let after = sexpr::to_node(get("after")?, src)?;
        let p = EditPattern {
            name: text("name")?,
            before,
            after,
            support,
            provenance: text("provenance")?,
            direction,
        };
        if p.support == 0 {
            return Err(err(*at, "support must be at least 1"));
        }
        if p.before == p.after {
            return Err(err(*at, "before and after are identical"));
        }
        out.push(p);
    }
    Ok(out)
}

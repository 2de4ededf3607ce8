//! Mutant generation: site selection, application, instrumentation and
//! bundling into records.
//!
//! Instrumentation marks the mutated code so a test run can tell whether
//! control reached it. Expressions are wrapped as `__mut(id, e)`; deleted
//! statements become `__mut_visit(id);`; other statement-level replacements
//! gain a leading `__mut_visit(id);`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::glob;
use crate::lang;
use crate::learn::EditPattern;
use crate::matching::{self, Binding, InstantiateError};
use crate::tree::{Class, Kind, Node, Path};

pub const MUT: &str = "__mut";
pub const MUT_VISIT: &str = "__mut_visit";

/// Callee names whose arguments are never mutated.
pub fn default_arid() -> Vec<String> {
    ["log", "logger.*", MUT, MUT_VISIT].iter().map(|s| s.to_string()).collect()
}

/// One place where a pattern matches, with the binding that made it match.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Site {
    pub path: Path,
    pub binding: Binding,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutationTarget {
    pub file: String,
    /// Inclusive 1-based line intervals; `None` makes the whole file eligible.
    pub line_ranges: Option<Vec<(usize, usize)>>,
    pub timestamp: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validity {
    Valid,
    SyntaxInvalid,
}

impl Validity {
    pub fn name(self) -> &'static str {
        match self {
            Validity::Valid => "valid",
            Validity::SyntaxInvalid => "syntax_invalid",
        }
    }

    pub fn from_name(s: &str) -> Option<Validity> {
        match s {
            "valid" => Some(Validity::Valid),
            "syntax_invalid" => Some(Validity::SyntaxInvalid),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MutantRecord {
    pub mutant_id: u64,
    pub operator: String,
    pub file: String,
    /// Byte offsets of the mutated site in the original source.
    pub site_span: (usize, usize),
    pub original_snippet: String,
    pub mutated_snippet: String,
    pub mutated_source: String,
    pub diff_text: String,
    pub timestamp: u32,
    pub validity: Validity,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MutagenError {
    #[error("no instrumentation rule for the site at {0:?}")]
    UnsupportedSiteSort(Path),
    #[error(transparent)]
    Instantiate(#[from] InstantiateError),
    #[error("cannot print mutant: {0}")]
    Print(String),
}

/// Callee name as matched against the arid list: `m` for unqualified calls,
/// `r.m` when the receiver is a plain name.
pub fn callee_name(call: &Node) -> String {
    let m = call.children[1].label_str();
    match call.children[0].kind {
        Kind::Absent => m.to_string(),
        Kind::Ident => alloc::format!("{}.{}", call.children[0].label_str(), m),
        Kind::This => alloc::format!("this.{m}"),
        _ => alloc::format!("*.{m}"),
    }
}

fn is_arid_call(n: &Node, arid: &[String]) -> bool {
    n.kind == Kind::Call && {
        let name = callee_name(n);
        arid.iter().any(|a| glob::matches_ignore_case(a, &name))
    }
}

/// Whether the node at `path` is an arid site: it or an ancestor is a call
/// whose callee matches `arid`, it is an expression statement of such a call,
/// or it lies inside an annotation.
pub fn is_arid(tree: &Node, path: &[usize], arid: &[String]) -> bool {
    let mut node = tree;
    if is_arid_call(node, arid) || node.kind == Kind::Annotation {
        return true;
    }
    for &i in path {
        node = &node.children[i];
        if is_arid_call(node, arid) || node.kind == Kind::Annotation {
            return true;
        }
    }
    node.kind == Kind::ExprStmt && is_arid_call(&node.children[0], arid)
}

fn in_test_method(tree: &Node, path: &[usize]) -> bool {
    if tree.kind != Kind::CompilationUnit || path.len() < 3 {
        return false;
    }
    let Some(m) = tree.get(&path[..3]) else {
        return false;
    };
    m.kind == Kind::MethodDecl
        && m.children[2].label_str().starts_with("test")
        && m.children[1].label_str() == "boolean"
        && m.children[3].children.is_empty()
}

fn is_case_label(path: &[usize], tree: &Node) -> bool {
    match path.split_last() {
        Some((&0, parent)) => tree.get(parent).is_some_and(|p| p.kind == Kind::Case),
        _ => false,
    }
}

/// Restricts sites to nodes whose lines intersect a set of line intervals.
pub struct LineFilter<'a> {
    line_starts: Vec<usize>,
    ranges: &'a [(usize, usize)],
}

impl<'a> LineFilter<'a> {
    /// `ranges` are inclusive 1-based line intervals of `src`.
    pub fn new(src: &str, ranges: &'a [(usize, usize)]) -> LineFilter<'a> {
        let mut line_starts = vec![0];
        line_starts.extend(src.match_indices('\n').map(|(i, _)| i + 1));
        LineFilter { line_starts, ranges }
    }

    fn line(&self, offset: usize) -> usize {
        self.line_starts.partition_point(|&s| s <= offset)
    }

    fn admits(&self, node: &Node) -> bool {
        let Some(s) = node.span else {
            return false;
        };
        let (a, b) = (self.line(s.start), self.line(s.end.saturating_sub(1).max(s.start)));
        self.ranges.iter().any(|&(lo, hi)| a <= hi && lo <= b)
    }
}

/// All sites of `pattern` in `tree` in pre-order, skipping arid sites, test
/// methods and case labels, restricted to `filter`'s lines when given.
pub fn find_sites(
    tree: &Node,
    pattern: &EditPattern,
    filter: Option<&LineFilter<'_>>,
    arid: &[String],
) -> Vec<Site> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(tree, tree, pattern, filter, arid, &mut path, &mut out);
    out
}

fn walk(
    root: &Node,
    node: &Node,
    pattern: &EditPattern,
    filter: Option<&LineFilter<'_>>,
    arid: &[String],
    path: &mut Path,
    out: &mut Vec<Site>,
) {
    if filter.is_some_and(|f| !f.admits(node)) {
        return;
    }
    let bindings = matching::match_all(&pattern.before, node);
    if !bindings.is_empty()
        && !in_test_method(root, path)
        && !is_case_label(path, root)
        && !is_arid(root, path, arid)
    {
        for binding in bindings {
            out.push(Site {
                path: path.clone(),
                binding,
            });
        }
    }
    for (i, c) in node.children.iter().enumerate() {
        path.push(i);
        walk(root, c, pattern, filter, arid, path, out);
        path.pop();
    }
}

/// The pattern's after side instantiated at `site`.
pub fn replacement(pattern: &EditPattern, site: &Site) -> Result<Node, InstantiateError> {
    matching::instantiate(&pattern.after, &site.binding)
}

/// `tree` with the site replaced by its instantiated after side.
pub fn apply(tree: &Node, pattern: &EditPattern, site: &Site) -> Result<Node, InstantiateError> {
    let mut out = tree.clone();
    *out.get_mut(&site.path).expect("site path") = replacement(pattern, site)?;
    Ok(out)
}

fn int_lit(id: u64) -> Node {
    Node::atom(Kind::IntLit, id.to_string())
}

/// `__mut(id, e)`.
pub fn mut_call(id: u64, e: Node) -> Node {
    Node::new(
        Kind::Call,
        vec![Node::absent(), Node::ident(MUT), Node::new(Kind::Args, vec![int_lit(id), e])],
    )
}

/// `__mut_visit(id);`.
pub fn visit_stmt(id: u64) -> Node {
    Node::new(
        Kind::ExprStmt,
        vec![Node::new(
            Kind::Call,
            vec![Node::absent(), Node::ident(MUT_VISIT), Node::new(Kind::Args, vec![int_lit(id)])],
        )],
    )
}

fn is_stmt_list(k: Kind) -> bool {
    matches!(k, Kind::Block | Kind::CaseBody)
}

/// Whether an expression at child `i` of a `parent` node may be wrapped in a call.
fn wrappable(parent: Kind, i: usize) -> bool {
    match parent {
        Kind::Call | Kind::FieldAccess => i == 0,
        Kind::Assign | Kind::Cast => i == 1,
        Kind::Binary | Kind::Unary | Kind::Ternary | Kind::Args => true,
        Kind::ExprStmt | Kind::Return | Kind::If | Kind::While | Kind::Switch => i == 0,
        Kind::For => i == 1 || i == 2,
        Kind::VarDecl | Kind::FieldDecl => i == 3,
        _ => false,
    }
}

/// Descend from `path` while `before` and `after` differ in exactly one child
/// of otherwise identical nodes.
fn focus(before: &Node, after: &Node, mut path: Path) -> Path {
    let (mut b, mut a) = (before.get(&path).unwrap(), after.get(&path).unwrap());
    while b.kind == a.kind && b.label == a.label && b.children.len() == a.children.len() {
        let mut diffs = (0..b.children.len()).filter(|&i| b.children[i] != a.children[i]);
        let (Some(i), None) = (diffs.next(), diffs.next()) else {
            break;
        };
        path.push(i);
        b = &b.children[i];
        a = &a.children[i];
    }
    path
}

/// Insert a visit before the nearest enclosing statement that sits in a
/// statement list, or at the top of the enclosing method body.
fn visit_before_enclosing(out: &mut Node, path: &[usize], id: u64) -> Result<(), MutagenError> {
    for k in (0..path.len()).rev() {
        let parent = out.get(&path[..k]).unwrap();
        if is_stmt_list(parent.kind) {
            let parent = out.get_mut(&path[..k]).unwrap();
            parent.children.insert(path[k], visit_stmt(id));
            return Ok(());
        }
        if parent.kind == Kind::MethodDecl {
            let body = &mut out.get_mut(&path[..k]).unwrap().children[4];
            if body.kind != Kind::Block {
                break;
            }
            body.children.insert(0, visit_stmt(id));
            return Ok(());
        }
    }
    Err(MutagenError::UnsupportedSiteSort(path.to_vec()))
}

/// Mutate `tree` at `path` with `replacement` and add instrumentation for
/// `mutant_id` around the changed code.
pub fn instrument(tree: &Node, path: &[usize], replacement: &Node, mutant_id: u64) -> Result<Node, MutagenError> {
    let id = mutant_id;
    let mut mutated = tree.clone();
    *mutated.get_mut(path).ok_or_else(|| MutagenError::UnsupportedSiteSort(path.to_vec()))? = replacement.clone();
    let mut fp = focus(tree, &mutated, path.to_vec());
    loop {
        let b = tree.get(&fp).unwrap();
        let a = mutated.get(&fp).unwrap().clone();
        let parent = fp.split_last().map(|(&i, p)| (tree.get(p).unwrap().kind, i));
        let mut out = mutated.clone();

        if b.kind == Kind::Cases && a.kind == Kind::Cases {
            let scrutinee = fp[..fp.len() - 1].iter().copied().chain([0]).collect::<Path>();
            let slot = out.get_mut(&scrutinee).unwrap();
            *slot = mut_call(id, slot.clone());
            return Ok(out);
        }
        if is_stmt_list(b.kind) && a.kind == b.kind {
            let (bc, ac) = (&b.children, &a.children);
            let mut pre = 0;
            while pre < bc.len() && pre < ac.len() && bc[pre] == ac[pre] {
                pre += 1;
            }
            let mut suf = 0;
            while suf < bc.len() - pre && suf < ac.len() - pre && bc[bc.len() - 1 - suf] == ac[ac.len() - 1 - suf] {
                suf += 1;
            }
            let children = if ac.iter().all(|c| c.kind == Kind::Empty) {
                vec![visit_stmt(id)]
            } else {
                let mid = &ac[pre..ac.len() - suf];
                let mut v = ac[..pre].to_vec();
                v.push(visit_stmt(id));
                if !mid.iter().all(|c| c.kind == Kind::Empty) {
                    v.extend(mid.iter().cloned());
                }
                v.extend(ac[ac.len() - suf..].iter().cloned());
                v
            };
            out.get_mut(&fp).unwrap().children = children;
            return Ok(out);
        }
        let expr_like = |n: &Node| n.kind.class() == Class::Expr;
        if expr_like(b) && expr_like(&a) && parent.is_some_and(|(k, i)| wrappable(k, i)) {
            *out.get_mut(&fp).unwrap() = mut_call(id, a);
            return Ok(out);
        }
        if b.kind.class() == Class::Stmt || a.kind.class() == Class::Stmt {
            if a.kind == Kind::Empty {
                *out.get_mut(&fp).unwrap() = visit_stmt(id);
                return Ok(out);
            }
            if let Some((pk, i)) = parent {
                if is_stmt_list(pk) {
                    out.get_mut(&fp[..fp.len() - 1]).unwrap().children.insert(i, visit_stmt(id));
                    return Ok(out);
                }
            }
            if a.kind != Kind::VarDecl && parent.is_some() {
                let wrapped = match a.kind {
                    Kind::Block => {
                        let mut v = vec![visit_stmt(id)];
                        v.extend(a.children);
                        Node::new(Kind::Block, v)
                    }
                    _ => Node::new(Kind::Block, vec![visit_stmt(id), a]),
                };
                *out.get_mut(&fp).unwrap() = wrapped;
                return Ok(out);
            }
        }
        match parent {
            Some((pk, _)) if pk.class() == Class::Expr => {
                fp.pop();
            }
            _ => {
                visit_before_enclosing(&mut out, &fp, id)?;
                return Ok(out);
            }
        }
    }
}

/// Undo instrumentation: `__mut(id, e)` becomes `e` and visit statements are
/// dropped from statement lists and become `;` elsewhere. A statement that
/// was wrapped as `{ __mut_visit(id); s }` comes back as `{ s }`.
pub fn strip_instrumentation(node: &Node) -> Node {
    if node.kind == Kind::Call && node.children[0].kind == Kind::Absent && node.children[1].label_str() == MUT {
        if let Some(e) = node.children[2].children.get(1) {
            return strip_instrumentation(e);
        }
    }
    if is_visit(node) {
        return Node::leaf(Kind::Empty);
    }
    let mut out = node.clone();
    if is_stmt_list(node.kind) {
        out.children = node.children.iter().filter(|c| !is_visit(c)).map(strip_instrumentation).collect();
    } else {
        out.children = node.children.iter().map(strip_instrumentation).collect();
    }
    out
}

fn is_visit(n: &Node) -> bool {
    n.kind == Kind::ExprStmt
        && n.children[0].kind == Kind::Call
        && n.children[0].children[0].kind == Kind::Absent
        && n.children[0].children[1].label_str() == MUT_VISIT
}

/// Instrumentation ids present in `tree`.
pub fn instrumentation_ids(tree: &Node) -> Vec<u64> {
    let mut ids = Vec::new();
    tree.visit(&mut |n, _| {
        if n.kind == Kind::Call
            && n.children[0].kind == Kind::Absent
            && matches!(n.children[1].label_str(), MUT | MUT_VISIT)
        {
            if let Some(id) = n.children[2].children.first().and_then(|a| a.label_str().parse().ok()) {
                ids.push(id);
            }
        }
    });
    ids
}

/// Renders a unified diff between two versions of a file.
pub trait DiffRenderer {
    fn render(&self, file: &str, old: &str, new: &str) -> String;
}

impl<F: Fn(&str, &str, &str) -> String> DiffRenderer for F {
    fn render(&self, file: &str, old: &str, new: &str) -> String {
        self(file, old, new)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerateConfig {
    pub seed: u64,
    /// Shuffle the operator order per target.
    pub shuffle: bool,
    pub max_per_target: usize,
    pub arid: Vec<String>,
    /// Id of the first emitted mutant.
    pub first_id: u64,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig {
            seed: 0,
            shuffle: false,
            max_per_target: 1,
            arid: default_arid(),
            first_id: 1,
        }
    }
}

/// A mutant before its id is assigned.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub operator: String,
    pub path: Path,
    pub site_span: (usize, usize),
    pub original_snippet: String,
    pub mutated_snippet: String,
    replacement: Node,
}

/// Operator order for target number `index` under `cfg`.
pub fn operator_order(n: usize, index: usize, cfg: &GenerateConfig) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    if cfg.shuffle {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(index as u64);
        order.shuffle(&mut rng);
    }
    order
}

/// Candidates for one target: walk the operators in order and take sites
/// until `max_per_target` are collected.
pub fn candidates(
    tree: &Node,
    src: &str,
    target: &MutationTarget,
    index: usize,
    operators: &[EditPattern],
    cfg: &GenerateConfig,
) -> Vec<Candidate> {
    let mut out = Vec::new();
    let filter = target.line_ranges.as_deref().map(|ranges| LineFilter::new(src, ranges));
    for oi in operator_order(operators.len(), index, cfg) {
        if out.len() >= cfg.max_per_target {
            break;
        }
        let op = &operators[oi];
        for site in find_sites(tree, op, filter.as_ref(), &cfg.arid) {
            if out.len() >= cfg.max_per_target {
                break;
            }
            let Ok(rep) = replacement(op, &site) else {
                continue;
            };
            let node = tree.get(&site.path).unwrap();
            out.push(Candidate {
                operator: op.name.clone(),
                site_span: node.span.map_or((0, 0), |s| (s.start, s.end)),
                original_snippet: lang::print_pattern(node),
                mutated_snippet: lang::print_pattern(&rep),
                path: site.path,
                replacement: rep,
            });
        }
    }
    out
}

/// Turn a candidate into a record with id `mutant_id`. `original` is the
/// canonical printing of the unmutated file, used as the diff base.
pub fn finish(
    tree: &Node,
    original: &str,
    target: &MutationTarget,
    cand: &Candidate,
    mutant_id: u64,
    diff: &dyn DiffRenderer,
) -> Result<MutantRecord, MutagenError> {
    let inst = instrument(tree, &cand.path, &cand.replacement, mutant_id)?;
    let mutated_source = lang::print(&inst).map_err(|e| MutagenError::Print(e.to_string()))?;
    let validity = match lang::syntax_check(&mutated_source) {
        Ok(()) => Validity::Valid,
        Err(_) => Validity::SyntaxInvalid,
    };
    Ok(MutantRecord {
        mutant_id,
        operator: cand.operator.clone(),
        file: target.file.clone(),
        site_span: cand.site_span,
        original_snippet: cand.original_snippet.clone(),
        mutated_snippet: cand.mutated_snippet.clone(),
        diff_text: diff.render(&target.file, original, &mutated_source),
        mutated_source,
        timestamp: target.timestamp,
        validity,
    })
}

/// Result of a generation run.
#[derive(Clone, Debug, Default)]
pub struct Generated {
    pub records: Vec<MutantRecord>,
    /// `(file, reason)` for targets that could not be processed.
    pub skipped: Vec<(String, String)>,
}

/// Generate mutants for `targets` in order. `load` returns a file's source
/// text. Ids are assigned consecutively from `cfg.first_id` in target order.
pub fn generate(
    targets: &[MutationTarget],
    operators: &[EditPattern],
    cfg: &GenerateConfig,
    load: &mut dyn FnMut(&str) -> Result<String, String>,
    diff: &dyn DiffRenderer,
) -> Generated {
    let mut out = Generated::default();
    let mut next = cfg.first_id;
    let mut parsed: BTreeMap<String, Result<(String, Node, String), String>> = BTreeMap::new();
    for (index, target) in targets.iter().enumerate() {
        let entry = parsed.entry(target.file.clone()).or_insert_with(|| {
            let src = load(&target.file)?;
            let tree = lang::parse(&src).map_err(|e| e.to_string())?;
            let original = lang::print(&tree).expect("parsed trees print");
            Ok((src, tree, original))
        });
        let (src, tree, original) = match entry {
            Ok(v) => v,
            Err(e) => {
                out.skipped.push((target.file.clone(), e.clone()));
                continue;
            }
        };
        for cand in candidates(tree, src, target, index, operators, cfg) {
            match finish(tree, original, target, &cand, next, diff) {
                Ok(r) => out.records.push(r),
                Err(e) => out.skipped.push((target.file.clone(), e.to_string())),
            }
            next += 1;
        }
    }
    out
}


#[cfg(test)]
mod validity {
    use super::*;
    use crate::operators::builtin_operators;

    #[test]
    fn every_site_on_random_programs_checks() {
        let ops = builtin_operators();
        let mut counts = alloc::collections::BTreeMap::new();
        for seed in 0..60 {
            let t = crate::gen::program(seed);
            for p in &ops {
                for (k, site) in find_sites(&t, p, None, &default_arid()).into_iter().enumerate() {
                    let rep = replacement(p, &site).unwrap();
                    let inst = instrument(&t, &site.path, &rep, 1000 + k as u64).unwrap();
                    let text = lang::print(&inst).unwrap();
                    if let Err(e) = lang::syntax_check(&text) {
                        panic!("seed {seed} {}: {e}\n{text}", p.name);
                    }
                    assert_eq!(instrumentation_ids(&lang::parse(&text).unwrap()), [1000 + k as u64]);
                    *counts.entry(p.name.clone()).or_insert(0usize) += 1;
                }
            }
        }
        assert_eq!(counts.len(), ops.len(), "{counts:?}");
    }
}

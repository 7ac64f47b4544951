//! Bisimulation: checking candidate relations, deciding bisimilarity by
//! partition refinement, bisimulation collapse, and a brute-force oracle.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::charts::{reachable_with_map, Chart, Label, VertexId};
use crate::error::{Error as CrateError, Result};

/// Pairs `(v, w)` with `v` a vertex of the left chart and `w` of the right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Relation {
    pub pairs: BTreeSet<(VertexId, VertexId)>,
}

impl Relation {
    pub fn contains(&self, v: VertexId, w: VertexId) -> bool {
        self.pairs.contains(&(v, w))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The graph of a partial function.
    pub fn from_map(map: &[Option<VertexId>]) -> Self {
        let pairs = map.iter().enumerate().filter_map(|(v, w)| w.map(|w| (v, w))).collect();
        Relation { pairs }
    }

    /// Relational composition `self ; other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut by_left: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
        for &(u, w) in &other.pairs {
            by_left.entry(u).or_default().push(w);
        }
        let pairs =
            self.pairs.iter().flat_map(|&(v, u)| by_left.get(&u).into_iter().flatten().map(move |&w| (v, w))).collect();
        Relation { pairs }
    }
}

impl FromIterator<(VertexId, VertexId)> for Relation {
    fn from_iter<I: IntoIterator<Item = (VertexId, VertexId)>>(iter: I) -> Self {
        Relation { pairs: iter.into_iter().collect() }
    }
}

/// Maps every vertex of a chart to its class in the collapse; `None` for
/// vertices unreachable from the start.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QuotientMap {
    pub map: Vec<Option<VertexId>>,
}

impl QuotientMap {
    pub fn get(&self, v: VertexId) -> Option<VertexId> {
        self.map.get(v).copied().flatten()
    }
}

/// Whether the start vertices must be related.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BisimMode {
    /// Bisimulation between charts: non-empty and relating the starts.
    Chart,
    /// Bisimulation between the underlying transition systems.
    Lts,
}

/// Side of a relation a vertex belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// The first clause a candidate relation fails.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum Violation {
    #[error("the relation is empty")]
    Empty,
    #[error("the start vertices ({0}, {1}) are not related")]
    MissingStartPair(VertexId, VertexId),
    #[error("{side:?} vertex {vertex} does not exist")]
    UnknownVertex { side: Side, vertex: VertexId },
    #[error("forth fails at ({}, {}): step -{label}-> {target} is not matched", pair.0, pair.1)]
    Forth { pair: (VertexId, VertexId), label: String, target: VertexId },
    #[error("back fails at ({}, {}): step -{label}-> {target} is not matched", pair.0, pair.1)]
    Back { pair: (VertexId, VertexId), label: String, target: VertexId },
    #[error("termination differs at ({}, {})", pair.0, pair.1)]
    Termination { pair: (VertexId, VertexId) },
}

/// Checks that `r` is a bisimulation between `c1` and `c2`. Pairs are
/// checked in order, and the first failing clause is reported.
pub fn check_relation_bisim<L: Label>(
    c1: &Chart<L>,
    c2: &Chart<L>,
    r: &Relation,
    mode: BisimMode,
) -> std::result::Result<(), Violation> {
    for &(v, w) in &r.pairs {
        if v >= c1.num_vertices() {
            return Err(Violation::UnknownVertex { side: Side::Left, vertex: v });
        }
        if w >= c2.num_vertices() {
            return Err(Violation::UnknownVertex { side: Side::Right, vertex: w });
        }
    }
    if mode == BisimMode::Chart {
        if r.is_empty() {
            return Err(Violation::Empty);
        }
        if !r.contains(c1.start(), c2.start()) {
            return Err(Violation::MissingStartPair(c1.start(), c2.start()));
        }
    }
    for &(v, w) in &r.pairs {
        if c1.is_terminating(v) != c2.is_terminating(w) {
            return Err(Violation::Termination { pair: (v, w) });
        }
        for t in c1.out(v) {
            if !c2.out(w).iter().any(|u| u.label == t.label && r.contains(t.to, u.to)) {
                return Err(Violation::Forth { pair: (v, w), label: t.label.to_string(), target: t.to });
            }
        }
        for u in c2.out(w) {
            if !c1.out(v).iter().any(|t| t.label == u.label && r.contains(t.to, u.to)) {
                return Err(Violation::Back { pair: (v, w), label: u.label.to_string(), target: u.to });
            }
        }
    }
    Ok(())
}

/// Checks that the graph of the partial map `f` is a bisimulation between
/// the charts.
pub fn check_functional_bisim<L: Label>(
    c1: &Chart<L>,
    c2: &Chart<L>,
    f: &[Option<VertexId>],
) -> std::result::Result<(), Violation> {
    if f.len() > c1.num_vertices() {
        return Err(Violation::UnknownVertex { side: Side::Left, vertex: f.len() - 1 });
    }
    check_relation_bisim(c1, c2, &Relation::from_map(f), BisimMode::Chart)
}

/// Coarsest partition of the vertices `0..n` that respects termination and
/// is stable under the transitions; returns a block id per vertex.
///
/// Every block is used as a splitter after its last change, which makes the
/// final partition stable under every block.
fn refine<L: Label>(terminating: &[bool], transitions: &[(VertexId, L, VertexId)]) -> Vec<usize> {
    let n = terminating.len();
    let mut preds: Vec<Vec<(L, VertexId)>> = vec![Vec::new(); n];
    for (from, label, to) in transitions {
        preds[*to].push((label.clone(), *from));
    }

    let mut block_of = vec![0usize; n];
    let mut blocks: Vec<Vec<VertexId>> = Vec::new();
    for flag in [true, false] {
        let members: Vec<_> = (0..n).filter(|&v| terminating[v] == flag).collect();
        if !members.is_empty() {
            for &v in &members {
                block_of[v] = blocks.len();
            }
            blocks.push(members);
        }
    }

    let mut queue: Vec<usize> = (0..blocks.len()).collect();
    while let Some(splitter) = queue.pop() {
        let mut by_label: HashMap<&L, Vec<VertexId>> = HashMap::new();
        for &v in &blocks[splitter] {
            for (label, u) in &preds[v] {
                by_label.entry(label).or_default().push(*u);
            }
        }
        let mut labels: Vec<_> = by_label.into_iter().collect();
        labels.sort_by(|a, b| a.0.cmp(b.0));
        for (_, mut marked) in labels {
            marked.sort_unstable();
            marked.dedup();
            let mut touched: Vec<usize> = marked.iter().map(|&v| block_of[v]).collect();
            touched.sort_unstable();
            touched.dedup();
            let is_marked = |v: &VertexId| marked.binary_search(v).is_ok();
            for b in touched {
                let (inside, outside): (Vec<_>, Vec<_>) = blocks[b].iter().partition(|v| is_marked(v));
                if outside.is_empty() {
                    continue;
                }
                let new_id = blocks.len();
                for &v in &outside {
                    block_of[v] = new_id;
                }
                blocks[b] = inside;
                blocks.push(outside);
                queue.push(b);
                queue.push(new_id);
            }
        }
    }
    block_of
}

fn union_parts<L: Label>(c1: &Chart<L>, c2: &Chart<L>) -> (Vec<bool>, Vec<(VertexId, L, VertexId)>) {
    let n1 = c1.num_vertices();
    let terminating = c1.terminating().iter().chain(c2.terminating()).copied().collect();
    let transitions = c1
        .transitions()
        .iter()
        .map(|t| (t.from, t.label.clone(), t.to))
        .chain(c2.transitions().iter().map(|t| (n1 + t.from, t.label.clone(), n1 + t.to)))
        .collect();
    (terminating, transitions)
}

/// The greatest bisimulation between the two charts, if it relates their
/// start vertices.
pub fn bisimilar<L: Label>(c1: &Chart<L>, c2: &Chart<L>) -> Option<Relation> {
    let r = greatest_bisimulation(c1, c2);
    r.contains(c1.start(), c2.start()).then_some(r)
}

/// The greatest bisimulation between the transition systems of the charts,
/// by partition refinement on their disjoint union.
pub fn greatest_bisimulation<L: Label>(c1: &Chart<L>, c2: &Chart<L>) -> Relation {
    let n1 = c1.num_vertices();
    let (terminating, transitions) = union_parts(c1, c2);
    let block_of = refine(&terminating, &transitions);
    let mut right_by_block: HashMap<usize, Vec<VertexId>> = HashMap::new();
    for w in c2.vertices() {
        right_by_block.entry(block_of[n1 + w]).or_default().push(w);
    }
    c1.vertices().flat_map(|v| right_by_block.get(&block_of[v]).into_iter().flatten().map(move |&w| (v, w))).collect()
}

/// Default combined vertex bound for [`naive_bisim_oracle`].
pub const DEFAULT_ORACLE_CAP: usize = 60;

/// The greatest bisimulation computed by pruning the full relation until
/// forth, back and termination hold everywhere. Quadratic memory and
/// polynomial time of high degree, meant only for cross-checking.
pub fn naive_bisim_oracle<L: Label>(c1: &Chart<L>, c2: &Chart<L>, cap: usize) -> Result<Relation> {
    let (n1, n2) = (c1.num_vertices(), c2.num_vertices());
    if n1 + n2 > cap {
        return Err(CrateError::CapExceeded { size: n1 + n2, cap });
    }
    let mut rel: Vec<Vec<bool>> =
        (0..n1).map(|v| (0..n2).map(|w| c1.is_terminating(v) == c2.is_terminating(w)).collect()).collect();
    loop {
        let mut changed = false;
        for v in 0..n1 {
            for w in 0..n2 {
                if !rel[v][w] {
                    continue;
                }
                let forth = c1.out(v).iter().all(|t| c2.out(w).iter().any(|u| u.label == t.label && rel[t.to][u.to]));
                let back = c2.out(w).iter().all(|u| c1.out(v).iter().any(|t| t.label == u.label && rel[t.to][u.to]));
                if !(forth && back) {
                    rel[v][w] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok((0..n1).flat_map(|v| (0..n2).map(move |w| (v, w))).filter(|&(v, w)| rel[v][w]).collect())
}

/// Quotient of the reachable part of `c` by its greatest bisimulation.
/// Classes are numbered in order of their first reachable member.
pub fn collapse<L: Label>(c: &Chart<L>) -> (Chart<L>, QuotientMap) {
    let (r, to_reachable) = reachable_with_map(c);
    let transitions: Vec<_> = r.transitions().iter().map(|t| (t.from, t.label.clone(), t.to)).collect();
    let block_of = refine(r.terminating(), &transitions);

    let mut class_of_block: HashMap<usize, VertexId> = HashMap::new();
    let mut class = vec![0; r.num_vertices()];
    let mut terminating = Vec::new();
    let mut annotations = Vec::new();
    for v in r.vertices() {
        let next = class_of_block.len();
        let k = *class_of_block.entry(block_of[v]).or_insert(next);
        if k == next {
            terminating.push(r.is_terminating(v));
            annotations.push(r.annotation(v).map(str::to_string));
        }
        class[v] = k;
    }
    let quotient = Chart::with_alphabet(
        r.alphabet().clone(),
        class[r.start()],
        terminating,
        transitions.into_iter().map(|(f, l, t)| (class[f], l, class[t])),
    )
    .expect("classes are vertices of the quotient")
    .with_annotations(annotations);
    let map = to_reachable.iter().map(|v| v.map(|v| class[v])).collect();
    (quotient, QuotientMap { map })
}

/// True iff no two distinct reachable vertices of `c` are bisimilar.
pub fn is_collapsed<L: Label>(c: &Chart<L>) -> bool {
    let (q, map) = collapse(c);
    q.num_vertices() == map.map.iter().flatten().count()
}

/// True iff `f` is a bijection between the vertex sets whose graph is a
/// bisimulation; such a map preserves and reflects every transition, so
/// the charts are isomorphic.
pub fn is_isomorphism<L: Label>(c1: &Chart<L>, c2: &Chart<L>, f: &[Option<VertexId>]) -> bool {
    if c1.num_vertices() != c2.num_vertices() || f.len() != c1.num_vertices() {
        return false;
    }
    let mut hit = vec![false; c2.num_vertices()];
    for w in f {
        match w {
            Some(w) if *w < hit.len() && !hit[*w] => hit[*w] = true,
            _ => return false,
        }
    }
    check_functional_bisim(c1, c2, f).is_ok()
}

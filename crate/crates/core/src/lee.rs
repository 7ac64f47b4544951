//! Loop charts, loop elimination, the LEE decision, and LLEE-witness
//! validation.
//!
//! A loop subchart of a chart is generated by a vertex `v` and a set `U` of
//! its outgoing transitions (the loop entries): it contains the paths that
//! start with a transition in `U` and continue until `v` is reached again.
//! Eliminating a loop subchart removes `U` and everything that becomes
//! unreachable. A chart has the property LEE if some sequence of
//! eliminations leaves a chart without infinite paths.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::charts::{find_cycle_from, reachable, Chart, EntryBodyLabeling, Label, TransitionId, VertexId};
use crate::error::{Error, Result};
use crate::semantics::Marking;

/// Default bound on the number of search states expanded by [`decide_lee`].
pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

/// One elimination: the loop entries `entry_set`, all departing `vertex`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationStep {
    pub vertex: VertexId,
    pub entry_set: Vec<TransitionId>,
}

/// A sequence of eliminations; transition ids refer to the original chart.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationTrace {
    pub steps: Vec<EliminationStep>,
}

/// The three loop-chart conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LoopCondition {
    /// There is an infinite path from the start.
    L1,
    /// Every infinite path returns to the start.
    L2,
    /// Only the start may terminate.
    L3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopViolation {
    pub condition: LoopCondition,
    /// A cycle avoiding the start (L2) or the offending terminating
    /// vertices (L3); empty for L1.
    pub witness: Vec<VertexId>,
}

impl fmt::Display for LoopViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.condition {
            LoopCondition::L1 => f.write_str("L1: no infinite path from the start"),
            LoopCondition::L2 => write!(f, "L2: cycle avoiding the start through {:?}", self.witness),
            LoopCondition::L3 => write!(f, "L3: non-start vertices {:?} terminate", self.witness),
        }
    }
}

/// Conditions checked by the witness validators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessCondition {
    W1,
    W2,
    W3,
    #[serde(rename = "LLEE1")]
    Llee1,
    #[serde(rename = "LLEE2")]
    Llee2,
    #[serde(rename = "LLEE3")]
    Llee3,
    #[serde(rename = "LLEE4")]
    Llee4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessViolation {
    pub condition: WitnessCondition,
    pub vertex: Option<VertexId>,
    pub level: Option<u32>,
    pub detail: String,
}

/// Outcome of validating an entry/body labeling.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub valid: bool,
    pub violations: Vec<WitnessViolation>,
}

impl WitnessReport {
    fn from_violations(violations: Vec<WitnessViolation>) -> Self {
        WitnessReport { valid: violations.is_empty(), violations }
    }
}

/// Result of the LEE decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeeOutcome {
    pub holds: bool,
    /// A successful elimination sequence when `holds`.
    pub trace: Option<EliminationTrace>,
    /// Number of search states expanded.
    pub explored: usize,
}

/// Checks the loop-chart conditions L1 to L3 on the part reachable from the
/// start.
pub fn check_loop_chart<L: Label>(c: &Chart<L>) -> Result<(), Vec<LoopViolation>> {
    let start = c.start();
    let seen = c.reachable_from(start);
    let mut violations = Vec::new();
    if find_cycle_from(c, start, |_| true).is_none() {
        violations.push(LoopViolation { condition: LoopCondition::L1, witness: Vec::new() });
    }
    // a cycle avoiding the start, reachable from one of its successors
    let avoiding = |id: TransitionId| {
        let t = &c.transitions()[id];
        t.from != start && t.to != start
    };
    let mut cycle = None;
    for t in c.out(start) {
        if t.to != start {
            if let Some(found) = find_cycle_from(c, t.to, avoiding) {
                cycle = Some(found);
                break;
            }
        }
    }
    if let Some(witness) = cycle {
        violations.push(LoopViolation { condition: LoopCondition::L2, witness });
    }
    let bad: Vec<_> = c.vertices().filter(|&v| v != start && seen[v] && c.is_terminating(v)).collect();
    if !bad.is_empty() {
        violations.push(LoopViolation { condition: LoopCondition::L3, witness: bad });
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

fn check_entry_set<L: Label>(c: &Chart<L>, v: VertexId, entries: &[TransitionId]) -> Result<()> {
    c.check_vertex(v)?;
    if entries.is_empty() {
        return Err(Error::EmptyEntrySet);
    }
    for &id in entries {
        if c.transition(id)?.from != v {
            return Err(Error::ForeignEntry { vertex: v, transition: id });
        }
    }
    Ok(())
}

/// The `v`-rooted chart of all paths that start with a transition in
/// `entries` and stop on returning to `v`. It is not necessarily a loop
/// chart; see [`check_loop_chart`].
pub fn loop_subchart_generated<L: Label>(c: &Chart<L>, v: VertexId, entries: &[TransitionId]) -> Result<Chart<L>> {
    check_entry_set(c, v, entries)?;
    let mut inside = vec![false; c.num_vertices()];
    inside[v] = true;
    let mut queue = VecDeque::new();
    for &id in entries {
        let w = c.transitions()[id].to;
        if !inside[w] {
            inside[w] = true;
            queue.push_back(w);
        }
    }
    while let Some(u) = queue.pop_front() {
        for t in c.out(u) {
            if !inside[t.to] {
                inside[t.to] = true;
                queue.push_back(t.to);
            }
        }
    }
    let mut map = vec![None; c.num_vertices()];
    let mut next = 0;
    for u in c.vertices() {
        if inside[u] {
            map[u] = Some(next);
            next += 1;
        }
    }
    let entry_set: BTreeSet<_> = entries.iter().copied().collect();
    let terminating = c.vertices().filter(|&u| inside[u]).map(|u| c.is_terminating(u)).collect();
    let annotations = c.vertices().filter(|&u| inside[u]).map(|u| c.annotation(u).map(str::to_string)).collect();
    let transitions = c
        .transitions()
        .iter()
        .enumerate()
        .filter(|(id, t)| if t.from == v { entry_set.contains(id) } else { inside[t.from] })
        .map(|(_, t)| (map[t.from].unwrap(), t.label.clone(), map[t.to].unwrap()));
    Ok(Chart::with_alphabet(c.alphabet().clone(), map[v].unwrap(), terminating, transitions)?
        .with_annotations(annotations))
}

/// Removes the loop entries of a loop subchart and everything that becomes
/// unreachable.
pub fn eliminate_loop<L: Label>(c: &Chart<L>, v: VertexId, entries: &[TransitionId]) -> Result<Chart<L>> {
    let sub = loop_subchart_generated(c, v, entries)?;
    check_loop_chart(&sub).map_err(|vs| Error::NotALoopSubchart(vs.iter().map(|x| x.to_string()).join("; ")))?;
    let removed: BTreeSet<_> = entries.iter().copied().collect();
    Ok(c.filter_transitions(|id, _| !removed.contains(&id)))
}

/// Set of live transitions of the original chart.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Alive(Vec<u64>);

impl Alive {
    fn full(n: usize) -> Self {
        let mut words = vec![u64::MAX; n.div_ceil(64)];
        if !n.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (n % 64)) - 1;
            }
        }
        Alive(words)
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1u64 << (i % 64));
    }
}

/// A residual chart: the original chart restricted to live transitions.
/// Vertex and transition ids are those of the original chart.
struct Residual<'a, L> {
    chart: &'a Chart<L>,
}

/// Good entries at a vertex: each may belong to a valid entry set, and a
/// valid entry set needs at least one returning entry.
struct Candidate {
    vertex: VertexId,
    good: Vec<TransitionId>,
    returning: Vec<bool>,
    weight: usize,
}

impl<'a, L: Label> Residual<'a, L> {
    /// Drops transitions whose source has become unreachable; returns the
    /// reachable vertices.
    fn collect_garbage(&self, alive: &mut Alive) -> Vec<bool> {
        let c = self.chart;
        let mut seen = vec![false; c.num_vertices()];
        seen[c.start()] = true;
        let mut stack = vec![c.start()];
        while let Some(u) = stack.pop() {
            for id in c.out_ids(u) {
                let w = c.transitions()[id].to;
                if alive.get(id) && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        for (id, t) in c.transitions().iter().enumerate() {
            if !seen[t.from] {
                alive.clear(id);
            }
        }
        seen
    }

    fn has_cycle(&self, alive: &Alive) -> bool {
        find_cycle_from(self.chart, self.chart.start(), |id| alive.get(id)).is_some()
    }

    /// The part of the loop subchart behind entry `id` at `v`: whether it is
    /// free of terminating vertices and of cycles avoiding `v`, whether it
    /// leads back to `v`, and its size.
    fn analyze_entry(&self, alive: &Alive, v: VertexId, id: TransitionId) -> (bool, bool, usize) {
        let c = self.chart;
        let target = c.transitions()[id].to;
        if target == v {
            return (true, true, 0);
        }
        let mut seen = HashSet::from([target]);
        let mut stack = vec![target];
        let mut returns = false;
        while let Some(u) = stack.pop() {
            if c.is_terminating(u) {
                return (false, false, seen.len());
            }
            for tid in c.out_ids(u) {
                if !alive.get(tid) {
                    continue;
                }
                let w = c.transitions()[tid].to;
                if w == v {
                    returns = true;
                } else if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        let avoiding = |tid: TransitionId| alive.get(tid) && c.transitions()[tid].to != v;
        let acyclic = find_cycle_from(c, target, avoiding).is_none();
        (acyclic, returns, seen.len())
    }

    /// Vertices with at least one valid entry set, innermost (smallest
    /// loop subchart) first.
    fn candidates(&self, alive: &Alive, reachable: &[bool]) -> Vec<Candidate> {
        let c = self.chart;
        let mut out = Vec::new();
        for v in c.vertices().filter(|&v| reachable[v]) {
            let mut good = Vec::new();
            let mut returning = Vec::new();
            let mut weight = 0;
            for id in c.out_ids(v).filter(|&id| alive.get(id)) {
                let (ok, returns, size) = self.analyze_entry(alive, v, id);
                if ok {
                    good.push(id);
                    returning.push(returns);
                    weight += size;
                }
            }
            if returning.iter().any(|&r| r) {
                out.push(Candidate { vertex: v, good, returning, weight });
            }
        }
        out.sort_by_key(|cand| (cand.weight, cand.vertex));
        out
    }
}

/// Valid entry sets of a candidate, largest first.
fn entry_sets(cand: &Candidate) -> impl Iterator<Item = Vec<TransitionId>> + '_ {
    let k = cand.good.len();
    (1..=k).rev().flat_map(move |size| {
        (0..k)
            .combinations(size)
            .filter(|idx| idx.iter().any(|&i| cand.returning[i]))
            .map(|idx| idx.into_iter().map(|i| cand.good[i]).collect())
    })
}

struct Search<'a, L> {
    residual: Residual<'a, L>,
    failed: HashSet<Alive>,
    explored: usize,
    budget: usize,
}

impl<L: Label> Search<'_, L> {
    fn run(&mut self, alive: Alive) -> Result<Option<Vec<EliminationStep>>> {
        if !self.residual.has_cycle(&alive) {
            return Ok(Some(Vec::new()));
        }
        if self.failed.contains(&alive) {
            return Ok(None);
        }
        self.explored += 1;
        if self.explored > self.budget {
            return Err(Error::SearchBudgetExceeded { budget: self.budget });
        }
        let mut reach_alive = alive.clone();
        let reachable = self.residual.collect_garbage(&mut reach_alive);
        for cand in self.residual.candidates(&alive, &reachable) {
            for entry_set in entry_sets(&cand) {
                let mut next = alive.clone();
                for &id in &entry_set {
                    next.clear(id);
                }
                self.residual.collect_garbage(&mut next);
                if let Some(mut rest) = self.run(next)? {
                    rest.insert(0, EliminationStep { vertex: cand.vertex, entry_set });
                    return Ok(Some(rest));
                }
            }
        }
        self.failed.insert(alive);
        Ok(None)
    }
}

/// Decides LEE by a complete backtracking search over elimination
/// sequences, with at most `budget` expanded states.
pub fn decide_lee_with_budget<L: Label>(c: &Chart<L>, budget: usize) -> Result<LeeOutcome> {
    let residual = Residual { chart: c };
    let mut alive = Alive::full(c.transitions().len());
    residual.collect_garbage(&mut alive);
    let mut search = Search { residual, failed: HashSet::new(), explored: 0, budget };
    let found = search.run(alive)?;
    Ok(LeeOutcome {
        holds: found.is_some(),
        trace: found.map(|steps| EliminationTrace { steps }),
        explored: search.explored,
    })
}

/// Decides LEE with the default search budget.
pub fn decide_lee<L: Label>(c: &Chart<L>) -> Result<LeeOutcome> {
    decide_lee_with_budget(c, DEFAULT_SEARCH_BUDGET)
}

/// Replays a trace through [`loop_subchart_generated`] and
/// [`check_loop_chart`]; returns the live transitions after every step.
fn replay<L: Label>(c: &Chart<L>, trace: &EliminationTrace) -> Result<Vec<bool>> {
    let residual = Residual { chart: c };
    let mut alive = Alive::full(c.transitions().len());
    residual.collect_garbage(&mut alive);
    for (k, step) in trace.steps.iter().enumerate() {
        let fail = |reason: String| Error::TraceReplay { step: k + 1, reason };
        // current chart over all original vertices; ids are ranks among live transitions
        let live: Vec<TransitionId> = (0..c.transitions().len()).filter(|&id| alive.get(id)).collect();
        let current = Chart::with_alphabet(
            c.alphabet().clone(),
            c.start(),
            c.terminating().to_vec(),
            live.iter().map(|&id| {
                let t = &c.transitions()[id];
                (t.from, t.label.clone(), t.to)
            }),
        )?;
        let mut local = Vec::with_capacity(step.entry_set.len());
        for &id in &step.entry_set {
            match live.binary_search(&id) {
                Ok(i) => local.push(i),
                Err(_) => return Err(fail(format!("transition {id} is no longer present"))),
            }
        }
        let sub = loop_subchart_generated(&current, step.vertex, &local).map_err(|e| fail(e.to_string()))?;
        check_loop_chart(&sub).map_err(|vs| fail(vs.iter().map(|x| x.to_string()).join("; ")))?;
        for &id in &step.entry_set {
            alive.clear(id);
        }
        residual.collect_garbage(&mut alive);
    }
    Ok((0..c.transitions().len()).map(|id| alive.get(id)).collect())
}

/// The chart left after replaying `trace`, restricted to its reachable part.
pub fn replay_trace<L: Label>(c: &Chart<L>, trace: &EliminationTrace) -> Result<Chart<L>> {
    let alive = replay(c, trace)?;
    Ok(c.filter_transitions(|id, _| alive[id]))
}

/// The labeling recorded by a run: transitions removed as loop entries at
/// step `k` are marked `[k]`, all others are body steps.
pub fn recording_labeling<L: Label>(c: &Chart<L>, trace: &EliminationTrace) -> Result<EntryBodyLabeling<L>> {
    replay(c, trace)?;
    let mut markings = vec![Marking::Body; c.transitions().len()];
    for (k, step) in trace.steps.iter().enumerate() {
        for &id in &step.entry_set {
            markings[id] = Marking::Entry(k as u32 + 1);
        }
    }
    EntryBodyLabeling::new(c.clone(), markings)
}

/// Entry identifiers `(v, n)` of a labeling.
pub fn entries_of<L: Label>(l: &EntryBodyLabeling<L>) -> BTreeSet<(VertexId, u32)> {
    l.entries()
}

fn violation(
    condition: WitnessCondition,
    vertex: Option<VertexId>,
    level: Option<u32>,
    detail: String,
) -> WitnessViolation {
    WitnessViolation { condition, vertex, level, detail }
}

/// Vertices reached from `v` by a level-`n` entry followed by body steps,
/// never entering `v` again (excluding `v`), and whether `v` is reached
/// again.
fn entry_region<L: Label>(l: &EntryBodyLabeling<L>, v: VertexId, n: u32) -> (Vec<VertexId>, bool) {
    let c = l.chart();
    let mut seen = vec![false; c.num_vertices()];
    seen[v] = true;
    let mut region = Vec::new();
    let mut returns = false;
    let mut queue = VecDeque::new();
    for id in c.out_ids(v) {
        if l.marking(id) == Marking::Entry(n) {
            let w = c.transitions()[id].to;
            if w == v {
                returns = true;
            } else if !seen[w] {
                seen[w] = true;
                region.push(w);
                queue.push_back(w);
            }
        }
    }
    while let Some(u) = queue.pop_front() {
        for id in c.out_ids(u) {
            if l.marking(id) != Marking::Body {
                continue;
            }
            let w = c.transitions()[id].to;
            if w == v {
                returns = true;
            } else if !seen[w] {
                seen[w] = true;
                region.push(w);
                queue.push_back(w);
            }
        }
    }
    (region, returns)
}

/// Validates W1 (no infinite body paths), W2 (every entry identifier
/// generates a loop chart) and W3 (entries inside such a loop chart have
/// lower levels) on the reachable part.
pub fn validate_llee<L: Label>(l: &EntryBodyLabeling<L>) -> WitnessReport {
    let c = l.chart();
    let seen = c.reachable_from(c.start());
    let mut violations = Vec::new();

    // W1: depth-first search for a body cycle from every reachable vertex
    let body = |id: TransitionId| l.marking(id) == Marking::Body;
    let mut checked = vec![false; c.num_vertices()];
    for v in c.vertices().filter(|&v| seen[v]) {
        if checked[v] {
            continue;
        }
        if let Some(cycle) = find_cycle_from(c, v, body) {
            violations.push(violation(
                WitnessCondition::W1,
                Some(cycle[0]),
                None,
                format!("body cycle through {cycle:?}"),
            ));
            break;
        }
        // nothing reachable from v over body steps lies on a body cycle
        let mut stack = vec![v];
        checked[v] = true;
        while let Some(u) = stack.pop() {
            for id in c.out_ids(u).filter(|&id| body(id)) {
                let w = c.transitions()[id].to;
                if !checked[w] {
                    checked[w] = true;
                    stack.push(w);
                }
            }
        }
    }

    for (v, n) in l.entries().into_iter().filter(|&(v, _)| seen[v]) {
        let sub = entry_subchart(l, v, n);
        if let Err(vs) = check_loop_chart(&sub) {
            for x in vs {
                violations.push(violation(WitnessCondition::W2, Some(v), Some(n), x.to_string()));
            }
        }
        let (region, _) = entry_region(l, v, n);
        for u in region {
            for id in c.out_ids(u) {
                if let Marking::Entry(m) = l.marking(id) {
                    if m >= n {
                        violations.push(violation(
                            WitnessCondition::W3,
                            Some(v),
                            Some(n),
                            format!("vertex {u} inside the loop has an entry of level {m}"),
                        ));
                    }
                }
            }
        }
    }
    WitnessReport::from_violations(violations)
}

/// The chart generated by the level-`n` entries from `v` followed by body
/// steps, halting at `v`.
pub fn entry_subchart<L: Label>(l: &EntryBodyLabeling<L>, v: VertexId, n: u32) -> Chart<L> {
    let c = l.chart();
    let (region, _) = entry_region(l, v, n);
    let mut map = vec![None; c.num_vertices()];
    let mut members: Vec<VertexId> = region.clone();
    members.push(v);
    members.sort_unstable();
    for (i, &u) in members.iter().enumerate() {
        map[u] = Some(i);
    }
    let transitions = c.transitions().iter().enumerate().filter_map(|(id, t)| {
        let keep = if t.from == v {
            l.marking(id) == Marking::Entry(n)
        } else {
            map[t.from].is_some() && l.marking(id) == Marking::Body
        };
        keep.then(|| (map[t.from].unwrap(), t.label.clone(), map[t.to].unwrap()))
    });
    let terminating = members.iter().map(|&u| c.is_terminating(u)).collect();
    Chart::with_alphabet(c.alphabet().clone(), map[v].unwrap(), terminating, transitions)
        .expect("members are renumbered densely")
}

/// Validates the four conditions LLEE-1 to LLEE-4 on the reachable part,
/// independently of [`validate_llee`].
pub fn validate_llee_alt<L: Label>(l: &EntryBodyLabeling<L>) -> WitnessReport {
    let c = l.chart();
    let seen = c.reachable_from(c.start());
    let mut violations = Vec::new();

    // LLEE-2: peel vertices all of whose body steps lead to peeled vertices
    let mut pending = vec![0usize; c.num_vertices()];
    let mut body_preds: Vec<Vec<VertexId>> = vec![Vec::new(); c.num_vertices()];
    for (id, t) in c.transitions().iter().enumerate() {
        if l.marking(id) == Marking::Body {
            pending[t.from] += 1;
            body_preds[t.to].push(t.from);
        }
    }
    let mut peeled = vec![false; c.num_vertices()];
    let mut ready: Vec<VertexId> = c.vertices().filter(|&v| pending[v] == 0).collect();
    while let Some(v) = ready.pop() {
        peeled[v] = true;
        for &u in &body_preds[v] {
            pending[u] -= 1;
            if pending[u] == 0 {
                ready.push(u);
            }
        }
    }
    let stuck: Vec<_> = c.vertices().filter(|&v| seen[v] && !peeled[v]).collect();
    if !stuck.is_empty() {
        violations.push(violation(
            WitnessCondition::Llee2,
            Some(stuck[0]),
            None,
            format!("infinite body paths from {stuck:?}"),
        ));
    }

    for (v, n) in l.entries().into_iter().filter(|&(v, _)| seen[v]) {
        // walk backwards from v over body steps, then check for a level-n
        // entry from v into that set
        let mut back = vec![false; c.num_vertices()];
        back[v] = true;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &p in &body_preds[u] {
                if !back[p] {
                    back[p] = true;
                    stack.push(p);
                }
            }
        }
        let closes = c.out_ids(v).any(|id| l.marking(id) == Marking::Entry(n) && back[c.transitions()[id].to]);
        if !closes {
            violations.push(violation(
                WitnessCondition::Llee1,
                Some(v),
                Some(n),
                "no level-n entry is followed by body steps back to the vertex".into(),
            ));
        }

        let (region, _) = entry_region(l, v, n);
        for &u in &region {
            if c.is_terminating(u) {
                violations.push(violation(
                    WitnessCondition::Llee3,
                    Some(v),
                    Some(n),
                    format!("vertex {u} inside the loop terminates"),
                ));
            }
            for id in c.out_ids(u) {
                if let Some(m) = l.marking(id).level() {
                    if m >= n {
                        violations.push(violation(
                            WitnessCondition::Llee4,
                            Some(v),
                            Some(n),
                            format!("vertex {u} inside the loop has an entry of level {m}"),
                        ));
                    }
                }
            }
        }
    }
    WitnessReport::from_violations(violations)
}

/// True iff the trace's residual has no infinite path.
pub fn trace_succeeds<L: Label>(c: &Chart<L>, trace: &EliminationTrace) -> Result<bool> {
    let residual = replay_trace(c, trace)?;
    Ok(!crate::charts::has_infinite_path(&reachable(&residual)))
}

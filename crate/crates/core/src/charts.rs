//! Charts, 1-charts and entry/body labelings.
//!
//! A chart is a finite rooted labeled transition system with a set of
//! immediately terminating vertices. Vertices are dense integers. The
//! transition list is kept sorted by `(from, label, to)` without duplicates,
//! so a transition id is its index in that list and is stable for a given
//! chart value.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};
use std::hash::Hash;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::semantics::{Marking, StepLabel};
use crate::syntax::Action;

pub type VertexId = usize;
pub type TransitionId = usize;

/// Transition labels: plain actions, or actions plus the empty step.
pub trait Label: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// The action carried by the label, `None` for the empty step.
    fn action(&self) -> Option<&Action>;

    fn from_action(action: Action) -> Self;

    /// The empty step, if this label type has one.
    fn empty() -> Option<Self>;

    /// Converts a 1-chart label; `None` if this label type has no empty step.
    fn from_step(label: StepLabel) -> Option<Self> {
        match label {
            StepLabel::Proper(a) => Some(Self::from_action(a)),
            StepLabel::Empty => Self::empty(),
        }
    }

    fn is_empty_step(&self) -> bool {
        self.action().is_none()
    }
}

impl Label for Action {
    fn action(&self) -> Option<&Action> {
        Some(self)
    }

    fn from_action(action: Action) -> Self {
        action
    }

    fn empty() -> Option<Self> {
        None
    }
}

impl Label for StepLabel {
    fn action(&self) -> Option<&Action> {
        match self {
            StepLabel::Proper(a) => Some(a),
            StepLabel::Empty => None,
        }
    }

    fn from_action(action: Action) -> Self {
        StepLabel::Proper(action)
    }

    fn empty() -> Option<Self> {
        Some(StepLabel::Empty)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition<L = Action> {
    pub from: VertexId,
    pub label: L,
    pub to: VertexId,
}

/// A finite rooted LTS with termination flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart<L = Action> {
    alphabet: BTreeSet<Action>,
    start: VertexId,
    terminating: Vec<bool>,
    transitions: Vec<Transition<L>>,
    annotations: Vec<Option<String>>,
    // transitions of vertex v are transitions[out_offsets[v]..out_offsets[v + 1]]
    out_offsets: Vec<usize>,
}

/// A chart whose transitions may carry the empty step `1`.
pub type OneChart = Chart<StepLabel>;

impl<L: Label> Chart<L> {
    /// Builds a chart over `terminating.len()` vertices. The alphabet is the
    /// set of actions occurring on transitions.
    pub fn new(
        start: VertexId,
        terminating: Vec<bool>,
        transitions: impl IntoIterator<Item = (VertexId, L, VertexId)>,
    ) -> Result<Self> {
        Self::with_alphabet(BTreeSet::new(), start, terminating, transitions)
    }

    /// Like [`Chart::new`], with an alphabet that may contain unused actions.
    pub fn with_alphabet(
        alphabet: BTreeSet<Action>,
        start: VertexId,
        terminating: Vec<bool>,
        transitions: impl IntoIterator<Item = (VertexId, L, VertexId)>,
    ) -> Result<Self> {
        let n = terminating.len();
        if start >= n {
            return Err(Error::UnknownVertex(start));
        }
        let mut alphabet = alphabet;
        let mut ts = Vec::new();
        for (from, label, to) in transitions {
            for v in [from, to] {
                if v >= n {
                    return Err(Error::UnknownVertex(v));
                }
            }
            if let Some(a) = label.action() {
                alphabet.insert(a.clone());
            }
            ts.push(Transition { from, label, to });
        }
        ts.sort();
        ts.dedup();
        let out_offsets = offsets(n, &ts);
        Ok(Chart { alphabet, start, terminating, transitions: ts, annotations: vec![None; n], out_offsets })
    }

    /// Attaches a text annotation (usually an expression) to every vertex.
    pub fn with_annotations(mut self, annotations: Vec<Option<String>>) -> Self {
        assert_eq!(annotations.len(), self.num_vertices(), "one annotation per vertex");
        self.annotations = annotations;
        self
    }

    pub fn without_annotations(mut self) -> Self {
        self.annotations = vec![None; self.num_vertices()];
        self
    }

    pub fn alphabet(&self) -> &BTreeSet<Action> {
        &self.alphabet
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn num_vertices(&self) -> usize {
        self.terminating.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.num_vertices()
    }

    pub fn is_terminating(&self, v: VertexId) -> bool {
        self.terminating[v]
    }

    pub fn terminating(&self) -> &[bool] {
        &self.terminating
    }

    pub fn num_terminating(&self) -> usize {
        self.terminating.iter().filter(|&&t| t).count()
    }

    pub fn transitions(&self) -> &[Transition<L>] {
        &self.transitions
    }

    pub fn transition(&self, id: TransitionId) -> Result<&Transition<L>> {
        self.transitions.get(id).ok_or(Error::UnknownTransition(id))
    }

    /// Outgoing transitions of `v`.
    pub fn out(&self, v: VertexId) -> &[Transition<L>] {
        &self.transitions[self.out_ids(v)]
    }

    /// Ids of the outgoing transitions of `v`.
    pub fn out_ids(&self, v: VertexId) -> std::ops::Range<TransitionId> {
        self.out_offsets[v]..self.out_offsets[v + 1]
    }

    /// Id of the transition `(from, label, to)`, if present.
    pub fn find(&self, from: VertexId, label: &L, to: VertexId) -> Option<TransitionId> {
        let range = self.out_ids(from);
        let base = range.start;
        self.transitions[range].binary_search_by(|t| (&t.label, t.to).cmp(&(label, to))).ok().map(|i| base + i)
    }

    pub fn annotation(&self, v: VertexId) -> Option<&str> {
        self.annotations[v].as_deref()
    }

    pub fn annotations(&self) -> &[Option<String>] {
        &self.annotations
    }

    /// Vertex annotated with `text`, if any.
    pub fn vertex_by_annotation(&self, text: &str) -> Option<VertexId> {
        self.annotations.iter().position(|a| a.as_deref() == Some(text))
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.num_vertices() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v))
        }
    }

    pub fn num_empty_steps(&self) -> usize {
        self.transitions.iter().filter(|t| t.label.is_empty_step()).count()
    }

    /// Same chart with the start vertex moved to `v` (nothing is removed).
    pub fn rerooted(&self, v: VertexId) -> Result<Self> {
        self.check_vertex(v)?;
        let mut c = self.clone();
        c.start = v;
        Ok(c)
    }

    /// Keeps exactly the transitions selected by `keep`, then restricts to
    /// the part reachable from the start.
    pub fn filter_transitions(&self, keep: impl Fn(TransitionId, &Transition<L>) -> bool) -> Self {
        let kept: Vec<_> = self
            .transitions
            .iter()
            .enumerate()
            .filter(|(i, t)| keep(*i, t))
            .map(|(_, t)| (t.from, t.label.clone(), t.to))
            .collect();
        let c = Chart::with_alphabet(self.alphabet.clone(), self.start, self.terminating.clone(), kept)
            .expect("endpoints are unchanged")
            .with_annotations(self.annotations.clone());
        reachable(&c)
    }

    /// Vertices reachable from `from` (including `from`) over all transitions.
    pub fn reachable_from(&self, from: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.num_vertices()];
        let mut queue = VecDeque::from([from]);
        seen[from] = true;
        while let Some(v) = queue.pop_front() {
            for t in self.out(v) {
                if !seen[t.to] {
                    seen[t.to] = true;
                    queue.push_back(t.to);
                }
            }
        }
        seen
    }

    /// Relabels every transition.
    pub fn map_labels<M: Label>(&self, f: impl Fn(&L) -> M) -> Chart<M> {
        Chart::with_alphabet(
            self.alphabet.clone(),
            self.start,
            self.terminating.clone(),
            self.transitions.iter().map(|t| (t.from, f(&t.label), t.to)),
        )
        .expect("endpoints are unchanged")
        .with_annotations(self.annotations.clone())
    }

    /// Views this chart as a 1-chart without empty steps.
    pub fn to_onechart(&self) -> OneChart {
        self.map_labels(|l| match l.action() {
            Some(a) => StepLabel::Proper(a.clone()),
            None => StepLabel::Empty,
        })
    }

    /// Renumbers and restricts vertices; `map[v]` is the new id of `v`, and
    /// transitions touching dropped vertices are dropped.
    pub(crate) fn restrict(&self, map: &[Option<VertexId>], new_start: VertexId) -> Self {
        let n = map.iter().flatten().count();
        let mut terminating = vec![false; n];
        let mut annotations = vec![None; n];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = *new {
                terminating[new] = self.terminating[old];
                annotations[new] = self.annotations[old].clone();
            }
        }
        let ts = self.transitions.iter().filter_map(|t| Some((map[t.from]?, t.label.clone(), map[t.to]?)));
        Chart::with_alphabet(self.alphabet.clone(), new_start, terminating, ts)
            .expect("restriction keeps endpoints valid")
            .with_annotations(annotations)
    }
}

impl<L: Label> Chart<L> {
    /// Reads a chart from JSON. Empty steps are rejected unless `L` has
    /// them; marking fields are accepted and ignored.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc = parse_document(text)?;
        convert_labels(doc.chart)
    }
}

fn convert_labels<L: Label>(one: OneChart) -> Result<Chart<L>> {
    if L::empty().is_none() {
        if let Some(i) = one.transitions.iter().position(|t| t.label.is_empty_step()) {
            return Err(Error::Schema {
                pointer: format!("/transitions/{i}/kind"),
                message: "empty steps are not allowed in a chart".into(),
            });
        }
    }
    Ok(one.map_labels(|l| L::from_step(l.clone()).expect("checked above")))
}

fn offsets<L>(n: usize, ts: &[Transition<L>]) -> Vec<usize> {
    let mut out = vec![0; n + 1];
    for t in ts {
        out[t.from + 1] += 1;
    }
    for v in 0..n {
        out[v + 1] += out[v];
    }
    out
}

/// A chart or 1-chart with a marking on every transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntryBodyLabeling<L = Action> {
    base: Chart<L>,
    markings: Vec<Marking>,
}

impl<L: Label> EntryBodyLabeling<L> {
    /// `markings[i]` labels `base.transitions()[i]`.
    pub fn new(base: Chart<L>, markings: Vec<Marking>) -> Result<Self> {
        if markings.len() != base.transitions().len() {
            return Err(Error::InvalidChart(format!(
                "{} markings for {} transitions",
                markings.len(),
                base.transitions().len()
            )));
        }
        Ok(EntryBodyLabeling { base, markings })
    }

    /// Builds the chart and its markings together from marked transitions.
    pub fn from_marked(
        alphabet: BTreeSet<Action>,
        start: VertexId,
        terminating: Vec<bool>,
        transitions: Vec<(VertexId, L, VertexId, Marking)>,
    ) -> Result<Self> {
        let mut ts = transitions;
        ts.sort_by(|x, y| (x.0, &x.1, x.2).cmp(&(y.0, &y.1, y.2)));
        for w in ts.windows(2) {
            if (w[0].0, &w[0].1, w[0].2) == (w[1].0, &w[1].1, w[1].2) && w[0].3 != w[1].3 {
                return Err(Error::InvalidChart(format!(
                    "transition {} -{}-> {} carries markings {} and {}",
                    w[0].0, w[0].1, w[0].2, w[0].3, w[1].3
                )));
            }
        }
        ts.dedup_by(|x, y| (x.0, &x.1, x.2) == (y.0, &y.1, y.2));
        let markings = ts.iter().map(|t| t.3).collect();
        let base = Chart::with_alphabet(alphabet, start, terminating, ts.into_iter().map(|(f, l, t, _)| (f, l, t)))?;
        Ok(EntryBodyLabeling { base, markings })
    }

    /// All transitions marked as body steps.
    pub fn all_body(base: Chart<L>) -> Self {
        let markings = vec![Marking::Body; base.transitions().len()];
        EntryBodyLabeling { base, markings }
    }

    pub fn chart(&self) -> &Chart<L> {
        &self.base
    }

    pub fn with_annotations(mut self, annotations: Vec<Option<String>>) -> Self {
        self.base = self.base.with_annotations(annotations);
        self
    }

    pub fn into_chart(self) -> Chart<L> {
        self.base
    }

    pub fn markings(&self) -> &[Marking] {
        &self.markings
    }

    pub fn marking(&self, id: TransitionId) -> Marking {
        self.markings[id]
    }

    /// Entry identifiers `(v, n)`: vertex `v` has an outgoing entry of level `n`.
    pub fn entries(&self) -> BTreeSet<(VertexId, u32)> {
        self.base.transitions().iter().zip(&self.markings).filter_map(|(t, m)| m.level().map(|n| (t.from, n))).collect()
    }

    pub fn num_entries(&self) -> usize {
        self.markings.iter().filter(|m| m.is_entry()).count()
    }
}

impl<L: Label> EntryBodyLabeling<L> {
    /// Reads a labeled chart; every transition must carry a marking.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc = parse_document(text)?;
        match doc.markings {
            Some(m) => EntryBodyLabeling::new(convert_labels(doc.chart)?, m),
            None if doc.chart.transitions().is_empty() => Ok(EntryBodyLabeling::all_body(convert_labels(doc.chart)?)),
            None => Err(Error::Schema { pointer: "/transitions".into(), message: "markings are missing".into() }),
        }
    }
}

/// Vertices reachable from each vertex via empty steps only (reflexive).
fn empty_closure(c: &OneChart) -> Vec<Vec<VertexId>> {
    (0..c.num_vertices())
        .map(|v| {
            let mut seen = BTreeSet::from([v]);
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                for t in c.out(u) {
                    if t.label == StepLabel::Empty && seen.insert(t.to) {
                        stack.push(t.to);
                    }
                }
            }
            seen.into_iter().collect()
        })
        .collect()
}

/// The induced chart: `v -a-> w` iff `v -1->* v' -a-> w`, and `v` terminates
/// iff some `v'` with `v -1->* v'` terminates. Unreachable vertices are kept.
pub fn induced_of(c: &OneChart) -> Chart {
    let closure = empty_closure(c);
    let mut terminating = vec![false; c.num_vertices()];
    let mut ts = Vec::new();
    for v in c.vertices() {
        for &u in &closure[v] {
            terminating[v] |= c.is_terminating(u);
            for t in c.out(u) {
                if let StepLabel::Proper(a) = &t.label {
                    ts.push((v, a.clone(), t.to));
                }
            }
        }
    }
    Chart::with_alphabet(c.alphabet().clone(), c.start(), terminating, ts)
        .expect("same vertex set")
        .with_annotations(c.annotations().to_vec())
}

/// Restriction to the vertices reachable from the start.
pub fn reachable<L: Label>(c: &Chart<L>) -> Chart<L> {
    reachable_with_map(c).0
}

/// Like [`reachable`], also returning the old-to-new vertex map. Kept
/// vertices retain their relative order.
pub fn reachable_with_map<L: Label>(c: &Chart<L>) -> (Chart<L>, Vec<Option<VertexId>>) {
    let seen = c.reachable_from(c.start());
    let mut map = vec![None; c.num_vertices()];
    let mut next = 0;
    for v in c.vertices() {
        if seen[v] {
            map[v] = Some(next);
            next += 1;
        }
    }
    let start = map[c.start()].expect("start is reachable");
    (c.restrict(&map, start), map)
}

/// The `v`-rooted subchart generated by `v`.
pub fn rooted_subchart<L: Label>(c: &Chart<L>, v: VertexId) -> Result<Chart<L>> {
    Ok(reachable(&c.rerooted(v)?))
}

/// True iff a cycle is reachable from the start.
pub fn has_infinite_path<L: Label>(c: &Chart<L>) -> bool {
    find_cycle_from(c, c.start(), |_| true).is_some()
}

/// Searches for a cycle reachable from `from` over transitions accepted by
/// `alive`; returns the vertices of one such cycle.
pub(crate) fn find_cycle_from<L: Label>(
    c: &Chart<L>,
    from: VertexId,
    alive: impl Fn(TransitionId) -> bool,
) -> Option<Vec<VertexId>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Grey,
        Black,
    }
    let mut color = vec![Color::White; c.num_vertices()];
    // (vertex, next transition id to inspect)
    let mut stack = vec![(from, c.out_ids(from).start)];
    color[from] = Color::Grey;
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if *next < c.out_ids(v).end {
            let id = *next;
            *next += 1;
            if !alive(id) {
                continue;
            }
            let w = c.transitions()[id].to;
            match color[w] {
                Color::White => {
                    color[w] = Color::Grey;
                    stack.push((w, c.out_ids(w).start));
                }
                Color::Grey => {
                    let pos = stack.iter().position(|&(u, _)| u == w).expect("grey vertices are on the stack");
                    return Some(stack[pos..].iter().map(|&(u, _)| u).collect());
                }
                Color::Black => {}
            }
        } else {
            color[v] = Color::Black;
            stack.pop();
        }
    }
    None
}

#[derive(Serialize)]
struct ChartDoc {
    alphabet: Vec<String>,
    start: VertexId,
    vertices: Vec<VertexDoc>,
    transitions: Vec<TransitionDoc>,
}

#[derive(Serialize)]
struct VertexDoc {
    id: VertexId,
    terminating: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    expr: Option<String>,
}

#[derive(Serialize)]
struct TransitionDoc {
    from: VertexId,
    label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    kind: Option<&'static str>,
    to: VertexId,
    #[serde(skip_serializing_if = "Option::is_none")]
    marking: Option<u32>,
}

fn to_doc<L: Label>(c: &Chart<L>, markings: Option<&[Marking]>) -> ChartDoc {
    ChartDoc {
        alphabet: c.alphabet().iter().map(|a| a.to_string()).collect(),
        start: c.start(),
        vertices: c
            .vertices()
            .map(|v| VertexDoc { id: v, terminating: c.is_terminating(v), expr: c.annotation(v).map(str::to_string) })
            .collect(),
        transitions: c
            .transitions()
            .iter()
            .enumerate()
            .map(|(i, t)| TransitionDoc {
                from: t.from,
                label: match t.label.action() {
                    Some(a) => a.to_string(),
                    None => "1".to_string(),
                },
                kind: t.label.is_empty_step().then_some("empty"),
                to: t.to,
                marking: markings.map(|m| m[i].as_number()),
            })
            .collect(),
    }
}

impl<L: Label> Chart<L> {
    /// Compact JSON text.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&to_doc(self, None)).expect("serializable")
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(to_doc(self, None)).expect("serializable")
    }
}

impl<L: Label> EntryBodyLabeling<L> {
    /// Compact JSON text, with a `"marking"` on every transition.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&to_doc(&self.base, Some(&self.markings))).expect("serializable")
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(to_doc(&self.base, Some(&self.markings))).expect("serializable")
    }
}

struct Document {
    chart: OneChart,
    markings: Option<Vec<Marking>>,
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { pointer: pointer.into(), message: message.into() }
}

fn field<'v>(obj: &'v serde_json::Map<String, Value>, pointer: &str, key: &str) -> Result<&'v Value> {
    obj.get(key).ok_or_else(|| schema(format!("{pointer}/{key}"), "missing field"))
}

fn as_index(v: &Value, pointer: &str) -> Result<usize> {
    v.as_u64().map(|n| n as usize).ok_or_else(|| schema(pointer, "expected a non-negative integer"))
}

fn parse_document(text: &str) -> Result<Document> {
    let root: Value = serde_json::from_str(text).map_err(|e| schema("", format!("invalid JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| schema("", "expected an object"))?;

    let alphabet_value = field(obj, "", "alphabet")?;
    let mut alphabet = BTreeSet::new();
    for (i, a) in alphabet_value.as_array().ok_or_else(|| schema("/alphabet", "expected an array"))?.iter().enumerate()
    {
        let name = a.as_str().ok_or_else(|| schema(format!("/alphabet/{i}"), "expected a string"))?;
        alphabet.insert(Action::new(name).map_err(|e| schema(format!("/alphabet/{i}"), e.to_string()))?);
    }

    let vertices = field(obj, "", "vertices")?.as_array().ok_or_else(|| schema("/vertices", "expected an array"))?;
    let n = vertices.len();
    let mut terminating = vec![false; n];
    let mut annotations = vec![None; n];
    let mut seen = vec![false; n];
    for (i, v) in vertices.iter().enumerate() {
        let ptr = format!("/vertices/{i}");
        let vo = v.as_object().ok_or_else(|| schema(&ptr, "expected an object"))?;
        let id = as_index(field(vo, &ptr, "id")?, &format!("{ptr}/id"))?;
        if id >= n || seen[id] {
            return Err(schema(format!("{ptr}/id"), "vertex ids must be distinct and below the vertex count"));
        }
        seen[id] = true;
        terminating[id] = field(vo, &ptr, "terminating")?
            .as_bool()
            .ok_or_else(|| schema(format!("{ptr}/terminating"), "expected a boolean"))?;
        if let Some(e) = vo.get("expr") {
            let text = e.as_str().ok_or_else(|| schema(format!("{ptr}/expr"), "expected a string"))?;
            annotations[id] = Some(text.to_string());
        }
    }

    let start = as_index(field(obj, "", "start")?, "/start")?;
    if start >= n {
        return Err(schema("/start", "start is not a vertex"));
    }

    let ts_value =
        field(obj, "", "transitions")?.as_array().ok_or_else(|| schema("/transitions", "expected an array"))?;
    let mut marked = Vec::with_capacity(ts_value.len());
    let mut any_marking = false;
    let mut all_marking = true;
    for (i, t) in ts_value.iter().enumerate() {
        let ptr = format!("/transitions/{i}");
        let to_obj = t.as_object().ok_or_else(|| schema(&ptr, "expected an object"))?;
        let from = as_index(field(to_obj, &ptr, "from")?, &format!("{ptr}/from"))?;
        let to = as_index(field(to_obj, &ptr, "to")?, &format!("{ptr}/to"))?;
        for (key, v) in [("from", from), ("to", to)] {
            if v >= n {
                return Err(schema(format!("{ptr}/{key}"), "not a vertex"));
            }
        }
        let label = field(to_obj, &ptr, "label")?
            .as_str()
            .ok_or_else(|| schema(format!("{ptr}/label"), "expected a string"))?;
        let kind = match to_obj.get("kind") {
            None => None,
            Some(k) => Some(k.as_str().ok_or_else(|| schema(format!("{ptr}/kind"), "expected a string"))?),
        };
        let label = match (label, kind) {
            ("1", Some("empty")) => StepLabel::Empty,
            (_, Some("empty")) => return Err(schema(format!("{ptr}/label"), "empty steps are labeled \"1\"")),
            (name, None | Some("action")) => {
                let a = Action::new(name).map_err(|e| schema(format!("{ptr}/label"), e.to_string()))?;
                if !alphabet.contains(&a) {
                    return Err(schema(format!("{ptr}/label"), format!("action {name} is not in the alphabet")));
                }
                StepLabel::Proper(a)
            }
            (_, Some(other)) => return Err(schema(format!("{ptr}/kind"), format!("unknown kind {other:?}"))),
        };
        let marking = match to_obj.get("marking") {
            None => {
                all_marking = false;
                Marking::Body
            }
            Some(m) => {
                any_marking = true;
                let m =
                    m.as_u64().ok_or_else(|| schema(format!("{ptr}/marking"), "expected a non-negative integer"))?;
                let m = u32::try_from(m).map_err(|_| schema(format!("{ptr}/marking"), "marking out of range"))?;
                Marking::from_number(m)
            }
        };
        marked.push((from, label, to, marking));
    }
    if any_marking && !all_marking {
        return Err(schema("/transitions", "either every transition or none carries a marking"));
    }
    let labeling = EntryBodyLabeling::from_marked(alphabet, start, terminating, marked)
        .map_err(|e| schema("/transitions", e.to_string()))?;
    let EntryBodyLabeling { base, markings } = labeling;
    let chart = base.with_annotations(annotations);
    Ok(Document { chart, markings: any_marking.then_some(markings) })
}

/// Options for Graphviz output.
#[derive(Debug, Clone)]
pub struct DotOptions {
    pub name: String,
    /// Print vertex annotations as node labels instead of vertex ids.
    pub show_annotations: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions { name: "chart".into(), show_annotations: true }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn write_dot<L: Label>(c: &Chart<L>, markings: Option<&[Marking]>, opts: &DotOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", dot_escape(&opts.name));
    let _ = writeln!(out, "  node [shape=circle];");
    let _ = writeln!(out, "  __start [shape=point];");
    for v in c.vertices() {
        let label = match (opts.show_annotations, c.annotation(v)) {
            (true, Some(a)) => a.to_string(),
            _ => format!("v{v}"),
        };
        let shape = if c.is_terminating(v) { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  {v} [label=\"{}\"{shape}];", dot_escape(&label));
    }
    let _ = writeln!(out, "  __start -> {};", c.start());
    for (i, t) in c.transitions().iter().enumerate() {
        let mut label = t.label.to_string();
        if let Some(Marking::Entry(n)) = markings.map(|m| m[i]) {
            let _ = write!(label, " [{n}]");
        }
        let style = if t.label.is_empty_step() { ", style=dotted" } else { "" };
        let _ = writeln!(out, "  {} -> {} [label=\"{}\"{style}];", t.from, t.to, dot_escape(&label));
    }
    out.push_str("}\n");
    out
}

impl<L: Label> Chart<L> {
    pub fn to_dot(&self, opts: &DotOptions) -> String {
        write_dot(self, None, opts)
    }
}

impl<L: Label> EntryBodyLabeling<L> {
    /// Graphviz output; entries print their level after the label.
    pub fn to_dot(&self, opts: &DotOptions) -> String {
        write_dot(&self.base, Some(&self.markings), opts)
    }
}

impl<L: Label> fmt::Display for Chart<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: v{}", self.start)?;
        for v in self.vertices() {
            write!(f, "v{v}")?;
            if self.is_terminating(v) {
                f.write_str(" (terminating)")?;
            }
            if let Some(a) = self.annotation(v) {
                write!(f, "  {a}")?;
            }
            writeln!(f)?;
            for t in self.out(v) {
                writeln!(f, "  -{}-> v{}", t.label, t.to)?;
            }
        }
        Ok(())
    }
}

impl<L: Label> fmt::Display for EntryBodyLabeling<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.base;
        writeln!(f, "start: v{}", c.start())?;
        for v in c.vertices() {
            write!(f, "v{v}")?;
            if c.is_terminating(v) {
                f.write_str(" (terminating)")?;
            }
            if let Some(a) = c.annotation(v) {
                write!(f, "  {a}")?;
            }
            writeln!(f)?;
            for id in c.out_ids(v) {
                let t = &c.transitions()[id];
                writeln!(f, "  -{} {}-> v{}", t.label, self.markings[id], t.to)?;
            }
        }
        Ok(())
    }
}

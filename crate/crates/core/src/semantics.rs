//! Operational semantics of star expressions and stacked star expressions.
//!
//! Three rule systems are implemented as step and termination functions:
//! the plain system on star expressions (targets of iteration steps are
//! ordinary products `e'.e*`), the stacked system (targets are stacked
//! products `E' @ e*`, left again by an empty step), and its refinement that
//! marks every step as a body step or as a loop entry of some level.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::charts::{Chart, EntryBodyLabeling, Label, OneChart, VertexId};
use crate::error::{Error, Result};
use crate::syntax::{Action, StackedExpr, StarExpr};

/// Default bound on the number of generated vertices.
pub const DEFAULT_VERTEX_CAP: usize = 100_000;

/// Label of a 1-chart transition: an action or the empty step `1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StepLabel {
    Proper(Action),
    Empty,
}

impl fmt::Display for StepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepLabel::Proper(a) => write!(f, "{a}"),
            StepLabel::Empty => f.write_str("1"),
        }
    }
}

/// Marking of a transition in an entry/body labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u32", from = "u32")]
pub enum Marking {
    Body,
    /// Loop entry of the given level (at least 1).
    Entry(u32),
}

impl Marking {
    /// `0` for body steps, the level for entries.
    pub fn as_number(self) -> u32 {
        match self {
            Marking::Body => 0,
            Marking::Entry(n) => n,
        }
    }

    pub fn from_number(n: u32) -> Self {
        if n == 0 {
            Marking::Body
        } else {
            Marking::Entry(n)
        }
    }

    pub fn level(self) -> Option<u32> {
        match self {
            Marking::Body => None,
            Marking::Entry(n) => Some(n),
        }
    }

    pub fn is_entry(self) -> bool {
        matches!(self, Marking::Entry(_))
    }
}

impl From<Marking> for u32 {
    fn from(m: Marking) -> u32 {
        m.as_number()
    }
}

impl From<u32> for Marking {
    fn from(n: u32) -> Self {
        Marking::from_number(n)
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marking::Body => f.write_str("bo"),
            Marking::Entry(n) => write!(f, "[{n}]"),
        }
    }
}

/// True iff `e` permits immediate termination.
pub fn terminates_star(e: &StarExpr) -> bool {
    match e {
        StarExpr::Zero | StarExpr::Act(_) => false,
        StarExpr::One | StarExpr::Star(_) => true,
        StarExpr::Sum(l, r) => terminates_star(l) || terminates_star(r),
        StarExpr::Prod(l, r) => terminates_star(l) && terminates_star(r),
    }
}

/// All steps `e -a-> e'` of the plain rule system.
pub fn steps_star(e: &StarExpr) -> BTreeSet<(Action, StarExpr)> {
    let mut out = BTreeSet::new();
    collect_star_steps(e, &mut out);
    out
}

fn collect_star_steps(e: &StarExpr, out: &mut BTreeSet<(Action, StarExpr)>) {
    match e {
        StarExpr::Zero | StarExpr::One => {}
        StarExpr::Act(a) => {
            out.insert((a.clone(), StarExpr::One));
        }
        StarExpr::Sum(l, r) => {
            collect_star_steps(l, out);
            collect_star_steps(r, out);
        }
        StarExpr::Prod(l, r) => {
            for (a, l2) in steps_star(l) {
                out.insert((a, StarExpr::prod(l2, (**r).clone())));
            }
            if terminates_star(l) {
                collect_star_steps(r, out);
            }
        }
        StarExpr::Star(body) => {
            for (a, b2) in steps_star(body) {
                out.insert((a, StarExpr::prod(b2, e.clone())));
            }
        }
    }
}

/// True iff `E` permits immediate termination; stacked products never do.
pub fn terminates_stacked(e: &StackedExpr) -> bool {
    match e {
        StackedExpr::Plain(e) => terminates_star(e),
        StackedExpr::SProd(..) | StackedExpr::SStack(..) => false,
    }
}

/// All steps `E -a-> E'` (with `a` an action or the empty step) of the
/// stacked rule system.
pub fn steps_stacked(e: &StackedExpr) -> BTreeSet<(StepLabel, StackedExpr)> {
    let mut out = Vec::new();
    derive_stacked(e, &mut |_| false, &mut out);
    out.into_iter().map(|(l, _, t)| (l, t)).collect()
}

/// The stacked steps of `E` with the marking assigned by the labeled rule
/// system. `normed_plus` decides the side condition of the iteration rule
/// for a star body.
fn labeled_steps_with(
    e: &StackedExpr,
    normed_plus: &mut dyn FnMut(&StarExpr) -> bool,
) -> Result<Vec<(StepLabel, Marking, StackedExpr)>> {
    let mut out = Vec::new();
    derive_stacked(e, normed_plus, &mut out);
    let mut by_step: BTreeMap<(StepLabel, StackedExpr), Marking> = BTreeMap::new();
    for (label, marking, target) in out {
        match by_step.get(&(label.clone(), target.clone())) {
            Some(&m) if m != marking => {
                return Err(Error::AmbiguousMarking {
                    source_expr: e.to_string(),
                    label: label.to_string(),
                    target: target.to_string(),
                    first: m.to_string(),
                    second: marking.to_string(),
                })
            }
            Some(_) => {}
            None => {
                by_step.insert((label, target), marking);
            }
        }
    }
    Ok(by_step.into_iter().map(|((l, t), m)| (l, m, t)).collect())
}

/// The stacked steps of `E`, each with its marking: entries of level
/// `|e*|` for iteration steps whose body is normed⁺, body steps otherwise.
pub fn labeled_steps_stacked(e: &StackedExpr) -> Result<Vec<(StepLabel, Marking, StackedExpr)>> {
    let mut cache = NormedCache::default();
    labeled_steps_with(e, &mut |b| cache.normed_plus(b))
}

// One derivation step per rule; markings are meaningful only when the
// caller's `normed_plus` is.
fn derive_stacked(
    e: &StackedExpr,
    normed_plus: &mut dyn FnMut(&StarExpr) -> bool,
    out: &mut Vec<(StepLabel, Marking, StackedExpr)>,
) {
    match e {
        StackedExpr::Plain(e) => derive_plain(e, normed_plus, out),
        StackedExpr::SProd(head, tail) => {
            let mut inner = Vec::new();
            derive_stacked(head, normed_plus, &mut inner);
            out.extend(inner.into_iter().map(|(l, m, h)| (l, m, StackedExpr::prod(h, tail.clone()))));
        }
        StackedExpr::SStack(head, tail) => {
            let mut inner = Vec::new();
            derive_stacked(head, normed_plus, &mut inner);
            out.extend(inner.into_iter().map(|(l, m, h)| (l, m, StackedExpr::stack_unchecked(h, tail.clone()))));
            if let StackedExpr::Plain(h) = &**head {
                if terminates_star(h) {
                    out.push((StepLabel::Empty, Marking::Body, StackedExpr::Plain(tail.clone())));
                }
            }
        }
    }
}

fn derive_plain(
    e: &StarExpr,
    normed_plus: &mut dyn FnMut(&StarExpr) -> bool,
    out: &mut Vec<(StepLabel, Marking, StackedExpr)>,
) {
    match e {
        StarExpr::Zero | StarExpr::One => {}
        StarExpr::Act(a) => out.push((StepLabel::Proper(a.clone()), Marking::Body, StackedExpr::Plain(StarExpr::One))),
        StarExpr::Sum(l, r) => {
            let mut inner = Vec::new();
            derive_plain(l, normed_plus, &mut inner);
            derive_plain(r, normed_plus, &mut inner);
            out.extend(inner.into_iter().map(|(l, _, t)| (l, Marking::Body, t)));
        }
        StarExpr::Prod(l, r) => {
            let mut inner = Vec::new();
            derive_plain(l, normed_plus, &mut inner);
            out.extend(inner.into_iter().map(|(lab, m, t)| (lab, m, StackedExpr::prod(t, (**r).clone()))));
            if terminates_star(l) {
                let mut inner = Vec::new();
                derive_plain(r, normed_plus, &mut inner);
                out.extend(inner.into_iter().map(|(lab, _, t)| (lab, Marking::Body, t)));
            }
        }
        StarExpr::Star(body) => {
            let mut inner = Vec::new();
            derive_plain(body, normed_plus, &mut inner);
            if inner.is_empty() {
                return;
            }
            let marking = if normed_plus(body) { Marking::Entry(e.star_height() as u32) } else { Marking::Body };
            out.extend(inner.into_iter().map(|(lab, _, t)| (lab, marking, StackedExpr::stack_unchecked(t, e.clone()))));
        }
    }
}

/// A generated chart together with the expression behind every vertex.
#[derive(Debug, Clone)]
pub struct Interpretation<L, X> {
    pub chart: Chart<L>,
    pub exprs: Vec<X>,
}

impl<L: Label, X: Eq + Hash> Interpretation<L, X> {
    /// Vertex whose expression is `x`.
    pub fn vertex_of(&self, x: &X) -> Option<VertexId> {
        self.exprs.iter().position(|y| y == x)
    }
}

type Generated<X, L, M> = (Vec<X>, Vec<(VertexId, L, VertexId, M)>);

// Breadth-first generation from `root`; vertex ids follow discovery order.
fn generate<X, L, M>(
    root: X,
    cap: usize,
    mut steps: impl FnMut(&X) -> Result<Vec<(L, M, X)>>,
) -> Result<Generated<X, L, M>>
where
    X: Clone + Eq + Hash,
{
    let mut ids: HashMap<X, VertexId> = HashMap::new();
    let mut exprs = vec![root.clone()];
    ids.insert(root, 0);
    let mut transitions = Vec::new();
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        let x = exprs[v].clone();
        for (label, mark, target) in steps(&x)? {
            let w = match ids.get(&target) {
                Some(&w) => w,
                None => {
                    if exprs.len() >= cap {
                        return Err(Error::StateExplosion { cap });
                    }
                    let w = exprs.len();
                    ids.insert(target.clone(), w);
                    exprs.push(target);
                    queue.push_back(w);
                    w
                }
            };
            transitions.push((v, label, w, mark));
        }
    }
    Ok((exprs, transitions))
}

/// The chart interpretation of `e`, with expressions kept per vertex.
pub fn chart_interpretation(e: &StarExpr, cap: usize) -> Result<Interpretation<Action, StarExpr>> {
    let (exprs, ts) = generate(e.clone(), cap, |x| Ok(steps_star(x).into_iter().map(|(a, t)| (a, (), t)).collect()))?;
    let terminating = exprs.iter().map(terminates_star).collect();
    let annotations = exprs.iter().map(|x| Some(x.to_string())).collect();
    let chart = Chart::with_alphabet(e.actions(), 0, terminating, ts.into_iter().map(|(f, l, t, _)| (f, l, t)))?
        .with_annotations(annotations);
    Ok(Interpretation { chart, exprs })
}

/// The chart interpretation `C(e)`; vertices are annotated with their
/// expressions.
pub fn chart_of(e: &StarExpr) -> Result<Chart> {
    chart_interpretation(e, DEFAULT_VERTEX_CAP).map(|i| i.chart)
}

/// The 1-chart generated by `root` under the stacked rule system.
pub fn onechart_interpretation(root: &StackedExpr, cap: usize) -> Result<Interpretation<StepLabel, StackedExpr>> {
    let (exprs, ts) =
        generate(root.clone(), cap, |x| Ok(steps_stacked(x).into_iter().map(|(l, t)| (l, (), t)).collect()))?;
    let terminating = exprs.iter().map(terminates_stacked).collect();
    let annotations = exprs.iter().map(|x| Some(x.to_string())).collect();
    let chart =
        Chart::with_alphabet(root.project().actions(), 0, terminating, ts.into_iter().map(|(f, l, t, _)| (f, l, t)))?
            .with_annotations(annotations);
    Ok(Interpretation { chart, exprs })
}

/// The 1-chart interpretation `C1(e)`.
pub fn onechart_of(e: &StarExpr) -> Result<OneChart> {
    onechart_interpretation(&StackedExpr::Plain(e.clone()), DEFAULT_VERTEX_CAP).map(|i| i.chart)
}

/// The 1-chart interpretation of `e` with its entry/body labeling.
pub fn labeled_interpretation(e: &StarExpr, cap: usize) -> Result<(EntryBodyLabeling<StepLabel>, Vec<StackedExpr>)> {
    let mut cache = NormedCache { cap, ..NormedCache::default() };
    let (exprs, ts) =
        generate(StackedExpr::Plain(e.clone()), cap, |x| labeled_steps_with(x, &mut |b| cache.normed_plus(b)))?;
    if let Some(err) = cache.error.take() {
        return Err(err);
    }
    let terminating = exprs.iter().map(terminates_stacked).collect();
    let annotations = exprs.iter().map(|x| Some(x.to_string())).collect();
    let labeling = EntryBodyLabeling::from_marked(e.actions(), 0, terminating, ts)?.with_annotations(annotations);
    Ok((labeling, exprs))
}

/// The entry/body-labeled 1-chart interpretation of `e`.
pub fn labeled_onechart_of(e: &StarExpr) -> Result<EntryBodyLabeling<StepLabel>> {
    labeled_interpretation(e, DEFAULT_VERTEX_CAP).map(|(l, _)| l)
}

/// Normedness of a stacked expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normedness {
    /// Some path reaches an immediately terminating expression.
    pub normed: bool,
    /// Some induced path of positive length reaches induced termination.
    pub normed_plus: bool,
}

/// Normedness of every vertex of a 1-chart, by backward fixpoints:
/// `normed` is backward reachability from terminating vertices, and
/// `normed_plus` is backward reachability over empty steps from vertices
/// with a proper step into a normed vertex.
pub fn normedness_of_chart(c: &OneChart) -> Vec<Normedness> {
    let n = c.num_vertices();
    let mut preds: Vec<Vec<(VertexId, bool)>> = vec![Vec::new(); n];
    for t in c.transitions() {
        preds[t.to].push((t.from, t.label == StepLabel::Empty));
    }
    let mut normed = c.terminating().to_vec();
    let mut stack: Vec<VertexId> = (0..n).filter(|&v| normed[v]).collect();
    while let Some(v) = stack.pop() {
        for &(u, _) in &preds[v] {
            if !normed[u] {
                normed[u] = true;
                stack.push(u);
            }
        }
    }
    let mut plus = vec![false; n];
    for t in c.transitions() {
        if t.label != StepLabel::Empty && normed[t.to] && !plus[t.from] {
            plus[t.from] = true;
        }
    }
    let mut stack: Vec<VertexId> = (0..n).filter(|&v| plus[v]).collect();
    while let Some(v) = stack.pop() {
        for &(u, empty) in &preds[v] {
            if empty && !plus[u] {
                plus[u] = true;
                stack.push(u);
            }
        }
    }
    (0..n).map(|v| Normedness { normed: normed[v], normed_plus: plus[v] }).collect()
}

/// Normedness of `E`, computed on the sub-1-chart generated by `E`.
pub fn normedness(e: &StackedExpr) -> Result<Normedness> {
    let interp = onechart_interpretation(e, DEFAULT_VERTEX_CAP)?;
    Ok(normedness_of_chart(&interp.chart)[0])
}

#[derive(Default)]
struct NormedCache {
    cap: usize,
    known: HashMap<StarExpr, bool>,
    error: Option<Error>,
}

impl NormedCache {
    fn normed_plus(&mut self, body: &StarExpr) -> bool {
        if let Some(&b) = self.known.get(body) {
            return b;
        }
        let cap = if self.cap == 0 { DEFAULT_VERTEX_CAP } else { self.cap };
        let b = match onechart_interpretation(&StackedExpr::Plain(body.clone()), cap) {
            Ok(interp) => normedness_of_chart(&interp.chart)[0].normed_plus,
            Err(e) => {
                self.error.get_or_insert(e);
                false
            }
        };
        self.known.insert(body.clone(), b);
        b
    }
}

//! Shared strategies and law checks for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::OnceLock;

use loopchart::charts::induced_of;
use loopchart::semantics::{labeled_interpretation, normedness_of_chart, steps_stacked, DEFAULT_VERTEX_CAP};
use loopchart::syntax::{AppCxt, StackedExpr};
use loopchart::{Action, Chart, Marking, OneChart, StarExpr, StepLabel};
use proptest::prelude::*;

pub fn act(name: &str) -> Action {
    Action::new(name).unwrap()
}

/// The default corpus, built once per test binary.
pub fn corpus() -> &'static [StarExpr] {
    static CORPUS: OnceLock<Vec<StarExpr>> = OnceLock::new();
    CORPUS.get_or_init(loopchart::corpus::default_corpus)
}

pub fn arb_star_expr() -> impl Strategy<Value = StarExpr> {
    let leaf = prop_oneof![
        Just(StarExpr::Zero),
        Just(StarExpr::One),
        prop::sample::select(vec!["a", "b", "c"]).prop_map(|a| StarExpr::Act(act(a))),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(StarExpr::star),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| StarExpr::sum(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| StarExpr::prod(l, r)),
        ]
    })
}

/// Charts with up to `max` vertices over `{a, b}`.
pub fn arb_chart(max: usize) -> impl Strategy<Value = Chart> {
    (1..=max)
        .prop_flat_map(|n| {
            let edges = prop::collection::vec((0..n, prop::sample::select(vec!["a", "b"]), 0..n), 0..=3 * n);
            (prop::collection::vec(prop::bool::weighted(0.3), n), edges)
        })
        .prop_map(|(term, edges)| Chart::new(0, term, edges.into_iter().map(|(f, l, t)| (f, act(l), t))).unwrap())
}

/// Violations of the structural laws on the labeled 1-chart of `e`.
pub fn law_violations(e: &StarExpr) -> Vec<String> {
    let mut out = Vec::new();
    let (labeling, exprs) = match labeled_interpretation(e, DEFAULT_VERTEX_CAP) {
        Ok(x) => x,
        Err(err) => return vec![format!("{e}: {err}")],
    };
    let c = labeling.chart();
    for (i, t) in c.transitions().iter().enumerate() {
        let (src, dst) = (&exprs[t.from], &exprs[t.to]);
        let marking = labeling.marking(i);
        // (a) empty steps are body steps
        if t.label == StepLabel::Empty && marking != Marking::Body {
            out.push(format!("{e}: 1-step {src} -> {dst} marked {marking}"));
        }
        // (b) entry level and shape
        if let Marking::Entry(n) = marking {
            if let Err(msg) = check_entry(src, &t.label, n, dst) {
                out.push(format!("{e}: entry {src} -{}-> {dst}: {msg}", t.label));
            }
        }
        // (d) star height is non-increasing
        if dst.star_height() > src.star_height() {
            out.push(format!("{e}: star height grows along {src} -{}-> {dst}", t.label));
        }
    }
    // (c) body steps are acyclic
    if let Some(v) = body_cycle_vertex(&labeling) {
        out.push(format!("{e}: body cycle through {}", exprs[v]));
    }
    // (e) normed+ iff some transition reaches a normed target
    let n = normedness_of_chart(c);
    let induced_plus = induced_normed_plus(c);
    for v in c.vertices() {
        let has = c.out(v).iter().any(|t| n[t.to].normed);
        if n[v].normed_plus != has {
            out.push(format!("{e}: {} normed+ {} but normed successor {has}", exprs[v], n[v].normed_plus));
        }
        if n[v].normed_plus != induced_plus[v] {
            out.push(format!("{e}: {} normed+ disagrees with the induced chart", exprs[v]));
        }
    }
    out
}

fn check_entry(src: &StackedExpr, label: &StepLabel, n: u32, dst: &StackedExpr) -> Result<(), String> {
    let (cxt, head) = src.decompose_head();
    let StarExpr::Star(body) = &head else {
        return Err(format!("head {head} is not a star"));
    };
    if n as usize != body.star_height() + 1 {
        return Err(format!("level {n}, body star height {}", body.star_height()));
    }
    let matches = steps_stacked(&StackedExpr::Plain((**body).clone()))
        .into_iter()
        .any(|(l, g)| &l == label && stack_into(&cxt, g, &head).as_ref() == Some(dst));
    if matches {
        Ok(())
    } else {
        Err("target is not the context around a stacked body derivative".into())
    }
}

fn stack_into(cxt: &AppCxt, g: StackedExpr, star: &StarExpr) -> Option<StackedExpr> {
    StackedExpr::stack(g, star.clone()).ok().map(|s| cxt.fill(s))
}

// Kahn's algorithm over the body steps; returns a vertex left on a cycle.
fn body_cycle_vertex(l: &loopchart::EntryBodyLabeling<StepLabel>) -> Option<usize> {
    let c = l.chart();
    let mut indegree = vec![0usize; c.num_vertices()];
    let body: Vec<_> =
        c.transitions().iter().enumerate().filter(|(i, _)| l.marking(*i) == Marking::Body).map(|(_, t)| t).collect();
    for t in &body {
        indegree[t.to] += 1;
    }
    let mut queue: Vec<usize> = c.vertices().filter(|&v| indegree[v] == 0).collect();
    let mut removed = BTreeSet::new();
    while let Some(v) = queue.pop() {
        removed.insert(v);
        for t in body.iter().filter(|t| t.from == v) {
            indegree[t.to] -= 1;
            if indegree[t.to] == 0 {
                queue.push(t.to);
            }
        }
    }
    c.vertices().find(|v| !removed.contains(v))
}

// normed+ read off the induced chart: a proper induced step into a vertex
// that reaches induced termination.
fn induced_normed_plus(c: &OneChart) -> Vec<bool> {
    let induced = induced_of(c);
    let n = induced.num_vertices();
    let mut normed = induced.terminating().to_vec();
    loop {
        let mut changed = false;
        for t in induced.transitions() {
            if normed[t.to] && !normed[t.from] {
                normed[t.from] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    (0..n).map(|v| induced.out(v).iter().any(|t| normed[t.to])).collect()
}

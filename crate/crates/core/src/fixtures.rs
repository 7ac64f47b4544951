//! Reference expressions and charts used by the tests and examples.

use crate::charts::Chart;
use crate::error::Result;
use crate::lee::{EliminationStep, EliminationTrace};
use crate::syntax::{parse_star_expr, Action, StarExpr};

/// Three vertices that LEE can take apart in several ways.
pub const G0: &str = "((1.a).(c.a + a.(b + b.a))*).0";

/// Every vertex terminates; the chart fails LEE although the 1-chart
/// satisfies it.
pub const E: &str = "(a*.b*)*";

/// Three interlocked loops behind a common star.
pub const F: &str = "(a1.(1 + b1.0) + (a2.(1 + b2.0) + a3.(1 + b3.0)))*.0";

/// Two terminating vertices joined by `a` and `b`.
pub const NE1_JSON: &str = include_str!("../fixtures/ne1.json");

/// Three vertices each reaching the other two by `a1`, `a2`, `a3`.
pub const NE2_JSON: &str = include_str!("../fixtures/ne2.json");

pub fn g0() -> StarExpr {
    parse_star_expr(G0).expect("fixture parses")
}

pub fn e() -> StarExpr {
    parse_star_expr(E).expect("fixture parses")
}

pub fn f() -> StarExpr {
    parse_star_expr(F).expect("fixture parses")
}

pub fn ne1() -> Chart {
    Chart::from_json(NE1_JSON).expect("fixture is a chart")
}

pub fn ne2() -> Chart {
    Chart::from_json(NE2_JSON).expect("fixture is a chart")
}

/// A transition by endpoints and label.
pub type Edge = (usize, &'static str, usize);

/// The three recorded elimination runs on the chart of [`G0`], whose
/// vertices are numbered `g0 = 0`, `g1 = 1`, `g2 = 2` in discovery order.
/// Each run is a list of steps, each step a vertex and its entry edges.
pub const G0_RUNS: [&[(usize, &[Edge])]; 3] = [
    &[(1, &[(1, "c", 0)]), (2, &[(2, "b", 1)]), (2, &[(2, "b", 0)])],
    &[(1, &[(1, "a", 2)]), (1, &[(1, "c", 0)])],
    &[(1, &[(1, "a", 2), (1, "c", 0)])],
];

/// Resolves a recorded run against a chart.
pub fn trace_of(chart: &Chart, run: &[(usize, &[Edge])]) -> Result<EliminationTrace> {
    let mut steps = Vec::new();
    for &(vertex, edges) in run {
        let mut entry_set = Vec::new();
        for &(from, label, to) in edges {
            let id = chart
                .find(from, &Action::new(label)?, to)
                .ok_or_else(|| crate::error::Error::InvalidChart(format!("no transition {from} -{label}-> {to}")))?;
            entry_set.push(id);
        }
        steps.push(EliminationStep { vertex, entry_set });
    }
    Ok(EliminationTrace { steps })
}

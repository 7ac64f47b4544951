mod common;

use loopchart::semantics::{
    chart_interpretation, chart_of, labeled_onechart_of, normedness, onechart_of, steps_star, terminates_star,
};
use loopchart::syntax::parse_stacked_expr;
use loopchart::{fixtures, parse_star_expr, Error, Marking, StackedExpr, StepLabel};
use proptest::prelude::*;

#[test]
fn charts_of_the_fixtures() {
    let g0 = chart_of(&fixtures::g0()).unwrap();
    assert_eq!(g0.annotation(0), Some("1.a.(c.a + a.(b + b.a))*.0"));
    assert_eq!(g0.annotation(1), Some("1.(c.a + a.(b + b.a))*.0"));
    assert_eq!(g0.annotation(2), Some("1.(b + b.a).(c.a + a.(b + b.a))*.0"));
    let e = chart_of(&fixtures::e()).unwrap();
    assert!(e.vertices().all(|v| e.is_terminating(v)));
}

#[test]
fn labeled_onechart_of_e() {
    let l = labeled_onechart_of(&fixtures::e()).unwrap();
    let c = l.chart();
    let marks: Vec<(String, String, Marking)> = c
        .transitions()
        .iter()
        .enumerate()
        .map(|(i, t)| (c.annotation(t.from).unwrap().to_string(), t.label.to_string(), l.marking(i)))
        .collect();
    let root = "(a*.b*)*";
    assert!(marks.contains(&(root.into(), "a".into(), Marking::Entry(2))));
    assert!(marks.contains(&(root.into(), "b".into(), Marking::Entry(2))));
    assert!(marks.contains(&("a*.b* @ (a*.b*)*".into(), "a".into(), Marking::Entry(1))));
    assert!(marks.contains(&("b* @ (a*.b*)*".into(), "b".into(), Marking::Entry(1))));
    assert!(marks.iter().filter(|m| m.1 == "1").all(|m| m.2 == Marking::Body));
}

#[test]
fn entries_of_f_all_leave_the_root() {
    let l = labeled_onechart_of(&fixtures::f()).unwrap();
    assert_eq!(l.entries().into_iter().collect::<Vec<_>>(), vec![(0, 1)]);
    assert_eq!(l.num_entries(), 3);
}

#[test]
fn vertex_cap() {
    let e = parse_star_expr("(a.b.c)*").unwrap();
    assert!(matches!(chart_interpretation(&e, 2), Err(Error::StateExplosion { cap: 2 })));
}

#[test]
fn normedness_examples() {
    let n = |s: &str| normedness(&parse_stacked_expr(s).unwrap()).unwrap();
    assert!(n("a").normed_plus);
    assert!(!n("1").normed_plus && n("1").normed);
    assert!(!n("0").normed);
    assert!(!n("(a.0)*").normed_plus);
    assert!(n("1 @ a*").normed_plus);
    // terminates only through its empty step
    assert!(n("1 @ 0*").normed && !n("1 @ 0*").normed_plus);
}

#[test]
fn empty_steps_leave_stacks() {
    let c = onechart_of(&fixtures::e()).unwrap();
    for t in c.transitions().iter().filter(|t| t.label == StepLabel::Empty) {
        let from = parse_stacked_expr(c.annotation(t.from).unwrap()).unwrap();
        assert!(matches!(from, StackedExpr::SStack(..)));
    }
}

proptest! {
    #[test]
    fn structural_laws(e in common::arb_star_expr()) {
        let v = common::law_violations(&e);
        prop_assert!(v.is_empty(), "{:?}", v);
    }

    #[test]
    fn plain_steps_match_projection(e in common::arb_star_expr()) {
        // the stacked system, read through the projection, has the same steps
        // as the plain one on plain expressions
        let one = onechart_of(&e).unwrap();
        let plain: std::collections::BTreeSet<_> =
            steps_star(&e).into_iter().map(|(a, t)| (a.to_string(), t.to_string())).collect();
        let stacked: std::collections::BTreeSet<_> = one
            .out(0)
            .iter()
            .map(|t| (t.label.to_string(), parse_stacked_expr(one.annotation(t.to).unwrap()).unwrap().project().to_string()))
            .collect();
        prop_assert_eq!(plain, stacked);
        prop_assert_eq!(one.is_terminating(0), terminates_star(&e));
    }
}

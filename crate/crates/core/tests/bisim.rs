mod common;

use loopchart::bisim::{
    bisimilar, check_functional_bisim, check_relation_bisim, collapse, greatest_bisimulation, is_collapsed,
    naive_bisim_oracle, BisimMode, Relation, Violation,
};
use loopchart::semantics::chart_of;
use loopchart::{fixtures, parse_star_expr, Chart, Error};
use proptest::prelude::*;

fn chart(s: &str) -> Chart {
    chart_of(&parse_star_expr(s).unwrap()).unwrap()
}

#[test]
fn classic_pairs() {
    assert!(bisimilar(&chart("a.(b + c)"), &chart("a.b + a.c")).is_none());
    assert!(bisimilar(&chart("a + a"), &chart("a")).is_some());
    assert!(bisimilar(&chart("(a + b)*"), &chart_of(&fixtures::e()).unwrap()).is_some());
    assert!(bisimilar(&chart("a*"), &chart("a*.a*")).is_some());
    assert!(bisimilar(&chart("0"), &chart("a.0")).is_none());
}

#[test]
fn violations_name_the_clause() {
    let a = chart("a");
    let b = chart("b");
    assert_eq!(
        check_functional_bisim(&a, &b, &[Some(0), Some(1)]).unwrap_err(),
        Violation::Forth { pair: (0, 0), label: "a".into(), target: 1 }
    );
    let r: Relation = [(1, 1)].into_iter().collect();
    assert_eq!(check_relation_bisim(&a, &a, &r, BisimMode::Chart), Err(Violation::MissingStartPair(0, 0)));
    assert_eq!(check_relation_bisim(&a, &a, &r, BisimMode::Lts), Ok(()));
    assert_eq!(check_relation_bisim(&a, &a, &Relation::default(), BisimMode::Chart), Err(Violation::Empty));
    let t: Relation = [(0, 0), (1, 0)].into_iter().collect();
    assert!(matches!(
        check_relation_bisim(&a, &a, &t, BisimMode::Chart),
        Err(Violation::Termination { .. } | Violation::Forth { .. })
    ));
}

#[test]
fn oracle_cap() {
    let big = chart("(a.b.c.a.b.c)*");
    assert!(matches!(naive_bisim_oracle(&big, &big, 4), Err(Error::CapExceeded { .. })));
}

#[test]
fn collapse_of_e() {
    let (q, map) = collapse(&chart_of(&fixtures::e()).unwrap());
    assert_eq!(q.num_vertices(), 1);
    assert_eq!(map.map, vec![Some(0); 3]);
    assert!(is_collapsed(&q));
}

proptest! {
    #[test]
    fn refinement_matches_oracle(a in common::arb_chart(7), b in common::arb_chart(7)) {
        let fast = greatest_bisimulation(&a, &b);
        let slow = naive_bisim_oracle(&a, &b, 80).unwrap();
        prop_assert_eq!(&fast, &slow);
        prop_assert_eq!(bisimilar(&a, &b).is_some(), slow.contains(a.start(), b.start()));
        prop_assert!(check_relation_bisim(&a, &b, &fast, BisimMode::Lts).is_ok());
    }

    #[test]
    fn collapse_is_a_functional_bisimulation(c in common::arb_chart(8)) {
        let (q, map) = collapse(&c);
        prop_assert!(is_collapsed(&q));
        prop_assert!(check_functional_bisim(&c, &q, &map.map).is_ok());
        prop_assert!(bisimilar(&c, &q).is_some());
        let (qq, _) = collapse(&q);
        prop_assert_eq!(qq.num_vertices(), q.num_vertices());
    }

    #[test]
    fn relation_composition(a in common::arb_chart(5), b in common::arb_chart(5)) {
        let ab = greatest_bisimulation(&a, &b);
        let ba = greatest_bisimulation(&b, &a);
        let aa = ab.compose(&ba);
        prop_assert!(check_relation_bisim(&a, &a, &aa, BisimMode::Lts).is_ok());
    }
}

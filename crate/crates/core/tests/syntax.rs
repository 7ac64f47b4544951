mod common;

use loopchart::syntax::{parse_stacked_expr, AppCxt, StackedExpr};
use loopchart::{parse_star_expr, Error, StarExpr};
use proptest::prelude::*;

#[test]
fn parse_error_reports_offset() {
    let Err(Error::Parse(err)) = parse_star_expr("a + ") else { panic!("expected a parse error") };
    assert_eq!(err.offset, 4);
    assert_eq!(err.found, "end of input");
    assert!(err.expected.iter().any(|x| x == "identifier"));

    let Err(Error::Parse(err)) = parse_star_expr("(a.b") else { panic!() };
    assert_eq!(err.offset, 4);
    assert!(parse_star_expr("a @ b*").is_err(), "stacking is not plain syntax");
    assert!(parse_star_expr("nonsense(").is_err());
}

#[test]
fn precedence() {
    let e = parse_star_expr("a + b.c*").unwrap();
    let a = || StarExpr::act("a").unwrap();
    let b = || StarExpr::act("b").unwrap();
    let c = || StarExpr::act("c").unwrap();
    assert_eq!(e, StarExpr::sum(a(), StarExpr::prod(b(), StarExpr::star(c()))));
    assert_eq!(parse_star_expr("a.b.c").unwrap(), StarExpr::prod(StarExpr::prod(a(), b()), c()));
    assert_eq!(parse_star_expr("a**").unwrap(), StarExpr::star(StarExpr::star(a())));
}

#[test]
fn fixture_renderings() {
    assert_eq!(parse_star_expr(loopchart::fixtures::G0).unwrap().to_string(), "1.a.(c.a + a.(b + b.a))*.0");
    let s = parse_stacked_expr("1 @ a*.b* @ (a*.b*)*").unwrap();
    assert_eq!(s.to_string(), "1 @ a*.b* @ (a*.b*)*");
    assert_eq!(s.project().to_string(), "1.a*.b*.(a*.b*)*");
    assert_eq!(s.star_height(), 2);
}

#[test]
fn stacking_needs_a_star() {
    let one = StackedExpr::Plain(StarExpr::One);
    assert!(StackedExpr::stack(one.clone(), StarExpr::act("a").unwrap()).is_err());
    assert!(StackedExpr::stack(one, parse_star_expr("a*").unwrap()).is_ok());
    assert!(parse_stacked_expr("1 @ a").is_err());
}

#[test]
fn product_of_plain_stays_plain() {
    let p = StackedExpr::prod(StackedExpr::Plain(StarExpr::One), StarExpr::Zero);
    assert!(p.is_plain());
}

fn arb_stacked() -> impl Strategy<Value = StackedExpr> {
    let plain = common::arb_star_expr().prop_map(StackedExpr::Plain);
    plain.prop_recursive(3, 12, 1, |inner| {
        prop_oneof![
            (inner.clone(), common::arb_star_expr()).prop_map(|(h, t)| StackedExpr::prod(h, t)),
            (inner, common::arb_star_expr()).prop_map(|(h, t)| StackedExpr::stack(h, StarExpr::star(t)).unwrap()),
        ]
    })
}

proptest! {
    #[test]
    fn render_then_parse(e in common::arb_star_expr()) {
        prop_assert_eq!(parse_star_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn stacked_render_then_parse(s in arb_stacked()) {
        prop_assert_eq!(parse_stacked_expr(&s.to_string()).unwrap(), s);
    }

    #[test]
    fn decompose_then_fill(s in arb_stacked()) {
        let (cxt, e) = s.decompose();
        prop_assert_eq!(cxt.fill(StackedExpr::Plain(e.clone())), s.clone());
        let (head_cxt, head) = s.decompose_head();
        prop_assert!(!matches!(head, StarExpr::Prod(..)));
        prop_assert_eq!(head_cxt.fill(StackedExpr::Plain(head)).project(), s.project());
    }

    #[test]
    fn star_height_bounds(s in arb_stacked()) {
        prop_assert!(s.star_height() <= s.project().star_height());
        prop_assert_eq!(StackedExpr::Plain(s.project()).project(), s.project());
    }

    #[test]
    fn fill_of_hole(e in common::arb_star_expr()) {
        prop_assert_eq!(AppCxt::Hole.fill(StackedExpr::Plain(e.clone())), StackedExpr::Plain(e));
    }
}

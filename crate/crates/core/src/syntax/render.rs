//! Minimal-parenthesis printing, inverse to the parser.

use super::{StackedExpr, StarExpr};

const SUM: u8 = 0;
const PROD: u8 = 1;
const STAR: u8 = 2;

/// Renders a stacked expression; `@` marks the stacked product.
pub fn render(expr: &StackedExpr) -> String {
    let mut out = String::new();
    write_stacked(expr, SUM, &mut out);
    out
}

/// Renders a star expression.
pub fn render_star(expr: &StarExpr) -> String {
    let mut out = String::new();
    write_star(expr, SUM, &mut out);
    out
}

fn precedence(e: &StarExpr) -> u8 {
    match e {
        StarExpr::Sum(..) => SUM,
        StarExpr::Prod(..) => PROD,
        _ => STAR,
    }
}

fn write_star(e: &StarExpr, min: u8, out: &mut String) {
    let paren = precedence(e) < min;
    if paren {
        out.push('(');
    }
    match e {
        StarExpr::Zero => out.push('0'),
        StarExpr::One => out.push('1'),
        StarExpr::Act(a) => out.push_str(a.as_str()),
        StarExpr::Sum(l, r) => {
            write_star(l, SUM, out);
            out.push_str(" + ");
            write_star(r, PROD, out);
        }
        StarExpr::Prod(l, r) => {
            write_star(l, PROD, out);
            out.push('.');
            write_star(r, STAR, out);
        }
        StarExpr::Star(body) => {
            write_star(body, STAR, out);
            out.push('*');
        }
    }
    if paren {
        out.push(')');
    }
}

fn write_stacked(e: &StackedExpr, min: u8, out: &mut String) {
    match e {
        StackedExpr::Plain(e) => write_star(e, min, out),
        StackedExpr::SProd(head, tail) | StackedExpr::SStack(head, tail) => {
            let paren = min > PROD;
            if paren {
                out.push('(');
            }
            write_stacked(head, PROD, out);
            out.push_str(if matches!(e, StackedExpr::SProd(..)) { "." } else { " @ " });
            write_star(tail, STAR, out);
            if paren {
                out.push(')');
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_stacked_expr, parse_star_expr};

    #[test]
    fn examples() {
        let a = StarExpr::act("a").unwrap();
        assert_eq!(render(&StackedExpr::Plain(StarExpr::star(a.clone()))), "a*");
        let s = StackedExpr::stack(StackedExpr::Plain(StarExpr::One), StarExpr::star(a.clone())).unwrap();
        assert_eq!(render(&s), "1 @ a*");
        let e = StarExpr::sum(a, StarExpr::prod(StarExpr::act("b").unwrap(), StarExpr::act("c").unwrap()));
        assert_eq!(render(&StackedExpr::Plain(e)), "a + b.c");
    }

    #[test]
    fn parentheses_where_needed() {
        for text in ["(a*.b*)*", "a.(b + c)", "a.(b.c)", "a + (b + c)", "(a + b)*", "((1.a).(c.a + a.(b + b.a))*).0"] {
            let e = parse_star_expr(text).unwrap();
            assert_eq!(parse_star_expr(&render_star(&e)).unwrap(), e, "{text}");
        }
        assert_eq!(render_star(&parse_star_expr("a.(b.c)").unwrap()), "a.(b.c)");
        assert_eq!(render_star(&parse_star_expr("(a.b).c").unwrap()), "a.b.c");
        assert_eq!(
            render_star(&parse_star_expr("((1.a).(c.a + a.(b + b.a))*).0").unwrap()),
            "1.a.(c.a + a.(b + b.a))*.0"
        );
    }

    #[test]
    fn stacked_round_trip() {
        for text in ["1 @ a*", "1 @ a*.b* @ (a*.b*)*", "1.0 @ b*.0", "(a + b) @ c*", "b* @ (a*.b*)*"] {
            let e = parse_stacked_expr(text).unwrap();
            assert_eq!(render(&e), text);
        }
    }
}

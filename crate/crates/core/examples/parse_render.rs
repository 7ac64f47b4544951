//! Parsing, rendering and decomposing stacked expressions.

use loopchart::parse_star_expr;
use loopchart::syntax::parse_stacked_expr;

fn main() -> loopchart::Result<()> {
    let e = parse_star_expr("((1.a).(c.a + a.(b + b.a))*).0")?;
    println!("{e}  size {}  star height {}", e.size(), e.star_height());

    let s = parse_stacked_expr("1 @ a*.b* @ (a*.b*)*")?;
    let (cxt, head) = s.decompose();
    println!("{s}  projects to {}", s.project());
    println!("  decomposes into a context of depth {} around {head}", cxt.depth());
    assert_eq!(cxt.fill(loopchart::StackedExpr::Plain(head)), s);

    match parse_star_expr("a + ") {
        Err(err) => println!("{err}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

//! Bisimilarity by partition refinement, the collapse, and the naive oracle.

use loopchart::bisim::{bisimilar, collapse, naive_bisim_oracle, DEFAULT_ORACLE_CAP};
use loopchart::fixtures;
use loopchart::parse_star_expr;
use loopchart::semantics::chart_of;

fn main() -> loopchart::Result<()> {
    let e = chart_of(&fixtures::e())?;
    let (q, map) = collapse(&e);
    println!("collapse of C(e): {} vertex, quotient {:?}", q.num_vertices(), map.map);
    print!("{q}");

    let left = chart_of(&parse_star_expr("(a + b)*")?)?;
    let right = chart_of(&parse_star_expr("(a*.b*)*")?)?;
    match bisimilar(&left, &right) {
        Some(r) => println!("(a + b)* and (a*.b*)* are bisimilar: {:?}", r.pairs),
        None => println!("(a + b)* and (a*.b*)* are not bisimilar"),
    }
    let oracle = naive_bisim_oracle(&left, &right, DEFAULT_ORACLE_CAP)?;
    println!("oracle relates the starts: {}", oracle.contains(left.start(), right.start()));

    let a_then_b = chart_of(&parse_star_expr("a.(b + b)")?)?;
    let ab = chart_of(&parse_star_expr("a.b + a.b")?)?;
    println!("a.(b + b) ~ a.b + a.b: {}", bisimilar(&a_then_b, &ab).is_some());
    Ok(())
}

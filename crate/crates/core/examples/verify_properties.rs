//! Checking P1 and P2 on single expressions.
//!
//!     cargo run --example verify_properties -- "(a1.(1 + b1.0))*.0"

use loopchart::fixtures;
use loopchart::parse_star_expr;
use loopchart::verify::{projection_is_isomorphism, verify_p1, verify_p2};

fn main() -> loopchart::Result<()> {
    let inputs: Vec<String> = std::env::args().skip(1).collect();
    let exprs = if inputs.is_empty() {
        vec![fixtures::e(), fixtures::f(), fixtures::g0()]
    } else {
        inputs.iter().map(|s| parse_star_expr(s)).collect::<loopchart::Result<_>>()?
    };
    for e in &exprs {
        let p1 = verify_p1(e)?;
        let p2 = verify_p2(e)?;
        println!("{p1}");
        println!("{p2}");
        println!("  statistics: {:?} / {:?}", p1.statistics, p2.statistics);
        println!("  projection is an isomorphism: {}", projection_is_isomorphism(e)?);
    }
    Ok(())
}

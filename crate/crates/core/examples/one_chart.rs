//! The 1-chart interpretation and its entry/body labeling.
//!
//!     cargo run --example one_chart -- "(a*.b*)*"

use loopchart::parse_star_expr;
use loopchart::semantics::{labeled_onechart_of, normedness_of_chart, onechart_of};

fn main() -> loopchart::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| loopchart::fixtures::E.to_string());
    let e = parse_star_expr(&text)?;

    let one = onechart_of(&e)?;
    println!(
        "C1({e}): {} vertices, {} transitions, {} empty steps",
        one.num_vertices(),
        one.transitions().len(),
        one.num_empty_steps()
    );
    for (v, n) in normedness_of_chart(&one).iter().enumerate() {
        println!("  v{v}: normed {}, normed+ {}", n.normed, n.normed_plus);
    }

    let labeled = labeled_onechart_of(&e)?;
    print!("{labeled}");
    println!("entries: {:?}", labeled.entries());
    Ok(())
}

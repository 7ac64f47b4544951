//! Compiling away the empty steps of a 1-chart.
//!
//!     cargo run --example induced_chart -- "(a*.b*)*"

use loopchart::charts::{induced_of, reachable};
use loopchart::parse_star_expr;
use loopchart::semantics::onechart_of;

fn main() -> loopchart::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| loopchart::fixtures::E.to_string());
    let e = parse_star_expr(&text)?;
    let one = onechart_of(&e)?;
    let induced = induced_of(&one);
    println!("induced chart, all {} vertices:", induced.num_vertices());
    print!("{induced}");
    let live = reachable(&induced);
    println!("after garbage collection, {} vertices:", live.num_vertices());
    print!("{live}");
    Ok(())
}

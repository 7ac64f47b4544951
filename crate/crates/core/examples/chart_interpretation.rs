//! Chart interpretation of a star expression, in text, JSON and Graphviz.
//!
//!     cargo run --example chart_interpretation -- "(a*.b*)*"

use loopchart::charts::DotOptions;
use loopchart::semantics::chart_of;
use loopchart::{parse_star_expr, Chart};

fn main() -> loopchart::Result<()> {
    let text = std::env::args().nth(1).unwrap_or_else(|| loopchart::fixtures::F.to_string());
    let e = parse_star_expr(&text)?;
    let c = chart_of(&e)?;
    println!(
        "{e}: {} vertices, {} transitions, {} terminating",
        c.num_vertices(),
        c.transitions().len(),
        c.num_terminating()
    );
    print!("{c}");

    let json = c.to_json();
    let back = Chart::from_json(&json)?;
    assert_eq!(back, c);
    println!("{json}");
    print!("{}", c.to_dot(&DotOptions::default()));
    Ok(())
}

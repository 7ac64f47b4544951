//! Enumerating a corpus and verifying both properties on it.
//!
//!     cargo run --release --example corpus -- 5

use loopchart::corpus::{count_exprs, summarize, verify_all, CorpusSpec};
use loopchart::verify::Property;

fn main() -> loopchart::Result<()> {
    let max_size = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let spec = CorpusSpec { max_size, random: 100, ..CorpusSpec::default() };
    for n in 1..=max_size {
        println!("size {n}: {} terms", count_exprs(spec.alphabet.len(), n));
    }
    let exprs = spec.exprs();
    let report = summarize(verify_all(&exprs, &[Property::P1, Property::P2])?);
    println!("{} expressions, {} checks, {} failed", exprs.len(), report.total, report.failed);
    for r in &report.failures {
        println!("  {r}");
    }
    Ok(())
}

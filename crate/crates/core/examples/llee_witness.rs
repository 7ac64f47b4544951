//! Validating entry/body labelings with both witness checkers.

use loopchart::fixtures::{self, G0_RUNS};
use loopchart::lee::{recording_labeling, validate_llee, validate_llee_alt};
use loopchart::semantics::{chart_of, labeled_onechart_of};
use loopchart::{EntryBodyLabeling, Marking};

fn main() -> loopchart::Result<()> {
    let g0 = chart_of(&fixtures::g0())?;
    for (i, run) in G0_RUNS.iter().enumerate() {
        let labeling = recording_labeling(&g0, &fixtures::trace_of(&g0, run)?)?;
        println!("run {}: {} / {}", i + 1, validate_llee(&labeling).valid, validate_llee_alt(&labeling).valid);
    }

    let labeled = labeled_onechart_of(&fixtures::f())?;
    println!("C1(f) labeled: {}", validate_llee(&labeled).valid);

    // Marking every transition as body leaves the cycles without entries.
    let bare = EntryBodyLabeling::all_body(g0.clone());
    let report = validate_llee(&bare);
    println!("all body: valid {}", report.valid);
    for v in &report.violations {
        println!("  {:?} at {:?}: {}", v.condition, v.vertex, v.detail);
    }

    let markings = vec![Marking::Entry(1); g0.transitions().len()];
    let flat = EntryBodyLabeling::new(g0, markings)?;
    println!("all entries: valid {}", validate_llee_alt(&flat).valid);
    Ok(())
}

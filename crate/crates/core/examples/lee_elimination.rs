//! Deciding LEE by loop elimination, and replaying a recorded run.

use loopchart::charts::has_infinite_path;
use loopchart::fixtures::{self, G0_RUNS};
use loopchart::lee::{decide_lee, recording_labeling, replay_trace};
use loopchart::semantics::{chart_of, onechart_of};

fn main() -> loopchart::Result<()> {
    let g0 = chart_of(&fixtures::g0())?;
    let outcome = decide_lee(&g0)?;
    println!("C(g0): LEE {} after {} states", if outcome.holds { "holds" } else { "fails" }, outcome.explored);
    if let Some(trace) = &outcome.trace {
        for step in &trace.steps {
            println!("  eliminate at v{} entries {:?}", step.vertex, step.entry_set);
        }
        print!("{}", recording_labeling(&g0, trace)?);
    }

    for (i, run) in G0_RUNS.iter().enumerate() {
        let trace = fixtures::trace_of(&g0, run)?;
        let residual = replay_trace(&g0, &trace)?;
        println!("run {}: residual has infinite path: {}", i + 1, has_infinite_path(&residual));
    }

    for (name, c) in [
        ("C(e)", chart_of(&fixtures::e())?),
        ("C(f)", chart_of(&fixtures::f())?),
        ("ne1", fixtures::ne1()),
        ("ne2", fixtures::ne2()),
    ] {
        let o = decide_lee(&c)?;
        println!("{name}: LEE {} ({} states)", if o.holds { "holds" } else { "fails" }, o.explored);
    }
    let one = onechart_of(&fixtures::e())?;
    println!("C1(e): LEE {}", if decide_lee(&one)?.holds { "holds" } else { "fails" });
    Ok(())
}

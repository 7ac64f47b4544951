use std::io::Write as _;

use loopchart::cli::run_cli_with;
use loopchart::lee::{LeeOutcome, WitnessReport};
use loopchart::semantics::labeled_onechart_of;
use loopchart::verify::VerifyReport;
use loopchart::{fixtures, Chart, EntryBodyLabeling, OneChart, StepLabel};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_cli_with(std::iter::once("loopchart").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn file_with(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn lee_on_e_fails() {
    let (code, out, _) = run(&["lee", fixtures::E]);
    assert_eq!(code, 1);
    assert!(out.starts_with("LEE: fails"));
    let (code, out, _) = run(&["lee", fixtures::G0]);
    assert_eq!(code, 0);
    assert!(out.starts_with("LEE: holds"));
    let (code, _, _) = run(&["lee", "--one", fixtures::E]);
    assert_eq!(code, 0);
}

#[test]
fn lee_reads_chart_files() {
    for json in [fixtures::NE1_JSON, fixtures::NE2_JSON] {
        let f = file_with(json);
        let (code, out, _) = run(&["lee", f.path().to_str().unwrap(), "--format", "json"]);
        assert_eq!(code, 1);
        let outcome: LeeOutcome = serde_json::from_str(&out).unwrap();
        assert!(!outcome.holds);
    }
}

#[test]
fn verify_prints_both_properties() {
    let (code, out, _) = run(&["verify", fixtures::E, "--property", "all"]);
    assert_eq!(code, 0);
    assert!(out.contains("P1: pass"));
    assert!(out.contains("P2: pass"));
    let (code, out, _) = run(&["--format", "json", "verify", fixtures::F, "--property", "p2"]);
    assert_eq!(code, 0);
    let reports: Vec<VerifyReport> = serde_json::from_str(&out).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].statistics.entries, Some(3));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    let (code, out, err) = run(&["bisim", "nonsense("]);
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.contains("parse error"));
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["verify", "a", "--property", "p3"]).0, 2);
    let bad = file_with(r#"{"alphabet": ["a"], "start": 3, "vertices": [], "transitions": []}"#);
    let (code, _, err) = run(&["lee", bad.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("/start"), "{err}");
    assert_eq!(run(&["--format", "dot", "verify", "a"]).0, 2);
}

#[test]
fn help_exits_0() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["chart", "onechart", "induced", "collapse", "lee", "llee-check", "bisim", "verify", "corpus"] {
        assert!(out.contains(sub), "{sub} missing from help");
    }
}

#[test]
fn bisim_exit_codes() {
    assert_eq!(run(&["bisim", "(a + b)*", fixtures::E]).0, 0);
    assert_eq!(run(&["bisim", "a.(b + c)", "a.b + a.c"]).0, 1);
    let (code, out, _) = run(&["--format", "json", "bisim", "a*", "a*.a*"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["bisimilar"], true);
}

#[test]
fn json_outputs_reparse() {
    let (_, out, _) = run(&["--format", "json", "chart", fixtures::F]);
    assert_eq!(Chart::<loopchart::Action>::from_json(&out).unwrap().transitions().len(), 15);
    let (_, out, _) = run(&["--format", "json", "onechart", fixtures::E]);
    assert_eq!(OneChart::from_json(&out).unwrap().num_empty_steps(), 4);
    let (_, out, _) = run(&["--format", "json", "onechart", "--labeled", fixtures::E]);
    assert_eq!(EntryBodyLabeling::<StepLabel>::from_json(&out).unwrap().num_entries(), 4);
    let (_, out, _) = run(&["--format", "json", "induced", "--gc", fixtures::E]);
    assert_eq!(Chart::<loopchart::Action>::from_json(&out).unwrap().num_vertices(), 3);
    let (_, out, _) = run(&["--format", "json", "collapse", fixtures::E]);
    assert_eq!(Chart::<loopchart::Action>::from_json(&out).unwrap().num_vertices(), 1);
    let (_, out, _) = run(&["--format", "json", "lee", fixtures::G0]);
    let outcome: LeeOutcome = serde_json::from_str(&out).unwrap();
    assert!(outcome.trace.is_some());
}

#[test]
fn dot_outputs() {
    for args in [["chart", "a*"], ["onechart", "a*"], ["induced", "a*"], ["collapse", "a*"], ["lee", "a*"]] {
        let (code, out, _) = run(&["--format", "dot", args[0], args[1]]);
        assert_eq!(code, 0, "{args:?}");
        assert!(out.starts_with("digraph"), "{args:?}");
    }
}

#[test]
fn llee_check_on_files() {
    let good = labeled_onechart_of(&fixtures::f()).unwrap();
    let f = file_with(&good.to_json());
    let (code, out, _) = run(&["--format", "json", "llee-check", f.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let report: WitnessReport = serde_json::from_value(v["validate_llee"].clone()).unwrap();
    assert!(report.valid);

    let bare = EntryBodyLabeling::all_body(good.chart().clone());
    let f = file_with(&bare.to_json());
    let (code, out, _) = run(&["llee-check", f.path().to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("invalid"));

    let unlabeled = file_with(&good.chart().to_json());
    assert_eq!(run(&["llee-check", unlabeled.path().to_str().unwrap()]).0, 2);
}

#[test]
fn corpus_is_deterministic() {
    let args = ["--format", "json", "corpus", "--alphabet", "a,b", "--max-size", "4", "--random", "20", "--seed", "3"];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    let report: loopchart::corpus::CorpusReport = serde_json::from_str(&first).unwrap();
    assert_eq!(report.total, 2 * (144 + 20));
    assert_eq!(report.failed, 0);
}

#[test]
fn budget_from_environment() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_loopchart"))
        .args(["lee", fixtures::F])
        .env(loopchart::cli::BUDGET_VAR, "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_loopchart");
    let status = |args: &[&str]| std::process::Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["lee", fixtures::E]), Some(1));
    assert_eq!(status(&["verify", fixtures::E]), Some(0));
    assert_eq!(status(&["bisim", "nonsense("]), Some(2));
}

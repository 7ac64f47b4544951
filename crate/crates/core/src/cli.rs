//! Command-line front end.
//!
//! Exit codes: 0 when the command succeeds or the property holds, 1 when a
//! property fails or two charts are not bisimilar, 2 on usage, parse or
//! schema errors and when the LEE search runs out of budget.

use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::bisim::{bisimilar, collapse};
use crate::charts::{induced_of, reachable, Chart, DotOptions, EntryBodyLabeling, OneChart};
use crate::corpus::{
    summarize, verify_all, CorpusSpec, DEFAULT_MAX_SIZE, DEFAULT_RANDOM, DEFAULT_RANDOM_MAX_SIZE, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::lee::{decide_lee_with_budget, recording_labeling, validate_llee, validate_llee_alt, DEFAULT_SEARCH_BUDGET};
use crate::semantics::{chart_of, labeled_onechart_of, onechart_of, StepLabel};
use crate::syntax::{parse_star_expr, Action, StarExpr};
use crate::verify::{verify, Property};

/// Environment variable overriding the LEE search budget.
pub const BUDGET_VAR: &str = "LOOPCHART_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    P1,
    P2,
    All,
}

impl PropertyArg {
    fn properties(self) -> Vec<Property> {
        match self {
            PropertyArg::P1 => vec![Property::P1],
            PropertyArg::P2 => vec![Property::P2],
            PropertyArg::All => vec![Property::P1, Property::P2],
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "loopchart", version, about = "Charts of star expressions, LEE and LLEE-witnesses")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chart interpretation of an expression.
    Chart { expr: String },
    /// 1-chart interpretation of an expression.
    Onechart {
        expr: String,
        /// Include the entry/body labeling.
        #[arg(long)]
        labeled: bool,
    },
    /// Induced chart of the 1-chart interpretation.
    Induced {
        expr: String,
        /// Drop vertices unreachable from the start.
        #[arg(long)]
        gc: bool,
    },
    /// Bisimulation collapse of an expression's chart or a chart file.
    Collapse { input: String },
    /// Decide LEE for an expression's chart or a chart file.
    Lee {
        input: String,
        /// Use the 1-chart interpretation instead.
        #[arg(long)]
        one: bool,
    },
    /// Validate an entry/body-labeled chart file as a LLEE-witness.
    LleeCheck { file: String },
    /// Decide bisimilarity of two charts.
    Bisim {
        a: String,
        /// Required; optional in the grammar so that `a` is diagnosed first.
        b: Option<String>,
    },
    /// Check P1 and/or P2 on one expression.
    Verify {
        expr: String,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
    },
    /// Check P1 and/or P2 on a corpus of expressions.
    Corpus {
        #[arg(long, value_delimiter = ',', default_value = "a,b")]
        alphabet: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        max_size: usize,
        /// Number of seeded random expressions added to the corpus.
        #[arg(long, default_value_t = DEFAULT_RANDOM)]
        random: usize,
        #[arg(long, default_value_t = DEFAULT_RANDOM_MAX_SIZE)]
        random_max_size: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = PropertyArg::All)]
        property: PropertyArg,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Runs the command line `argv` (program name first) against the process's
/// standard streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_cli_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

/// Like [`run_cli`] with explicit output and diagnostic streams.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let format = cli.format;
    let mut emit = |text: String| -> Result<(), CliError> {
        out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        if !text.ends_with('\n') {
            out.write_all(b"\n").map_err(|source| CliError::Io { path: "<stdout>".into(), source })?;
        }
        Ok(())
    };
    let dot = DotOptions::default();

    match &cli.command {
        Command::Chart { expr } => {
            let c = chart_of(&parse_star_expr(expr)?)?;
            emit(render_chart(&c, format, &dot))?;
            Ok(0)
        }
        Command::Onechart { expr, labeled } => {
            let e = parse_star_expr(expr)?;
            let text = if *labeled {
                let l = labeled_onechart_of(&e)?;
                match format {
                    Format::Text => l.to_string(),
                    Format::Json => l.to_json(),
                    Format::Dot => l.to_dot(&dot),
                }
            } else {
                render_chart(&onechart_of(&e)?, format, &dot)
            };
            emit(text)?;
            Ok(0)
        }
        Command::Induced { expr, gc } => {
            let mut c = induced_of(&onechart_of(&parse_star_expr(expr)?)?);
            if *gc {
                c = reachable(&c);
            }
            emit(render_chart(&c, format, &dot))?;
            Ok(0)
        }
        Command::Collapse { input } => {
            let c = load_chart(input)?;
            let (q, map) = collapse(&c);
            let text = match format {
                Format::Text => {
                    let pairs: Vec<String> =
                        map.map.iter().enumerate().filter_map(|(v, w)| w.map(|w| format!("v{v} -> v{w}"))).collect();
                    format!("{q}quotient: {}\n", pairs.join(", "))
                }
                _ => render_chart(&q, format, &dot),
            };
            emit(text)?;
            Ok(0)
        }
        Command::Lee { input, one } => {
            let budget = budget()?;
            let (holds, text) = if *one {
                let c = load_onechart(input)?;
                lee_output(&c, budget, format, &dot)?
            } else {
                let c = load_chart(input)?;
                lee_output(&c, budget, format, &dot)?
            };
            emit(text)?;
            Ok(if holds { 0 } else { 1 })
        }
        Command::LleeCheck { file } => {
            let l = load_labeling(file)?;
            let primary = validate_llee(&l);
            let alternative = validate_llee_alt(&l);
            let valid = primary.valid && alternative.valid;
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "valid": valid,
                    "validate_llee": primary,
                    "validate_llee_alt": alternative,
                }))
                .expect("reports serialize"),
                Format::Text => {
                    let mut s = format!("LLEE-witness: {}\n", if valid { "valid" } else { "invalid" });
                    for v in primary.violations.iter().chain(&alternative.violations) {
                        s.push_str(&format!("  {:?}: {}\n", v.condition, v.detail));
                    }
                    s
                }
                Format::Dot => l.to_dot(&dot),
            };
            emit(text)?;
            Ok(if valid { 0 } else { 1 })
        }
        Command::Bisim { a, b } => {
            let ca = load_chart(a)?;
            let b = b.as_deref().ok_or_else(|| CliError::Usage("bisim needs two charts".into()))?;
            let cb = load_chart(b)?;
            let r = bisimilar(&ca, &cb);
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&json!({
                    "bisimilar": r.is_some(),
                    "relation": r,
                }))
                .expect("relation serializes"),
                Format::Text => match &r {
                    Some(r) => {
                        let pairs: Vec<String> = r.pairs.iter().map(|(v, w)| format!("(v{v}, v{w})")).collect();
                        format!("bisimilar\n{}\n", pairs.join(" "))
                    }
                    None => "not bisimilar\n".to_string(),
                },
                Format::Dot => return Err(CliError::Usage("bisim has no dot output".into())),
            };
            emit(text)?;
            Ok(if r.is_some() { 0 } else { 1 })
        }
        Command::Verify { expr, property } => {
            let e = parse_star_expr(expr)?;
            let reports = property.properties().into_iter().map(|p| verify(&e, p)).collect::<Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed);
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&reports).expect("reports serialize"),
                Format::Text => reports.iter().map(|r| format!("{r}\n")).collect(),
                Format::Dot => return Err(CliError::Usage("verify has no dot output".into())),
            };
            emit(text)?;
            Ok(if passed { 0 } else { 1 })
        }
        Command::Corpus { alphabet, max_size, random, random_max_size, seed, property } => {
            if *max_size == 0 {
                return Err(CliError::Usage("--max-size must be at least 1".into()));
            }
            if *random > 0 && *random_max_size == 0 {
                return Err(CliError::Usage("--random-max-size must be at least 1".into()));
            }
            let alphabet = alphabet.iter().map(|a| Action::new(a.trim())).collect::<Result<_>>()?;
            let spec = CorpusSpec {
                alphabet,
                max_size: *max_size,
                random: *random,
                random_max_size: *random_max_size,
                seed: *seed,
            };
            let exprs: Vec<StarExpr> = spec.exprs();
            let report = summarize(verify_all(&exprs, &property.properties())?);
            let text = match format {
                Format::Json => serde_json::to_string_pretty(&report).expect("report serializes"),
                Format::Text => {
                    let mut s = format!(
                        "expressions: {}\nchecks: {}\npassed: {}\nfailed: {}\n",
                        exprs.len(),
                        report.total,
                        report.passed,
                        report.failed
                    );
                    for r in &report.failures {
                        s.push_str(&format!("{r}\n"));
                    }
                    s
                }
                Format::Dot => return Err(CliError::Usage("corpus has no dot output".into())),
            };
            emit(text)?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

fn render_chart<L: crate::charts::Label>(c: &Chart<L>, format: Format, dot: &DotOptions) -> String {
    match format {
        Format::Text => c.to_string(),
        Format::Json => c.to_json(),
        Format::Dot => c.to_dot(dot),
    }
}

fn lee_output<L: crate::charts::Label>(
    c: &Chart<L>,
    budget: usize,
    format: Format,
    dot: &DotOptions,
) -> Result<(bool, String), CliError> {
    let outcome = decide_lee_with_budget(c, budget)?;
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&outcome).expect("outcome serializes"),
        Format::Text => {
            let mut s = format!("LEE: {}\n", if outcome.holds { "holds" } else { "fails" });
            if let Some(trace) = &outcome.trace {
                for (i, step) in trace.steps.iter().enumerate() {
                    s.push_str(&format!("  step {}: v{} entries {:?}\n", i + 1, step.vertex, step.entry_set));
                }
            }
            s.push_str(&format!("explored: {}\n", outcome.explored));
            s
        }
        Format::Dot => match &outcome.trace {
            Some(trace) => recording_labeling(c, trace)?.to_dot(dot),
            None => c.to_dot(dot),
        },
    };
    Ok((outcome.holds, text))
}

fn budget() -> Result<usize, CliError> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => {
            v.trim().parse().map_err(|_| CliError::Usage(format!("{BUDGET_VAR} must be a natural number, got {v:?}")))
        }
        Err(_) => Ok(DEFAULT_SEARCH_BUDGET),
    }
}

// An existing path is read as chart JSON; anything else is parsed as an
// expression.
fn read_file(input: &str) -> Result<Option<String>, CliError> {
    if !Path::new(input).is_file() {
        return Ok(None);
    }
    std::fs::read_to_string(input).map(Some).map_err(|source| CliError::Io { path: input.into(), source })
}

fn load_chart(input: &str) -> Result<Chart, CliError> {
    match read_file(input)? {
        Some(text) => Ok(Chart::from_json(&text)?),
        None => Ok(chart_of(&parse_star_expr(input)?)?),
    }
}

fn load_onechart(input: &str) -> Result<OneChart, CliError> {
    match read_file(input)? {
        Some(text) => Ok(OneChart::from_json(&text)?),
        None => Ok(onechart_of(&parse_star_expr(input)?)?),
    }
}

fn load_labeling(input: &str) -> Result<EntryBodyLabeling<StepLabel>, CliError> {
    match read_file(input)? {
        Some(text) => Ok(EntryBodyLabeling::from_json(&text)?),
        None => Ok(labeled_onechart_of(&parse_star_expr(input)?)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("loopchart").chain(args.iter().copied());
        let code = run_cli_with(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn lee_fails_on_e() {
        let (code, out, _) = run(&["lee", "(a*.b*)*"]);
        assert_eq!(code, 1);
        assert!(out.contains("LEE: fails"));
    }

    #[test]
    fn verify_all_on_e() {
        let (code, out, _) = run(&["verify", "(a*.b*)*", "--property", "all"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("P1: pass") && out.contains("P2: pass"));
    }

    #[test]
    fn parse_error_exits_2() {
        let (code, out, err) = run(&["bisim", "nonsense("]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(err.contains("parse error"), "{err}");
    }

    #[test]
    fn missing_argument_exits_2() {
        let (code, _, err) = run(&["bisim", "a"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        let (code, _, err) = run(&["verify"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
    }
}

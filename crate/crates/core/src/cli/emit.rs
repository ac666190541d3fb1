use std::fmt::Write as _;
use std::io;
use std::path::Path;

use super::run::{Outcome, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn parse(text: &str) -> Option<Format> {
        match text {
            "text" => Some(Format::Text),
            "json" => Some(Format::Json),
            "csv" => Some(Format::Csv),
            _ => None,
        }
    }
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.12e}")).collect::<Vec<_>>().join(" ")
}

pub fn to_text(r: &RunReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario {}", r.scenario);
    let _ = writeln!(out, "domain   {}", r.domain);
    let _ = writeln!(out, "box      {}", r.i0);
    let _ = writeln!(out, "function {}", r.function);
    let _ = writeln!(out, "tol {:e}  depth {}  seed {}", r.tol, r.depth, r.seed);
    let _ = writeln!(out);
    let _ = writeln!(out, "{:<14} {:<12} {:<40} {:>12}", "mode", "status", "value", "budget");
    for m in &r.results {
        let (value, budget) = match &m.outcome {
            Outcome::Integral(i) => (join(&i.value.to_f64()), format!("{:.3e}", i.error_budget)),
            Outcome::T222(t) => (
                t.dhk_value.as_deref().map(join).unwrap_or_else(|| "-".into()),
                "-".into(),
            ),
            Outcome::DunfordFunction(d) => (format!("{} rows", d.rows.len()), "-".into()),
            Outcome::Variation(v) => (format!("{:.3e}", v.max_observed), format!("{:.3e}", v.epsilon)),
            Outcome::Failure { .. } => ("-".into(), "-".into()),
        };
        let status = format!("{:?}", m.status).to_lowercase();
        let _ = writeln!(out, "{:<14} {:<12} {:<40} {:>12}", m.mode.name(), status, value, budget);
    }
    if !r.deltas.is_empty() {
        let _ = writeln!(out);
        for d in &r.deltas {
            let _ = writeln!(
                out,
                "{} - {}: {:.3e} (budget {:.3e}) {}",
                d.between.0.name(),
                d.between.1.name(),
                d.delta,
                d.budget,
                if d.passed { "ok" } else { "EXCEEDED" }
            );
        }
    }
    let _ = writeln!(out);
    for e in &r.ledger {
        let _ = writeln!(
            out,
            "[{}] {}: {}",
            if e.passed { "PASS" } else { "FAIL" },
            e.check,
            e.detail
        );
    }
    out
}

pub fn to_json(r: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serializes");
    s.push('\n');
    s
}

/// One row per refinement level of every extension route.
pub fn to_csv(r: &RunReport) -> String {
    let mut out = String::from(
        "mode,level,cells,singular_cells,straddle_cells,evaluations,value,difference,singular_residue,jump_residue,redirect_residue,error_estimate\n",
    );
    for m in &r.results {
        for h in &m.history {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{:e},{:e},{:e},{:e}",
                m.mode.name(),
                h.level,
                h.cells,
                h.singular_cells,
                h.straddle_cells,
                h.evaluations,
                join(&h.value),
                h.difference.map(|d| format!("{d:e}")).unwrap_or_default(),
                h.singular_residue,
                h.jump_residue,
                h.redirect_residue,
                h.error_estimate
            );
        }
    }
    out
}

pub fn render(r: &RunReport, format: Format) -> String {
    match format {
        Format::Text => to_text(r),
        Format::Json => to_json(r),
        Format::Csv => to_csv(r),
    }
}

/// Writes the report to `path`, or to standard output when `None`.
pub fn emit(r: &RunReport, format: Format, path: Option<&Path>) -> io::Result<()> {
    let body = render(r, format);
    match path {
        Some(p) => std::fs::write(p, body),
        None => {
            use io::Write;
            io::stdout().write_all(body.as_bytes())
        }
    }
}

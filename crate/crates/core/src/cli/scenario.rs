//! Scenario text format.
//!
//! ```text
//! # comment
//! name = middle-third
//! domain = + [0,1]
//! domain = - [1/3,2/3]
//! function = const 1
//! modes = dm_ext, dm_piece
//! tol = 1e-8
//! ```
//!
//! `domain` lines accumulate signed boxes; a single `domain` line may instead
//! name a fixture (`disk`, `middle_third`, `l_shape`, `countable_gap K`,
//! `box [..]`). `function` takes a catalog id and rational parameters;
//! `|` separates the components of a vector-valued bundle.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::catalog;
use crate::geometry::{scalar, Interval, IntervalAlgebraSet, NormKind, Region, Scalar};
use crate::integrators::{Bundle, Integrand};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    DmExt,
    DmPiece,
    DhkExt,
    DhkPiece,
    T222,
    DunfordCheck,
    Negvar,
}

impl RunMode {
    pub const ALL: [RunMode; 7] = [
        RunMode::DmExt,
        RunMode::DmPiece,
        RunMode::DhkExt,
        RunMode::DhkPiece,
        RunMode::T222,
        RunMode::DunfordCheck,
        RunMode::Negvar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RunMode::DmExt => "dm_ext",
            RunMode::DmPiece => "dm_piece",
            RunMode::DhkExt => "dhk_ext",
            RunMode::DhkPiece => "dhk_piece",
            RunMode::T222 => "t222",
            RunMode::DunfordCheck => "dunford_check",
            RunMode::Negvar => "negvar",
        }
    }

    pub fn parse(text: &str) -> Option<RunMode> {
        RunMode::ALL.into_iter().find(|m| m.name() == text)
    }
}

/// Parse failure with a 1-based location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ScenarioError {}

#[derive(Debug, Clone, PartialEq)]
pub enum DomainText {
    Signed(Vec<String>),
    Disk,
    CountableGap(u32),
}

#[derive(Clone)]
pub struct Scenario {
    pub name: String,
    pub domain: DomainText,
    pub region: Arc<dyn Region>,
    pub i0: Interval,
    /// Measure of `G` outside a truncated description.
    pub truncation_tail: f64,
    pub function_text: String,
    pub function: Arc<dyn Integrand>,
    pub norm: NormKind,
    pub modes: Vec<RunMode>,
    pub tol: f64,
    pub depth: u32,
    pub seed: u64,
    pub trials: usize,
    pub threshold: f64,
    pub defect: Option<Vec<f64>>,
}

impl fmt::Debug for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scenario")
            .field("name", &self.name)
            .field("domain", &self.region.describe())
            .field("i0", &self.i0.to_string())
            .field("function", &self.function_text)
            .field("modes", &self.modes)
            .field("tol", &self.tol)
            .field("depth", &self.depth)
            .field("seed", &self.seed)
            .finish()
    }
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_DEPTH: u32 = 6;

fn err(line: usize, column: usize, message: impl Into<String>) -> ScenarioError {
    ScenarioError {
        line,
        column,
        message: message.into(),
    }
}

struct Raw {
    line: usize,
    value_col: usize,
    value: String,
}

/// Column of the first token of `value` that fails to parse as a rational.
fn locate_bad_token(value: &str, value_col: usize) -> usize {
    let mut col = value_col;
    for tok in value.split(|c: char| c.is_whitespace() || "[],x()|".contains(c)) {
        if !tok.is_empty() && scalar::parse_scalar(tok).is_err() && tok != "+" && tok != "-" {
            return col;
        }
        col += tok.chars().count() + 1;
    }
    value_col
}

fn build_function(text: &str, on: &Interval, raw: &Raw) -> Result<Arc<dyn Integrand>, ScenarioError> {
    let mut parts = Vec::new();
    let mut offset = 0;
    for piece in text.split('|') {
        let col = raw.value_col + offset + piece.len() - piece.trim_start().len();
        offset += piece.chars().count() + 1;
        let mut toks = piece.split_whitespace();
        let id = toks.next().ok_or_else(|| err(raw.line, col, "empty function"))?;
        let params = toks
            .map(|t| {
                scalar::parse_scalar(t)
                    .map_err(|e| err(raw.line, locate_bad_token(&raw.value, raw.value_col), e.to_string()))
            })
            .collect::<Result<Vec<Scalar>, _>>()?;
        parts.push(catalog::build(id, &params, on).map_err(|m| err(raw.line, col, m))?);
    }
    Ok(if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        Arc::new(Bundle::new(parts))
    })
}

fn parse_num<T: std::str::FromStr>(raw: &Raw, what: &str) -> Result<T, ScenarioError> {
    raw.value.parse().map_err(|_| {
        err(
            raw.line,
            raw.value_col,
            format!("`{}` is not a valid {what}", raw.value),
        )
    })
}

/// Parses and validates a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut entries: Vec<(String, Raw)> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some(eq) = body.find('=') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(err(line_no, col, "expected `key = value`"));
        };
        let key = body[..eq].trim().to_string();
        let after = &body[eq + 1..];
        let lead = after.len() - after.trim_start().len();
        let value_col = body[..eq + 1 + lead].chars().count() + 1;
        entries.push((
            key,
            Raw {
                line: line_no,
                value_col,
                value: after.trim().to_string(),
            },
        ));
    }

    let mut name = "scenario".to_string();
    let mut domain_lines: Vec<&Raw> = Vec::new();
    let mut i0_raw: Option<&Raw> = None;
    let mut function_raw: Option<&Raw> = None;
    let mut norm = NormKind::Max;
    let mut modes = Vec::new();
    let mut tol = DEFAULT_TOL;
    let mut depth = DEFAULT_DEPTH;
    let mut seed = 0u64;
    let mut trials = 200usize;
    let mut threshold = 1e2;
    let mut defect = None;
    for (key, raw) in &entries {
        match key.as_str() {
            "name" => name = raw.value.clone(),
            "domain" => domain_lines.push(raw),
            "i0" => i0_raw = Some(raw),
            "function" => function_raw = Some(raw),
            "norm" => {
                norm = NormKind::parse(&raw.value)
                    .ok_or_else(|| err(raw.line, raw.value_col, "norm must be max, euclidean or one"))?
            }
            "modes" => {
                modes.clear();
                let mut col = raw.value_col;
                for m in raw.value.split(',') {
                    let t = m.trim();
                    let here = col + m.len() - m.trim_start().len();
                    col += m.chars().count() + 1;
                    let mode = RunMode::parse(t).ok_or_else(|| {
                        let all: Vec<_> = RunMode::ALL.iter().map(|m| m.name()).collect();
                        err(raw.line, here, format!("unknown mode `{t}`; modes: {}", all.join(", ")))
                    })?;
                    if !modes.contains(&mode) {
                        modes.push(mode);
                    }
                }
            }
            "tol" => tol = parse_num(raw, "tolerance")?,
            "depth" => depth = parse_num(raw, "depth")?,
            "seed" => seed = parse_num(raw, "seed")?,
            "trials" => trials = parse_num(raw, "trial count")?,
            "threshold" => threshold = parse_num(raw, "threshold")?,
            "defect" => {
                let v = raw
                    .value
                    .split_whitespace()
                    .map(|t| scalar::parse_scalar(t).map(|q| scalar::to_f64(&q)))
                    .collect::<Result<Vec<f64>, _>>()
                    .map_err(|e| err(raw.line, locate_bad_token(&raw.value, raw.value_col), e.to_string()))?;
                defect = Some(v);
            }
            other => {
                return Err(err(raw.line, 1, format!("unknown key `{other}`")));
            }
        }
    }
    if !(tol > 0.0 && tol.is_finite()) {
        let raw = entries.iter().find(|(k, _)| k == "tol").map(|(_, r)| r);
        return Err(err(
            raw.map_or(1, |r| r.line),
            raw.map_or(1, |r| r.value_col),
            "tolerance must be positive",
        ));
    }
    if depth < 1 {
        let raw = entries.iter().find(|(k, _)| k == "depth").map(|(_, r)| r);
        return Err(err(
            raw.map_or(1, |r| r.line),
            raw.map_or(1, |r| r.value_col),
            "depth must be at least 1",
        ));
    }
    if modes.is_empty() {
        modes = vec![RunMode::DmExt];
    }

    let first = domain_lines.first().ok_or_else(|| err(1, 1, "missing `domain`"))?;
    let (domain, region, truncation_tail): (DomainText, Arc<dyn Region>, f64) = {
        let mut words = first.value.split_whitespace();
        let head = words.next().unwrap_or("");
        let single = domain_lines.len() == 1;
        match head {
            "disk" if single => (DomainText::Disk, Arc::new(catalog::disk()), 0.0),
            "middle_third" if single => fixture(catalog::middle_third()),
            "l_shape" if single => fixture(catalog::l_shape()),
            "countable_gap" if single => {
                let k: u32 = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .filter(|k| *k >= 1)
                    .ok_or_else(|| err(first.line, first.value_col, "countable_gap needs a cell count ≥ 1"))?;
                (
                    DomainText::CountableGap(k),
                    Arc::new(catalog::countable_gap(k)),
                    catalog::countable_gap_tail(k),
                )
            }
            "box" if single => {
                let rest = first.value["box".len()..].trim();
                let b = Interval::parse(rest).map_err(|e| {
                    err(
                        first.line,
                        locate_bad_token(&first.value, first.value_col),
                        e.to_string(),
                    )
                })?;
                fixture(IntervalAlgebraSet::from_interval(b))
            }
            _ => {
                let lines: Vec<String> = domain_lines.iter().map(|r| r.value.clone()).collect();
                for r in &domain_lines {
                    crate::geometry::set::parse_signed_box(&r.value)
                        .map_err(|e| err(r.line, locate_bad_token(&r.value, r.value_col), e.to_string()))?;
                }
                let set = IntervalAlgebraSet::parse(&lines.join("\n"))
                    .map_err(|e| err(first.line, first.value_col, e.to_string()))?;
                (DomainText::Signed(lines), Arc::new(set), 0.0)
            }
        }
    };
    let i0 = match i0_raw {
        Some(raw) => {
            let b = Interval::parse(&raw.value)
                .map_err(|e| err(raw.line, locate_bad_token(&raw.value, raw.value_col), e.to_string()))?;
            if b.dim() != region.dim() {
                return Err(err(
                    raw.line,
                    raw.value_col,
                    format!(
                        "dimension mismatch: i0 has dimension {}, domain has {}",
                        b.dim(),
                        region.dim()
                    ),
                ));
            }
            if !b.contains_interval(region.bounding_box()) {
                return Err(err(raw.line, raw.value_col, "i0 does not contain the domain"));
            }
            b
        }
        None => region.bounding_box().clone(),
    };
    let fr = function_raw.ok_or_else(|| err(1, 1, "missing `function`"))?;
    let function = build_function(&fr.value, &i0, fr)?;
    if let Some(v) = &defect {
        if v.len() != function.value_dim() {
            let raw = entries
                .iter()
                .find(|(k, _)| k == "defect")
                .map(|(_, r)| r)
                .expect("defect line");
            return Err(err(
                raw.line,
                raw.value_col,
                format!(
                    "dimension mismatch: defect has {} components, function has {}",
                    v.len(),
                    function.value_dim()
                ),
            ));
        }
    }
    Ok(Scenario {
        name,
        domain,
        region,
        i0,
        truncation_tail,
        function_text: fr.value.clone(),
        function,
        norm,
        modes,
        tol,
        depth,
        seed,
        trials,
        threshold,
        defect,
    })
}

fn fixture(s: IntervalAlgebraSet) -> (DomainText, Arc<dyn Region>, f64) {
    (
        DomainText::Signed(s.to_text().lines().map(str::to_string).collect()),
        Arc::new(s),
        0.0,
    )
}

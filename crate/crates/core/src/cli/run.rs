use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::Serialize;

use super::scenario::{RunMode, Scenario};
use crate::divisions::{dyadic_division, Division};
use crate::dunford_api::{
    dhk_integral_extension, dhk_integral_piecewise, dm_integral_extension, dm_integral_piecewise, fremlin_t222_check,
    zero_extend, ApiOptions, DomainSpec, DunfordIntegralResult, T222Record,
};
use crate::error::{ApiError, IntegrationError};
use crate::geometry::scalar;
use crate::integrators::{IntegrateOptions, LevelRecord, Mode};
use crate::interval_functions::{
    check_dunford_function, negligible_variation_falsifier, CheckOptions, DefectTarget, DunfordFunctionReport,
    FalsifierOptions, IntegralBacked, IntervalFunction, Perturbed, VariationReport,
};
use crate::partitions::{Gauge, PartitionMode, ZSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The integrator did not converge.
    Convergence,
    Error,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Integral(Box<DunfordIntegralResult>),
    T222(T222Record),
    DunfordFunction(DunfordFunctionReport),
    Variation(VariationReport),
    Failure { error: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeResult {
    pub mode: RunMode,
    pub status: Status,
    pub outcome: Outcome,
    /// Per-level history of extension routes, for the CSV table.
    #[serde(skip)]
    pub history: Vec<LevelRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Delta {
    pub between: (RunMode, RunMode),
    pub delta: f64,
    pub budget: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LedgerEntry {
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub domain: String,
    pub function: String,
    pub i0: String,
    pub tol: f64,
    pub depth: u32,
    pub seed: u64,
    pub results: Vec<ModeResult>,
    pub deltas: Vec<Delta>,
    pub ledger: Vec<LedgerEntry>,
    #[serde(skip)]
    pub wall_time: Duration,
    #[serde(skip)]
    pub division: Option<Division>,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.ledger.iter().all(|e| e.passed)
    }

    /// 0 when every check passed, 3 on non-convergence, 4 on other failures.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed() {
            0
        } else if self.results.iter().any(|r| r.status == Status::Convergence) {
            3
        } else {
            4
        }
    }
}

fn status_of_error(e: &ApiError) -> Status {
    let conv = |e: &IntegrationError| {
        matches!(
            e,
            IntegrationError::NoConvergence { .. } | IntegrationError::DepthExceeded { .. }
        )
    };
    match e {
        ApiError::Integration(ie) | ApiError::CellFailure { source: ie, .. } if conv(ie) => Status::Convergence,
        _ => Status::Error,
    }
}

fn spec_of(s: &Scenario) -> Result<DomainSpec, ApiError> {
    Ok(DomainSpec::new(s.region.clone(), s.i0.clone())?.with_truncation_tail(s.truncation_tail))
}

fn options(s: &Scenario) -> ApiOptions {
    let mut o = ApiOptions::with_tol(s.tol);
    o.integrate = IntegrateOptions {
        norm: s.norm,
        ..IntegrateOptions::with_tol(s.tol)
    };
    o.depth = s.depth;
    o.seed = s.seed;
    o.falsifier_trials = s.trials;
    o.check = CheckOptions {
        trials: s.trials,
        depth: s.depth,
        seed: s.seed,
        norm: s.norm,
        ..CheckOptions::default()
    };
    o.injected_defect = s.defect.clone();
    o
}

fn primitive(s: &Scenario, spec: &DomainSpec, opts: &ApiOptions, d: &Division) -> Arc<dyn IntervalFunction> {
    let base: Arc<dyn IntervalFunction> = Arc::new(IntegralBacked::new(
        zero_extend(s.function.clone(), spec),
        Mode::McShane,
        opts.integrate.clone(),
    ));
    match &s.defect {
        Some(v) => {
            let cell = match spec.region.as_algebra_set() {
                Some(a) => a.cells()[0].clone(),
                None => d.cells()[0].interval.clone(),
            };
            Arc::new(Perturbed::new(base, DefectTarget::Cell(cell), v.clone()))
        }
        None => base,
    }
}

/// Injected defect for the variation falsifier: applied to every box
/// meeting the collar around `I0`, so `Z`-tagged sums pick it up.
fn variation_primitive(s: &Scenario, spec: &DomainSpec, opts: &ApiOptions) -> Arc<dyn IntervalFunction> {
    let base: Arc<dyn IntervalFunction> = Arc::new(IntegralBacked::new(
        zero_extend(s.function.clone(), spec),
        Mode::McShane,
        opts.integrate.clone(),
    ));
    match &s.defect {
        Some(v) => Arc::new(Perturbed::new(base, DefectTarget::Meets(spec.i0.clone()), v.clone())),
        None => base,
    }
}

fn run_mode(
    mode: RunMode,
    s: &Scenario,
    spec: &DomainSpec,
    opts: &ApiOptions,
    division: &Result<Division, ApiError>,
) -> ModeResult {
    let fail = |e: ApiError| ModeResult {
        mode,
        status: status_of_error(&e),
        outcome: Outcome::Failure { error: e.to_string() },
        history: Vec::new(),
    };
    let integral = |r: Result<DunfordIntegralResult, ApiError>| match r {
        Ok(r) => ModeResult {
            mode,
            status: if r.flagged { Status::Fail } else { Status::Pass },
            history: r.integral.as_ref().map(|i| i.history.clone()).unwrap_or_default(),
            outcome: Outcome::Integral(Box::new(r)),
        },
        Err(e) => fail(e),
    };
    let division = || match division {
        Ok(d) => Ok(d),
        Err(e) => Err(ApiError::InvalidDomain(e.to_string())),
    };
    let f = s.function.clone();
    match mode {
        RunMode::DmExt => integral(dm_integral_extension(f, spec, opts)),
        RunMode::DhkExt => integral(dhk_integral_extension(f, spec, opts)),
        RunMode::DmPiece => match division() {
            Ok(d) => integral(dm_integral_piecewise(f, spec, d, opts)),
            Err(e) => fail(e),
        },
        RunMode::DhkPiece => match division() {
            Ok(d) => integral(dhk_integral_piecewise(f, spec, d, opts)),
            Err(e) => fail(e),
        },
        RunMode::T222 => match fremlin_t222_check(f, spec, opts, s.threshold) {
            Ok(r) => ModeResult {
                mode,
                status: if r.biconditional_holds {
                    Status::Pass
                } else {
                    Status::Fail
                },
                outcome: Outcome::T222(r),
                history: Vec::new(),
            },
            Err(e) => fail(e),
        },
        RunMode::DunfordCheck => {
            let d = match division() {
                Ok(d) => d,
                Err(e) => return fail(e),
            };
            let big_f = primitive(s, spec, opts, d);
            match check_dunford_function(big_f.as_ref(), spec.region.clone(), &spec.i0, &opts.check) {
                Ok(r) => ModeResult {
                    mode,
                    status: if r.passed { Status::Pass } else { Status::Fail },
                    outcome: Outcome::DunfordFunction(r),
                    history: Vec::new(),
                },
                Err(e) => fail(e.into()),
            }
        }
        RunMode::Negvar => {
            let d = match division() {
                Ok(d) => d,
                Err(e) => return fail(e),
            };
            let Some(m) = s.function.bound_hint() else {
                return fail(ApiError::Function(crate::FunctionError::TailNotCertifiable));
            };
            let r = scalar::dyadic(1, opts.falsifier_radius_exp);
            let fo = FalsifierOptions {
                epsilon: m * spec.inner_collar(&r) * (1.0 + 1e-9) + 1e-12,
                gauge: Gauge::constant(r),
                trials: opts.falsifier_trials,
                seed: opts.seed,
                mode: PartitionMode::HK,
                boxes_per_trial: 8,
                window: spec.i0.dilate(&opts.collar),
                norm: s.norm,
            };
            let z = ZSet::Complement {
                within: spec.i0.dilate(&opts.collar),
                of: spec.region.clone(),
            };
            let big_f = variation_primitive(s, spec, opts);
            match negligible_variation_falsifier(big_f.as_ref(), &z, d, &fo) {
                Ok(r) => ModeResult {
                    mode,
                    status: if r.passed { Status::Pass } else { Status::Fail },
                    outcome: Outcome::Variation(r),
                    history: Vec::new(),
                },
                Err(e) => fail(e.into()),
            }
        }
    }
}

fn cross_deltas(results: &[ModeResult]) -> Vec<Delta> {
    let value = |m: RunMode| {
        results.iter().find(|r| r.mode == m).and_then(|r| match &r.outcome {
            Outcome::Integral(i) => Some(i),
            _ => None,
        })
    };
    let pairs = [
        (RunMode::DmExt, RunMode::DmPiece),
        (RunMode::DhkExt, RunMode::DhkPiece),
        (RunMode::DmExt, RunMode::DhkExt),
    ];
    pairs
        .iter()
        .filter_map(|&(a, b)| {
            let (x, y) = (value(a)?, value(b)?);
            let delta = x.value.distance(&y.value, crate::geometry::NormKind::Max);
            let budget = x.error_budget + y.error_budget;
            Some(Delta {
                between: (a, b),
                delta,
                budget,
                passed: delta <= budget,
            })
        })
        .collect()
}

/// Runs every requested mode in order.
pub fn run(s: &Scenario) -> RunReport {
    let start = Instant::now();
    let opts = options(s);
    let mut results = Vec::new();
    let spec = spec_of(s);
    let division = match &spec {
        Ok(spec) => dyadic_division(spec.region.clone(), s.depth).map_err(ApiError::from),
        Err(e) => Err(ApiError::InvalidDomain(e.to_string())),
    };
    for &mode in &s.modes {
        let r = match &spec {
            Ok(spec) => run_mode(mode, s, spec, &opts, &division),
            Err(e) => ModeResult {
                mode,
                status: Status::Error,
                outcome: Outcome::Failure { error: e.to_string() },
                history: Vec::new(),
            },
        };
        results.push(r);
    }
    let deltas = cross_deltas(&results);
    let mut ledger: Vec<LedgerEntry> = results
        .iter()
        .map(|r| LedgerEntry {
            check: r.mode.name().to_string(),
            passed: r.status == Status::Pass,
            detail: match &r.outcome {
                Outcome::Integral(i) => i.verdict.clone(),
                Outcome::T222(t) => t.verdict.clone(),
                Outcome::DunfordFunction(d) => d.witness.clone().unwrap_or_else(|| d.verdict.clone()),
                Outcome::Variation(v) => format!("max observed {:e} vs epsilon {:e}", v.max_observed, v.epsilon),
                Outcome::Failure { error } => error.clone(),
            },
        })
        .collect();
    for d in &deltas {
        ledger.push(LedgerEntry {
            check: format!("{} vs {}", d.between.0.name(), d.between.1.name()),
            passed: d.passed,
            detail: format!("delta {:e} budget {:e}", d.delta, d.budget),
        });
    }
    RunReport {
        scenario: s.name.clone(),
        domain: s.region.describe(),
        function: s.function.describe(),
        i0: s.i0.to_string(),
        tol: s.tol,
        depth: s.depth,
        seed: s.seed,
        results,
        deltas,
        ledger,
        wall_time: start.elapsed(),
        division: division.ok(),
    }
}

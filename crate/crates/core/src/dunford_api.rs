//! Dunford-McShane and Dunford-Henstock-Kurzweil integrals on bounded sets
//! `G` with `|G ∖ G°| = 0`, by zero extension to a box `I0` or by summing
//! over a division of `G°`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::divisions::{dyadic_division, Division};
use crate::error::{ApiError, DivisionError};
use crate::geometry::{scalar, Interval, IntervalAlgebraSet, Region, Scalar, VectorValue};
use crate::integrators::{
    dunford_componentwise_check, integrate, IntegralResult, Integrand, IntegrateOptions, LinearCombination, Mode,
    WeakOptions, ZeroExtended,
};
use crate::interval_functions::{
    check_dunford_function, negligible_variation_falsifier, random_subinterval, series_over_division, CheckOptions,
    DefectTarget, DunfordFunctionReport, FalsifierOptions, IntegralBacked, IntervalFunction, Perturbed, SeriesReport,
    VariationReport,
};
use crate::partitions::{Gauge, PartitionMode, ZSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    /// `∂G` is a finite union of faces, so `|∂G| = 0` exactly.
    Exact,
    /// Declared by the oracle, with its boundary measure.
    Declared { boundary_measure: f64 },
}

#[derive(Clone)]
pub struct DomainSpec {
    pub region: Arc<dyn Region>,
    pub i0: Interval,
    pub certificate: Certificate,
    /// Measure of the part of `G` left out of a truncated description.
    pub truncation_tail: f64,
}

impl std::fmt::Debug for DomainSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DomainSpec({} in {})", self.region.describe(), self.i0)
    }
}

impl DomainSpec {
    pub fn new(region: Arc<dyn Region>, i0: Interval) -> Result<Self, ApiError> {
        if region.dim() != i0.dim() {
            return Err(ApiError::InvalidDomain(format!(
                "set has dimension {}, box has dimension {}",
                region.dim(),
                i0.dim()
            )));
        }
        if !i0.contains_interval(region.bounding_box()) {
            return Err(ApiError::InvalidDomain(format!(
                "{} does not contain {}",
                i0,
                region.describe()
            )));
        }
        if region.measure_f64() <= 0.0 {
            return Err(ApiError::InvalidDomain("set has empty interior".into()));
        }
        let certificate = if region.is_exact() {
            Certificate::Exact
        } else {
            Certificate::Declared {
                boundary_measure: region.boundary_measure(),
            }
        };
        Ok(DomainSpec {
            region,
            i0,
            certificate,
            truncation_tail: 0.0,
        })
    }

    /// `G = I0`.
    pub fn whole_box(i0: Interval) -> Self {
        DomainSpec {
            region: Arc::new(IntervalAlgebraSet::from_interval(i0.clone())),
            i0,
            certificate: Certificate::Exact,
            truncation_tail: 0.0,
        }
    }

    pub fn with_truncation_tail(mut self, tail: f64) -> Self {
        self.truncation_tail = tail;
        self
    }

    /// Whether `G` is the box `I0` itself.
    pub fn is_whole_box(&self) -> bool {
        self.region.as_algebra_set().is_some_and(|s| s.is_box(&self.i0))
    }

    /// `|N_r(∂G) ∩ G|` under the max norm, exactly for interval-algebra sets.
    pub fn inner_collar(&self, r: &Scalar) -> f64 {
        match self.region.as_algebra_set() {
            Some(s) => scalar::to_f64(&s.inner_collar_measure(r, &self.i0)),
            None => {
                let m = self.i0.dim() as f64;
                self.region.boundary_measure() * scalar::to_f64(r) * m.sqrt()
            }
        }
    }
}

/// `f₀ = f` on `G`, `0` on `I0 ∖ G`; `f` itself when `G = I0`.
pub fn zero_extend(f: Arc<dyn Integrand>, spec: &DomainSpec) -> Arc<dyn Integrand> {
    if spec.is_whole_box() {
        f
    } else {
        Arc::new(ZeroExtended::new(f, spec.region.clone()))
    }
}

#[derive(Debug, Clone)]
pub struct ApiOptions {
    pub tol: f64,
    pub integrate: IntegrateOptions,
    /// Division depth for piecewise routes and series checks.
    pub depth: u32,
    pub check: CheckOptions,
    pub falsifier_trials: usize,
    /// Exponent `j` of the falsifier gauge radius `2^-j`.
    pub falsifier_radius_exp: u32,
    /// Width of the exterior collar around `I0` in which `Z`-tags are sampled.
    pub collar: Scalar,
    pub seed: u64,
    /// Intervals on which the series identity of the extension route is sampled.
    pub identity_samples: usize,
    /// Adds this vector to the primitive on one cell of `G`.
    pub injected_defect: Option<Vec<f64>>,
    /// Skip the Dunford-function and variation reports.
    pub skip_reports: bool,
}

impl ApiOptions {
    pub fn with_tol(tol: f64) -> Self {
        ApiOptions {
            tol,
            integrate: IntegrateOptions::with_tol(tol),
            depth: 6,
            check: CheckOptions::default(),
            falsifier_trials: 200,
            falsifier_radius_exp: 6,
            collar: scalar::ratio(1, 4),
            seed: 0,
            identity_samples: 8,
            injected_defect: None,
            skip_reports: false,
        }
    }

    fn integrate_with(&self, tol: f64) -> IntegrateOptions {
        IntegrateOptions {
            tol,
            ..self.integrate.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Extension,
    Piecewise,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Reports {
    pub series: Option<SeriesReport>,
    pub variation: Option<VariationReport>,
    pub dunford_function: Option<DunfordFunctionReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DunfordIntegralResult {
    pub value: VectorValue,
    pub route: Route,
    pub error_budget: f64,
    pub division_depth: u32,
    pub reports: Reports,
    pub verdict: String,
    #[serde(skip)]
    pub mode: Mode,
    /// Set when a report failed; the value is still the raw sum.
    #[serde(skip)]
    pub flagged: bool,
    #[serde(skip)]
    pub integral: Option<IntegralResult>,
}

fn truncation_budget(f: &dyn Integrand, spec: &DomainSpec) -> f64 {
    if spec.truncation_tail == 0.0 {
        0.0
    } else {
        f.bound_hint().map_or(f64::INFINITY, |m| m * spec.truncation_tail)
    }
}

fn extension(
    f: Arc<dyn Integrand>,
    spec: &DomainSpec,
    mode: Mode,
    opts: &ApiOptions,
) -> Result<DunfordIntegralResult, ApiError> {
    let budget_extra = truncation_budget(f.as_ref(), spec);
    let f0 = zero_extend(f, spec);
    let r = integrate(f0.as_ref(), &spec.i0, mode, &opts.integrate)?;
    Ok(DunfordIntegralResult {
        value: r.value.clone(),
        route: Route::Extension,
        error_budget: r.error_estimate.max(0.0) + budget_extra,
        division_depth: 0,
        reports: Reports::default(),
        verdict: format!("converged in {} levels", r.refinement_levels),
        mode,
        flagged: false,
        integral: Some(r),
    })
}

/// McShane integral of `f₀` over `I0`.
pub fn dm_integral_extension(
    f: Arc<dyn Integrand>,
    spec: &DomainSpec,
    opts: &ApiOptions,
) -> Result<DunfordIntegralResult, ApiError> {
    extension(f, spec, Mode::McShane, opts)
}

/// Henstock-Kurzweil integral of `f₀` over `I0`, with the identity
/// `F₀(I) = Σ_k F(I ∩ C_k)` sampled on random `I ⊂ I0` when `f` is bounded.
pub fn dhk_integral_extension(
    f: Arc<dyn Integrand>,
    spec: &DomainSpec,
    opts: &ApiOptions,
) -> Result<DunfordIntegralResult, ApiError> {
    let mut out = extension(f.clone(), spec, Mode::HenstockKurzweil, opts)?;
    if opts.skip_reports || opts.identity_samples == 0 || f.bound_hint().is_none() || spec.is_whole_box() {
        return Ok(out);
    }
    let d = dyadic_division(spec.region.clone(), opts.depth)?;
    let f0 = zero_extend(f, spec);
    let big_f = IntegralBacked::new(f0, Mode::HenstockKurzweil, opts.integrate.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst: Option<(f64, SeriesReport)> = None;
    let mut held = true;
    for _ in 0..opts.identity_samples {
        let i = random_subinterval(&mut rng, &spec.i0);
        let (v, rep) = series_over_division(&big_f, &d, &i, opts.tol, opts.integrate.norm)?;
        let (direct, pieces) = extension_on_box(&big_f, spec, &i)?;
        let gap = v.distance(&direct, opts.integrate.norm);
        let allowance = rep.abs_tail_bound + rep.eval_error + pieces as f64 * big_f.eval_error() + opts.tol;
        held &= gap <= allowance;
        if worst.as_ref().is_none_or(|(g, _)| gap > *g) {
            worst = Some((gap, rep));
        }
    }
    if let Some((gap, rep)) = worst {
        out.reports.series = Some(rep);
        out.verdict = if held {
            format!(
                "{}; series identity held on {} intervals",
                out.verdict, opts.identity_samples
            )
        } else {
            out.flagged = true;
            format!("{}; series identity violated (gap {gap:e})", out.verdict)
        };
    }
    Ok(out)
}

/// `F₀(I)` with the number of integrals it took. Interval-algebra sets are
/// cut exactly into boxes inside `G`, which avoids resolving `∂G` inside a
/// box whose own bisection grid does not meet it.
fn extension_on_box(big_f: &IntegralBacked, spec: &DomainSpec, i: &Interval) -> Result<(VectorValue, usize), ApiError> {
    let Some(a) = spec.region.as_algebra_set() else {
        return Ok((big_f.eval(i)?, 1));
    };
    let mut total = VectorValue::zero(big_f.value_dim());
    let mut pieces = 0;
    for c in a.cells() {
        if let Some(piece) = c.meet(i) {
            total = total.add(&big_f.eval(&piece)?);
            pieces += 1;
        }
    }
    Ok((total, pieces))
}

/// Per-cell tolerance: half split geometrically, half by volume.
fn cell_tolerance(tol: f64, k: usize, cell: &Interval, covered: f64) -> f64 {
    let geometric = 0.5 * tol * (-(k.min(1000) as f64)).exp2();
    let by_volume = 0.5 * tol * scalar::to_f64(&cell.volume()) / covered;
    geometric + by_volume
}

fn piecewise(
    f: Arc<dyn Integrand>,
    spec: &DomainSpec,
    d: &Division,
    mode: Mode,
    opts: &ApiOptions,
) -> Result<DunfordIntegralResult, ApiError> {
    if d.is_empty() {
        return Err(ApiError::Division(DivisionError::CoversNothing));
    }
    let covered = scalar::to_f64(&d.covered_measure());
    let mut parts = Vec::with_capacity(d.len());
    let mut budget = 0.0;
    for (n, c) in d.cells().iter().enumerate() {
        let tol_k = cell_tolerance(opts.tol, n + 1, &c.interval, covered);
        let r = integrate(f.as_ref(), &c.interval, mode, &opts.integrate_with(tol_k))
            .map_err(|source| ApiError::CellFailure { index: n, source })?;
        budget += r.error_estimate.max(0.0);
        parts.push(r.value);
    }
    let value = VectorValue::sum(f.value_dim(), parts.iter());
    let tail = d.tail_measure();
    let tail_budget = if tail.is_zero() {
        0.0
    } else {
        f.bound_hint().map_or(f64::INFINITY, |m| m * tail.to_f64())
    };
    let mut out = DunfordIntegralResult {
        value,
        route: Route::Piecewise,
        error_budget: budget + tail_budget + truncation_budget(f.as_ref(), spec),
        division_depth: d.depth(),
        reports: Reports::default(),
        verdict: String::new(),
        mode,
        flagged: false,
        integral: None,
    };
    let mut notes = vec![format!("{} cells", d.len())];
    if !tail_budget.is_finite() {
        out.flagged = true;
        notes.push("tail not certifiable: no bound on f".into());
    }
    if !opts.skip_reports {
        reports(&mut out, &mut notes, f, spec, d, mode, opts)?;
    }
    out.verdict = notes.join("; ");
    Ok(out)
}

fn reports(
    out: &mut DunfordIntegralResult,
    notes: &mut Vec<String>,
    f: Arc<dyn Integrand>,
    spec: &DomainSpec,
    d: &Division,
    mode: Mode,
    opts: &ApiOptions,
) -> Result<(), ApiError> {
    let bound = f.bound_hint();
    let f0 = zero_extend(f, spec);
    let base: Arc<dyn IntervalFunction> = Arc::new(IntegralBacked::new(f0, mode, opts.integrate.clone()));
    let big_f: Arc<dyn IntervalFunction> = match &opts.injected_defect {
        Some(v) => {
            let cell = match spec.region.as_algebra_set() {
                Some(s) => s.cells()[0].clone(),
                None => d.cells()[0].interval.clone(),
            };
            Arc::new(Perturbed::new(base, DefectTarget::Cell(cell), v.clone()))
        }
        None => base,
    };
    if mode == Mode::McShane {
        let check = CheckOptions {
            seed: opts.seed,
            tol: opts.check.tol.max(opts.tol),
            ..opts.check.clone()
        };
        let rep = check_dunford_function(big_f.as_ref(), spec.region.clone(), &spec.i0, &check)?;
        if !rep.passed {
            out.flagged = true;
        }
        notes.push(format!("Dunford function: {}", rep.verdict));
        out.reports.dunford_function = Some(rep);
    }
    let Some(m) = bound else {
        notes.push("variation falsifier skipped: no bound on f".into());
        return Ok(());
    };
    let r = scalar::dyadic(1, opts.falsifier_radius_exp);
    let epsilon = m * spec.inner_collar(&r) * (1.0 + 1e-9) + 1e-12;
    let z = ZSet::Complement {
        within: spec.i0.dilate(&opts.collar),
        of: spec.region.clone(),
    };
    let fo = FalsifierOptions {
        epsilon,
        gauge: Gauge::constant(r),
        trials: opts.falsifier_trials,
        seed: opts.seed,
        mode: match mode {
            Mode::McShane => PartitionMode::M,
            Mode::HenstockKurzweil => PartitionMode::HK,
        },
        boxes_per_trial: 8,
        window: spec.i0.dilate(&opts.collar),
        norm: opts.integrate.norm,
    };
    let rep = negligible_variation_falsifier(big_f.as_ref(), &z, d, &fo)?;
    if !rep.passed {
        out.flagged = true;
        notes.push(format!("variation {:e} ≥ {:e}", rep.max_observed, rep.epsilon));
    } else {
        notes.push(format!("variation not falsified at {} trials", rep.trials));
    }
    out.reports.variation = Some(rep);
    Ok(())
}

/// `Σ_k ∫_{C_k} f` (McShane) plus the tail budget, with the Dunford-function
/// and negligible-variation reports on the primitive.
pub fn dm_integral_piecewise(
    f: Arc<dyn Integrand>,
    spec: &DomainSpec,
    d: &Division,
    opts: &ApiOptions,
) -> Result<DunfordIntegralResult, ApiError> {
    piecewise(f, spec, d, Mode::McShane, opts)
}

/// `Σ_k ∫_{C_k} f` (Henstock-Kurzweil) plus the tail budget, with the
/// HK negligible-variation report when `f` is bounded.
pub fn dhk_integral_piecewise(
    f: Arc<dyn Integrand>,
    spec: &DomainSpec,
    d: &Division,
    opts: &ApiOptions,
) -> Result<DunfordIntegralResult, ApiError> {
    piecewise(f, spec, d, Mode::HenstockKurzweil, opts)
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearityReport {
    pub combined: Vec<f64>,
    pub expected: Vec<f64>,
    pub defect: f64,
    pub allowance: f64,
    pub max_primitive_defect: f64,
    pub passed: bool,
}

/// `∫(αf + βh) = α∫f + β∫h` by the extension route, and the same for the
/// primitives on sampled intervals, within `3·tol`.
pub fn linearity_check(
    f: Arc<dyn Integrand>,
    h: Arc<dyn Integrand>,
    spec: &DomainSpec,
    alpha: Scalar,
    beta: Scalar,
    mode: Mode,
    opts: &ApiOptions,
) -> Result<LinearityReport, ApiError> {
    let combo: Arc<dyn Integrand> = Arc::new(LinearCombination::new(vec![
        (alpha.clone(), f.clone()),
        (beta.clone(), h.clone()),
    ]));
    let quick = ApiOptions {
        skip_reports: true,
        ..opts.clone()
    };
    let lhs = extension(combo.clone(), spec, mode, &quick)?.value;
    let a = extension(f.clone(), spec, mode, &quick)?.value;
    let b = extension(h.clone(), spec, mode, &quick)?.value;
    let expected = a.scale(&alpha).add(&b.scale(&beta));
    let norm = opts.integrate.norm;
    let defect = lhs.distance(&expected, norm);
    let allowance = 3.0 * opts.tol;

    let prim = |g: Arc<dyn Integrand>| IntegralBacked::new(zero_extend(g, spec), mode, opts.integrate.clone());
    let (pf, ph, of_sum) = (prim(f), prim(h), prim(combo));
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut max_primitive_defect: f64 = 0.0;
    for _ in 0..opts.identity_samples {
        let i = random_subinterval(&mut rng, &spec.i0);
        let sum_of = extension_on_box(&pf, spec, &i)?
            .0
            .scale(&alpha)
            .add(&extension_on_box(&ph, spec, &i)?.0.scale(&beta));
        let gap = extension_on_box(&of_sum, spec, &i)?.0.distance(&sum_of, norm);
        max_primitive_defect = max_primitive_defect.max(gap);
    }
    Ok(LinearityReport {
        combined: lhs.to_f64(),
        expected: expected.to_f64(),
        defect,
        allowance,
        max_primitive_defect,
        passed: defect <= allowance && max_primitive_defect <= allowance,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct T222Record {
    pub dunford_ok: bool,
    pub dhk_converged: bool,
    pub dm_converged: bool,
    pub dhk_value: Option<Vec<f64>>,
    pub dm_value: Option<Vec<f64>>,
    /// `‖dm − dhk‖` when both converged.
    pub value_gap: Option<f64>,
    pub abs_levels: u32,
    pub biconditional_holds: bool,
    pub verdict: String,
}

/// `(f Dunford and DHK integrable) ⇔ f DM integrable`, with the values
/// agreeing within `3·tol` when both sides hold. NoConvergence counts as
/// failure at the tested depth.
pub fn fremlin_t222_check(
    f: Arc<dyn Integrand>,
    spec: &DomainSpec,
    opts: &ApiOptions,
    threshold: f64,
) -> Result<T222Record, ApiError> {
    let f0 = zero_extend(f.clone(), spec);
    let weak = dunford_componentwise_check(
        f0.as_ref(),
        &spec.i0,
        &WeakOptions {
            divergence_threshold: threshold,
            tol: opts.tol,
            ..WeakOptions::default()
        },
    )?;
    let quick = ApiOptions {
        skip_reports: true,
        ..opts.clone()
    };
    let dhk = dhk_integral_extension(f.clone(), spec, &quick);
    let dm = dm_integral_extension(f, spec, &quick);
    for r in [&dhk, &dm] {
        if let Err(e) = r {
            if !matches!(e, ApiError::Integration(_)) {
                return Err(ApiError::InvalidDomain(e.to_string()));
            }
        }
    }
    let dhk_value = dhk.as_ref().ok().map(|r| r.value.to_f64());
    let dm_value = dm.as_ref().ok().map(|r| r.value.to_f64());
    let value_gap = match (&dhk, &dm) {
        (Ok(a), Ok(b)) => Some(a.value.distance(&b.value, opts.integrate.norm)),
        _ => None,
    };
    let left = weak.dunford_ok && dhk.is_ok();
    let right = dm.is_ok();
    let agree = value_gap.is_none_or(|g| g <= 3.0 * opts.tol);
    let holds = left == right && agree;
    let verdict = format!(
        "Dunford {} and DHK {} ⇔ DM {}: {}",
        if weak.dunford_ok { "yes" } else { "no" },
        if dhk.is_ok() { "converged" } else { "did not converge" },
        if right { "converged" } else { "did not converge" },
        if holds { "upheld" } else { "violated" }
    );
    Ok(T222Record {
        dunford_ok: weak.dunford_ok,
        dhk_converged: dhk.is_ok(),
        dm_converged: right,
        dhk_value,
        dm_value,
        value_gap,
        abs_levels: weak.levels,
        biconditional_holds: holds,
        verdict,
    })
}

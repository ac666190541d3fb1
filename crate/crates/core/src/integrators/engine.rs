//! McShane and Henstock-Kurzweil integrals by gauge refinement.
//!
//! Level `n` uses the gauge
//! `δ_n(t) = min(h_n, c_n · dist(t, S)^p)` off the singular set `S` and
//! `δ_n(s) = ρ` on it, with `h_n = ℓ · 2^(1-n)` and `c_n = 2^(6-n)`.
//! Every accepted bisection cell is split into Gauss-Legendre slices, each
//! tagged at its node, which keeps the sum a genuine `δ_n`-fine Riemann sum.

use serde::Serialize;

use super::integrand::Integrand;
use super::quadrature::GaussRule;
use super::walker::{within_ball, Accepted, Cell, SingularPoint, Walk, WalkError, MAX_DIM};
use crate::error::IntegrationError;
use crate::geometry::{scalar, BoxClass, Interval, NormKind, Point, VectorValue};
use crate::summation::Neumaier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    #[serde(rename = "M")]
    McShane,
    #[serde(rename = "HK")]
    HenstockKurzweil,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::McShane => "M",
            Mode::HenstockKurzweil => "HK",
        }
    }
}

#[derive(Debug, Clone)]
pub struct IntegrateOptions {
    pub tol: f64,
    pub norm: NormKind,
    pub level_cap: u32,
    pub depth_cap: u32,
    /// Accepted bisection cells allowed per level.
    pub cell_budget: u64,
    /// Gauss-Legendre order; chosen from the dimension and declared degree when `None`.
    pub gauss_order: Option<usize>,
    /// Radius multiple `κ` of the ball in which an M-partition may retag at a singular point.
    pub redirect_factor: f64,
}

impl IntegrateOptions {
    pub fn with_tol(tol: f64) -> Self {
        IntegrateOptions {
            tol,
            ..Default::default()
        }
    }
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        IntegrateOptions {
            tol: 1e-6,
            norm: NormKind::Max,
            level_cap: 24,
            depth_cap: 60,
            cell_budget: 40_000_000,
            gauss_order: None,
            redirect_factor: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub level: u32,
    pub cells: u64,
    pub singular_cells: u64,
    pub straddle_cells: u64,
    pub evaluations: u64,
    pub value: Vec<f64>,
    /// `‖S_n − S_{n-1}‖`.
    pub difference: Option<f64>,
    pub singular_residue: f64,
    pub jump_residue: f64,
    pub redirect_residue: f64,
    pub error_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralResult {
    pub value: VectorValue,
    pub error_estimate: f64,
    pub refinement_levels: u32,
    pub mode: Mode,
    pub converged: bool,
    /// Gauge radius `ρ` at singular points, when there are any.
    pub singular_radius: Option<f64>,
    pub history: Vec<LevelRecord>,
}

pub fn mcshane_integral(f: &dyn Integrand, i: &Interval, tol: f64) -> Result<IntegralResult, IntegrationError> {
    integrate(f, i, Mode::McShane, &IntegrateOptions::with_tol(tol))
}

pub fn hk_integral(f: &dyn Integrand, i: &Interval, tol: f64) -> Result<IntegralResult, IntegrationError> {
    integrate(f, i, Mode::HenstockKurzweil, &IntegrateOptions::with_tol(tol))
}

pub(crate) fn default_order(m: usize, degree: Option<u32>) -> usize {
    match degree {
        Some(d) => (d as usize + 2) / 2,
        None => match m {
            1 => 10,
            2 => 6,
            _ => 4,
        },
    }
}

/// Largest `r ≤ cap` with `bound(r) ≤ target`, by bisection in `log2 r`.
pub(crate) fn solve_radius(cap: f64, target: f64, bound: impl Fn(f64) -> f64) -> f64 {
    if bound(cap) <= target {
        return cap;
    }
    let (mut lo, mut hi) = (-1000.0f64, cap.log2());
    if bound(lo.exp2()) > target {
        return 0.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bound(mid.exp2()) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.exp2()
}

/// Fixed level parameters shared by the sum and the materialized partition.
#[derive(Debug, Clone)]
pub(crate) struct Setup {
    pub m: usize,
    pub lo: [f64; MAX_DIM],
    pub hi: [f64; MAX_DIM],
    pub ell: f64,
    pub singular: Vec<SingularPoint>,
    pub rho_sing: f64,
    pub singular_residue: f64,
    pub rho_jump: f64,
    pub bound: Option<f64>,
    pub rule: GaussRule,
}

impl Setup {
    pub fn new(
        f: &dyn Integrand,
        i: &Interval,
        mode: Mode,
        opts: &IntegrateOptions,
    ) -> Result<Setup, IntegrationError> {
        let m = i.dim();
        if f.dim() != m {
            return Err(IntegrationError::DimensionMismatch {
                integrand: f.dim(),
                interval: m,
            });
        }
        if m > MAX_DIM {
            return Err(IntegrationError::DimensionMismatch {
                integrand: f.dim(),
                interval: MAX_DIM,
            });
        }
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        for j in 0..m {
            lo[j] = scalar::to_f64(i.lo(j));
            hi[j] = scalar::to_f64(i.hi(j));
        }
        let ell = (0..m).map(|j| hi[j] - lo[j]).fold(0.0, f64::max);
        let singular: Vec<SingularPoint> = f
            .singular_points()
            .iter()
            .filter(|s| i.contains_point(s))
            .map(SingularPoint::new)
            .collect();
        let count = singular.len() as f64;
        let quarter = opts.tol / 4.0;
        let (rho_sing, singular_residue) = if singular.is_empty() {
            (f64::INFINITY, 0.0)
        } else {
            let Some(_) = f.singular_modulus(ell) else {
                return Err(no_convergence(0, 0.0, f64::INFINITY, "no singular modulus declared"));
            };
            let omega = |r: f64| f.singular_modulus(r).unwrap_or(f64::INFINITY);
            let hk_rho = solve_radius(ell, quarter, |r| count * omega(r));
            let rho = match (mode, f.abs_modulus(ell)) {
                (Mode::McShane, Some(_)) => {
                    let kappa = opts.redirect_factor;
                    let abs = |r: f64| f.abs_modulus(r).unwrap_or(f64::INFINITY);
                    solve_radius(ell, quarter, |r| count * abs(2.0 * kappa * r)).min(hk_rho)
                }
                _ => hk_rho,
            };
            if rho <= 0.0 {
                return Err(no_convergence(0, 0.0, f64::INFINITY, "singular radius underflows"));
            }
            (rho, count * omega(rho))
        };
        let bound = f.bound_hint();
        let rho_jump = match f.support() {
            None => f64::INFINITY,
            Some(g) => match bound {
                Some(0.0) => f64::INFINITY,
                Some(b) => {
                    let perimeter = g.boundary_measure().max(f64::MIN_POSITIVE);
                    opts.tol / (8.0 * b * perimeter * 3f64.powi(m as i32 - 1))
                }
                None => ell * (-40f64).exp2(),
            },
        };
        let order = opts.gauss_order.unwrap_or_else(|| default_order(m, f.exact_degree()));
        Ok(Setup {
            m,
            lo,
            hi,
            ell,
            singular,
            rho_sing,
            singular_residue,
            rho_jump,
            bound,
            rule: GaussRule::new(order),
        })
    }

    pub fn walk<'a>(
        &'a self,
        f: &'a dyn Integrand,
        level: u32,
        rho_jump: f64,
        opts: &IntegrateOptions,
        skip_outside: bool,
    ) -> Walk<'a> {
        Walk {
            m: self.m,
            lo: self.lo,
            hi: self.hi,
            singular: &self.singular,
            support: f.support(),
            h: self.ell * (1.0 - level as f64).exp2(),
            c: (6.0 - level as f64).exp2(),
            p: f.grading_exponent(),
            rho_sing: self.rho_sing,
            rho_jump,
            exclusion: 0.0,
            depth_cap: opts.depth_cap,
            budget: opts.cell_budget,
            skip_outside,
        }
    }
}

fn no_convergence(levels: u32, last_norm: f64, error_estimate: f64, reason: &str) -> IntegrationError {
    IntegrationError::NoConvergence {
        levels,
        last_norm,
        error_estimate,
        reason: reason.to_string(),
    }
}

pub(crate) fn walk_error(e: WalkError, level: u32, opts: &IntegrateOptions) -> IntegrationError {
    match e {
        WalkError::Depth => IntegrationError::DepthExceeded {
            depth_cap: opts.depth_cap,
        },
        WalkError::Budget => no_convergence(level, 0.0, f64::INFINITY, "cell budget exhausted"),
        WalkError::Resolution => no_convergence(level, 0.0, f64::INFINITY, "cells reached f64 resolution"),
        WalkError::TooManySingularPoints => no_convergence(level, 0.0, f64::INFINITY, "more than 64 singular points"),
    }
}

/// Visits the tensor Gauss nodes of a cell: `(node, weight)` with weights summing to 1.
pub(crate) fn for_each_node(rule: &GaussRule, m: usize, cell: &Cell, mut visit: impl FnMut(&[f64], f64)) {
    let k = rule.len();
    let mut idx = [0usize; MAX_DIM];
    let mut t = [0.0; MAX_DIM];
    loop {
        let mut w = 1.0;
        for j in 0..m {
            t[j] = cell.lo[j] + (cell.hi[j] - cell.lo[j]) * rule.nodes[idx[j]];
            w *= rule.weights[idx[j]];
        }
        visit(&t[..m], w);
        let mut j = m;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < k {
                break;
            }
            idx[j] = 0;
        }
    }
}

struct LevelSum {
    sum: Vec<Neumaier>,
    cells: u64,
    singular_cells: u64,
    straddle_cells: u64,
    evaluations: u64,
    straddle_volume: Neumaier,
    redirect: Neumaier,
}

fn level_sum(
    f: &dyn Integrand,
    setup: &Setup,
    mode: Mode,
    level: u32,
    rho_jump: f64,
    opts: &IntegrateOptions,
) -> Result<LevelSum, WalkError> {
    let m = setup.m;
    let d = f.value_dim();
    let mut out = LevelSum {
        sum: vec![Neumaier::default(); d],
        cells: 0,
        singular_cells: 0,
        straddle_cells: 0,
        evaluations: 0,
        straddle_volume: Neumaier::default(),
        redirect: Neumaier::default(),
    };
    let redirect_radius = opts.redirect_factor * setup.rho_sing;
    let track_redirect = mode == Mode::McShane && !setup.singular.is_empty();
    let mut buf = vec![0.0; d];
    let mut cell_acc = vec![0.0; d];
    let walk = setup.walk(f, level, rho_jump, opts, true);
    let support = f.support();
    walk.run(|a| match a {
        Accepted::Regular(cell) => {
            out.cells += 1;
            let vol = cell.volume(m);
            cell_acc.iter_mut().for_each(|x| *x = 0.0);
            let near = track_redirect && setup.singular.iter().any(|s| within_ball(s, m, cell, redirect_radius));
            let mut abs_acc = 0.0;
            for_each_node(&setup.rule, m, cell, |t, w| {
                f.eval_in_support(t, &mut buf);
                for (a, b) in cell_acc.iter_mut().zip(&buf) {
                    *a += w * b;
                }
                if near {
                    abs_acc += w * opts.norm.of(&buf);
                }
            });
            out.evaluations += setup.rule.len().pow(m as u32) as u64;
            for (s, a) in out.sum.iter_mut().zip(&cell_acc) {
                s.add(vol * a);
            }
            if near {
                out.redirect.add(vol * abs_acc);
            }
        }
        Accepted::Singular(..) => {
            out.cells += 1;
            out.singular_cells += 1;
        }
        Accepted::Straddle(cell) => {
            out.cells += 1;
            out.straddle_cells += 1;
            let vol = cell.volume(m);
            out.straddle_volume.add(vol);
            let mut c = [0.0; MAX_DIM];
            for (j, x) in c.iter_mut().enumerate().take(m) {
                *x = 0.5 * (cell.lo[j] + cell.hi[j]);
            }
            let inside = match (support, scalar_point(&c[..m])) {
                (Some(g), Some(p)) => g.contains(&p),
                _ => false,
            };
            if inside {
                f.eval_in_support(&c[..m], &mut buf);
                out.evaluations += 1;
                for (s, b) in out.sum.iter_mut().zip(&buf) {
                    s.add(vol * b);
                }
            }
        }
        Accepted::Outside(_) => {}
    })?;
    Ok(out)
}

pub(crate) fn scalar_point(t: &[f64]) -> Option<Point> {
    t.iter()
        .map(|x| scalar::from_f64(*x))
        .collect::<Option<Vec<_>>>()
        .map(Point::new)
}

/// Integral of `f` over `I` in the given mode.
///
/// Converges when the last three level sums differ pairwise by less than
/// `tol / 2` and the error estimate (last difference plus the singular,
/// boundary-jump and redirect residues) is at most `tol`. Polynomials of
/// declared degree without singular points converge after one level, since
/// the Gauss slices integrate them exactly.
pub fn integrate(
    f: &dyn Integrand,
    i: &Interval,
    mode: Mode,
    opts: &IntegrateOptions,
) -> Result<IntegralResult, IntegrationError> {
    // Decided exactly here, since f64 corners of a box inside or outside
    // the support can look like they straddle its boundary.
    if let (Some(g), Some(inner)) = (f.support(), f.unrestricted()) {
        match g.classify(i) {
            BoxClass::Inside => return integrate(inner, i, mode, opts),
            BoxClass::Outside => {
                return Ok(IntegralResult {
                    value: VectorValue::Approx(vec![0.0; f.value_dim()]),
                    error_estimate: 0.0,
                    refinement_levels: 0,
                    mode,
                    converged: true,
                    singular_radius: None,
                    history: Vec::new(),
                })
            }
            BoxClass::Boundary => {}
        }
    }
    let setup = Setup::new(f, i, mode, opts)?;
    let tol = opts.tol;
    let norm = opts.norm;
    let exact_rule = f.exact_degree().is_some_and(|d| (d as usize) < 2 * setup.rule.len()) && setup.singular.is_empty();
    let mut rho_jump = setup.rho_jump;
    let mut sums: Vec<VectorValue> = Vec::new();
    let mut redirects: Vec<f64> = Vec::new();
    let mut history: Vec<LevelRecord> = Vec::new();
    for level in 1..=opts.level_cap {
        let ls = level_sum(f, &setup, mode, level, rho_jump, opts).map_err(|e| walk_error(e, level, opts))?;
        let value = VectorValue::Approx(ls.sum.iter().map(Neumaier::total).collect());
        let jump_residue = if ls.straddle_cells == 0 {
            0.0
        } else {
            match setup.bound {
                Some(b) => b * ls.straddle_volume.total(),
                None => f64::INFINITY,
            }
        };
        let redirect_residue = ls.redirect.total();
        let difference = sums.last().map(|prev| value.distance(prev, norm));
        let residues = setup.singular_residue + jump_residue + redirect_residue;
        let error_estimate = if exact_rule {
            residues
        } else {
            difference.unwrap_or(f64::INFINITY) + residues
        };
        history.push(LevelRecord {
            level,
            cells: ls.cells,
            singular_cells: ls.singular_cells,
            straddle_cells: ls.straddle_cells,
            evaluations: ls.evaluations,
            value: value.to_f64(),
            difference,
            singular_residue: setup.singular_residue,
            jump_residue,
            redirect_residue,
            error_estimate,
        });
        sums.push(value.clone());
        redirects.push(redirect_residue);

        let done = |error_estimate: f64| IntegralResult {
            value: value.clone(),
            error_estimate,
            refinement_levels: level,
            mode,
            converged: true,
            singular_radius: setup.singular.first().map(|_| setup.rho_sing),
            history: history.clone(),
        };
        if exact_rule && error_estimate <= tol {
            return Ok(done(error_estimate));
        }
        let n = sums.len();
        if n >= 3 {
            let d1 = sums[n - 1].distance(&sums[n - 2], norm);
            let d2 = sums[n - 2].distance(&sums[n - 3], norm);
            let d3 = sums[n - 1].distance(&sums[n - 3], norm);
            if d1 < tol / 2.0 && d2 < tol / 2.0 && d3 < tol / 2.0 && error_estimate <= tol {
                return Ok(done(error_estimate));
            }
            if mode == Mode::McShane && redirect_residue > tol && redirect_residue >= 0.5 * redirects[n - 3] {
                return Err(no_convergence(
                    level,
                    value.norm(norm),
                    error_estimate,
                    "tags near a singular point can be redirected without the sum settling; \
                     f is not absolutely integrable there",
                ));
            }
        }
        if jump_residue.is_finite() && jump_residue > tol / 4.0 {
            rho_jump /= 2.0;
        }
    }
    let last = history.last().expect("at least one level");
    Err(no_convergence(
        opts.level_cap,
        VectorValue::Approx(last.value.clone()).norm(norm),
        last.error_estimate,
        "level cap reached",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrators::integrand::FnIntegrand;

    #[test]
    fn solve_radius_finds_the_largest_admissible_radius() {
        let r = solve_radius(1.0, 1e-6, |r| r * r);
        assert!((r - 1e-3).abs() < 1e-12);
        assert_eq!(solve_radius(1.0, 2.0, |r| r), 1.0);
    }

    #[test]
    fn constant_converges_in_one_level() {
        let f = FnIntegrand::scalar("five", 2, |_| 5.0).with_bound(5.0).with_degree(0);
        let r = mcshane_integral(&f, &Interval::unit_cube(2), 1e-6).unwrap();
        assert_eq!(r.value.to_f64(), vec![5.0]);
        assert_eq!(r.error_estimate, 0.0);
        assert_eq!(r.refinement_levels, 1);
    }

    #[test]
    fn smooth_function_without_declared_degree() {
        let f = FnIntegrand::scalar("exp", 1, |t| t[0].exp()).with_bound(3.0);
        let r = hk_integral(&f, &Interval::unit_cube(1), 1e-10).unwrap();
        assert!((r.value.component(0) - (1f64.exp() - 1.0)).abs() < 1e-12);
        assert!(r.refinement_levels >= 3);
    }
}

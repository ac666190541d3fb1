//! Componentwise Dunford check: estimates of `∫|f_j|` by refinement with
//! shrinking neighbourhoods of the singular set removed.

use serde::Serialize;

use super::engine::{for_each_node, integrate, IntegrateOptions, Mode, Setup};
use super::integrand::Integrand;
use super::walker::{Accepted, Walk};
use crate::error::IntegrationError;
use crate::geometry::{Interval, VectorValue};
use crate::summation::Neumaier;

#[derive(Debug, Clone)]
pub struct WeakOptions {
    /// Estimates above this count as divergent.
    pub divergence_threshold: f64,
    /// Relative change below which an estimate counts as stable.
    pub stable_rel: f64,
    pub max_levels: u32,
    /// Tolerance of the weak and Pettis integrals.
    pub tol: f64,
}

impl Default for WeakOptions {
    fn default() -> Self {
        WeakOptions {
            divergence_threshold: 1e2,
            stable_rel: 1e-6,
            max_levels: 120,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WeakIntegralRecord {
    /// `∫ e_j* f` for the dual basis, when the HK integral converges.
    pub weak_integrals: Option<Vec<f64>>,
    pub abs_integral_estimates: Vec<f64>,
    /// Estimates after each refinement level.
    pub abs_history: Vec<Vec<f64>>,
    pub levels: u32,
    pub dunford_ok: bool,
    pub pettis_vector: Option<VectorValue>,
    pub divergence_threshold: f64,
}

/// Level `k` drops the cells within `ℓ·2^(-8k)` of each singular point and
/// refines the rest to edge `ℓ·2^(-min(k, 6))` and to one eighth of the
/// distance to the singular set. The estimates are Gauss sums of `|f_j|`.
///
/// `dunford_ok` once every estimate has changed by a relative amount below
/// `stable_rel` on two successive levels while below the threshold; false
/// as soon as one exceeds the threshold or when the level cap is reached.
pub fn dunford_componentwise_check(
    f: &dyn Integrand,
    i: &Interval,
    opts: &WeakOptions,
) -> Result<WeakIntegralRecord, IntegrationError> {
    let base = IntegrateOptions::with_tol(opts.tol);
    let setup = Setup::new(f, i, Mode::HenstockKurzweil, &base)?;
    let m = setup.m;
    let d = f.value_dim();
    let ell = setup.ell;
    // Cells cannot shrink below the spacing of f64 around the singular points.
    let floor = setup
        .singular
        .iter()
        .flat_map(|s| s.exact.to_f64())
        .map(|x| x.abs() * (-46f64).exp2())
        .fold(0.0, f64::max);
    let mut history: Vec<Vec<f64>> = Vec::new();
    let mut stable_runs = 0;
    let mut dunford_ok = false;
    let mut buf = vec![0.0; d];
    for k in 1..=opts.max_levels {
        let exclusion = if setup.singular.is_empty() {
            0.0
        } else {
            (ell * (-8.0 * k as f64).exp2()).max(floor)
        };
        let h = ell * (-(k.min(6) as f64)).exp2();
        let walk = Walk {
            m,
            lo: setup.lo,
            hi: setup.hi,
            singular: &setup.singular,
            support: f.support(),
            h,
            c: 0.125,
            p: 1,
            rho_sing: 0.0,
            rho_jump: h,
            exclusion,
            depth_cap: 8 * opts.max_levels + 64,
            budget: base.cell_budget,
            skip_outside: true,
        };
        let mut acc = vec![Neumaier::default(); d];
        walk.run(|a| {
            let cell = match a {
                Accepted::Regular(c) | Accepted::Straddle(c) => c,
                Accepted::Singular(..) | Accepted::Outside(_) => return,
            };
            let vol = cell.volume(m);
            for_each_node(&setup.rule, m, cell, |t, w| {
                f.eval_f64(t, &mut buf);
                for (a, b) in acc.iter_mut().zip(&buf) {
                    a.add(vol * w * b.abs());
                }
            });
        })
        .map_err(|e| super::engine::walk_error(e, k, &base))?;
        let est: Vec<f64> = acc.iter().map(Neumaier::total).collect();
        let diverged = est.iter().any(|x| !x.is_finite() || *x > opts.divergence_threshold);
        let stable = history.last().is_some_and(|prev| {
            prev.iter()
                .zip(&est)
                .all(|(a, b)| (a - b).abs() <= opts.stable_rel * b.abs().max(f64::MIN_POSITIVE) || a == b)
        });
        history.push(est);
        if diverged {
            break;
        }
        stable_runs = if stable { stable_runs + 1 } else { 0 };
        if stable_runs >= 2 {
            dunford_ok = true;
            break;
        }
    }
    let weak_integrals = integrate(f, i, Mode::HenstockKurzweil, &base)
        .ok()
        .map(|r| r.value.to_f64());
    let pettis_vector = if dunford_ok {
        integrate(f, i, Mode::McShane, &base).ok().map(|r| r.value)
    } else {
        None
    };
    Ok(WeakIntegralRecord {
        weak_integrals,
        abs_integral_estimates: history.last().cloned().unwrap_or_default(),
        levels: history.len() as u32,
        abs_history: history,
        dunford_ok,
        pettis_vector,
        divergence_threshold: opts.divergence_threshold,
    })
}

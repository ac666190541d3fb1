use serde::Serialize;

use super::series::series_over_division;
use super::IntervalFunction;
use crate::divisions::Division;
use crate::error::FunctionError;
use crate::geometry::{scalar, Interval, NormKind, VectorValue};
use crate::partitions::{sample_z_tagged_partition, Gauge, PartitionMode, ZSet};

#[derive(Debug, Clone)]
pub struct FalsifierOptions {
    pub epsilon: f64,
    pub gauge: Gauge,
    pub trials: usize,
    pub seed: u64,
    /// `HK` samples HK-partitions as well as M-partitions.
    pub mode: PartitionMode,
    pub boxes_per_trial: usize,
    /// Box in which partitions are placed.
    pub window: Interval,
    pub norm: NormKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct VariationReport {
    pub trials: usize,
    pub max_observed: f64,
    pub gauge_radius: f64,
    pub epsilon: f64,
    pub passed: bool,
    /// `Z` was empty, so the pass is vacuous.
    #[serde(skip)]
    pub vacuous: bool,
    /// Partitions that received fewer boxes than requested.
    #[serde(skip)]
    pub short_partitions: usize,
}

/// Samples `Z`-tagged gauge-fine partitions and records the largest
/// `‖Σ_{(t,I)} Σ_k F(I ∩ C_k)‖`. Passes when every observation is below `ε`.
pub fn negligible_variation_falsifier(
    f: &dyn IntervalFunction,
    z: &ZSet,
    d: &Division,
    opts: &FalsifierOptions,
) -> Result<VariationReport, FunctionError> {
    let constant = match &opts.gauge {
        Gauge::Constant(r) => Some(scalar::to_f64(r)),
        _ => None,
    };
    if z.is_empty() {
        return Ok(VariationReport {
            trials: opts.trials,
            max_observed: 0.0,
            gauge_radius: constant.unwrap_or(0.0),
            epsilon: opts.epsilon,
            passed: true,
            vacuous: true,
            short_partitions: 0,
        });
    }
    let modes: &[PartitionMode] = match opts.mode {
        PartitionMode::M => &[PartitionMode::M],
        PartitionMode::HK => &[PartitionMode::M, PartitionMode::HK],
    };
    let mut max_observed: f64 = 0.0;
    let mut max_radius: f64 = 0.0;
    let mut short = 0usize;
    for trial in 0..opts.trials as u64 {
        for (n, &mode) in modes.iter().enumerate() {
            let seed = opts
                .seed
                .wrapping_add(trial.wrapping_mul(0x9E37_79B9_7F4A_7C15))
                .wrapping_add(n as u64);
            let sp = sample_z_tagged_partition(z, &opts.gauge, &opts.window, seed, opts.boxes_per_trial, mode);
            if !sp.complete {
                short += 1;
            }
            let mut terms = Vec::with_capacity(sp.partition.len());
            for it in sp.partition.items() {
                max_radius = max_radius.max(scalar::to_f64(&opts.gauge.radius(&it.tag)));
                terms.push(series_over_division(f, d, &it.interval, f64::INFINITY, opts.norm)?.0);
            }
            let total = VectorValue::sum(f.value_dim(), terms.iter());
            max_observed = max_observed.max(total.norm(opts.norm));
        }
    }
    Ok(VariationReport {
        trials: opts.trials,
        max_observed,
        gauge_radius: constant.unwrap_or(max_radius),
        epsilon: opts.epsilon,
        passed: max_observed < opts.epsilon,
        vacuous: false,
        short_partitions: short,
    })
}

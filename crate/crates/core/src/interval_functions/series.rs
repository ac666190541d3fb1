use std::collections::HashMap;

use serde::Serialize;

use super::IntervalFunction;
use crate::divisions::{permute_division, restrict_division, Division, TailMeasure};
use crate::error::FunctionError;
use crate::geometry::{scalar, Interval, NormKind, VectorValue};

/// Permutations tried when measuring order dependence.
pub const PERMUTATIONS: u64 = 20;
/// Prefix sums kept in a report.
const MAX_PREFIXES: usize = 64;

#[derive(Debug, Clone, Serialize)]
pub struct SeriesReport {
    /// Evenly spaced prefix sums, ending with the full sum.
    pub prefix_sums: Vec<VectorValue>,
    pub terms: usize,
    pub abs_tail_bound: f64,
    /// Accumulated evaluation error of the terms.
    pub eval_error: f64,
    pub permutation_spread: f64,
    pub converged: bool,
}

impl SeriesReport {
    fn empty() -> Self {
        SeriesReport {
            prefix_sums: Vec::new(),
            terms: 0,
            abs_tail_bound: 0.0,
            eval_error: 0.0,
            permutation_spread: 0.0,
            converged: true,
        }
    }
}

/// `Σ_k F(I ∩ C_k)` over the division cells overlapping `I`.
///
/// The tail bound is `M · min(tail_measure, |I ∩ bbox|)` with `M` the
/// per-cell bound of `F`, and needs no bound when that measure is zero. The spread is the largest
/// distance between the canonical sum and the sums in 20 seeded orders.
pub fn series_over_division(
    f: &dyn IntervalFunction,
    d: &Division,
    i: &Interval,
    tol: f64,
    norm: NormKind,
) -> Result<(VectorValue, SeriesReport), FunctionError> {
    // The uncovered part of the host inside I lies in I ∩ bbox(host).
    let reach = i.overlap_volume(d.host().bounding_box());
    let tail = match d.tail_measure() {
        TailMeasure::Exact(t) => scalar::to_f64(scalar::min(t, &reach)),
        TailMeasure::Bound(b) => b.min(scalar::to_f64(&reach)),
    };
    let abs_tail_bound = if tail == 0.0 {
        0.0
    } else {
        f.cell_bound().ok_or(FunctionError::TailNotCertifiable)? * tail
    };
    let pieces = restrict_division(d, i);
    if pieces.is_empty() {
        let mut report = SeriesReport::empty();
        report.abs_tail_bound = abs_tail_bound;
        report.converged = abs_tail_bound == 0.0 || abs_tail_bound < tol;
        return Ok((VectorValue::zero(f.value_dim()), report));
    }
    let mut values = Vec::with_capacity(pieces.len());
    for (_, j) in &pieces {
        values.push(f.eval(j)?);
    }
    let dv = f.value_dim();
    let total = VectorValue::sum(dv, values.iter());

    let stride = pieces.len().div_ceil(MAX_PREFIXES).max(1);
    let mut prefix_sums = Vec::new();
    let mut end = stride.min(pieces.len());
    loop {
        prefix_sums.push(VectorValue::sum(dv, values[..end].iter()));
        if end == pieces.len() {
            break;
        }
        end = (end + stride).min(pieces.len());
    }

    // Restricted cells follow division order, so permuting the index list
    // reproduces the series of a permuted division.
    let mut spread: f64 = 0.0;
    for seed in 1..=PERMUTATIONS {
        let order = permute_division(d, seed);
        let rank: HashMap<&Interval, usize> = order
            .cells()
            .iter()
            .enumerate()
            .map(|(pos, c)| (&c.interval, pos))
            .collect();
        let mut idx: Vec<usize> = (0..pieces.len()).collect();
        idx.sort_by_key(|&n| rank[&d.cells()[pieces[n].0].interval]);
        let permuted = VectorValue::sum(dv, idx.iter().map(|&n| &values[n]));
        spread = spread.max(permuted.distance(&total, norm));
    }

    let eval_error = f.eval_error() * pieces.len() as f64;
    let converged = abs_tail_bound == 0.0 || abs_tail_bound < tol;
    Ok((
        total,
        SeriesReport {
            prefix_sums,
            terms: pieces.len(),
            abs_tail_bound,
            eval_error,
            permutation_spread: spread,
            converged,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisions::dyadic_division;
    use crate::geometry::scalar::{int, to_f64};
    use crate::geometry::{IntervalAlgebraSet, Region};
    use crate::interval_functions::ClosedForm;
    use std::sync::Arc;

    #[test]
    fn volume_series_on_open_unit_interval() {
        let host: Arc<dyn Region> = Arc::new(IntervalAlgebraSet::parse("+ [0,1]").unwrap());
        let d = dyadic_division(host, 6).unwrap();
        let f = ClosedForm::volume_times(1, int(1));
        let (v, r) = series_over_division(&f, &d, &Interval::unit_cube(1), 1e-9, NormKind::Max).unwrap();
        let tail = d.tail_measure().to_f64();
        assert_eq!(v, VectorValue::Exact(vec![d.covered_measure()]));
        assert_eq!(r.abs_tail_bound, tail);
        assert_eq!(r.permutation_spread, 0.0);
        assert!((to_f64(&d.covered_measure()) - 1.0).abs() <= tail);
    }

    #[test]
    fn disjoint_interval_gives_empty_report() {
        let host: Arc<dyn Region> = Arc::new(IntervalAlgebraSet::parse("+ [0,1]").unwrap());
        let d = dyadic_division(host, 4).unwrap();
        let f = ClosedForm::volume_times(1, int(1));
        let far = Interval::parse("[2,3]").unwrap();
        let (v, r) = series_over_division(&f, &d, &far, 1e-9, NormKind::Max).unwrap();
        assert!(v.is_zero());
        assert_eq!(r.terms, 0);
        assert!(r.prefix_sums.is_empty());
    }

    #[test]
    fn unbounded_function_with_tail_is_not_certifiable() {
        let host: Arc<dyn Region> = Arc::new(IntervalAlgebraSet::parse("+ [0,1]\n- [1/3,2/3]").unwrap());
        let d = dyadic_division(host, 4).unwrap();
        let f = ClosedForm::new("unbounded", 1, 1, None, |i| VectorValue::Exact(vec![i.volume()]));
        let e = series_over_division(&f, &d, &Interval::unit_cube(1), 1e-9, NormKind::Max).unwrap_err();
        assert!(matches!(e, FunctionError::TailNotCertifiable));
    }
}

//! Riemann sums and the defect of a partition against an interval function.

use super::tagged::TaggedPartition;
use crate::error::FunctionError;
use crate::geometry::{NormKind, VectorValue};
use crate::integrators::{eval_at, Integrand};
use crate::interval_functions::IntervalFunction;

/// `Σ f(t)|I|` in item order; exact when every value is exact, otherwise
/// compensated.
pub fn riemann_sum(f: &dyn Integrand, p: &TaggedPartition) -> VectorValue {
    let terms: Vec<VectorValue> = p
        .items()
        .iter()
        .map(|it| eval_at(f, &it.tag).scale(&it.interval.volume()))
        .collect();
    VectorValue::sum(f.value_dim(), terms.iter())
}

/// `‖Σ (f(t)|I| − F(I))‖`.
pub fn partition_defect(
    f: &dyn Integrand,
    big_f: &dyn IntervalFunction,
    p: &TaggedPartition,
    norm: NormKind,
) -> Result<f64, FunctionError> {
    let mut terms = Vec::with_capacity(p.len());
    for it in p.items() {
        let fi = eval_at(f, &it.tag).scale(&it.interval.volume());
        terms.push(fi.sub(&big_f.eval(&it.interval)?));
    }
    Ok(VectorValue::sum(f.value_dim(), terms.iter()).norm(norm))
}

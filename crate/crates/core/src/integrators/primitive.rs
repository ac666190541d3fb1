use std::sync::Arc;

use super::engine::{IntegrateOptions, Mode};
use super::integrand::Integrand;
use crate::interval_functions::IntegralBacked;

/// `F(I) = ∫_I f` in the given mode, memoized per box.
pub fn primitive_of(f: Arc<dyn Integrand>, mode: Mode, tol: f64) -> IntegralBacked {
    IntegralBacked::new(f, mode, IntegrateOptions::with_tol(tol))
}

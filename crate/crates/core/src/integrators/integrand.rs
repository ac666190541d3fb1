//! Integrands: point functions with declared singular points and bounds.

use std::sync::Arc;

use num_traits::Zero;

use crate::geometry::{scalar, Point, Region, Scalar, VectorValue};

/// A function `f: R^m → R^d` together with the metadata the integrators rely on.
///
/// `eval_f64` is never called at a declared singular point by the integrators;
/// tags placed on singular points take the value 0.
pub trait Integrand: Send + Sync {
    fn dim(&self) -> usize;
    fn value_dim(&self) -> usize;
    fn eval_f64(&self, t: &[f64], out: &mut [f64]);

    /// Evaluation at points known to lie in the support; defaults to `eval_f64`.
    fn eval_in_support(&self, t: &[f64], out: &mut [f64]) {
        self.eval_f64(t, out)
    }

    /// Exact value, when the function admits one at rational points.
    fn eval_exact(&self, _t: &Point) -> Option<Vec<Scalar>> {
        None
    }

    fn singular_points(&self) -> &[Point] {
        &[]
    }

    /// `M` with `‖f‖ ≤ M` off the singular set.
    fn bound_hint(&self) -> Option<f64> {
        None
    }

    /// Bound on `‖∫_C f‖` for any cell `C` of edge at most `r` containing one
    /// singular point.
    fn singular_modulus(&self, r: f64) -> Option<f64> {
        self.abs_modulus(r)
    }

    /// Bound on `∫_C ‖f‖` for the same cells; `None` when `f` is not
    /// absolutely integrable near its singular points.
    fn abs_modulus(&self, r: f64) -> Option<f64> {
        self.bound_hint().map(|m| m * r.powi(self.dim() as i32))
    }

    /// Exponent `p` of the distance-scaled gauge `c · dist(t, S)^p`.
    fn grading_exponent(&self) -> i32 {
        1
    }

    /// Per-variable polynomial degree when `f` is a polynomial.
    fn exact_degree(&self) -> Option<u32> {
        None
    }

    /// Set outside which the function vanishes (zero extensions).
    fn support(&self) -> Option<&dyn Region> {
        None
    }

    /// The function before zero extension, equal to `self` on the support.
    fn unrestricted(&self) -> Option<&dyn Integrand> {
        None
    }

    /// Closed-form integral over `[lo, hi]`; used only by test oracles.
    fn primitive(&self, _lo: &[f64], _hi: &[f64]) -> Option<Vec<f64>> {
        None
    }

    fn describe(&self) -> String;
}

/// `f(t)` with the conventions shared by every Riemann sum: zero at declared
/// singular points and outside the support.
pub fn eval_at(f: &dyn Integrand, t: &Point) -> VectorValue {
    let d = f.value_dim();
    if f.singular_points().iter().any(|s| s == t) {
        return VectorValue::zero(d);
    }
    if let Some(g) = f.support() {
        if !g.contains(t) {
            return VectorValue::zero(d);
        }
    }
    if let Some(v) = f.eval_exact(t) {
        return VectorValue::Exact(v);
    }
    let mut out = vec![0.0; d];
    f.eval_f64(&t.to_f64(), &mut out);
    VectorValue::Approx(out)
}

type EvalFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;
type ExactFn = dyn Fn(&Point) -> Option<Vec<Scalar>> + Send + Sync;
type PrimitiveFn = dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync;
type ModulusFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Integrand assembled from closures.
#[derive(Clone)]
pub struct FnIntegrand {
    name: String,
    dim: usize,
    value_dim: usize,
    eval: Arc<EvalFn>,
    exact: Option<Arc<ExactFn>>,
    singular: Vec<Point>,
    bound: Option<f64>,
    modulus: Option<Arc<ModulusFn>>,
    abs_modulus: Option<Arc<ModulusFn>>,
    abs_modulus_absent: bool,
    grading: i32,
    degree: Option<u32>,
    primitive: Option<Arc<PrimitiveFn>>,
}

impl FnIntegrand {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        value_dim: usize,
        eval: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        FnIntegrand {
            name: name.into(),
            dim,
            value_dim,
            eval: Arc::new(eval),
            exact: None,
            singular: Vec::new(),
            bound: None,
            modulus: None,
            abs_modulus: None,
            abs_modulus_absent: false,
            grading: 1,
            degree: None,
            primitive: None,
        }
    }

    /// Scalar function of one point.
    pub fn scalar(name: impl Into<String>, dim: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        FnIntegrand::new(name, dim, 1, move |t, out| out[0] = f(t))
    }

    pub fn with_exact(mut self, f: impl Fn(&Point) -> Option<Vec<Scalar>> + Send + Sync + 'static) -> Self {
        self.exact = Some(Arc::new(f));
        self
    }

    pub fn with_singular(mut self, points: Vec<Point>) -> Self {
        self.singular = points;
        self
    }

    pub fn with_bound(mut self, m: f64) -> Self {
        self.bound = Some(m);
        self
    }

    pub fn with_modulus(mut self, w: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.modulus = Some(Arc::new(w));
        self
    }

    pub fn with_abs_modulus(mut self, w: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.abs_modulus = Some(Arc::new(w));
        self
    }

    /// Declares that `f` is not absolutely integrable near its singular points.
    pub fn without_abs_modulus(mut self) -> Self {
        self.abs_modulus_absent = true;
        self.abs_modulus = None;
        self
    }

    pub fn with_grading(mut self, p: i32) -> Self {
        self.grading = p;
        self
    }

    pub fn with_degree(mut self, d: u32) -> Self {
        self.degree = Some(d);
        self
    }

    pub fn with_primitive(mut self, p: impl Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.primitive = Some(Arc::new(p));
        self
    }
}

impl Integrand for FnIntegrand {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value_dim(&self) -> usize {
        self.value_dim
    }
    fn eval_f64(&self, t: &[f64], out: &mut [f64]) {
        (self.eval)(t, out)
    }
    fn eval_exact(&self, t: &Point) -> Option<Vec<Scalar>> {
        self.exact.as_ref().and_then(|f| f(t))
    }
    fn singular_points(&self) -> &[Point] {
        &self.singular
    }
    fn bound_hint(&self) -> Option<f64> {
        self.bound
    }
    fn singular_modulus(&self, r: f64) -> Option<f64> {
        match &self.modulus {
            Some(w) => Some(w(r)),
            None => self.abs_modulus(r),
        }
    }
    fn abs_modulus(&self, r: f64) -> Option<f64> {
        if self.abs_modulus_absent {
            return None;
        }
        match &self.abs_modulus {
            Some(w) => Some(w(r)),
            None => self.bound.map(|m| m * r.powi(self.dim as i32)),
        }
    }
    fn grading_exponent(&self) -> i32 {
        self.grading
    }
    fn exact_degree(&self) -> Option<u32> {
        self.degree
    }
    fn primitive(&self, lo: &[f64], hi: &[f64]) -> Option<Vec<f64>> {
        self.primitive.as_ref().map(|p| p(lo, hi))
    }
    fn describe(&self) -> String {
        self.name.clone()
    }
}

/// `Σ c_i f_i`.
#[derive(Clone)]
pub struct LinearCombination {
    terms: Vec<(Scalar, Arc<dyn Integrand>)>,
    singular: Vec<Point>,
}

impl LinearCombination {
    pub fn new(terms: Vec<(Scalar, Arc<dyn Integrand>)>) -> Self {
        assert!(!terms.is_empty(), "empty combination");
        let mut singular: Vec<Point> = Vec::new();
        for (_, f) in &terms {
            for s in f.singular_points() {
                if !singular.contains(s) {
                    singular.push(s.clone());
                }
            }
        }
        singular.sort();
        LinearCombination { terms, singular }
    }

    fn live_terms(&self) -> impl Iterator<Item = &(Scalar, Arc<dyn Integrand>)> {
        self.terms.iter().filter(|(c, _)| !c.is_zero())
    }
}

impl Integrand for LinearCombination {
    fn dim(&self) -> usize {
        self.terms[0].1.dim()
    }
    fn value_dim(&self) -> usize {
        self.terms[0].1.value_dim()
    }
    fn eval_f64(&self, t: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|x| *x = 0.0);
        let mut buf = vec![0.0; out.len()];
        for (c, f) in self.live_terms() {
            f.eval_f64(t, &mut buf);
            let cf = scalar::to_f64(c);
            for (o, b) in out.iter_mut().zip(&buf) {
                *o += cf * b;
            }
        }
    }
    fn eval_exact(&self, t: &Point) -> Option<Vec<Scalar>> {
        let mut acc = vec![Scalar::zero(); self.value_dim()];
        for (c, f) in self.live_terms() {
            let v = f.eval_exact(t)?;
            for (a, x) in acc.iter_mut().zip(v) {
                *a += c * x;
            }
        }
        Some(acc)
    }
    fn singular_points(&self) -> &[Point] {
        &self.singular
    }
    fn bound_hint(&self) -> Option<f64> {
        self.live_terms()
            .map(|(c, f)| f.bound_hint().map(|m| scalar::to_f64(c).abs() * m))
            .sum()
    }
    fn singular_modulus(&self, r: f64) -> Option<f64> {
        self.live_terms()
            .map(|(c, f)| {
                if f.singular_points().is_empty() {
                    f.bound_hint()
                        .map(|m| scalar::to_f64(c).abs() * m * r.powi(f.dim() as i32))
                } else {
                    f.singular_modulus(r).map(|w| scalar::to_f64(c).abs() * w)
                }
            })
            .sum()
    }
    fn abs_modulus(&self, r: f64) -> Option<f64> {
        self.live_terms()
            .map(|(c, f)| f.abs_modulus(r).map(|w| scalar::to_f64(c).abs() * w))
            .sum()
    }
    fn grading_exponent(&self) -> i32 {
        self.live_terms().map(|(_, f)| f.grading_exponent()).max().unwrap_or(1)
    }
    fn exact_degree(&self) -> Option<u32> {
        self.live_terms()
            .map(|(_, f)| f.exact_degree())
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }
    fn primitive(&self, lo: &[f64], hi: &[f64]) -> Option<Vec<f64>> {
        let mut acc = vec![0.0; self.value_dim()];
        for (c, f) in self.live_terms() {
            let v = f.primitive(lo, hi)?;
            for (a, x) in acc.iter_mut().zip(v) {
                *a += scalar::to_f64(c) * x;
            }
        }
        Some(acc)
    }
    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, f)| format!("{}*{}", scalar::fmt_scalar(c), f.describe()))
            .collect();
        parts.join(" + ")
    }
}

/// Stacks scalar integrands into a vector-valued one.
#[derive(Clone)]
pub struct Bundle {
    parts: Vec<Arc<dyn Integrand>>,
    singular: Vec<Point>,
    value_dim: usize,
}

impl Bundle {
    pub fn new(parts: Vec<Arc<dyn Integrand>>) -> Self {
        assert!(!parts.is_empty(), "empty bundle");
        let dim = parts[0].dim();
        assert!(
            parts.iter().all(|p| p.dim() == dim),
            "bundle parts disagree on dimension"
        );
        let mut singular: Vec<Point> = Vec::new();
        for f in &parts {
            for s in f.singular_points() {
                if !singular.contains(s) {
                    singular.push(s.clone());
                }
            }
        }
        singular.sort();
        let value_dim = parts.iter().map(|p| p.value_dim()).sum();
        Bundle {
            parts,
            singular,
            value_dim,
        }
    }
}

impl Integrand for Bundle {
    fn dim(&self) -> usize {
        self.parts[0].dim()
    }
    fn value_dim(&self) -> usize {
        self.value_dim
    }
    fn eval_f64(&self, t: &[f64], out: &mut [f64]) {
        let mut offset = 0;
        for p in &self.parts {
            let d = p.value_dim();
            p.eval_f64(t, &mut out[offset..offset + d]);
            offset += d;
        }
    }
    fn eval_exact(&self, t: &Point) -> Option<Vec<Scalar>> {
        let mut out = Vec::with_capacity(self.value_dim);
        for p in &self.parts {
            out.extend(p.eval_exact(t)?);
        }
        Some(out)
    }
    fn singular_points(&self) -> &[Point] {
        &self.singular
    }
    fn bound_hint(&self) -> Option<f64> {
        // Max norm of the stacked vector.
        self.parts
            .iter()
            .map(|p| p.bound_hint())
            .try_fold(0.0f64, |acc, m| m.map(|m| acc.max(m)))
    }
    fn singular_modulus(&self, r: f64) -> Option<f64> {
        self.parts
            .iter()
            .map(|p| {
                if p.singular_points().is_empty() {
                    p.bound_hint().map(|m| m * r.powi(p.dim() as i32))
                } else {
                    p.singular_modulus(r)
                }
            })
            .try_fold(0.0f64, |acc, w| w.map(|w| acc.max(w)))
    }
    fn abs_modulus(&self, r: f64) -> Option<f64> {
        self.parts
            .iter()
            .map(|p| p.abs_modulus(r))
            .try_fold(0.0f64, |acc, w| w.map(|w| acc.max(w)))
    }
    fn grading_exponent(&self) -> i32 {
        self.parts.iter().map(|p| p.grading_exponent()).max().unwrap_or(1)
    }
    fn exact_degree(&self) -> Option<u32> {
        self.parts
            .iter()
            .map(|p| p.exact_degree())
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }
    fn primitive(&self, lo: &[f64], hi: &[f64]) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(self.value_dim);
        for p in &self.parts {
            out.extend(p.primitive(lo, hi)?);
        }
        Some(out)
    }
    fn describe(&self) -> String {
        let parts: Vec<String> = self.parts.iter().map(|p| p.describe()).collect();
        format!("({})", parts.join(", "))
    }
}

/// `f₀`: `f` on `G`, zero on the rest of the box.
#[derive(Clone)]
pub struct ZeroExtended {
    inner: Arc<dyn Integrand>,
    region: Arc<dyn Region>,
    singular: Vec<Point>,
}

impl ZeroExtended {
    pub fn new(inner: Arc<dyn Integrand>, region: Arc<dyn Region>) -> Self {
        let singular = inner
            .singular_points()
            .iter()
            .filter(|s| region.contains(s))
            .cloned()
            .collect();
        ZeroExtended {
            inner,
            region,
            singular,
        }
    }

    pub fn inner(&self) -> &Arc<dyn Integrand> {
        &self.inner
    }

    pub fn region(&self) -> &Arc<dyn Region> {
        &self.region
    }
}

impl Integrand for ZeroExtended {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn value_dim(&self) -> usize {
        self.inner.value_dim()
    }
    fn eval_f64(&self, t: &[f64], out: &mut [f64]) {
        let inside = t
            .iter()
            .map(|x| scalar::from_f64(*x))
            .collect::<Option<Vec<_>>>()
            .map(|c| self.region.contains(&Point::new(c)))
            .unwrap_or(false);
        if inside {
            self.inner.eval_f64(t, out);
        } else {
            out.iter_mut().for_each(|x| *x = 0.0);
        }
    }
    fn eval_in_support(&self, t: &[f64], out: &mut [f64]) {
        self.inner.eval_f64(t, out)
    }
    fn eval_exact(&self, t: &Point) -> Option<Vec<Scalar>> {
        if self.region.contains(t) {
            self.inner.eval_exact(t)
        } else {
            Some(vec![Scalar::zero(); self.value_dim()])
        }
    }
    fn singular_points(&self) -> &[Point] {
        &self.singular
    }
    fn bound_hint(&self) -> Option<f64> {
        self.inner.bound_hint()
    }
    fn singular_modulus(&self, r: f64) -> Option<f64> {
        self.inner.singular_modulus(r)
    }
    fn abs_modulus(&self, r: f64) -> Option<f64> {
        self.inner.abs_modulus(r)
    }
    fn grading_exponent(&self) -> i32 {
        self.inner.grading_exponent()
    }
    fn exact_degree(&self) -> Option<u32> {
        self.inner.exact_degree()
    }
    fn support(&self) -> Option<&dyn Region> {
        Some(self.region.as_ref())
    }
    fn unrestricted(&self) -> Option<&dyn Integrand> {
        Some(self.inner.as_ref())
    }
    fn describe(&self) -> String {
        format!(
            "zero extension of {} from {}",
            self.inner.describe(),
            self.region.describe()
        )
    }
}

//! Additive interval functions, series over divisions, the series-built
//! extension `F₀`, and falsification tests for the Dunford-function and
//! negligible-variation conditions.

mod check;
mod series;
mod variation;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::FunctionError;
use crate::geometry::{scalar, Interval, NormKind, Scalar, VectorValue};
use crate::integrators::{integrate, Integrand, IntegrateOptions, Mode};

pub use check::{check_dunford_function, construct_f0, CheckOptions, DunfordFunctionReport, SeriesBuilt, TrialRow};
pub use series::{series_over_division, SeriesReport};
pub use variation::{negligible_variation_falsifier, FalsifierOptions, VariationReport};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm {
        name: String,
    },
    IntegralBacked {
        integrand: String,
        mode: Mode,
        tol: f64,
    },
    SeriesBuilt {
        base: Box<Provenance>,
        depth: u32,
        cells: usize,
    },
    Perturbed {
        base: Box<Provenance>,
    },
    Combination {
        parts: Vec<Provenance>,
    },
}

/// `F: ℐ → R^d`, expected to be additive over non-overlapping boxes whose
/// union is a box.
pub trait IntervalFunction: Send + Sync {
    fn dim(&self) -> usize;
    fn value_dim(&self) -> usize;
    fn eval(&self, i: &Interval) -> Result<VectorValue, FunctionError>;
    /// `M` with `‖F(J)‖ ≤ M |J|`, when known.
    fn cell_bound(&self) -> Option<f64> {
        None
    }
    /// Absolute error of one evaluation.
    fn eval_error(&self) -> f64 {
        0.0
    }
    fn provenance(&self) -> Provenance;
}

type ClosedFn = dyn Fn(&Interval) -> VectorValue + Send + Sync;

#[derive(Clone)]
pub struct ClosedForm {
    name: String,
    dim: usize,
    value_dim: usize,
    f: Arc<ClosedFn>,
    bound: Option<f64>,
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClosedForm({})", self.name)
    }
}

impl ClosedForm {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        value_dim: usize,
        bound: Option<f64>,
        f: impl Fn(&Interval) -> VectorValue + Send + Sync + 'static,
    ) -> Self {
        ClosedForm {
            name: name.into(),
            dim,
            value_dim,
            f: Arc::new(f),
            bound,
        }
    }

    /// `F(I) = c |I|`, exact.
    pub fn volume_times(dim: usize, c: Scalar) -> Self {
        let bound = scalar::to_f64(&c).abs();
        let name = format!("{} * volume", scalar::fmt_scalar(&c));
        ClosedForm::new(name, dim, 1, Some(bound), move |i| {
            VectorValue::Exact(vec![&c * i.volume()])
        })
    }

    /// `F(I) = ∫_I f` from the integrand's closed-form integral.
    pub fn primitive_of(f: Arc<dyn Integrand>) -> Option<Self> {
        let m = f.dim();
        f.primitive(&vec![0.0; m], &vec![1.0; m])?;
        let bound = f.bound_hint();
        let name = format!("closed-form primitive of {}", f.describe());
        let d = f.value_dim();
        Some(ClosedForm::new(name, m, d, bound, move |i| {
            VectorValue::Approx(
                f.primitive(&i.lower_f64(), &i.upper_f64())
                    .expect("primitive checked above"),
            )
        }))
    }
}

impl IntervalFunction for ClosedForm {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value_dim(&self) -> usize {
        self.value_dim
    }
    fn eval(&self, i: &Interval) -> Result<VectorValue, FunctionError> {
        Ok((self.f)(i))
    }
    fn cell_bound(&self) -> Option<f64> {
        self.bound
    }
    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm {
            name: self.name.clone(),
        }
    }
}

/// `F(I) = ∫_I f`, computed on demand and memoized.
pub struct IntegralBacked {
    f: Arc<dyn Integrand>,
    mode: Mode,
    opts: IntegrateOptions,
    cache: Mutex<HashMap<Interval, VectorValue>>,
}

impl IntegralBacked {
    pub fn new(f: Arc<dyn Integrand>, mode: Mode, opts: IntegrateOptions) -> Self {
        IntegralBacked {
            f,
            mode,
            opts,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn integrand(&self) -> &Arc<dyn Integrand> {
        &self.f
    }

    pub fn cached_evaluations(&self) -> usize {
        self.cache.lock().expect("cache lock").len()
    }
}

impl IntervalFunction for IntegralBacked {
    fn dim(&self) -> usize {
        self.f.dim()
    }
    fn value_dim(&self) -> usize {
        self.f.value_dim()
    }
    fn eval(&self, i: &Interval) -> Result<VectorValue, FunctionError> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(i) {
            return Ok(v.clone());
        }
        let r = integrate(self.f.as_ref(), i, self.mode, &self.opts)?;
        self.cache
            .lock()
            .expect("cache lock")
            .insert(i.clone(), r.value.clone());
        Ok(r.value)
    }
    fn cell_bound(&self) -> Option<f64> {
        self.f.bound_hint()
    }
    fn eval_error(&self) -> f64 {
        self.opts.tol
    }
    fn provenance(&self) -> Provenance {
        Provenance::IntegralBacked {
            integrand: self.f.describe(),
            mode: self.mode,
            tol: self.opts.tol,
        }
    }
}

/// Where an injected defect applies.
#[derive(Debug, Clone)]
pub enum DefectTarget {
    /// Exactly this interval.
    Cell(Interval),
    /// Every interval overlapping this box.
    Meets(Interval),
}

/// `F` plus a constant vector on the targeted intervals; breaks additivity.
#[derive(Clone)]
pub struct Perturbed {
    base: Arc<dyn IntervalFunction>,
    target: DefectTarget,
    defect: Vec<f64>,
}

impl Perturbed {
    pub fn new(base: Arc<dyn IntervalFunction>, target: DefectTarget, defect: Vec<f64>) -> Self {
        assert_eq!(defect.len(), base.value_dim(), "defect dimension");
        Perturbed { base, target, defect }
    }

    pub fn defect_norm(&self, norm: NormKind) -> f64 {
        norm.of(&self.defect)
    }

    fn hits(&self, i: &Interval) -> bool {
        match &self.target {
            DefectTarget::Cell(c) => c == i,
            DefectTarget::Meets(b) => b.overlaps(i),
        }
    }
}

impl IntervalFunction for Perturbed {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn value_dim(&self) -> usize {
        self.base.value_dim()
    }
    fn eval(&self, i: &Interval) -> Result<VectorValue, FunctionError> {
        let v = self.base.eval(i)?;
        if self.hits(i) {
            Ok(v.add(&VectorValue::Approx(self.defect.clone())))
        } else {
            Ok(v)
        }
    }
    fn cell_bound(&self) -> Option<f64> {
        self.base.cell_bound()
    }
    fn eval_error(&self) -> f64 {
        self.base.eval_error()
    }
    fn provenance(&self) -> Provenance {
        Provenance::Perturbed {
            base: Box::new(self.base.provenance()),
        }
    }
}

/// `Σ c_i F_i`.
#[derive(Clone)]
pub struct Combination {
    terms: Vec<(Scalar, Arc<dyn IntervalFunction>)>,
}

impl Combination {
    pub fn new(terms: Vec<(Scalar, Arc<dyn IntervalFunction>)>) -> Self {
        assert!(!terms.is_empty(), "empty combination");
        Combination { terms }
    }
}

impl IntervalFunction for Combination {
    fn dim(&self) -> usize {
        self.terms[0].1.dim()
    }
    fn value_dim(&self) -> usize {
        self.terms[0].1.value_dim()
    }
    fn eval(&self, i: &Interval) -> Result<VectorValue, FunctionError> {
        let mut acc = VectorValue::zero(self.value_dim());
        for (c, f) in &self.terms {
            if !c.is_zero() {
                acc = acc.add(&f.eval(i)?.scale(c));
            }
        }
        Ok(acc)
    }
    fn cell_bound(&self) -> Option<f64> {
        self.terms
            .iter()
            .map(|(c, f)| f.cell_bound().map(|m| m * scalar::to_f64(c).abs()))
            .sum()
    }
    fn eval_error(&self) -> f64 {
        self.terms
            .iter()
            .map(|(c, f)| f.eval_error() * scalar::to_f64(c).abs())
            .sum()
    }
    fn provenance(&self) -> Provenance {
        Provenance::Combination {
            parts: self.terms.iter().map(|(_, f)| f.provenance()).collect(),
        }
    }
}

/// Random non-degenerate sub-box of `b` with dyadic-grid corners.
pub fn random_subinterval(rng: &mut ChaCha8Rng, b: &Interval) -> Interval {
    const BITS: u32 = 12;
    let bounds: Vec<(Scalar, Scalar)> = (0..b.dim())
        .map(|j| {
            let x = rng.gen_range(0..(1i64 << BITS));
            let y = rng.gen_range(x + 1..=(1i64 << BITS));
            let e = b.edge(j);
            (
                b.lo(j) + &e * scalar::dyadic(x, BITS),
                b.lo(j) + &e * scalar::dyadic(y, BITS),
            )
        })
        .collect();
    Interval::from_bounds(&bounds).expect("x < y on every axis")
}

#[derive(Debug, Clone, Serialize)]
pub struct AdditivityReport {
    pub samples: usize,
    pub max_defect: f64,
    pub passed: bool,
    /// `(I, axis, split point)` of the first violating split.
    pub witness: Option<String>,
}

/// Splits random sub-boxes of `i0` by random hyperplanes and compares
/// `F(I)` with `F(I_left) + F(I_right)`. Exact values must agree exactly.
pub fn check_additivity(
    f: &dyn IntervalFunction,
    i0: &Interval,
    samples: usize,
    seed: u64,
    tol: f64,
    norm: NormKind,
) -> Result<AdditivityReport, FunctionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_defect: f64 = 0.0;
    let mut witness = None;
    for _ in 0..samples {
        let i = random_subinterval(&mut rng, i0);
        let axis = rng.gen_range(0..i.dim());
        let k = rng.gen_range(1..(1i64 << 10));
        let at = i.lo(axis) + i.edge(axis) * scalar::dyadic(k, 10);
        let (l, r) = i.split(axis, &at).expect("split point is interior");
        let whole = f.eval(&i)?;
        let parts = f.eval(&l)?.add(&f.eval(&r)?);
        let diff = whole.sub(&parts);
        let defect = diff.norm(norm);
        let bad = if diff.is_exact() { !diff.is_zero() } else { defect > tol };
        max_defect = max_defect.max(defect);
        if bad && witness.is_none() {
            witness = Some(format!("{i} split on axis {axis} at {}", scalar::fmt_scalar(&at)));
        }
    }
    Ok(AdditivityReport {
        samples,
        max_defect,
        passed: witness.is_none(),
        witness,
    })
}

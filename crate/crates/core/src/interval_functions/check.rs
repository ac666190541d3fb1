use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::series::{series_over_division, SeriesReport};
use super::{random_subinterval, IntervalFunction, Provenance};
use crate::divisions::{dyadic_division, Division};
use crate::error::FunctionError;
use crate::geometry::{BoxClass, Interval, NormKind, Region, VectorValue};

#[derive(Debug, Clone)]
pub struct CheckOptions {
    pub trials: usize,
    /// Allowance for `‖series − F(I)‖` on top of the tail and evaluation errors.
    pub tol: f64,
    /// Largest permutation spread accepted.
    pub spread_tol: f64,
    /// Deepest division generation sampled.
    pub depth: u32,
    pub seed: u64,
    pub norm: NormKind,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions {
            trials: 200,
            tol: 1e-9,
            spread_tol: 1e-12,
            depth: 6,
            seed: 0,
            norm: NormKind::Max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    /// `a`: convergence and order independence on `ℐ_{I0}`; `b`: agreement with `F` on `ℐ_G`.
    pub clause: char,
    pub interval: String,
    pub division: String,
    pub terms: usize,
    /// Spread for clause `a`, `‖series − F(I)‖` for clause `b`.
    pub observed: f64,
    pub allowance: f64,
    pub status: TrialStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct DunfordFunctionReport {
    pub trials: usize,
    pub rows: Vec<TrialRow>,
    pub failures: usize,
    pub inconclusive: usize,
    pub max_spread: f64,
    pub max_defect: f64,
    pub passed: bool,
    pub witness: Option<String>,
    /// "not falsified at N trials", "falsified" or "inconclusive".
    pub verdict: String,
}

struct Sampler {
    g: Arc<dyn Region>,
    full: Vec<Division>,
}

impl Sampler {
    fn sub_of_g(&self, rng: &mut ChaCha8Rng) -> Interval {
        match self.g.as_algebra_set() {
            Some(s) => {
                let c = &s.cells()[rng.gen_range(0..s.cells().len())];
                random_subinterval(rng, c)
            }
            None => {
                let d = self.full.last().expect("at least one division");
                let c = &d.cells()[rng.gen_range(0..d.len())].interval;
                random_subinterval(rng, c)
            }
        }
    }
}

fn run_clause_b(
    f: &dyn IntervalFunction,
    d: &Division,
    i: &Interval,
    opts: &CheckOptions,
) -> Result<(usize, f64, f64, TrialStatus), FunctionError> {
    match series_over_division(f, d, i, opts.tol, opts.norm) {
        Ok((v, r)) => {
            let direct = f.eval(i)?;
            let gap = v.distance(&direct, opts.norm);
            let allowance = opts.tol + r.abs_tail_bound + r.eval_error + f.eval_error();
            let status = if gap <= allowance {
                TrialStatus::Pass
            } else {
                TrialStatus::Fail
            };
            Ok((r.terms, gap, allowance, status))
        }
        Err(FunctionError::TailNotCertifiable) => Ok((0, f64::NAN, f64::NAN, TrialStatus::Inconclusive)),
        Err(e) => Err(e),
    }
}

fn run_clause_a(
    f: &dyn IntervalFunction,
    d: &Division,
    i: &Interval,
    opts: &CheckOptions,
) -> Result<(usize, f64, TrialStatus), FunctionError> {
    match series_over_division(f, d, i, f64::INFINITY, opts.norm) {
        Ok((_, r)) => {
            let ok = r.abs_tail_bound.is_finite() && r.permutation_spread <= opts.spread_tol;
            let status = if ok { TrialStatus::Pass } else { TrialStatus::Fail };
            Ok((r.terms, r.permutation_spread, status))
        }
        Err(FunctionError::TailNotCertifiable) => Ok((0, f64::NAN, TrialStatus::Inconclusive)),
        Err(e) => Err(e),
    }
}

/// Falsification test of the Dunford-function conditions for `F` on `G`.
///
/// Clause `a` sums `F` over sampled full and sparse dyadic divisions of `G°`
/// restricted to random `I ⊂ I0` and checks the series is certified with a
/// small permutation spread. Clause `b` compares the series with `F(I)` for
/// `I ⊂ G`, first on the normal-form cells of `G`, then on random boxes.
/// A pass means "not falsified at N trials".
pub fn check_dunford_function(
    f: &dyn IntervalFunction,
    g: Arc<dyn Region>,
    i0: &Interval,
    opts: &CheckOptions,
) -> Result<DunfordFunctionReport, FunctionError> {
    let depth = opts.depth.max(1);
    let full: Vec<Division> = (1..=depth)
        .map(|k| dyadic_division(g.clone(), k))
        .collect::<Result<_, _>>()
        .map_err(|e| FunctionError::Geometry(crate::GeometryError::MalformedBox(e.to_string())))?;
    let sampler = Sampler { g: g.clone(), full };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut rows = Vec::new();
    let deepest = sampler.full.last().expect("depth ≥ 1");

    if let Some(s) = g.as_algebra_set() {
        for c in s.cells() {
            let (terms, observed, allowance, status) = run_clause_b(f, deepest, c, opts)?;
            rows.push(TrialRow {
                trial: 0,
                clause: 'b',
                interval: c.to_string(),
                division: format!("full depth {depth}"),
                terms,
                observed,
                allowance,
                status,
            });
        }
    }

    for trial in 1..=opts.trials {
        let k = rng.gen_range(1..=depth);
        let sparse = rng.gen_bool(0.5);
        let d = if sparse {
            let mask: Vec<bool> = (0..deepest.len()).map(|_| rng.gen_bool(0.5)).collect();
            deepest.sparse(|n| mask[n])
        } else {
            sampler.full[(k - 1) as usize].clone()
        };
        let label = if sparse {
            format!("sparse depth {depth}")
        } else {
            format!("full depth {k}")
        };
        let i = random_subinterval(&mut rng, i0);
        let (terms, observed, status) = run_clause_a(f, &d, &i, opts)?;
        rows.push(TrialRow {
            trial,
            clause: 'a',
            interval: i.to_string(),
            division: label,
            terms,
            observed,
            allowance: opts.spread_tol,
            status,
        });

        let dg = &sampler.full[(k - 1) as usize];
        let j = sampler.sub_of_g(&mut rng);
        debug_assert_ne!(g.classify(&j), BoxClass::Outside);
        let (terms, observed, allowance, status) = run_clause_b(f, dg, &j, opts)?;
        rows.push(TrialRow {
            trial,
            clause: 'b',
            interval: j.to_string(),
            division: format!("full depth {k}"),
            terms,
            observed,
            allowance,
            status,
        });
    }

    let failures = rows.iter().filter(|r| r.status == TrialStatus::Fail).count();
    let inconclusive = rows.iter().filter(|r| r.status == TrialStatus::Inconclusive).count();
    let max_of = |c: char| {
        rows.iter()
            .filter(|r| r.clause == c && r.observed.is_finite())
            .map(|r| r.observed)
            .fold(0.0f64, f64::max)
    };
    let witness = rows.iter().find(|r| r.status == TrialStatus::Fail).map(|r| {
        format!(
            "clause {} on {} ({}): observed {:e} > allowance {:e}",
            r.clause, r.interval, r.division, r.observed, r.allowance
        )
    });
    let verdict = if failures > 0 {
        "falsified".to_string()
    } else if inconclusive > 0 {
        "inconclusive".to_string()
    } else {
        format!("not falsified at {} trials", opts.trials)
    };
    Ok(DunfordFunctionReport {
        trials: opts.trials,
        max_spread: max_of('a'),
        max_defect: max_of('b'),
        passed: failures == 0 && inconclusive == 0,
        failures,
        inconclusive,
        witness,
        verdict,
        rows,
    })
}

/// `F₀(I) = Σ_k F(I ∩ C_k)`, defined on every box.
pub struct SeriesBuilt {
    base: Arc<dyn IntervalFunction>,
    division: Division,
    tol: f64,
    norm: NormKind,
}

impl SeriesBuilt {
    pub fn division(&self) -> &Division {
        &self.division
    }

    pub fn eval_with_report(&self, i: &Interval) -> Result<(VectorValue, SeriesReport), FunctionError> {
        series_over_division(self.base.as_ref(), &self.division, i, self.tol, self.norm)
    }

    /// Bound on `‖F₀(I) − Σ_k F(I ∩ C_k)‖` summed over the whole division.
    pub fn tail_bound(&self) -> f64 {
        if self.division.tail_measure().is_zero() {
            0.0
        } else {
            self.base.cell_bound().unwrap_or(f64::INFINITY) * self.division.tail_measure().to_f64()
        }
    }
}

/// Builds `F₀` from a division of `G°`; refuses unless the check passed.
pub fn construct_f0(
    f: Arc<dyn IntervalFunction>,
    d: Division,
    report: &DunfordFunctionReport,
    tol: f64,
    norm: NormKind,
) -> Result<SeriesBuilt, FunctionError> {
    if !report.passed {
        return Err(FunctionError::PreconditionNotEstablished);
    }
    if !d.tail_measure().is_zero() && f.cell_bound().is_none() {
        return Err(FunctionError::TailNotCertifiable);
    }
    Ok(SeriesBuilt {
        base: f,
        division: d,
        tol,
        norm,
    })
}

impl IntervalFunction for SeriesBuilt {
    fn dim(&self) -> usize {
        self.base.dim()
    }
    fn value_dim(&self) -> usize {
        self.base.value_dim()
    }
    fn eval(&self, i: &Interval) -> Result<VectorValue, FunctionError> {
        Ok(self.eval_with_report(i)?.0)
    }
    fn cell_bound(&self) -> Option<f64> {
        self.base.cell_bound()
    }
    fn eval_error(&self) -> f64 {
        self.tail_bound() + self.base.eval_error() * self.division.len() as f64
    }
    fn provenance(&self) -> Provenance {
        Provenance::SeriesBuilt {
            base: Box::new(self.base.provenance()),
            depth: self.division.depth(),
            cells: self.division.len(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::int;
    use crate::geometry::IntervalAlgebraSet;
    use crate::interval_functions::{check_additivity, ClosedForm, DefectTarget, Perturbed};

    fn middle_third_square() -> Arc<dyn Region> {
        Arc::new(IntervalAlgebraSet::parse("+ [0,1]x[0,1]\n- [1/3,2/3]x[1/3,2/3]").unwrap())
    }

    fn quick() -> CheckOptions {
        CheckOptions {
            trials: 40,
            depth: 5,
            ..Default::default()
        }
    }

    #[test]
    fn volume_passes_on_square_with_hole() {
        let g = middle_third_square();
        let f = ClosedForm::volume_times(2, int(1));
        let r = check_dunford_function(&f, g, &Interval::unit_cube(2), &quick()).unwrap();
        assert!(r.passed, "{:?}", r.witness);
        assert_eq!(r.max_spread, 0.0);
    }

    #[test]
    fn perturbed_cell_is_caught() {
        let g = middle_third_square();
        let cell = g.as_algebra_set().unwrap().cells()[0].clone();
        let base: Arc<dyn IntervalFunction> = Arc::new(ClosedForm::volume_times(2, int(1)));
        let f = Perturbed::new(base, DefectTarget::Cell(cell), vec![1.0]);
        let r = check_dunford_function(&f, g, &Interval::unit_cube(2), &quick()).unwrap();
        assert!(!r.passed);
        assert!(r.witness.unwrap().starts_with("clause b"));
    }

    #[test]
    fn f0_restricts_and_extends() {
        let g = middle_third_square();
        let f: Arc<dyn IntervalFunction> = Arc::new(ClosedForm::volume_times(2, int(1)));
        let r = check_dunford_function(f.as_ref(), g.clone(), &Interval::unit_cube(2), &quick()).unwrap();
        let d = dyadic_division(g.clone(), 7).unwrap();
        let f0 = construct_f0(f.clone(), d.clone(), &r, 1.0, NormKind::Max).unwrap();
        let tail = f0.tail_bound();

        let whole = f0.eval(&Interval::unit_cube(2)).unwrap();
        assert!((whole.component(0) - 8.0 / 9.0).abs() <= tail);

        let c = d.cells()[0].interval.clone();
        let sub = random_subinterval(&mut ChaCha8Rng::seed_from_u64(1), &c);
        assert_eq!(f0.eval(&sub).unwrap(), f.eval(&sub).unwrap());

        let hole = Interval::parse("[2/5,3/5]x[2/5,3/5]").unwrap();
        assert!(f0.eval(&hole).unwrap().is_zero());

        let add = check_additivity(&f0, &Interval::unit_cube(2), 30, 2, 2.0 * tail, NormKind::Max).unwrap();
        assert!(add.passed);
    }

    #[test]
    fn f0_refuses_without_passing_check() {
        let g = middle_third_square();
        let cell = g.as_algebra_set().unwrap().cells()[0].clone();
        let base: Arc<dyn IntervalFunction> = Arc::new(ClosedForm::volume_times(2, int(1)));
        let f: Arc<dyn IntervalFunction> = Arc::new(Perturbed::new(base, DefectTarget::Cell(cell), vec![1.0]));
        let r = check_dunford_function(f.as_ref(), g.clone(), &Interval::unit_cube(2), &quick()).unwrap();
        let d = dyadic_division(g, 4).unwrap();
        assert!(matches!(
            construct_f0(f, d, &r, 1.0, NormKind::Max),
            Err(FunctionError::PreconditionNotEstablished)
        ));
    }
}

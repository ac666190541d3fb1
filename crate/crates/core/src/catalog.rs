//! Built-in integrands and domain fixtures.
//!
//! Catalog entries carry trustworthy metadata (singular points, bounds,
//! moduli, closed-form integrals), which the certified budgets depend on.

use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::geometry::{scalar, BallOracle, Interval, IntervalAlgebraSet, Point, Region, Scalar};
use crate::integrators::{FnIntegrand, Integrand};

pub const CATALOG_IDS: &[&str] = &["zero", "const", "affine", "poly", "inv_sqrt", "osc_deriv", "spike"];

pub fn catalog_listing() -> String {
    CATALOG_IDS.join(", ")
}

/// `f ≡ 0`.
pub fn zero(dim: usize) -> FnIntegrand {
    constant(dim, Scalar::zero())
}

/// `f ≡ c`.
pub fn constant(dim: usize, c: Scalar) -> FnIntegrand {
    let cf = scalar::to_f64(&c);
    let exact = c.clone();
    FnIntegrand::scalar(format!("const {}", scalar::fmt_scalar(&c)), dim, move |_| cf)
        .with_exact(move |_| Some(vec![exact.clone()]))
        .with_bound(cf.abs())
        .with_degree(0)
        .with_primitive(move |lo, hi| vec![cf * lo.iter().zip(hi).map(|(a, b)| b - a).product::<f64>()])
}

/// `f(t) = a_0 + a_1 t_1 + ... + a_m t_m`, bounded on the box `on`.
pub fn affine(coeffs: &[Scalar], on: &Interval) -> FnIntegrand {
    let dim = on.dim();
    let mut c: Vec<Scalar> = coeffs.to_vec();
    c.resize(dim + 1, Scalar::zero());
    let cf: Vec<f64> = c.iter().map(scalar::to_f64).collect();
    let mut bound = Scalar::zero();
    bound += c[0].abs();
    for j in 0..dim {
        let reach = scalar::max(&on.lo(j).abs(), &on.hi(j).abs()).clone();
        bound += c[j + 1].abs() * reach;
    }
    let name = format!(
        "affine {}",
        c.iter().map(scalar::fmt_scalar).collect::<Vec<_>>().join(" ")
    );
    let exact = c.clone();
    let cf_eval = cf.clone();
    FnIntegrand::scalar(name, dim, move |t| {
        cf_eval[0] + t.iter().zip(&cf_eval[1..]).map(|(x, a)| a * x).sum::<f64>()
    })
    .with_exact(move |t| {
        let mut v = exact[0].clone();
        for (x, a) in t.coords().iter().zip(&exact[1..]) {
            v += a * x;
        }
        Some(vec![v])
    })
    .with_bound(scalar::to_f64(&bound))
    .with_degree(1)
    .with_primitive(move |lo, hi| {
        let vol: f64 = lo.iter().zip(hi).map(|(a, b)| b - a).product();
        let mean = cf[0]
            + lo.iter()
                .zip(hi)
                .zip(&cf[1..])
                .map(|((a, b), c)| c * 0.5 * (a + b))
                .sum::<f64>();
        vec![vol * mean]
    })
}

/// `f(t) = t_1 t_2 ... t_m`, bounded on the box `on`.
pub fn product_poly(on: &Interval) -> FnIntegrand {
    let dim = on.dim();
    let bound: f64 = (0..dim)
        .map(|j| scalar::to_f64(scalar::max(&on.lo(j).abs(), &on.hi(j).abs())))
        .product();
    FnIntegrand::scalar("poly", dim, |t| t.iter().product())
        .with_exact(|t| Some(vec![t.coords().iter().fold(scalar::int(1), |a, x| a * x)]))
        .with_bound(bound)
        .with_degree(1)
        .with_primitive(|lo, hi| vec![lo.iter().zip(hi).map(|(a, b)| 0.5 * (b * b - a * a)).product()])
}

/// `f(t) = 1/√|t|`, `f(0) = 0`; absolutely integrable with a singular point at 0.
pub fn inv_sqrt() -> FnIntegrand {
    FnIntegrand::scalar(
        "inv_sqrt",
        1,
        |t| {
            if t[0] == 0.0 {
                0.0
            } else {
                1.0 / t[0].abs().sqrt()
            }
        },
    )
    .with_singular(vec![Point::from_ints(&[0])])
    .with_modulus(|r| 2.0 * r.sqrt())
    .with_abs_modulus(|r| 2.0 * r.sqrt())
    .with_primitive(|lo, hi| {
        let g = |x: f64| 2.0 * x.signum() * x.abs().sqrt();
        vec![g(hi[0]) - g(lo[0])]
    })
}

/// `F(x) = x² sin(1/x²)`, `F(0) = 0`.
pub fn osc_primitive(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x * (1.0 / (x * x)).sin()
    }
}

/// `f(x) = 2x sin(1/x²) − (2/x) cos(1/x²)`, `f(0) = 0`: the derivative of
/// `x² sin(1/x²)`, integrable in the Henstock-Kurzweil sense but not absolutely.
pub fn osc_deriv() -> FnIntegrand {
    FnIntegrand::scalar("osc_deriv", 1, |t| {
        let x = t[0];
        if x == 0.0 {
            return 0.0;
        }
        let u = 1.0 / (x * x);
        2.0 * x * u.sin() - 2.0 / x * u.cos()
    })
    .with_singular(vec![Point::from_ints(&[0])])
    // |F(b) − F(a)| ≤ a² + b² ≤ r² for a cell [a, b] of length r containing 0.
    .with_modulus(|r| r * r)
    .without_abs_modulus()
    .with_grading(3)
    .with_primitive(|lo, hi| vec![osc_primitive(hi[0]) - osc_primitive(lo[0])])
}

/// `f = 1` on a finite point set, `0` elsewhere.
pub fn spike(points: Vec<Point>) -> FnIntegrand {
    assert!(!points.is_empty(), "spike needs at least one point");
    let dim = points[0].dim();
    let floats: Vec<Vec<f64>> = points.iter().map(Point::to_f64).collect();
    let exact = points.clone();
    FnIntegrand::scalar("spike", dim, move |t| {
        if floats.iter().any(|p| p.as_slice() == t) {
            1.0
        } else {
            0.0
        }
    })
    .with_exact(move |t| {
        Some(vec![if exact.contains(t) {
            scalar::int(1)
        } else {
            Scalar::zero()
        }])
    })
    .with_singular(points)
    .with_bound(1.0)
    .with_degree(0)
    .with_primitive(|_, _| vec![0.0])
}

/// Builds a catalog entry from its id and numeric parameters.
pub fn build(id: &str, params: &[Scalar], on: &Interval) -> Result<Arc<dyn Integrand>, String> {
    let dim = on.dim();
    let need_1d = |name: &str| -> Result<(), String> {
        if dim == 1 {
            Ok(())
        } else {
            Err(format!("`{name}` is defined in one dimension only"))
        }
    };
    let f: FnIntegrand = match id {
        "zero" => zero(dim),
        "const" => constant(dim, params.first().cloned().unwrap_or_else(|| scalar::int(1))),
        "affine" => {
            if params.is_empty() {
                let mut c = vec![Scalar::zero(); dim + 1];
                c[1] = scalar::int(1);
                affine(&c, on)
            } else {
                affine(params, on)
            }
        }
        "poly" => product_poly(on),
        "inv_sqrt" => {
            need_1d(id)?;
            inv_sqrt()
        }
        "osc_deriv" => {
            need_1d(id)?;
            osc_deriv()
        }
        "spike" => {
            if params.is_empty() || !params.len().is_multiple_of(dim) {
                return Err(format!("`spike` needs a multiple of {dim} coordinates"));
            }
            let points = params.chunks(dim).map(|c| Point::new(c.to_vec())).collect();
            spike(points)
        }
        other => return Err(format!("unknown function `{other}`; catalog: {}", catalog_listing())),
    };
    Ok(Arc::new(f))
}

/// `[0,1] ∖ (1/3, 2/3)`.
pub fn middle_third() -> IntervalAlgebraSet {
    IntervalAlgebraSet::parse("+ [0,1]\n- [1/3,2/3]").expect("fixture")
}

/// `[0,2]² ∖ [0,1)²`.
pub fn l_shape() -> IntervalAlgebraSet {
    IntervalAlgebraSet::parse("+ [0,2]x[0,2]\n- [0,1]x[0,1]").expect("fixture")
}

/// The first `k` cells of `∪_{j≥1} [1/(2j+1), 1/(2j)]`.
pub fn countable_gap(k: u32) -> IntervalAlgebraSet {
    let cells = (1..=k as i64)
        .map(|j| {
            Interval::from_bounds(&[(scalar::ratio(1, 2 * j + 1), scalar::ratio(1, 2 * j))]).expect("non-degenerate")
        })
        .collect();
    IntervalAlgebraSet::from_disjoint_cells(cells).expect("fixture")
}

/// Bound on the measure of the cells of the countable-gap set beyond the first `k`:
/// `Σ_{j>k} 1/(2j(2j+1)) ≤ 1/(4k)`.
pub fn countable_gap_tail(k: u32) -> f64 {
    1.0 / (4.0 * k as f64)
}

/// `|∪_{j≥1} [1/(2j+1), 1/(2j)]| = 1 − ln 2`.
pub fn countable_gap_measure() -> f64 {
    1.0 - std::f64::consts::LN_2
}

/// Disk of radius 1/2 centred at (1/2, 1/2).
pub fn disk() -> BallOracle {
    BallOracle::new(
        Point::new(vec![scalar::ratio(1, 2), scalar::ratio(1, 2)]),
        scalar::ratio(1, 2),
    )
    .expect("fixture")
}

/// Shared handle for region fixtures.
pub fn region<R: Region + 'static>(r: R) -> Arc<dyn Region> {
    Arc::new(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_id_lists_the_catalog() {
        let err = build("fX", &[], &Interval::unit_cube(1)).err().unwrap();
        assert!(err.contains("fX") && err.contains("osc_deriv"));
    }

    #[test]
    fn countable_gap_measure_approaches_target() {
        let g = countable_gap(64);
        let m = scalar::to_f64(g.measure());
        assert!(m < countable_gap_measure());
        assert!(countable_gap_measure() - m <= countable_gap_tail(64));
    }

    #[test]
    fn osc_derivative_matches_difference_quotient() {
        let f = osc_deriv();
        let mut out = [0.0];
        for &x in &[0.3, 0.7, 0.95] {
            f.eval_f64(&[x], &mut out);
            let h = 1e-6;
            let dq = (osc_primitive(x + h) - osc_primitive(x - h)) / (2.0 * h);
            assert!((out[0] - dq).abs() < 1e-4 * (1.0 + dq.abs()));
        }
    }
}

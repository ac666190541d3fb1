use std::sync::Arc;

use gauge_integrals::catalog;
use gauge_integrals::geometry::scalar::{int, ratio};
use gauge_integrals::geometry::{Interval, Point};
use gauge_integrals::integrators::{hk_integral, mcshane_integral, FnIntegrand, Integrand, LinearCombination};

const TOL: f64 = 1e-7;
/// The oscillating derivative needs five million cells per level at 1e-6.
const OSC_TOL: f64 = 1e-6;

fn mcshane_catalog() -> Vec<(Arc<dyn Integrand>, Interval)> {
    let unit1 = Interval::unit_cube(1);
    let unit2 = Interval::unit_cube(2);
    let wide = Interval::parse("[0,2]x[-1,1]").unwrap();
    vec![
        (Arc::new(catalog::constant(2, ratio(5, 3))), unit2.clone()),
        (
            Arc::new(catalog::affine(&[int(1), int(2), int(3)], &wide)),
            wide.clone(),
        ),
        (Arc::new(catalog::product_poly(&unit2)), unit2),
        (Arc::new(catalog::affine(&[int(-1), int(4)], &unit1)), unit1.clone()),
        (Arc::new(catalog::inv_sqrt()), unit1),
    ]
}

#[test]
fn hk_and_mcshane_agree_on_mcshane_integrable_entries() {
    for (f, i) in mcshane_catalog() {
        let m = mcshane_integral(f.as_ref(), &i, TOL).unwrap();
        let h = hk_integral(f.as_ref(), &i, TOL).unwrap();
        let gap = (m.value.component(0) - h.value.component(0)).abs();
        assert!(gap <= 2.0 * TOL, "{}: {gap}", f.describe());
    }
}

#[test]
fn closed_form_primitives_are_matched() {
    let mut entries: Vec<_> = mcshane_catalog().into_iter().map(|(f, i)| (f, i, TOL)).collect();
    entries.push((Arc::new(catalog::osc_deriv()), Interval::unit_cube(1), OSC_TOL));
    for (f, i, tol) in entries {
        let Some(exact) = f.primitive(&i.lower_f64(), &i.upper_f64()) else {
            continue;
        };
        let r = hk_integral(f.as_ref(), &i, tol).unwrap();
        let err = (r.value.component(0) - exact[0]).abs();
        assert!(err <= tol + 1e-14 * exact[0].abs().max(1.0), "{}: {err}", f.describe());
    }
}

#[test]
fn integrals_are_linear() {
    let unit = Interval::unit_cube(1);
    let f: Arc<dyn Integrand> = Arc::new(catalog::inv_sqrt());
    let g: Arc<dyn Integrand> = Arc::new(catalog::affine(&[int(1), int(-3)], &unit));
    for (a, b) in [(int(1), int(1)), (ratio(3, 2), int(-2)), (int(0), ratio(1, 7))] {
        let combo = LinearCombination::new(vec![(a.clone(), f.clone()), (b.clone(), g.clone())]);
        let lhs = mcshane_integral(&combo, &unit, TOL).unwrap().value.component(0);
        let fa = mcshane_integral(f.as_ref(), &unit, TOL).unwrap().value.component(0);
        let gb = mcshane_integral(g.as_ref(), &unit, TOL).unwrap().value.component(0);
        let rhs =
            gauge_integrals::geometry::scalar::to_f64(&a) * fa + gauge_integrals::geometry::scalar::to_f64(&b) * gb;
        assert!((lhs - rhs).abs() <= 3.0 * TOL, "{lhs} vs {rhs}");
    }
}

#[test]
fn error_estimates_do_not_grow_at_the_end() {
    let unit = Interval::unit_cube(1);
    for f in [catalog::inv_sqrt(), catalog::osc_deriv()] {
        let r = hk_integral(&f, &unit, OSC_TOL).unwrap();
        let h = &r.history;
        let tail = &h[h.len().saturating_sub(3)..];
        for w in tail.windows(2) {
            assert!(
                w[1].error_estimate <= w[0].error_estimate,
                "{}: {:?}",
                f.describe(),
                tail
            );
        }
    }
}

#[test]
fn changing_values_on_declared_points_changes_nothing() {
    let unit = Interval::unit_cube(1);
    let points = vec![Point::new(vec![ratio(1, 2)]), Point::new(vec![ratio(1, 3)])];
    let plain = FnIntegrand::scalar("t", 1, |t| t[0])
        .with_singular(points.clone())
        .with_bound(1.0);
    let spiked = FnIntegrand::scalar(
        "t spiked",
        1,
        |t| if t[0] == 0.5 || t[0] == 1.0 / 3.0 { 1e6 } else { t[0] },
    )
    .with_singular(points)
    .with_bound(1.0);
    for integrate in [mcshane_integral, hk_integral] {
        let a = integrate(&plain, &unit, TOL).unwrap();
        let b = integrate(&spiked, &unit, TOL).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.error_estimate, b.error_estimate);
    }
}

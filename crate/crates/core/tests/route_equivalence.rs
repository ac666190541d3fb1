use std::sync::Arc;

use gauge_integrals::catalog;
use gauge_integrals::divisions::dyadic_division;
use gauge_integrals::dunford_api::{
    dhk_integral_extension, dhk_integral_piecewise, dm_integral_extension, dm_integral_piecewise, linearity_check,
    ApiOptions, DomainSpec,
};
use gauge_integrals::geometry::scalar::{int, ratio};
use gauge_integrals::geometry::{Interval, IntervalAlgebraSet, NormKind};
use gauge_integrals::integrators::{Bundle, Integrand, Mode};
use gauge_integrals::interval_functions::CheckOptions;

fn quick(tol: f64) -> ApiOptions {
    ApiOptions {
        falsifier_trials: 30,
        check: CheckOptions {
            trials: 30,
            ..CheckOptions::default()
        },
        ..ApiOptions::with_tol(tol)
    }
}

/// Boundaries sit on the dyadic grid of `I0`: elsewhere the extension route
/// resolves `∂G` with about `perimeter · M / tol` straddle cells per level.
fn cases() -> Vec<(&'static str, DomainSpec, Arc<dyn Integrand>, f64)> {
    let unit2 = Interval::unit_cube(2);
    let cube = Interval::unit_cube(3);
    let i0 = Interval::unit_cube(1);
    vec![
        (
            "poly on square minus a dyadic box",
            DomainSpec::new(
                catalog::region(IntervalAlgebraSet::parse("+ [0,1]x[0,1]\n- [1/4,1/2]x[1/4,3/4]").unwrap()),
                unit2.clone(),
            )
            .unwrap(),
            Arc::new(catalog::product_poly(&unit2)),
            1e-8,
        ),
        (
            "affine on cube minus corner",
            DomainSpec::new(
                catalog::region(IntervalAlgebraSet::parse("+ [0,1]x[0,1]x[0,1]\n- [0,1/4]x[0,1/2]x[0,3/4]").unwrap()),
                cube.clone(),
            )
            .unwrap(),
            Arc::new(catalog::affine(&[int(1), int(1), int(-2), ratio(1, 2)], &cube)),
            1e-8,
        ),
        (
            "bundle on countable gap",
            DomainSpec::new(catalog::region(catalog::countable_gap(10)), i0.clone())
                .unwrap()
                .with_truncation_tail(catalog::countable_gap_tail(10)),
            Arc::new(Bundle::new(vec![
                Arc::new(catalog::constant(1, int(1))),
                Arc::new(catalog::affine(&[int(0), int(1)], &i0)),
            ])),
            1e-8,
        ),
    ]
}

#[test]
fn extension_and_piecewise_agree_for_bounded_entries() {
    for (name, spec, f, tol) in cases() {
        let opts = quick(tol);
        let ext = dm_integral_extension(f.clone(), &spec, &opts).unwrap();
        let hk = dhk_integral_extension(f.clone(), &spec, &opts).unwrap();
        for depth in 4..=8 {
            let d = dyadic_division(spec.region.clone(), depth).unwrap();
            let dm = dm_integral_piecewise(f.clone(), &spec, &d, &opts).unwrap();
            let delta = ext.value.distance(&dm.value, NormKind::Max);
            assert!(
                delta <= ext.error_budget + dm.error_budget,
                "{name} depth {depth}: {delta:e}"
            );
            assert!(!dm.flagged, "{name}: {}", dm.verdict);
            let dhk = dhk_integral_piecewise(f.clone(), &spec, &d, &opts).unwrap();
            let delta = hk.value.distance(&dhk.value, NormKind::Max);
            assert!(
                delta <= hk.error_budget + dhk.error_budget,
                "{name} depth {depth}: {delta:e}"
            );
        }
    }
}

#[test]
fn singular_entries_agree_when_the_division_is_exact() {
    // [0,1/2] ∪ [3/4,1] is dyadic, so unbounded integrands need no tail bound.
    let g = catalog::region(IntervalAlgebraSet::parse("+ [0,1]\n- [1/2,3/4]").unwrap());
    let spec = DomainSpec::new(g, Interval::unit_cube(1)).unwrap();
    let opts = quick(1e-6);
    let f: Arc<dyn Integrand> = Arc::new(catalog::inv_sqrt());
    let closed = 2.0 * (0.5f64.sqrt() + 1.0 - 0.75f64.sqrt());
    for depth in [2, 5, 8] {
        let d = dyadic_division(spec.region.clone(), depth).unwrap();
        for (ext, pw) in [
            (
                dm_integral_extension(f.clone(), &spec, &opts),
                dm_integral_piecewise(f.clone(), &spec, &d, &opts),
            ),
            (
                dhk_integral_extension(f.clone(), &spec, &opts),
                dhk_integral_piecewise(f.clone(), &spec, &d, &opts),
            ),
        ] {
            let (ext, pw) = (ext.unwrap(), pw.unwrap());
            assert!(ext.value.distance(&pw.value, NormKind::Max) <= ext.error_budget + pw.error_budget);
            assert!((pw.value.component(0) - closed).abs() <= pw.error_budget + 1e-12);
        }
    }
}

#[test]
fn linearity_holds_on_catalog_pairs() {
    for (_, spec, f, tol) in cases().into_iter().take(2) {
        let dim = spec.i0.dim();
        let h: Arc<dyn Integrand> = Arc::new(catalog::constant(dim, ratio(-3, 2)));
        for mode in [Mode::McShane, Mode::HenstockKurzweil] {
            let r = linearity_check(f.clone(), h.clone(), &spec, ratio(2, 3), int(5), mode, &quick(tol)).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}

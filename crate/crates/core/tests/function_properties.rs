use std::sync::Arc;

use gauge_integrals::catalog;
use gauge_integrals::divisions::dyadic_division;
use gauge_integrals::geometry::scalar::{self, dyadic, int, ratio};
use gauge_integrals::geometry::{Interval, NormKind};
use gauge_integrals::integrators::Integrand;
use gauge_integrals::interval_functions::{
    check_dunford_function, construct_f0, negligible_variation_falsifier, random_subinterval, series_over_division,
    CheckOptions, ClosedForm, FalsifierOptions, IntervalFunction,
};
use gauge_integrals::partitions::{Gauge, PartitionMode, ZSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn affine_primitive(on: &Interval) -> Arc<dyn IntervalFunction> {
    let f: Arc<dyn Integrand> = Arc::new(catalog::affine(&[int(1), int(2), int(-1)], on));
    Arc::new(ClosedForm::primitive_of(f).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn series_are_order_independent(depth in 2u32..8, seed in any::<u64>()) {
        let host = catalog::region(catalog::l_shape());
        let d = dyadic_division(host.clone(), depth).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = random_subinterval(&mut rng, host.bounding_box());

        let exact = ClosedForm::volume_times(2, ratio(3, 7));
        let (v, r) = series_over_division(&exact, &d, &i, 1e-9, NormKind::Max).unwrap();
        prop_assert!(v.is_exact());
        prop_assert_eq!(r.permutation_spread, 0.0);

        let float = affine_primitive(host.bounding_box());
        let (_, r) = series_over_division(float.as_ref(), &d, &i, 1e-9, NormKind::Max).unwrap();
        prop_assert!(r.permutation_spread <= 1e-12 * r.prefix_sums.len().max(1) as f64);
    }
}

#[test]
fn series_built_primitive_restricts_and_stays_additive() {
    let s = catalog::middle_third();
    let g = catalog::region(s.clone());
    let i0 = Interval::unit_cube(1);
    let big_f = affine_primitive_1d(&i0);
    let opts = CheckOptions {
        trials: 40,
        ..CheckOptions::default()
    };
    let report = check_dunford_function(big_f.as_ref(), g.clone(), &i0, &opts).unwrap();
    assert!(report.passed, "{:?}", report.witness);
    let f0 = construct_f0(
        big_f.clone(),
        dyadic_division(g, 8).unwrap(),
        &report,
        1e-9,
        NormKind::Max,
    )
    .unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for k in 0..100 {
        let cell = &s.cells()[k % 2];
        let i = random_subinterval(&mut rng, cell);
        let (v, r) = f0.eval_with_report(&i).unwrap();
        let direct = big_f.eval(&i).unwrap();
        assert!(v.distance(&direct, NormKind::Max) <= r.abs_tail_bound + 1e-12, "{i}");

        let at = i.lo(0) + i.edge(0) * ratio(1 + (k as i64 % 7), 8);
        let (l, rr) = i.split(0, &at).unwrap();
        let sum = f0.eval(&l).unwrap().add(&f0.eval(&rr).unwrap());
        let whole = f0.eval(&i).unwrap();
        assert!(
            sum.distance(&whole, NormKind::Max) <= 2.0 * f0.tail_bound() + 1e-12,
            "{i} at {at}"
        );
    }
}

fn affine_primitive_1d(on: &Interval) -> Arc<dyn IntervalFunction> {
    let f: Arc<dyn Integrand> = Arc::new(catalog::affine(&[int(1), int(2)], on));
    Arc::new(ClosedForm::primitive_of(f).unwrap())
}

#[test]
fn falsifier_observations_scale_with_the_radius() {
    let s = catalog::l_shape();
    let host = catalog::region(s.clone());
    let bb = host.bounding_box().clone();
    let big_f = affine_primitive(&bb);
    let m = big_f.cell_bound().unwrap();
    let d = dyadic_division(host.clone(), 6).unwrap();
    let c = 4.0 * m * host.boundary_measure();
    let z = ZSet::Boundary(s);
    let mut seen = Vec::new();
    for k in 3..=7u32 {
        let r = dyadic(1, k);
        let opts = FalsifierOptions {
            epsilon: f64::INFINITY,
            gauge: Gauge::constant(r.clone()),
            trials: 40,
            seed: k as u64,
            mode: PartitionMode::M,
            boxes_per_trial: 8,
            window: bb.dilate(&r),
            norm: NormKind::Max,
        };
        let rep = negligible_variation_falsifier(big_f.as_ref(), &z, &d, &opts).unwrap();
        let r = scalar::to_f64(&r);
        assert!(rep.max_observed <= c * r, "r={r}: {} > {}", rep.max_observed, c * r);
        seen.push(rep.max_observed);
    }
    assert!(seen.last().unwrap() < seen.first().unwrap());
}

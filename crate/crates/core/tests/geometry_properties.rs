use gauge_integrals::geometry::scalar::{dyadic, ratio};
use gauge_integrals::geometry::{Interval, IntervalAlgebraSet, Point, Scalar, Sign};
use proptest::prelude::*;

fn grid(k: i64) -> Scalar {
    ratio(k, 8)
}

fn boxes(dim: usize) -> impl Strategy<Value = Interval> {
    prop::collection::vec((0i64..16, 1i64..8), dim).prop_map(|v| {
        let b: Vec<(Scalar, Scalar)> = v.into_iter().map(|(a, w)| (grid(a), grid(a + w))).collect();
        Interval::from_bounds(&b).unwrap()
    })
}

fn signed_sets(dim: usize) -> impl Strategy<Value = Vec<(Interval, Sign)>> {
    (boxes(dim), prop::collection::vec((boxes(dim), any::<bool>()), 0..5)).prop_map(|(first, rest)| {
        let mut v = vec![(first, Sign::Plus)];
        v.extend(
            rest.into_iter()
                .map(|(b, plus)| (b, if plus { Sign::Plus } else { Sign::Minus })),
        );
        v
    })
}

/// Interior membership by brute force: a tiny cube around `t` is covered.
fn interior_oracle(s: &IntervalAlgebraSet, t: &Point) -> bool {
    let eps = dyadic(1, 20);
    let b: Vec<(Scalar, Scalar)> = t.coords().iter().map(|x| (x - &eps, x + &eps)).collect();
    let cube = Interval::from_bounds(&b).unwrap();
    s.overlap_measure(&cube) == cube.volume()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn volume_is_additive_under_splits(b in boxes(3), axis in 0usize..3, k in 1i64..8) {
        let at = b.lo(axis) + b.edge(axis) * ratio(k, 8);
        let (l, r) = b.split(axis, &at).unwrap();
        prop_assert_eq!(l.volume() + r.volume(), b.volume());
        prop_assert!(!l.overlaps(&r));
    }

    #[test]
    fn overlap_is_symmetric_and_reflexive(a in boxes(2), b in boxes(2)) {
        prop_assert_eq!(a.overlaps(&b), b.overlaps(&a));
        prop_assert!(a.overlaps(&a));
        prop_assert_eq!(a.overlap_volume(&b), b.overlap_volume(&a));
        prop_assert_eq!(a.overlaps(&b), a.overlap_volume(&b) > Scalar::from_integer(0.into()));
    }

    #[test]
    fn face_neighbours_never_overlap(a in boxes(3), axis in 0usize..3, w in 1i64..8) {
        let mut bounds: Vec<(Scalar, Scalar)> = (0..3).map(|j| (a.lo(j).clone(), a.hi(j).clone())).collect();
        bounds[axis] = (a.hi(axis).clone(), a.hi(axis) + grid(w));
        let b = Interval::from_bounds(&bounds).unwrap();
        prop_assert!(!a.overlaps(&b));
        prop_assert!(!b.overlaps(&a));
    }

    #[test]
    fn normalize_is_idempotent(signed in signed_sets(2), probes in prop::collection::vec((0i64..32, 0i64..32), 50)) {
        let Ok(s) = IntervalAlgebraSet::normalize(&signed) else { return Ok(()); };
        let again: Vec<(Interval, Sign)> = s.cells().iter().map(|c| (c.clone(), Sign::Plus)).collect();
        let t = IntervalAlgebraSet::normalize(&again).unwrap();
        prop_assert_eq!(s.measure(), t.measure());
        prop_assert_eq!(s.cells(), t.cells());
        for (x, y) in probes {
            let p = Point::new(vec![ratio(x, 16), ratio(y, 16)]);
            prop_assert_eq!(s.contains_point(&p), t.contains_point(&p));
            prop_assert_eq!(s.interior_contains(&p), t.interior_contains(&p));
        }
    }

    #[test]
    fn normal_form_cells_are_disjoint_and_sum_to_measure(signed in signed_sets(3)) {
        let Ok(s) = IntervalAlgebraSet::normalize(&signed) else { return Ok(()); };
        let cells = s.cells();
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                prop_assert!(!cells[i].overlaps(&cells[j]));
            }
        }
        let total: Scalar = cells.iter().map(Interval::volume).sum();
        prop_assert_eq!(&total, s.measure());
    }
}

#[test]
fn interior_membership_matches_shrinking_cube_oracle() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let fixtures = [
        gauge_integrals::catalog::middle_third(),
        gauge_integrals::catalog::l_shape(),
        gauge_integrals::catalog::countable_gap(6),
        IntervalAlgebraSet::parse("+ [0,1]x[0,1]\n- [1/4,3/4]x[1/4,3/4]\n+ [1/2,1]x[1/2,3/2]").unwrap(),
        IntervalAlgebraSet::parse("+ [0,1]x[0,1]x[0,1]\n- [0,1/2]x[0,1/2]x[0,1/2]").unwrap(),
    ];
    for s in &fixtures {
        let bb = s.bounding_box().dilate(&ratio(1, 8));
        for _ in 0..1000 {
            let p = Point::new(
                (0..s.dim())
                    .map(|j| {
                        let k = rng.gen_range(0..=64i64);
                        bb.lo(j) + bb.edge(j) * ratio(k, 64)
                    })
                    .collect(),
            );
            assert_eq!(s.interior_contains(&p), interior_oracle(s, &p), "{p:?} in {s:?}");
        }
    }
}

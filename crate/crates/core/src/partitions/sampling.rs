//! Seeded sampling of δ-fine Z-tagged partitions in a box.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gauge::Gauge;
use super::tagged::{PartitionMode, TaggedInterval, TaggedPartition, ZSet};
use crate::geometry::{scalar, Interval, Point, Scalar};

/// Grid resolution for random rational coordinates.
const GRID_BITS: u32 = 16;

#[derive(Debug, Clone)]
pub struct SampledPartition {
    pub partition: TaggedPartition,
    /// False when fewer than the requested number of boxes could be placed.
    pub complete: bool,
}

fn unit_fraction(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> Scalar {
    Scalar::new(BigInt::from(rng.gen_range(lo..=hi)), BigInt::from(1u32 << 10))
}

fn lerp(rng: &mut ChaCha8Rng, a: &Scalar, b: &Scalar) -> Scalar {
    let k = rng.gen_range(0..=(1u32 << GRID_BITS));
    a + (b - a) * scalar::dyadic(k as i64, GRID_BITS)
}

fn random_point_in(rng: &mut ChaCha8Rng, w: &Interval) -> Point {
    Point::new((0..w.dim()).map(|j| lerp(rng, w.lo(j), w.hi(j))).collect())
}

/// A random point of `Z ∩ W`, when one is found.
pub fn sample_tag(rng: &mut ChaCha8Rng, z: &ZSet, w: &Interval) -> Option<Point> {
    for _ in 0..64 {
        let candidate = match z {
            ZSet::Points(ps) => {
                let inside: Vec<&Point> = ps.iter().filter(|p| w.contains_point(p)).collect();
                if inside.is_empty() {
                    return None;
                }
                inside[rng.gen_range(0..inside.len())].clone()
            }
            ZSet::Boundary(s) => {
                let faces = s.boundary_faces();
                let f = &faces[rng.gen_range(0..faces.len())];
                Point::new(
                    (0..f.lower.len())
                        .map(|j| lerp(rng, &f.lower[j], &f.upper[j]))
                        .collect(),
                )
            }
            ZSet::Complement { within, of } => {
                let faces = of.as_algebra_set().map(|s| s.boundary_faces());
                match faces {
                    Some(faces) if rng.gen_bool(0.5) => {
                        let f = &faces[rng.gen_range(0..faces.len())];
                        Point::new(
                            (0..f.lower.len())
                                .map(|j| lerp(rng, &f.lower[j], &f.upper[j]))
                                .collect(),
                        )
                    }
                    _ => random_point_in(rng, within),
                }
            }
        };
        if w.contains_point(&candidate) && z.contains(&candidate) {
            return Some(candidate);
        }
    }
    None
}

/// A box inside the open ball `B(t, r)` and inside `w`; it contains `t` in HK mode.
fn random_box(rng: &mut ChaCha8Rng, t: &Point, r: &Scalar, w: &Interval, mode: PartitionMode) -> Option<Interval> {
    let shrink = scalar::dyadic(1, rng.gen_range(0..4));
    let mut bounds = Vec::with_capacity(t.dim());
    for j in 0..t.dim() {
        let u = unit_fraction(rng, 1, 1023);
        let v = match mode {
            PartitionMode::HK => &u + unit_fraction(rng, 0, 1022) * (scalar::int(1) - scalar::ratio(1, 1024)),
            PartitionMode::M => (&u + scalar::int(1)) * unit_fraction(rng, 1, 1023),
        };
        let lo = t.coord(j) - r * &shrink * &u;
        let hi = &lo + r * &shrink * &v;
        let lo = scalar::max(&lo, w.lo(j)).clone();
        let hi = scalar::min(&hi, w.hi(j)).clone();
        if lo >= hi {
            return None;
        }
        bounds.push((lo, hi));
    }
    let b = Interval::from_bounds(&bounds).ok()?;
    if !b.in_ball(t, r) || (mode == PartitionMode::HK && !b.contains_point(t)) {
        return None;
    }
    Some(b)
}

/// `count` pairwise non-overlapping boxes in `w`, each tagged at a point of
/// `Z` and inside the `δ`-ball of its tag. Deterministic for a fixed seed.
pub fn sample_z_tagged_partition(
    z: &ZSet,
    delta: &Gauge,
    w: &Interval,
    seed: u64,
    count: usize,
    mode: PartitionMode,
) -> SampledPartition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut items: Vec<TaggedInterval> = Vec::with_capacity(count);
    let mut attempts = 0usize;
    let max_attempts = 64 * count + 64;
    while items.len() < count && attempts < max_attempts {
        attempts += 1;
        let Some(t) = sample_tag(&mut rng, z, w) else {
            break;
        };
        let r = delta.radius(&t);
        let Some(b) = random_box(&mut rng, &t, &r, w, mode) else {
            continue;
        };
        if items.iter().any(|it| it.interval.overlaps(&b)) {
            continue;
        }
        items.push(TaggedInterval { tag: t, interval: b });
    }
    let complete = items.len() == count;
    SampledPartition {
        partition: TaggedPartition::new_unchecked(items, mode),
        complete,
    }
}

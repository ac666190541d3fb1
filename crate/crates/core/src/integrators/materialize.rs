//! Exact tagged partition behind one refinement level of the integrator.

use num_traits::ToPrimitive;

use super::engine::{IntegrateOptions, Mode, Setup};
use super::integrand::Integrand;
use super::walker::{Accepted, Cell};
use crate::error::IntegrationError;
use crate::geometry::{scalar, Interval, Point, Scalar};
use crate::partitions::{Gauge, PartitionMode, TaggedInterval, TaggedPartition};

/// Partition and gauge of level `n`.
#[derive(Debug, Clone)]
pub struct LevelPartition {
    pub partition: TaggedPartition,
    /// `min(h_n, c_n · dist(t, S)^p)` off the singular set, `ρ` on it.
    /// Cells cut by the support boundary obey a further radius not
    /// expressed here, so fineness is only checkable without a support.
    pub gauge: Gauge,
}

fn exact_cell(i: &Interval, lo0: &[f64], hi0: &[f64], cell: &Cell) -> Interval {
    let m = i.dim();
    let scale = (cell.level as f64).exp2();
    let bounds: Vec<(Scalar, Scalar)> = (0..m)
        .map(|j| {
            let width = hi0[j] - lo0[j];
            let a = ((cell.lo[j] - lo0[j]) / width * scale).round();
            let b = ((cell.hi[j] - lo0[j]) / width * scale).round();
            let e = i.edge(j);
            let at = |k: f64| i.lo(j) + &e * scalar::dyadic(k.to_i64().expect("grid index"), cell.level);
            (at(a), at(b))
        })
        .collect();
    Interval::from_bounds(&bounds).expect("accepted cells are non-degenerate")
}

fn exact(x: f64) -> Scalar {
    scalar::from_f64(x).expect("finite")
}

/// The Gauss slices of every accepted cell, tagged at their nodes, with
/// singular cells tagged at their singular point. Riemann sums over this
/// partition reproduce the level sum up to `f64` evaluation rounding.
pub fn level_partition(
    f: &dyn Integrand,
    i: &Interval,
    mode: Mode,
    level: u32,
    opts: &IntegrateOptions,
) -> Result<LevelPartition, IntegrationError> {
    let setup = Setup::new(f, i, mode, opts)?;
    let m = setup.m;
    let walk = setup.walk(f, level, setup.rho_jump, opts, false);
    let (lo0, hi0) = (&setup.lo[..m], &setup.hi[..m]);
    let cum: Vec<Scalar> = setup.rule.cumulative().into_iter().map(exact).collect();
    let nodes: Vec<Scalar> = setup.rule.nodes.iter().copied().map(exact).collect();
    let k = setup.rule.len();
    let mut items = Vec::new();
    walk.run(|a| match a {
        Accepted::Regular(c) => {
            let cell = exact_cell(i, lo0, hi0, c);
            let mut idx = vec![0usize; m];
            loop {
                let mut bounds = Vec::with_capacity(m);
                let mut tag = Vec::with_capacity(m);
                for j in 0..m {
                    let e = cell.edge(j);
                    bounds.push((cell.lo(j) + &e * &cum[idx[j]], cell.lo(j) + &e * &cum[idx[j] + 1]));
                    tag.push(cell.lo(j) + &e * &nodes[idx[j]]);
                }
                items.push(TaggedInterval {
                    tag: Point::new(tag),
                    interval: Interval::from_bounds(&bounds).expect("positive weights"),
                });
                let mut j = m;
                loop {
                    if j == 0 {
                        return;
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < k {
                        break;
                    }
                    idx[j] = 0;
                }
            }
        }
        Accepted::Singular(c, s) => items.push(TaggedInterval {
            tag: setup.singular[s].exact.clone(),
            interval: exact_cell(i, lo0, hi0, c),
        }),
        Accepted::Straddle(c) | Accepted::Outside(c) => {
            let cell = exact_cell(i, lo0, hi0, c);
            items.push(TaggedInterval {
                tag: cell.center(),
                interval: cell,
            })
        }
    })
    .map_err(|e| super::engine::walk_error(e, level, opts))?;
    items.sort_by(|a, b| a.interval.cmp(&b.interval));

    let w = setup.walk(f, level, setup.rho_jump, opts, false);
    let gauge = if setup.singular.is_empty() {
        Gauge::Constant(exact(w.h))
    } else {
        Gauge::DistanceScaled {
            scale: exact(w.c),
            exponent: w.p.max(0) as u32,
            r_max: exact(w.h),
            singular: setup.singular.iter().map(|s| s.exact.clone()).collect(),
            singular_radius: exact(setup.rho_sing),
        }
    };
    Ok(LevelPartition {
        partition: TaggedPartition::new(items, PartitionMode::HK)
            .map_err(|e| IntegrationError::Geometry(crate::GeometryError::MalformedBox(e.to_string())))?,
        gauge,
    })
}

//! Depth-first bisection of a box under a distance-scaled gauge.
//!
//! Cells carry `f64` corners. Bisection of a cell with representable corners
//! is exact until the cell is a few ulps wide, which the walker reports as a
//! resolution failure instead of producing overlapping cells.

use crate::geometry::{scalar, BoxClass, Point, Region};

pub const MAX_DIM: usize = 8;

/// Relative slack applied to every acceptance test.
const MARGIN: f64 = 1e-9;

#[derive(Debug, Clone)]
pub(crate) struct SingularPoint {
    pub exact: Point,
    /// `f64` brackets of the exact coordinates.
    below: [f64; MAX_DIM],
    above: [f64; MAX_DIM],
}

impl SingularPoint {
    pub fn new(p: &Point) -> Self {
        let mut below = [0.0; MAX_DIM];
        let mut above = [0.0; MAX_DIM];
        for (j, c) in p.coords().iter().enumerate() {
            let x = scalar::to_f64(c);
            let exact_x = scalar::from_f64(x);
            if exact_x.as_ref() == Some(c) {
                below[j] = x;
                above[j] = x;
            } else {
                below[j] = x.next_down();
                above[j] = x.next_up();
            }
        }
        SingularPoint {
            exact: p.clone(),
            below,
            above,
        }
    }

    fn contained_in(&self, m: usize, lo: &[f64], hi: &[f64]) -> bool {
        for j in 0..m {
            if hi[j] < self.below[j] || lo[j] > self.above[j] {
                return false;
            }
            if lo[j] < self.below[j] && self.above[j] < hi[j] {
                continue;
            }
            let c = self.exact.coord(j);
            let (Some(a), Some(b)) = (scalar::from_f64(lo[j]), scalar::from_f64(hi[j])) else {
                return false;
            };
            if !(&a <= c && c <= &b) {
                return false;
            }
        }
        true
    }

    /// Lower bound on the max-norm distance from the point to the cell.
    fn distance_below(&self, m: usize, lo: &[f64], hi: &[f64]) -> f64 {
        let mut d = 0.0f64;
        for j in 0..m {
            let gap = (lo[j] - self.above[j]).max(self.below[j] - hi[j]).max(0.0);
            d = d.max(gap);
        }
        d * (1.0 - MARGIN)
    }

    /// Upper bound on the max-norm circumradius of the cell from the point.
    fn reach_above(&self, m: usize, lo: &[f64], hi: &[f64]) -> f64 {
        let mut r = 0.0f64;
        for j in 0..m {
            r = r.max((hi[j] - self.below[j]).abs()).max((self.above[j] - lo[j]).abs());
        }
        r * (1.0 + MARGIN)
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Cell {
    pub lo: [f64; MAX_DIM],
    pub hi: [f64; MAX_DIM],
    pub level: u32,
    /// Bit `i` set when singular point `i` lies in the closed cell.
    sing: u64,
    pub class: BoxClass,
}

impl Cell {
    pub fn edge(&self, m: usize) -> f64 {
        (0..m).map(|j| self.hi[j] - self.lo[j]).fold(0.0, f64::max)
    }

    pub fn volume(&self, m: usize) -> f64 {
        (0..m).map(|j| self.hi[j] - self.lo[j]).product()
    }
}

pub(crate) enum Accepted<'c> {
    /// A cell inside the support, away from singular points.
    Regular(&'c Cell),
    /// A cell containing exactly one singular point, tagged there.
    Singular(&'c Cell, usize),
    /// A cell cut by the support boundary, tagged at its centre.
    Straddle(&'c Cell),
    /// A cell outside the support, reported only when materializing.
    Outside(&'c Cell),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum WalkError {
    Depth,
    Budget,
    Resolution,
    TooManySingularPoints,
}

/// Gauge `δ(t) = min(h, c · dist(t, S)^p)` off `S`, `δ(s) = rho_sing` on `S`.
#[derive(Debug, Clone)]
pub(crate) struct Walk<'a> {
    pub m: usize,
    pub lo: [f64; MAX_DIM],
    pub hi: [f64; MAX_DIM],
    pub singular: &'a [SingularPoint],
    pub support: Option<&'a dyn Region>,
    pub h: f64,
    pub c: f64,
    pub p: i32,
    pub rho_sing: f64,
    pub rho_jump: f64,
    /// Cells within this distance of a singular point are dropped.
    pub exclusion: f64,
    pub depth_cap: u32,
    pub budget: u64,
    pub skip_outside: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct WalkStats {
    pub accepted: u64,
    pub max_level: u32,
}

impl<'a> Walk<'a> {
    /// `min(h, c · d^p)` for a cell at distance at least `d` from `S`.
    fn regular_bound(&self, cell: &Cell) -> f64 {
        let m = self.m;
        let mut bound = self.h;
        for s in self.singular {
            let d = s.distance_below(m, &cell.lo, &cell.hi);
            bound = bound.min(self.c * d.powi(self.p));
        }
        bound
    }

    fn excluded(&self, cell: &Cell) -> bool {
        self.exclusion > 0.0
            && self
                .singular
                .iter()
                .any(|s| s.reach_above(self.m, &cell.lo, &cell.hi) <= self.exclusion)
    }

    pub fn run(&self, mut visit: impl FnMut(Accepted<'_>)) -> Result<WalkStats, WalkError> {
        let m = self.m;
        if self.singular.len() > 64 {
            return Err(WalkError::TooManySingularPoints);
        }
        let mut sing = 0u64;
        for (i, s) in self.singular.iter().enumerate() {
            if s.contained_in(m, &self.lo, &self.hi) {
                sing |= 1 << i;
            }
        }
        let class = match self.support {
            Some(g) => g.classify_f64(&self.lo[..m], &self.hi[..m]),
            None => BoxClass::Inside,
        };
        let mut stack = vec![Cell {
            lo: self.lo,
            hi: self.hi,
            level: 0,
            sing,
            class,
        }];
        let mut stats = WalkStats::default();
        while let Some(cell) = stack.pop() {
            if cell.class == BoxClass::Outside && self.skip_outside {
                continue;
            }
            if self.excluded(&cell) {
                continue;
            }
            let edge = cell.edge(m) * (1.0 + MARGIN);
            let accepted = if cell.sing != 0 {
                if cell.sing.count_ones() == 1 && edge < self.rho_sing && edge < self.h {
                    visit(Accepted::Singular(&cell, cell.sing.trailing_zeros() as usize));
                    true
                } else {
                    false
                }
            } else {
                let bound = self.regular_bound(&cell);
                match cell.class {
                    BoxClass::Boundary => {
                        if edge < bound.min(self.rho_jump) {
                            visit(Accepted::Straddle(&cell));
                            true
                        } else {
                            false
                        }
                    }
                    BoxClass::Inside | BoxClass::Outside => {
                        if edge < bound {
                            if cell.class == BoxClass::Inside {
                                visit(Accepted::Regular(&cell));
                            } else {
                                visit(Accepted::Outside(&cell));
                            }
                            true
                        } else {
                            false
                        }
                    }
                }
            };
            if accepted {
                stats.accepted += 1;
                stats.max_level = stats.max_level.max(cell.level);
                if stats.accepted > self.budget {
                    return Err(WalkError::Budget);
                }
                continue;
            }
            if cell.level >= self.depth_cap {
                return Err(WalkError::Depth);
            }
            let mut mid = [0.0; MAX_DIM];
            #[allow(clippy::needless_range_loop)]
            for j in 0..m {
                mid[j] = 0.5 * (cell.lo[j] + cell.hi[j]);
                if !(cell.lo[j] < mid[j] && mid[j] < cell.hi[j]) {
                    return Err(WalkError::Resolution);
                }
            }
            // Children in reverse lexicographic order so the stack pops them
            // in lexicographic order (axis 0 most significant).
            for mask in (0..(1usize << m)).rev() {
                let mut lo = cell.lo;
                let mut hi = cell.hi;
                for j in 0..m {
                    if mask & (1 << (m - 1 - j)) != 0 {
                        lo[j] = mid[j];
                    } else {
                        hi[j] = mid[j];
                    }
                }
                let mut sing = 0u64;
                let mut bits = cell.sing;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if self.singular[i].contained_in(m, &lo, &hi) {
                        sing |= 1 << i;
                    }
                }
                let class = match (cell.class, self.support) {
                    (BoxClass::Boundary, Some(g)) => g.classify_f64(&lo[..m], &hi[..m]),
                    (c, _) => c,
                };
                stack.push(Cell {
                    lo,
                    hi,
                    level: cell.level + 1,
                    sing,
                    class,
                });
            }
        }
        Ok(stats)
    }
}

/// Whether the cell lies in the open ball `B(s, r)` (conservatively).
pub(crate) fn within_ball(s: &SingularPoint, m: usize, cell: &Cell, r: f64) -> bool {
    s.reach_above(m, &cell.lo, &cell.hi) < r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::ratio;

    fn unit_walk<'a>(singular: &'a [SingularPoint]) -> Walk<'a> {
        let mut lo = [0.0; MAX_DIM];
        let mut hi = [0.0; MAX_DIM];
        lo[0] = 0.0;
        hi[0] = 1.0;
        Walk {
            m: 1,
            lo,
            hi,
            singular,
            support: None,
            h: 0.3,
            c: 1.0,
            p: 1,
            rho_sing: 1.0 / 64.0,
            rho_jump: 0.0,
            exclusion: 0.0,
            depth_cap: 60,
            budget: 1 << 20,
            skip_outside: true,
        }
    }

    #[test]
    fn cells_tile_the_box_in_order() {
        let s = [SingularPoint::new(&Point::new(vec![ratio(1, 3)]))];
        let walk = unit_walk(&s);
        let mut cells = Vec::new();
        let mut singular_hits = 0;
        walk.run(|a| match a {
            Accepted::Regular(c) => cells.push((c.lo[0], c.hi[0])),
            Accepted::Singular(c, _) => {
                singular_hits += 1;
                cells.push((c.lo[0], c.hi[0]));
            }
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(singular_hits, 1);
        assert_eq!(cells.first().unwrap().0, 0.0);
        assert_eq!(cells.last().unwrap().1, 1.0);
        for w in cells.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
    }

    #[test]
    fn singular_containment_is_exact() {
        let s = SingularPoint::new(&Point::new(vec![ratio(1, 3)]));
        let third = 1.0f64 / 3.0;
        // The float nearest 1/3 lies below it.
        assert!(!s.contained_in(1, &[0.0], &[third]));
        assert!(s.contained_in(1, &[third], &[1.0]));
    }

    #[test]
    fn depth_cap_is_reported() {
        let s = [SingularPoint::new(&Point::new(vec![ratio(1, 3)]))];
        let mut walk = unit_walk(&s);
        walk.rho_sing = 1e-30;
        walk.depth_cap = 20;
        assert_eq!(walk.run(|_| {}).unwrap_err(), WalkError::Depth);
    }
}

//! Finite interval-algebra sets and membership-oracle regions.

use std::fmt;

use num_traits::{One, Zero};

use super::interval::{Interval, Point};
use super::scalar::{self, Scalar};
use crate::error::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// How a closed box sits relative to a region `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxClass {
    /// The box interior lies in `G°`.
    Inside,
    /// The box interior misses `G°`.
    Outside,
    /// Neither (or undecided, for conservative oracles).
    Boundary,
}

/// A bounded region `G` with `|G ∖ G°| = 0`.
///
/// Exact regions decide everything in rational arithmetic. Oracle regions
/// may answer [`BoxClass::Boundary`] when unsure and must declare a surface
/// measure bound that certifies how much of `G` lies near the boundary.
pub trait Region: Send + Sync + fmt::Debug {
    fn dim(&self) -> usize;
    fn bounding_box(&self) -> &Interval;
    fn classify(&self, b: &Interval) -> BoxClass;
    /// Classification of a box with `f64` corners. May answer `Boundary`
    /// for boxes that are in fact inside or outside, never the reverse.
    fn classify_f64(&self, lo: &[f64], hi: &[f64]) -> BoxClass {
        match f64_box(lo, hi) {
            Some(b) => self.classify(&b),
            None => BoxClass::Boundary,
        }
    }
    /// Membership in the closed set.
    fn contains(&self, t: &Point) -> bool;
    fn interior_contains(&self, t: &Point) -> bool;
    fn exact_measure(&self) -> Option<Scalar>;
    fn measure_f64(&self) -> f64;
    /// `(m-1)`-dimensional boundary measure; a declared upper bound for
    /// oracle regions. In one dimension this counts boundary points.
    fn boundary_measure(&self) -> f64;
    fn is_exact(&self) -> bool;
    fn as_algebra_set(&self) -> Option<&IntervalAlgebraSet> {
        None
    }
    fn describe(&self) -> String;
}

/// The exact box with the given finite `f64` corners.
pub fn f64_box(lo: &[f64], hi: &[f64]) -> Option<Interval> {
    let bounds = lo
        .iter()
        .zip(hi)
        .map(|(a, b)| Some((scalar::from_f64(*a)?, scalar::from_f64(*b)?)))
        .collect::<Option<Vec<_>>>()?;
    Interval::from_bounds(&bounds).ok()
}

/// A degenerate box: one axis is pinned, the others span a closed range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub axis: usize,
    pub lower: Vec<Scalar>,
    pub upper: Vec<Scalar>,
}

impl Face {
    /// `(m-1)`-dimensional measure; 1 for points in one dimension.
    pub fn area(&self) -> Scalar {
        (0..self.lower.len())
            .filter(|&j| j != self.axis)
            .fold(Scalar::one(), |acc, j| acc * (&self.upper[j] - &self.lower[j]))
    }

    pub fn contains(&self, t: &Point) -> bool {
        (0..self.lower.len()).all(|j| &self.lower[j] <= t.coord(j) && t.coord(j) <= &self.upper[j])
    }

    /// Max-norm distance from `t`.
    pub fn distance_to(&self, t: &Point) -> Scalar {
        (0..self.lower.len())
            .map(|j| {
                let c = t.coord(j);
                if c < &self.lower[j] {
                    &self.lower[j] - c
                } else if c > &self.upper[j] {
                    c - &self.upper[j]
                } else {
                    Scalar::zero()
                }
            })
            .max()
            .unwrap_or_else(Scalar::zero)
    }
}

/// Finite union of closed boxes in disjoint normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct IntervalAlgebraSet {
    cells: Vec<Interval>,
    bounding_box: Interval,
    measure: Scalar,
}

impl fmt::Debug for IntervalAlgebraSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntervalAlgebraSet")
            .field("cells", &self.cells)
            .field("measure", &scalar::fmt_scalar(&self.measure))
            .finish()
    }
}

/// Sorted distinct breakpoints per axis.
fn breakpoints<'a>(dim: usize, boxes: impl Iterator<Item = (&'a [Scalar], &'a [Scalar])>) -> Vec<Vec<Scalar>> {
    let mut axes: Vec<Vec<Scalar>> = vec![Vec::new(); dim];
    for (lo, hi) in boxes {
        for j in 0..dim {
            axes[j].push(lo[j].clone());
            axes[j].push(hi[j].clone());
        }
    }
    for a in &mut axes {
        a.sort();
        a.dedup();
    }
    axes
}

/// Iterates multi-indices of a grid with `sizes[j]` slabs per axis, last axis fastest.
fn grid_indices(sizes: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = if sizes.contains(&0) { 0 } else { sizes.iter().product() };
    (0..total).map(move |mut flat| {
        let mut idx = vec![0; sizes.len()];
        for j in (0..sizes.len()).rev() {
            idx[j] = flat % sizes[j];
            flat /= sizes[j];
        }
        idx
    })
}

fn grid_cell(axes: &[Vec<Scalar>], idx: &[usize]) -> Interval {
    let bounds: Vec<(Scalar, Scalar)> = idx
        .iter()
        .enumerate()
        .map(|(j, &i)| (axes[j][i].clone(), axes[j][i + 1].clone()))
        .collect();
    Interval::from_bounds(&bounds).expect("grid slabs are non-degenerate")
}

/// Exact measure of a finite union of (possibly overlapping) closed boxes.
/// Degenerate boxes contribute nothing.
pub fn union_measure(dim: usize, boxes: &[(Vec<Scalar>, Vec<Scalar>)]) -> Scalar {
    let solid: Vec<&(Vec<Scalar>, Vec<Scalar>)> = boxes
        .iter()
        .filter(|(lo, hi)| lo.iter().zip(hi).all(|(a, b)| a < b))
        .collect();
    if solid.is_empty() {
        return Scalar::zero();
    }
    let axes = breakpoints(dim, solid.iter().map(|(lo, hi)| (lo.as_slice(), hi.as_slice())));
    let sizes: Vec<usize> = axes.iter().map(|a| a.len().saturating_sub(1)).collect();
    let mut total = Scalar::zero();
    for idx in grid_indices(&sizes) {
        let covered = solid
            .iter()
            .any(|(lo, hi)| (0..dim).all(|j| lo[j] <= axes[j][idx[j]] && axes[j][idx[j] + 1] <= hi[j]));
        if covered {
            total += grid_cell(&axes, &idx).volume();
        }
    }
    total
}

impl IntervalAlgebraSet {
    /// Disjoint normal form of a signed box expression.
    ///
    /// Boxes apply in order: `+` adds its box to the set, `-` removes it.
    /// The result is assembled on the grid spanned by all box endpoints and
    /// then merged along each axis.
    pub fn normalize(signed: &[(Interval, Sign)]) -> Result<Self, GeometryError> {
        let Some((first, _)) = signed.first() else {
            return Err(GeometryError::EmptyInterior);
        };
        let dim = first.dim();
        for (b, _) in signed {
            if b.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    expected: dim,
                    found: b.dim(),
                });
            }
        }
        let axes = breakpoints(
            dim,
            signed.iter().map(|(b, _)| (b.lower().coords(), b.upper().coords())),
        );
        let sizes: Vec<usize> = axes.iter().map(|a| a.len() - 1).collect();
        let mut kept = Vec::new();
        for idx in grid_indices(&sizes) {
            let cell = grid_cell(&axes, &idx);
            let mut inside = false;
            for (b, sign) in signed {
                if b.contains_interval(&cell) {
                    inside = *sign == Sign::Plus;
                }
            }
            if inside {
                kept.push(cell);
            }
        }
        Self::from_disjoint_cells(kept)
    }

    /// Builds a set from cells already known to be pairwise non-overlapping.
    pub fn from_disjoint_cells(cells: Vec<Interval>) -> Result<Self, GeometryError> {
        if cells.is_empty() {
            return Err(GeometryError::EmptyInterior);
        }
        let dim = cells[0].dim();
        let mut cells = cells;
        for axis in (0..dim).rev() {
            cells = merge_along(cells, axis);
        }
        cells.sort();
        let measure = cells.iter().map(Interval::volume).sum();
        let bounding_box = tight_box(&cells);
        Ok(IntervalAlgebraSet {
            cells,
            bounding_box,
            measure,
        })
    }

    pub fn from_interval(b: Interval) -> Self {
        Self::from_disjoint_cells(vec![b]).expect("one cell")
    }

    /// Parses lines such as `+ [0,1]x[0,1]` and `- [1/3,2/3]x[1/3,2/3]`.
    /// Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, GeometryError> {
        let mut signed = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            signed.push(parse_signed_box(line)?);
        }
        Self::normalize(&signed)
    }

    pub fn cells(&self) -> &[Interval] {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.bounding_box.dim()
    }

    pub fn measure(&self) -> &Scalar {
        &self.measure
    }

    pub fn bounding_box(&self) -> &Interval {
        &self.bounding_box
    }

    pub fn contains_point(&self, t: &Point) -> bool {
        self.cells.iter().any(|c| c.contains_point(t))
    }

    /// Exact membership of `t` in the interior of the union.
    ///
    /// `t` is interior iff every one of the `2^m` closed orthants at `t` is
    /// locally covered by a single cell containing `t`.
    pub fn interior_contains(&self, t: &Point) -> bool {
        let m = self.dim();
        if t.dim() != m {
            return false;
        }
        let touching: Vec<&Interval> = self.cells.iter().filter(|c| c.contains_point(t)).collect();
        if touching.is_empty() {
            return false;
        }
        (0..(1usize << m)).all(|mask| {
            touching.iter().any(|c| {
                (0..m).all(|j| {
                    if mask & (1 << j) != 0 {
                        c.hi(j) > t.coord(j)
                    } else {
                        c.lo(j) < t.coord(j)
                    }
                })
            })
        })
    }

    /// `|B ∩ G|`.
    pub fn overlap_measure(&self, b: &Interval) -> Scalar {
        self.cells.iter().map(|c| c.overlap_volume(b)).sum()
    }

    pub fn classify_box(&self, b: &Interval) -> BoxClass {
        let covered = self.overlap_measure(b);
        if covered.is_zero() {
            BoxClass::Outside
        } else if covered == b.volume() {
            BoxClass::Inside
        } else {
            BoxClass::Boundary
        }
    }

    /// Faces of `∂G`, computed on the grid spanned by the cells.
    pub fn boundary_faces(&self) -> Vec<Face> {
        let m = self.dim();
        let axes = breakpoints(m, self.cells.iter().map(|c| (c.lower().coords(), c.upper().coords())));
        let sizes: Vec<usize> = axes.iter().map(|a| a.len() - 1).collect();
        let member = |idx: &[usize]| -> bool {
            let cell = grid_cell(&axes, idx);
            self.cells.iter().any(|c| c.contains_interval(&cell))
        };
        let mut faces = Vec::new();
        for idx in grid_indices(&sizes) {
            if !member(&idx) {
                continue;
            }
            for axis in 0..m {
                for upper_side in [false, true] {
                    let neighbour_in = if upper_side {
                        idx[axis] + 1 < sizes[axis] && {
                            let mut n = idx.clone();
                            n[axis] += 1;
                            member(&n)
                        }
                    } else {
                        idx[axis] > 0 && {
                            let mut n = idx.clone();
                            n[axis] -= 1;
                            member(&n)
                        }
                    };
                    if neighbour_in {
                        continue;
                    }
                    let mut lower: Vec<Scalar> = (0..m).map(|j| axes[j][idx[j]].clone()).collect();
                    let mut upper: Vec<Scalar> = (0..m).map(|j| axes[j][idx[j] + 1].clone()).collect();
                    let pinned = if upper_side {
                        upper[axis].clone()
                    } else {
                        lower[axis].clone()
                    };
                    lower[axis] = pinned.clone();
                    upper[axis] = pinned;
                    faces.push(Face { axis, lower, upper });
                }
            }
        }
        faces
    }

    pub fn boundary_measure_exact(&self) -> Scalar {
        self.boundary_faces().iter().map(Face::area).sum()
    }

    /// Exact `|N_r(∂G) ∩ W|` for the open max-norm `r`-neighbourhood.
    pub fn boundary_neighborhood_measure(&self, r: &Scalar, within: &Interval) -> Scalar {
        self.neighborhood_of_faces(&self.boundary_faces(), r, within, None)
    }

    /// Exact `|N_r(∂G) ∩ G ∩ W|`: the part of `G` within `r` of its boundary.
    pub fn inner_collar_measure(&self, r: &Scalar, within: &Interval) -> Scalar {
        self.neighborhood_of_faces(&self.boundary_faces(), r, within, Some(self))
    }

    fn neighborhood_of_faces(
        &self,
        faces: &[Face],
        r: &Scalar,
        within: &Interval,
        clip: Option<&IntervalAlgebraSet>,
    ) -> Scalar {
        let m = self.dim();
        let mut boxes = Vec::new();
        let clip_cells: Vec<Interval> = match clip {
            Some(set) => set.cells.clone(),
            None => vec![within.clone()],
        };
        for f in faces {
            for cc in &clip_cells {
                let lo: Vec<Scalar> = (0..m)
                    .map(|j| {
                        let a = &f.lower[j] - r;
                        scalar::max(scalar::max(&a, within.lo(j)), cc.lo(j)).clone()
                    })
                    .collect();
                let hi: Vec<Scalar> = (0..m)
                    .map(|j| {
                        let b = &f.upper[j] + r;
                        scalar::min(scalar::min(&b, within.hi(j)), cc.hi(j)).clone()
                    })
                    .collect();
                boxes.push((lo, hi));
            }
        }
        union_measure(m, &boxes)
    }

    /// Whether the set is a single box equal to `b`.
    pub fn is_box(&self, b: &Interval) -> bool {
        self.cells.len() == 1 && &self.cells[0] == b
    }

    /// Text form accepted by [`IntervalAlgebraSet::parse`].
    pub fn to_text(&self) -> String {
        self.cells.iter().map(|c| format!("+ {c}\n")).collect()
    }
}

fn tight_box(cells: &[Interval]) -> Interval {
    let m = cells[0].dim();
    let bounds: Vec<(Scalar, Scalar)> = (0..m)
        .map(|j| {
            let lo = cells.iter().map(|c| c.lo(j)).min().expect("non-empty").clone();
            let hi = cells.iter().map(|c| c.hi(j)).max().expect("non-empty").clone();
            (lo, hi)
        })
        .collect();
    Interval::from_bounds(&bounds).expect("cells are non-degenerate")
}

/// Merges cells that abut along `axis` and agree on every other axis.
fn merge_along(mut cells: Vec<Interval>, axis: usize) -> Vec<Interval> {
    let m = cells.first().map(Interval::dim).unwrap_or(0);
    let key = |c: &Interval| -> Vec<Scalar> {
        (0..m)
            .filter(|&j| j != axis)
            .flat_map(|j| [c.lo(j).clone(), c.hi(j).clone()])
            .collect()
    };
    cells.sort_by(|a, b| key(a).cmp(&key(b)).then_with(|| a.lo(axis).cmp(b.lo(axis))));
    let mut out: Vec<Interval> = Vec::with_capacity(cells.len());
    for c in cells {
        if let Some(last) = out.last_mut() {
            if key(last) == key(&c) && last.hi(axis) == c.lo(axis) {
                let mut upper = last.upper().coords().to_vec();
                upper[axis] = c.hi(axis).clone();
                *last = Interval::new(last.lower().clone(), Point::new(upper)).expect("merge keeps non-degeneracy");
                continue;
            }
        }
        out.push(c);
    }
    out
}

pub fn parse_signed_box(line: &str) -> Result<(Interval, Sign), GeometryError> {
    let line = line.trim();
    let (sign, rest) = if let Some(r) = line.strip_prefix('+') {
        (Sign::Plus, r)
    } else if let Some(r) = line.strip_prefix('-') {
        (Sign::Minus, r)
    } else {
        return Err(GeometryError::MalformedBox(line.to_string()));
    };
    Ok((Interval::parse(rest)?, sign))
}

impl Region for IntervalAlgebraSet {
    fn dim(&self) -> usize {
        IntervalAlgebraSet::dim(self)
    }
    fn bounding_box(&self) -> &Interval {
        &self.bounding_box
    }
    fn classify(&self, b: &Interval) -> BoxClass {
        self.classify_box(b)
    }
    fn contains(&self, t: &Point) -> bool {
        self.contains_point(t)
    }
    fn interior_contains(&self, t: &Point) -> bool {
        IntervalAlgebraSet::interior_contains(self, t)
    }
    fn exact_measure(&self) -> Option<Scalar> {
        Some(self.measure.clone())
    }
    fn measure_f64(&self) -> f64 {
        scalar::to_f64(&self.measure)
    }
    fn boundary_measure(&self) -> f64 {
        scalar::to_f64(&self.boundary_measure_exact())
    }
    fn is_exact(&self) -> bool {
        true
    }
    fn as_algebra_set(&self) -> Option<&IntervalAlgebraSet> {
        Some(self)
    }
    fn describe(&self) -> String {
        let cells: Vec<String> = self.cells.iter().map(|c| c.to_string()).collect();
        format!("interval-algebra set {{{}}}", cells.join(", "))
    }
}

/// Closed Euclidean ball, known only through exact point and box tests.
#[derive(Debug, Clone)]
pub struct BallOracle {
    center: Point,
    radius: Scalar,
    bounding_box: Interval,
}

impl BallOracle {
    pub fn new(center: Point, radius: Scalar) -> Result<Self, GeometryError> {
        if radius <= Scalar::zero() {
            return Err(GeometryError::EmptyInterior);
        }
        let bounds: Vec<(Scalar, Scalar)> = center.coords().iter().map(|c| (c - &radius, c + &radius)).collect();
        let bounding_box = Interval::from_bounds(&bounds)?;
        Ok(BallOracle {
            center,
            radius,
            bounding_box,
        })
    }

    pub fn radius(&self) -> &Scalar {
        &self.radius
    }

    fn sq_distance(&self, p: &[Scalar]) -> Scalar {
        p.iter()
            .zip(self.center.coords())
            .map(|(a, c)| {
                let d = a - c;
                &d * &d
            })
            .sum()
    }
}

impl Region for BallOracle {
    fn dim(&self) -> usize {
        self.center.dim()
    }
    fn bounding_box(&self) -> &Interval {
        &self.bounding_box
    }
    fn classify(&self, b: &Interval) -> BoxClass {
        let m = b.dim();
        let r2 = &self.radius * &self.radius;
        // Nearest point of the box to the centre.
        let nearest: Vec<Scalar> = (0..m)
            .map(|j| {
                let c = self.center.coord(j);
                if c < b.lo(j) {
                    b.lo(j).clone()
                } else if c > b.hi(j) {
                    b.hi(j).clone()
                } else {
                    c.clone()
                }
            })
            .collect();
        if self.sq_distance(&nearest) >= r2 {
            return BoxClass::Outside;
        }
        // Farthest corner decides containment of the whole box.
        let farthest: Vec<Scalar> = (0..m)
            .map(|j| {
                let c = self.center.coord(j);
                let lo_gap = scalar::abs(&(c - b.lo(j)));
                let hi_gap = scalar::abs(&(b.hi(j) - c));
                if lo_gap >= hi_gap {
                    b.lo(j).clone()
                } else {
                    b.hi(j).clone()
                }
            })
            .collect();
        if self.sq_distance(&farthest) <= r2 {
            BoxClass::Inside
        } else {
            BoxClass::Boundary
        }
    }
    fn classify_f64(&self, lo: &[f64], hi: &[f64]) -> BoxClass {
        let c = self.center.to_f64();
        let r = scalar::to_f64(&self.radius);
        let (mut near, mut far) = (0.0f64, 0.0f64);
        for j in 0..c.len() {
            let gap = (lo[j] - c[j]).max(c[j] - hi[j]).max(0.0);
            let reach = (c[j] - lo[j]).abs().max((hi[j] - c[j]).abs());
            near += gap * gap;
            far += reach * reach;
        }
        let r2 = r * r;
        let slack = 1e-9 * r2.max(f64::MIN_POSITIVE);
        if near > r2 + slack {
            BoxClass::Outside
        } else if far < r2 - slack {
            BoxClass::Inside
        } else {
            match f64_box(lo, hi) {
                Some(b) => self.classify(&b),
                None => BoxClass::Boundary,
            }
        }
    }
    fn contains(&self, t: &Point) -> bool {
        self.sq_distance(t.coords()) <= &self.radius * &self.radius
    }
    fn interior_contains(&self, t: &Point) -> bool {
        self.sq_distance(t.coords()) < &self.radius * &self.radius
    }
    fn exact_measure(&self) -> Option<Scalar> {
        None
    }
    fn measure_f64(&self) -> f64 {
        ball_volume(self.dim(), scalar::to_f64(&self.radius))
    }
    fn boundary_measure(&self) -> f64 {
        let r = scalar::to_f64(&self.radius);
        self.dim() as f64 * ball_volume(self.dim(), r) / r
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn describe(&self) -> String {
        format!(
            "ball oracle centre {} radius {}",
            self.center,
            scalar::fmt_scalar(&self.radius)
        )
    }
}

/// Euclidean `m`-ball volume.
pub fn ball_volume(m: usize, r: f64) -> f64 {
    let even = m.is_multiple_of(2);
    let mut v = if even { 1.0 } else { 2.0 * r };
    let mut k = if even { 2 } else { 3 };
    while k <= m {
        v *= 2.0 * std::f64::consts::PI * r * r / k as f64;
        k += 2;
    }
    v
}

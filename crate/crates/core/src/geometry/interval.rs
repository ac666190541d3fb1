//! Points and closed non-degenerate boxes with exact rational corners.
//!
//! The space carries the maximum norm, so the open ball `B(t, r)` is the
//! open cube of half-width `r` centred at `t`.

use std::fmt;

use num_traits::{One, Zero};

use super::scalar::{self, Scalar};
use crate::error::GeometryError;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        assert!(!coords.is_empty(), "points need at least one coordinate");
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point::new(coords.iter().map(|&c| scalar::int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn coord(&self, j: usize) -> &Scalar {
        &self.0[j]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(scalar::to_f64).collect()
    }

    /// Max-norm distance.
    pub fn distance(&self, other: &Point) -> Scalar {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| scalar::abs(&(a - b)))
            .max()
            .unwrap_or_else(Scalar::zero)
    }

    pub fn parse(text: &str) -> Result<Point, GeometryError> {
        let s = text.trim();
        let inner = s
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| GeometryError::MalformedBox(text.to_string()))?;
        let coords = inner
            .split(',')
            .map(scalar::parse_scalar)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Point::new(coords))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, c) in self.0.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", scalar::fmt_scalar(c))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Result of intersecting two boxes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Intersection {
    Interval(Interval),
    /// The boxes touch along a face, edge or corner: `|I ∩ J| = 0`.
    Degenerate,
    Empty,
}

/// `∏ [lower_j, upper_j]` with `lower_j < upper_j` on every axis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    lower: Point,
    upper: Point,
}

impl Interval {
    pub fn new(lower: Point, upper: Point) -> Result<Self, GeometryError> {
        if lower.dim() != upper.dim() {
            return Err(GeometryError::DimensionMismatch {
                expected: lower.dim(),
                found: upper.dim(),
            });
        }
        if lower.0.iter().zip(&upper.0).any(|(a, b)| a >= b) {
            return Err(GeometryError::DegenerateInterval);
        }
        Ok(Interval { lower, upper })
    }

    pub fn from_bounds(bounds: &[(Scalar, Scalar)]) -> Result<Self, GeometryError> {
        let lower = Point::new(bounds.iter().map(|b| b.0.clone()).collect());
        let upper = Point::new(bounds.iter().map(|b| b.1.clone()).collect());
        Interval::new(lower, upper)
    }

    /// `[0,1]^m`.
    pub fn unit_cube(dim: usize) -> Self {
        Interval {
            lower: Point::new(vec![Scalar::zero(); dim]),
            upper: Point::new(vec![Scalar::one(); dim]),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn lower(&self) -> &Point {
        &self.lower
    }

    pub fn upper(&self) -> &Point {
        &self.upper
    }

    pub fn lo(&self, j: usize) -> &Scalar {
        &self.lower.0[j]
    }

    pub fn hi(&self, j: usize) -> &Scalar {
        &self.upper.0[j]
    }

    pub fn edge(&self, j: usize) -> Scalar {
        self.hi(j) - self.lo(j)
    }

    pub fn max_edge(&self) -> Scalar {
        (0..self.dim()).map(|j| self.edge(j)).max().expect("non-empty")
    }

    /// Lebesgue measure: the product of edge lengths.
    pub fn volume(&self) -> Scalar {
        (0..self.dim())
            .map(|j| self.edge(j))
            .fold(Scalar::one(), |acc, e| acc * e)
    }

    pub fn center(&self) -> Point {
        let two = scalar::int(2);
        Point::new((0..self.dim()).map(|j| (self.lo(j) + self.hi(j)) / &two).collect())
    }

    fn check_dim(&self, other_dim: usize) -> Result<(), GeometryError> {
        if self.dim() != other_dim {
            return Err(GeometryError::DimensionMismatch {
                expected: self.dim(),
                found: other_dim,
            });
        }
        Ok(())
    }

    pub fn intersect(&self, other: &Interval) -> Result<Intersection, GeometryError> {
        self.check_dim(other.dim())?;
        let mut degenerate = false;
        let mut lower = Vec::with_capacity(self.dim());
        let mut upper = Vec::with_capacity(self.dim());
        for j in 0..self.dim() {
            let a = scalar::max(self.lo(j), other.lo(j));
            let b = scalar::min(self.hi(j), other.hi(j));
            if a > b {
                return Ok(Intersection::Empty);
            }
            if a == b {
                degenerate = true;
            }
            lower.push(a.clone());
            upper.push(b.clone());
        }
        if degenerate {
            return Ok(Intersection::Degenerate);
        }
        Ok(Intersection::Interval(Interval {
            lower: Point(lower),
            upper: Point(upper),
        }))
    }

    /// Intersection as an interval when it has positive measure.
    pub fn meet(&self, other: &Interval) -> Option<Interval> {
        match self.intersect(other) {
            Ok(Intersection::Interval(i)) => Some(i),
            _ => None,
        }
    }

    /// `|I ∩ J| > 0`; boxes that only share a face do not overlap.
    pub fn overlaps(&self, other: &Interval) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        (0..self.dim()).all(|j| scalar::max(self.lo(j), other.lo(j)) < scalar::min(self.hi(j), other.hi(j)))
    }

    /// Measure of `I ∩ J` (zero when they do not overlap).
    pub fn overlap_volume(&self, other: &Interval) -> Scalar {
        let mut acc = Scalar::one();
        for j in 0..self.dim() {
            let a = scalar::max(self.lo(j), other.lo(j));
            let b = scalar::min(self.hi(j), other.hi(j));
            if a >= b {
                return Scalar::zero();
            }
            acc *= b - a;
        }
        acc
    }

    pub fn contains_point(&self, t: &Point) -> bool {
        t.dim() == self.dim() && (0..self.dim()).all(|j| self.lo(j) <= t.coord(j) && t.coord(j) <= self.hi(j))
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.dim() == self.dim() && (0..self.dim()).all(|j| self.lo(j) <= other.lo(j) && other.hi(j) <= self.hi(j))
    }

    /// `max_j max(|a_j - t_j|, |b_j - t_j|)`: the smallest closed-ball radius
    /// around `t` containing the box.
    pub fn circumradius_from(&self, t: &Point) -> Scalar {
        (0..self.dim())
            .map(|j| {
                let a = scalar::abs(&(self.lo(j) - t.coord(j)));
                let b = scalar::abs(&(self.hi(j) - t.coord(j)));
                if a >= b {
                    a
                } else {
                    b
                }
            })
            .max()
            .expect("non-empty")
    }

    /// Max-norm distance from `t` to the box (zero inside).
    pub fn distance_to(&self, t: &Point) -> Scalar {
        (0..self.dim())
            .map(|j| {
                let c = t.coord(j);
                if c < self.lo(j) {
                    self.lo(j) - c
                } else if c > self.hi(j) {
                    c - self.hi(j)
                } else {
                    Scalar::zero()
                }
            })
            .max()
            .expect("non-empty")
    }

    /// Whether the box lies in the open max-norm ball `B(t, r)`.
    pub fn in_ball(&self, t: &Point, r: &Scalar) -> bool {
        &self.circumradius_from(t) < r
    }

    /// The `2^m` children of simultaneous bisection, in lexicographic order of
    /// their lower corners (axis 0 most significant).
    pub fn bisect_all(&self) -> Vec<Interval> {
        let m = self.dim();
        let center = self.center();
        (0..(1usize << m))
            .map(|mask| {
                let mut lower = Vec::with_capacity(m);
                let mut upper = Vec::with_capacity(m);
                for j in 0..m {
                    let high_half = mask & (1 << (m - 1 - j)) != 0;
                    if high_half {
                        lower.push(center.coord(j).clone());
                        upper.push(self.hi(j).clone());
                    } else {
                        lower.push(self.lo(j).clone());
                        upper.push(center.coord(j).clone());
                    }
                }
                Interval {
                    lower: Point(lower),
                    upper: Point(upper),
                }
            })
            .collect()
    }

    /// Splits along `axis` at `at`, which must lie strictly inside the edge.
    pub fn split(&self, axis: usize, at: &Scalar) -> Option<(Interval, Interval)> {
        if at <= self.lo(axis) || at >= self.hi(axis) {
            return None;
        }
        let mut left_upper = self.upper.clone();
        left_upper.0[axis] = at.clone();
        let mut right_lower = self.lower.clone();
        right_lower.0[axis] = at.clone();
        Some((
            Interval {
                lower: self.lower.clone(),
                upper: left_upper,
            },
            Interval {
                lower: right_lower,
                upper: self.upper.clone(),
            },
        ))
    }

    /// The box grown by `r` on every side.
    pub fn dilate(&self, r: &Scalar) -> Interval {
        Interval {
            lower: Point(self.lower.0.iter().map(|a| a - r).collect()),
            upper: Point(self.upper.0.iter().map(|b| b + r).collect()),
        }
    }

    pub fn lower_f64(&self) -> Vec<f64> {
        self.lower.to_f64()
    }

    pub fn upper_f64(&self) -> Vec<f64> {
        self.upper.to_f64()
    }

    /// Parses `[a,b]x[c,d]x...`.
    pub fn parse(text: &str) -> Result<Interval, GeometryError> {
        let bad = || GeometryError::MalformedBox(text.to_string());
        let mut bounds = Vec::new();
        for factor in text.trim().split(['x', '×']) {
            let f = factor.trim();
            let inner = f.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
            let (a, b) = inner.split_once(',').ok_or_else(bad)?;
            bounds.push((scalar::parse_scalar(a)?, scalar::parse_scalar(b)?));
        }
        if bounds.is_empty() {
            return Err(bad());
        }
        Interval::from_bounds(&bounds)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.dim() {
            if j > 0 {
                write!(f, "x")?;
            }
            write!(
                f,
                "[{},{}]",
                scalar::fmt_scalar(self.lo(j)),
                scalar::fmt_scalar(self.hi(j))
            )?;
        }
        Ok(())
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

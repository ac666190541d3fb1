//! Gauges: positive radius functions with a lower-bound oracle on boxes.

use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::geometry::{scalar, BoxClass, Interval, IntervalAlgebraSet, Point, Scalar};

/// User-supplied gauge.
pub trait GaugeFn: Send + Sync {
    fn radius(&self, t: &Point) -> Scalar;
    /// A value `≤ inf_{t ∈ I} radius(t)`, or `None` when unknown.
    fn lower_bound(&self, i: &Interval) -> Option<Scalar>;
    fn singular_points(&self) -> &[Point] {
        &[]
    }
}

#[derive(Clone)]
pub enum Gauge {
    Constant(Scalar),
    /// `inside` on the closed set, `outside` elsewhere.
    Piecewise {
        set: IntervalAlgebraSet,
        inside: Scalar,
        outside: Scalar,
    },
    /// `δ(t) = min(r_max, scale · dist(t, S)^exponent)` for `t ∉ S` and
    /// `δ(s) = singular_radius` for `s ∈ S`; constant `r_max` when `S` is empty.
    DistanceScaled {
        scale: Scalar,
        exponent: u32,
        r_max: Scalar,
        singular: Vec<Point>,
        singular_radius: Scalar,
    },
    Custom(Arc<dyn GaugeFn>),
}

impl fmt::Debug for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gauge::Constant(r) => write!(f, "Constant({})", scalar::fmt_scalar(r)),
            Gauge::Piecewise { inside, outside, .. } => write!(
                f,
                "Piecewise(inside {}, outside {})",
                scalar::fmt_scalar(inside),
                scalar::fmt_scalar(outside)
            ),
            Gauge::DistanceScaled {
                scale,
                exponent,
                singular,
                ..
            } => write!(
                f,
                "DistanceScaled({} * dist^{} to {:?})",
                scalar::fmt_scalar(scale),
                exponent,
                singular
            ),
            Gauge::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl Gauge {
    pub fn constant(r: Scalar) -> Gauge {
        assert!(r.is_positive(), "gauge radius must be positive");
        Gauge::Constant(r)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gauge::Constant(_) => "constant",
            Gauge::Piecewise { .. } => "piecewise",
            Gauge::DistanceScaled { .. } => "distance-scaled",
            Gauge::Custom(_) => "custom",
        }
    }

    pub fn radius(&self, t: &Point) -> Scalar {
        match self {
            Gauge::Constant(r) => r.clone(),
            Gauge::Piecewise { set, inside, outside } => {
                if set.contains_point(t) {
                    inside.clone()
                } else {
                    outside.clone()
                }
            }
            Gauge::DistanceScaled {
                scale,
                exponent,
                r_max,
                singular,
                singular_radius,
            } => {
                if singular.contains(t) {
                    return singular_radius.clone();
                }
                let Some(d) = singular.iter().map(|s| s.distance(t)).min() else {
                    return r_max.clone();
                };
                scalar::min(r_max, &(scale * num_traits::pow(d, *exponent as usize))).clone()
            }
            Gauge::Custom(g) => g.radius(t),
        }
    }

    /// Lower bound of the radius over the closed box; zero when the box
    /// meets the singular set of a distance-scaled gauge.
    pub fn lower_bound(&self, i: &Interval) -> Option<Scalar> {
        match self {
            Gauge::Constant(r) => Some(r.clone()),
            Gauge::Piecewise { set, inside, outside } => {
                let touches = set
                    .cells()
                    .iter()
                    .any(|c| !matches!(c.intersect(i), Ok(crate::geometry::Intersection::Empty)));
                let within = set.classify_box(i) == BoxClass::Inside;
                Some(if within {
                    inside.clone()
                } else if !touches {
                    outside.clone()
                } else {
                    scalar::min(inside, outside).clone()
                })
            }
            Gauge::DistanceScaled {
                scale,
                exponent,
                r_max,
                singular,
                ..
            } => {
                let Some(d) = singular.iter().map(|s| i.distance_to(s)).min() else {
                    return Some(r_max.clone());
                };
                Some(scalar::min(r_max, &(scale * num_traits::pow(d, *exponent as usize))).clone())
            }
            Gauge::Custom(g) => g.lower_bound(i),
        }
    }

    pub fn singular_points(&self) -> &[Point] {
        match self {
            Gauge::DistanceScaled { singular, .. } => singular,
            Gauge::Custom(g) => g.singular_points(),
            _ => &[],
        }
    }
}

/// Lower bound as `f64`, rounded down.
pub fn lower_bound_f64(g: &Gauge, i: &Interval) -> Option<f64> {
    g.lower_bound(i).map(|q| {
        let x = scalar::to_f64(&q);
        if scalar::from_f64(x).is_some_and(|e| e > q) {
            x.next_down()
        } else {
            x
        }
    })
}

impl Gauge {
    pub fn is_zero_somewhere(&self, i: &Interval) -> bool {
        self.lower_bound(i).is_some_and(|b| b.is_zero())
    }
}

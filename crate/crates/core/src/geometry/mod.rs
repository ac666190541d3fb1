//! Exact geometry under the maximum norm.

pub mod interval;
pub mod scalar;
pub mod set;
pub mod value;

pub use interval::{Intersection, Interval, Point};
pub use scalar::Scalar;
pub use set::{f64_box, BallOracle, BoxClass, Face, IntervalAlgebraSet, Region, Sign};
pub use value::{NormKind, VectorValue};

/// Whether `I` lies in the open max-norm ball `B(t, r)`.
pub fn ball_contains(t: &Point, r: &Scalar, i: &Interval) -> bool {
    i.in_ball(t, r)
}

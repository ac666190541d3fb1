//! Values in the finite-dimensional target space.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{self, Scalar};
use crate::summation::Neumaier;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    #[default]
    Max,
    Euclidean,
    One,
}

impl NormKind {
    pub fn parse(text: &str) -> Option<NormKind> {
        match text.trim() {
            "max" | "inf" => Some(NormKind::Max),
            "euclidean" | "l2" => Some(NormKind::Euclidean),
            "one" | "l1" => Some(NormKind::One),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NormKind::Max => "max",
            NormKind::Euclidean => "euclidean",
            NormKind::One => "one",
        }
    }

    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            NormKind::Max => v.iter().fold(0.0, |m, x| m.max(x.abs())),
            NormKind::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::One => v.iter().map(|x| x.abs()).sum(),
        }
    }
}

/// A vector in `R^d`, kept exact as long as every operand is exact.
#[derive(Clone, PartialEq)]
pub enum VectorValue {
    Exact(Vec<Scalar>),
    Approx(Vec<f64>),
}

impl VectorValue {
    pub fn zero(d: usize) -> Self {
        VectorValue::Exact(vec![Scalar::zero(); d])
    }

    pub fn from_f64(v: Vec<f64>) -> Self {
        VectorValue::Approx(v)
    }

    pub fn dim(&self) -> usize {
        match self {
            VectorValue::Exact(v) => v.len(),
            VectorValue::Approx(v) => v.len(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, VectorValue::Exact(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            VectorValue::Exact(v) => v.iter().map(scalar::to_f64).collect(),
            VectorValue::Approx(v) => v.clone(),
        }
    }

    pub fn component(&self, j: usize) -> f64 {
        match self {
            VectorValue::Exact(v) => scalar::to_f64(&v[j]),
            VectorValue::Approx(v) => v[j],
        }
    }

    pub fn norm(&self, kind: NormKind) -> f64 {
        match self {
            VectorValue::Exact(v) => {
                // Exact zero test first so that `norm == 0` iff the vector is zero.
                if v.iter().all(Zero::is_zero) {
                    return 0.0;
                }
                match kind {
                    NormKind::Max => scalar::to_f64(&v.iter().map(|x| x.abs()).max().expect("non-empty")),
                    NormKind::One => scalar::to_f64(&v.iter().map(|x| x.abs()).sum()),
                    NormKind::Euclidean => kind.of(&self.to_f64()),
                }
            }
            VectorValue::Approx(v) => kind.of(v),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            VectorValue::Exact(v) => v.iter().all(Zero::is_zero),
            VectorValue::Approx(v) => v.iter().all(|x| *x == 0.0),
        }
    }

    pub fn add(&self, other: &VectorValue) -> VectorValue {
        assert_eq!(self.dim(), other.dim(), "value dimension mismatch");
        match (self, other) {
            (VectorValue::Exact(a), VectorValue::Exact(b)) => {
                VectorValue::Exact(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => VectorValue::Approx(self.to_f64().iter().zip(other.to_f64()).map(|(x, y)| x + y).collect()),
        }
    }

    pub fn sub(&self, other: &VectorValue) -> VectorValue {
        self.add(&other.scale(&scalar::int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> VectorValue {
        match self {
            VectorValue::Exact(v) => VectorValue::Exact(v.iter().map(|x| x * c).collect()),
            VectorValue::Approx(v) => {
                let cf = scalar::to_f64(c);
                VectorValue::Approx(v.iter().map(|x| x * cf).collect())
            }
        }
    }

    pub fn scale_f64(&self, c: f64) -> VectorValue {
        VectorValue::Approx(self.to_f64().iter().map(|x| x * c).collect())
    }

    /// Distance `‖a − b‖`.
    pub fn distance(&self, other: &VectorValue, kind: NormKind) -> f64 {
        self.sub(other).norm(kind)
    }

    /// Sum in the given order: exact when every term is exact, compensated otherwise.
    pub fn sum<'a>(d: usize, terms: impl IntoIterator<Item = &'a VectorValue>) -> VectorValue {
        let mut exact: Option<Vec<Scalar>> = Some(vec![Scalar::zero(); d]);
        let mut acc: Vec<Neumaier> = vec![Neumaier::default(); d];
        for t in terms {
            assert_eq!(t.dim(), d, "value dimension mismatch");
            match t {
                VectorValue::Exact(v) => {
                    if let Some(e) = exact.as_mut() {
                        for (x, y) in e.iter_mut().zip(v) {
                            *x += y;
                        }
                    }
                    for (a, y) in acc.iter_mut().zip(v) {
                        a.add(scalar::to_f64(y));
                    }
                }
                VectorValue::Approx(v) => {
                    exact = None;
                    for (a, y) in acc.iter_mut().zip(v) {
                        a.add(*y);
                    }
                }
            }
        }
        match exact {
            Some(e) => VectorValue::Exact(e),
            None => VectorValue::Approx(acc.iter().map(Neumaier::total).collect()),
        }
    }
}

impl fmt::Debug for VectorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VectorValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = match self {
            VectorValue::Exact(v) => v.iter().map(scalar::fmt_scalar).collect(),
            VectorValue::Approx(v) => v.iter().map(|x| format!("{x:.12e}")).collect(),
        };
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for VectorValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_f64().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::scalar::{int, ratio};

    #[test]
    fn norms() {
        let v = VectorValue::Approx(vec![3.0, -4.0]);
        assert_eq!(v.norm(NormKind::Max), 4.0);
        assert_eq!(v.norm(NormKind::Euclidean), 5.0);
        assert_eq!(v.norm(NormKind::One), 7.0);
        assert_eq!(VectorValue::zero(3).norm(NormKind::Euclidean), 0.0);
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = VectorValue::Exact(vec![ratio(1, 3), int(1)]);
        let b = VectorValue::Exact(vec![ratio(2, 3), int(-1)]);
        let s = a.add(&b);
        assert_eq!(s, VectorValue::Exact(vec![int(1), int(0)]));
        let mixed = a.add(&VectorValue::Approx(vec![0.0, 0.0]));
        assert!(!mixed.is_exact());
    }
}

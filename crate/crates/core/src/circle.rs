//! Points and arcs of the circle `[0, 1)`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::rational::{self, Q};

/// A point of the circle, stored as its representative in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CirclePoint(Q);

impl CirclePoint {
    /// Reduces any rational modulo 1.
    pub fn new(x: Q) -> Self {
        CirclePoint(rational::frac(&x))
    }

    pub fn zero() -> Self {
        CirclePoint(Q::zero())
    }

    pub fn value(&self) -> &Q {
        &self.0
    }

    pub fn into_inner(self) -> Q {
        self.0
    }

    /// `self + t (mod 1)`.
    pub fn shift(&self, t: &Q) -> Self {
        CirclePoint::new(&self.0 + t)
    }

    /// Arc-length distance `min(|u - v|, 1 - |u - v|)`.
    pub fn distance(&self, other: &CirclePoint) -> Q {
        rational::dist_to_int(&(&self.0 - &other.0))
    }

    /// Length of the counter-clockwise walk from `self` to `other`, in `[0, 1)`.
    pub fn forward_to(&self, other: &CirclePoint) -> Q {
        rational::frac(&(&other.0 - &self.0))
    }
}

impl From<Q> for CirclePoint {
    fn from(x: Q) -> Self {
        CirclePoint::new(x)
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format(&self.0))
    }
}

impl Serialize for CirclePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(&self.0))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("arc length must satisfy 0 < length <= 1, got {0}")]
    BadLength(String),
}

/// Closed arc `{start + t mod 1 : 0 <= t <= length}` with `0 < length <= 1`.
/// Length exactly 1 is the whole circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Arc {
    start: CirclePoint,
    #[serde(with = "rational::serde_str")]
    length: Q,
}

impl Arc {
    pub fn new(start: CirclePoint, length: Q) -> Result<Self, ArcError> {
        if length <= Q::zero() || length > Q::one() {
            return Err(ArcError::BadLength(rational::format(&length)));
        }
        if length.is_one() {
            return Ok(Arc::full());
        }
        Ok(Arc { start, length })
    }

    /// Arc from `start` walking forward to `end`. Equal endpoints are rejected
    /// since they would be ambiguous between a point and the full circle.
    pub fn from_endpoints(start: CirclePoint, end: &CirclePoint) -> Result<Self, ArcError> {
        let length = start.forward_to(end);
        Arc::new(start, length)
    }

    /// The full circle, canonically started at 0.
    pub fn full() -> Self {
        Arc {
            start: CirclePoint::zero(),
            length: Q::one(),
        }
    }

    pub fn start(&self) -> &CirclePoint {
        &self.start
    }

    pub fn length(&self) -> &Q {
        &self.length
    }

    pub fn end(&self) -> CirclePoint {
        self.start.shift(&self.length)
    }

    pub fn is_full(&self) -> bool {
        self.length.is_one()
    }

    /// Lifted endpoints `(a, a + length)` with `a` in `[0, 1)`.
    pub fn lifted(&self) -> (Q, Q) {
        let a = self.start.value().clone();
        let b = &a + &self.length;
        (a, b)
    }

    pub fn contains(&self, x: &CirclePoint) -> bool {
        self.is_full() || self.start.forward_to(x) <= self.length
    }

    pub fn contains_arc(&self, other: &Arc) -> bool {
        if self.is_full() {
            return true;
        }
        if other.is_full() {
            return false;
        }
        let offset = self.start.forward_to(&other.start);
        offset + &other.length <= self.length
    }

    /// Arc rotated by `t`.
    pub fn shift(&self, t: &Q) -> Arc {
        if self.is_full() {
            return Arc::full();
        }
        Arc {
            start: self.start.shift(t),
            length: self.length.clone(),
        }
    }

    /// Euclidean distance on the circle between two arcs viewed as sets.
    pub fn distance(&self, other: &Arc) -> Q {
        if self.is_full() || other.is_full() {
            return Q::zero();
        }
        if self.contains(other.start()) || other.contains(self.start()) {
            return Q::zero();
        }
        let gap_forward = self.end().forward_to(other.start());
        let gap_back = other.end().forward_to(self.start());
        rational::min(&gap_forward, &gap_back)
    }

    /// Splits the arc into at most two intervals of `[0, 1]`.
    pub fn to_intervals(&self) -> Vec<(Q, Q)> {
        if self.is_full() {
            return vec![(Q::zero(), Q::one())];
        }
        let (a, b) = self.lifted();
        if b <= Q::one() {
            vec![(a, b)]
        } else {
            vec![(Q::zero(), b - Q::one()), (a, Q::one())]
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return f.write_str("S1");
        }
        write!(f, "[{}, {}]", self.start, self.end())
    }
}

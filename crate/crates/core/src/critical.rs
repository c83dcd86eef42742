//! Turning points, critical values and the lap constants κ and ζ.

use num_traits::{One, Signed};
use serde::Serialize;

use crate::circle::CirclePoint;
use crate::map::PaMap;
use crate::rational::{self, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnKind {
    Min,
    Max,
}

impl TurnKind {
    pub fn opposite(self) -> TurnKind {
        match self {
            TurnKind::Min => TurnKind::Max,
            TurnKind::Max => TurnKind::Min,
        }
    }
}

/// A turning point together with the lifted value `F(c)` at its breakpoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Turn {
    pub point: CirclePoint,
    /// Index of the breakpoint in `[0, k)`.
    #[serde(skip)]
    pub index: usize,
    #[serde(with = "rational::serde_str")]
    pub lifted_value: Q,
    pub kind: TurnKind,
}

impl Turn {
    pub fn value(&self) -> CirclePoint {
        CirclePoint::new(self.lifted_value.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalData {
    pub turns: Vec<Turn>,
    pub turning_points: Vec<CirclePoint>,
    /// One entry per turning point, in the same order.
    pub critical_values: Vec<CirclePoint>,
    #[serde(with = "rational::serde_opt_str")]
    pub kappa: Option<Q>,
    #[serde(with = "rational::serde_str")]
    pub zeta: Q,
}

impl CriticalData {
    /// Critical values with duplicates removed, sorted.
    pub fn distinct_values(&self) -> Vec<CirclePoint> {
        let mut v = self.critical_values.clone();
        v.sort();
        v.dedup();
        v
    }

    pub fn values_distinct(&self) -> bool {
        self.distinct_values().len() == self.critical_values.len()
    }
}

pub fn turns(f: &PaMap) -> Vec<Turn> {
    let xs = f.breakpoints();
    let vs = f.values();
    let s = f.slopes();
    let k = s.len();
    let mut out = Vec::new();
    for i in 0..k {
        let left = if i == 0 { &s[k - 1] } else { &s[i - 1] };
        let right = &s[i];
        if left.is_positive() == right.is_positive() {
            continue;
        }
        let kind = if left.is_positive() {
            TurnKind::Max
        } else {
            TurnKind::Min
        };
        out.push(Turn {
            point: CirclePoint::new(xs[i].clone()),
            index: i,
            lifted_value: vs[i].clone(),
            kind,
        });
    }
    out
}

/// Length of the shortest lap, measured around the circle between
/// consecutive turning points. A monotone map has a single lap of length 1.
pub fn shortest_lap(points: &[CirclePoint]) -> Q {
    if points.len() < 2 {
        return Q::one();
    }
    let mut best = Q::one();
    for i in 0..points.len() {
        let gap = points[i].forward_to(&points[(i + 1) % points.len()]);
        if gap < best {
            best = gap;
        }
    }
    best
}

/// Smallest circle distance between distinct points, if there are two.
pub fn min_gap(values: &[CirclePoint]) -> Option<Q> {
    let mut v = values.to_vec();
    v.sort();
    v.dedup();
    if v.len() < 2 {
        return None;
    }
    let mut best = Q::one();
    for i in 0..v.len() {
        let d = v[i].distance(&v[(i + 1) % v.len()]);
        if d < best {
            best = d;
        }
    }
    Some(best)
}

pub fn critical_data(f: &PaMap) -> CriticalData {
    let turns = turns(f);
    let turning_points: Vec<CirclePoint> = turns.iter().map(|t| t.point.clone()).collect();
    let critical_values: Vec<CirclePoint> = turns.iter().map(Turn::value).collect();
    let kappa = min_gap(&critical_values);
    let zeta = shortest_lap(&turning_points);
    CriticalData {
        turns,
        turning_points,
        critical_values,
        kappa,
        zeta,
    }
}

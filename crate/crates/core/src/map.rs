//! Piecewise-affine circle maps stored through a lifting on `[0, 1]`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::circle::CirclePoint;
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("{breakpoints} breakpoints but {values} values")]
    LengthMismatch { breakpoints: usize, values: usize },
    #[error("a map needs at least two breakpoints")]
    TooFewPoints,
    #[error("breakpoints must start at 0 and end at 1")]
    BadEndpoints,
    #[error("breakpoints not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("lifting increment {0} over one period is not an integer")]
    NonIntegerDegree(String),
    #[error("segment {index} has zero slope")]
    ZeroSlope { index: usize },
    #[error("degree {0} does not fit in 64 bits")]
    DegreeOverflow(String),
}

/// A continuous piecewise-affine circle map `f`, represented by a lifting
/// `F` with `F(x_i) = v_i` on breakpoints `0 = x_0 < ... < x_k = 1`.
///
/// Construction merges adjacent segments of equal slope, so every interior
/// breakpoint is a genuine change of slope. The lifting is kept as given:
/// two maps that differ by an integer shift of their values are the same
/// circle map (see [`PaMap::circle_eq`]) but not the same value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PaMap {
    #[serde(
        rename = "breakpoints",
        serialize_with = "rational::serde_vec_str::serialize"
    )]
    breaks: Vec<Q>,
    #[serde(serialize_with = "rational::serde_vec_str::serialize")]
    values: Vec<Q>,
    #[serde(skip)]
    slopes: Vec<Q>,
    #[serde(skip)]
    degree: i64,
}

impl PaMap {
    pub fn new(breakpoints: Vec<Q>, values: Vec<Q>) -> Result<Self, MapError> {
        if breakpoints.len() != values.len() {
            return Err(MapError::LengthMismatch {
                breakpoints: breakpoints.len(),
                values: values.len(),
            });
        }
        if breakpoints.len() < 2 {
            return Err(MapError::TooFewPoints);
        }
        if !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
            return Err(MapError::BadEndpoints);
        }
        for (i, w) in breakpoints.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(MapError::NotIncreasing { index: i + 1 });
            }
        }
        let increment = &values[values.len() - 1] - &values[0];
        if !rational::is_integer(&increment) {
            return Err(MapError::NonIntegerDegree(rational::format(&increment)));
        }
        let degree = increment
            .to_integer()
            .to_i64()
            .ok_or_else(|| MapError::DegreeOverflow(rational::format(&increment)))?;

        let mut slopes = Vec::with_capacity(breakpoints.len() - 1);
        for i in 0..breakpoints.len() - 1 {
            let s = (&values[i + 1] - &values[i]) / (&breakpoints[i + 1] - &breakpoints[i]);
            if s.is_zero() {
                return Err(MapError::ZeroSlope { index: i });
            }
            slopes.push(s);
        }

        // merge collinear neighbours
        let mut breaks = vec![breakpoints[0].clone()];
        let mut vals = vec![values[0].clone()];
        let mut merged_slopes: Vec<Q> = Vec::new();
        for i in 0..slopes.len() {
            if merged_slopes.last() == Some(&slopes[i]) {
                *breaks.last_mut().unwrap() = breakpoints[i + 1].clone();
                *vals.last_mut().unwrap() = values[i + 1].clone();
            } else {
                merged_slopes.push(slopes[i].clone());
                breaks.push(breakpoints[i + 1].clone());
                vals.push(values[i + 1].clone());
            }
        }

        Ok(PaMap {
            breaks,
            values: vals,
            slopes: merged_slopes,
            degree,
        })
    }

    /// Builds a map from lifted nodes `(x, F(x))` covering exactly one period
    /// `[s, s + 1]` (first and last node at `s` and `s + 1`). Nodes may live
    /// anywhere on the real line; they are folded back onto `[0, 1]` using
    /// `F(x + 1) = F(x) + deg`.
    pub fn from_lifted_nodes(mut nodes: Vec<(Q, Q)>) -> Result<Self, MapError> {
        if nodes.len() < 2 {
            return Err(MapError::TooFewPoints);
        }
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        nodes.dedup_by(|a, b| a.0 == b.0);
        let first = nodes[0].clone();
        let last = nodes[nodes.len() - 1].clone();
        if &last.0 - &first.0 != Q::one() {
            return Err(MapError::BadEndpoints);
        }
        let increment = &last.1 - &first.1;
        if !rational::is_integer(&increment) {
            return Err(MapError::NonIntegerDegree(rational::format(&increment)));
        }
        let d = increment;
        let s0 = rational::floor(&first.0);
        let shift_v = &s0 * &d;
        for node in nodes.iter_mut() {
            node.0 -= &s0;
            node.1 -= &shift_v;
        }
        // drop the duplicate period end, fold everything into [0, 1)
        nodes.pop();
        let mut folded: Vec<(Q, Q)> = nodes
            .into_iter()
            .map(|(x, v)| {
                if x >= Q::one() {
                    (x - Q::one(), v - &d)
                } else {
                    (x, v)
                }
            })
            .collect();
        folded.sort_by(|a, b| a.0.cmp(&b.0));
        if !folded[0].0.is_zero() {
            // interpolate F(0) on the segment wrapping past 1
            let (xl, vl) = folded.last().unwrap().clone();
            let (xf, vf) = (&folded[0].0 + Q::one(), &folded[0].1 + &d);
            let v1 = &vl + (&vf - &vl) * (Q::one() - &xl) / (&xf - &xl);
            folded.insert(0, (Q::zero(), v1 - &d));
        }
        let v_end = &folded[0].1 + &d;
        folded.push((Q::one(), v_end));
        let (xs, vs): (Vec<Q>, Vec<Q>) = folded.into_iter().unzip();
        PaMap::new(xs, vs)
    }

    pub fn breakpoints(&self) -> &[Q] {
        &self.breaks
    }

    pub fn values(&self) -> &[Q] {
        &self.values
    }

    pub fn slopes(&self) -> &[Q] {
        &self.slopes
    }

    pub fn segment_count(&self) -> usize {
        self.slopes.len()
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn degree_q(&self) -> Q {
        rational::int(self.degree)
    }

    pub fn min_abs_slope(&self) -> Q {
        self.slopes
            .iter()
            .map(|s| s.abs())
            .min()
            .expect("at least one segment")
    }

    /// Index of the segment `[x_i, x_{i+1})` containing `x` in `[0, 1)`.
    pub fn segment_of(&self, x: &Q) -> usize {
        let i = self.breaks.partition_point(|b| b <= x);
        i.saturating_sub(1).min(self.slopes.len() - 1)
    }

    /// Lifting on the whole real line.
    pub fn lift_eval(&self, x: &Q) -> Q {
        let n = rational::floor(x);
        let t = x - &n;
        let i = self.segment_of(&t);
        &self.values[i] + &self.slopes[i] * (&t - &self.breaks[i]) + n * self.degree_q()
    }

    pub fn eval(&self, x: &CirclePoint) -> CirclePoint {
        CirclePoint::new(self.lift_eval(x.value()))
    }

    /// Lifted nodes `(x_i + j, F(x_i + j))` lying in `[lo, hi]`, sorted.
    pub fn lifted_nodes_in(&self, lo: &Q, hi: &Q) -> Vec<(Q, Q)> {
        let d = self.degree_q();
        // the node at 1 duplicates the node at 0 of the next period
        let nodes = &self.breaks[..self.breaks.len() - 1];
        let mut out = Vec::new();
        let mut j = rational::floor(lo);
        let j_end = rational::floor(hi);
        while j <= j_end {
            let a = lo - &j;
            let b = hi - &j;
            let first = nodes.partition_point(|x| x < &a);
            let last = nodes.partition_point(|x| x <= &b);
            let shift = &j * &d;
            for (x, v) in nodes[first..last].iter().zip(&self.values[first..last]) {
                out.push((x + &j, v + &shift));
            }
            j += Q::one();
        }
        out
    }

    /// Lifted nodes covering `[lo, hi]` including both ends, suitable for
    /// splicing into [`PaMap::from_lifted_nodes`].
    pub fn lifted_path(&self, lo: &Q, hi: &Q) -> Vec<(Q, Q)> {
        let mut nodes = vec![(lo.clone(), self.lift_eval(lo))];
        for n in self.lifted_nodes_in(lo, hi) {
            if &n.0 > lo && &n.0 < hi {
                nodes.push(n);
            }
        }
        nodes.push((hi.clone(), self.lift_eval(hi)));
        nodes
    }

    /// `self ∘ inner`, exact.
    pub fn compose(&self, inner: &PaMap) -> PaMap {
        let mut nodes: Vec<(Q, Q)> = Vec::new();
        for i in 0..inner.segment_count() {
            let (xa, va) = (&inner.breaks[i], &inner.values[i]);
            let s = &inner.slopes[i];
            nodes.push((xa.clone(), self.lift_eval(va)));
            let vb = &inner.values[i + 1];
            let (lo, hi) = if va < vb { (va, vb) } else { (vb, va) };
            for (y, fy) in self.lifted_nodes_in(lo, hi) {
                if &y > lo && &y < hi {
                    let x = xa + (&y - va) / s;
                    nodes.push((x, fy));
                }
            }
        }
        let end = Q::one();
        nodes.push((end.clone(), self.lift_eval(&inner.lift_eval(&end))));
        nodes.sort_by(|a, b| a.0.cmp(&b.0));
        nodes.dedup_by(|a, b| a.0 == b.0);
        let (xs, vs): (Vec<Q>, Vec<Q>) = nodes.into_iter().unzip();
        PaMap::new(xs, vs).expect("composition of valid maps is valid")
    }

    /// True when both liftings describe the same circle map, i.e. they share
    /// breakpoints and differ by a constant integer.
    pub fn circle_eq(&self, other: &PaMap) -> bool {
        if self.breaks != other.breaks || self.slopes != other.slopes {
            return false;
        }
        rational::is_integer(&(&self.values[0] - &other.values[0]))
    }

    /// Copy of the map with the lifting shifted so `F(0)` lies in `[0, 1)`.
    pub fn with_reduced_lift(&self) -> PaMap {
        let shift = rational::floor(&self.values[0]);
        if shift.is_zero() {
            return self.clone();
        }
        let mut m = self.clone();
        for v in m.values.iter_mut() {
            *v -= &shift;
        }
        m
    }

    pub fn to_float(&self) -> FloatMap {
        FloatMap {
            breaks: self.breaks.iter().map(rational::to_f64).collect(),
            values: self.values.iter().map(rational::to_f64).collect(),
            slopes: self.slopes.iter().map(rational::to_f64).collect(),
            degree: self.degree as f64,
        }
    }

    /// Identity-degree rotation `x ↦ x + alpha`.
    pub fn rotation(alpha: &Q) -> PaMap {
        let a = rational::frac(alpha);
        PaMap::new(vec![Q::zero(), Q::one()], vec![a.clone(), a + Q::one()])
            .expect("rotation is a valid map")
    }

    /// Integer part of the lifted values, used when reporting.
    pub fn lift_offset(&self) -> BigInt {
        rational::floor_int(&self.values[0])
    }
}

/// Double-precision copy of a [`PaMap`] for long orbit statistics.
#[derive(Debug, Clone)]
pub struct FloatMap {
    breaks: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    degree: f64,
}

impl FloatMap {
    pub fn eval(&self, x: f64) -> f64 {
        let x = x - x.floor();
        let i = self
            .breaks
            .partition_point(|b| *b <= x)
            .saturating_sub(1)
            .min(self.slopes.len() - 1);
        let y = self.values[i] + self.slopes[i] * (x - self.breaks[i]);
        let r = y - y.floor();
        // rounding can land exactly on 1.0
        if r >= 1.0 {
            0.0
        } else {
            r
        }
    }

    pub fn degree(&self) -> f64 {
        self.degree
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::rational::{int, ratio};

    #[test]
    fn tent_evaluation() {
        let t = examples::tent();
        assert_eq!(
            t.eval(&CirclePoint::new(ratio(1, 4))),
            CirclePoint::new(ratio(1, 2))
        );
        assert_eq!(t.lift_eval(&ratio(3, 2)), int(1));
        assert_eq!(t.degree(), 0);
    }

    #[test]
    fn slope_five_map_values() {
        let g = examples::slope_five();
        assert_eq!(g.eval(&CirclePoint::zero()), CirclePoint::zero());
        assert_eq!(
            g.eval(&CirclePoint::new(ratio(3, 10))),
            CirclePoint::new(ratio(1, 2))
        );
        assert_eq!(g.lift_eval(&ratio(6, 5)), int(1));
        assert_eq!(g.lift_eval(&ratio(4, 5)), int(3));
        assert_eq!(g.degree(), 1);
    }

    #[test]
    fn rotation_degree() {
        assert_eq!(PaMap::rotation(&ratio(1, 3)).degree(), 1);
    }

    #[test]
    fn validation_errors() {
        let q = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| ratio(n, d)).collect::<Vec<_>>();
        assert_eq!(
            PaMap::new(q(&[(0, 1), (1, 2), (1, 1)]), q(&[(0, 1), (1, 1)])),
            Err(MapError::LengthMismatch {
                breakpoints: 3,
                values: 2
            })
        );
        assert_eq!(
            PaMap::new(q(&[(0, 1), (1, 1)]), q(&[(0, 1), (1, 2)])),
            Err(MapError::NonIntegerDegree("1/2".into()))
        );
        assert_eq!(
            PaMap::new(q(&[(0, 1), (1, 2), (1, 1)]), q(&[(0, 1), (0, 1), (1, 1)])),
            Err(MapError::ZeroSlope { index: 0 })
        );
        assert_eq!(
            PaMap::new(
                q(&[(0, 1), (1, 2), (1, 2), (1, 1)]),
                q(&[(0, 1), (1, 1), (1, 1), (0, 1)])
            ),
            Err(MapError::NotIncreasing { index: 2 })
        );
        assert_eq!(
            PaMap::new(q(&[(1, 8), (1, 1)]), q(&[(0, 1), (1, 1)])),
            Err(MapError::BadEndpoints)
        );
    }

    #[test]
    fn collinear_segments_merge() {
        let q = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| ratio(n, d)).collect::<Vec<_>>();
        let m = PaMap::new(
            q(&[(0, 1), (1, 4), (1, 2), (1, 1)]),
            q(&[(0, 1), (1, 2), (1, 1), (0, 1)]),
        )
        .unwrap();
        assert_eq!(m, examples::tent());
    }

    #[test]
    fn lifted_nodes_fold_back() {
        // tent shifted by a quarter period: nodes on [1/4, 5/4]
        let t = examples::tent();
        let nodes = t.lifted_path(&ratio(1, 4), &ratio(5, 4));
        let m = PaMap::from_lifted_nodes(nodes).unwrap();
        assert_eq!(m, t);
    }

    #[test]
    fn compose_with_rotations() {
        let g = examples::slope_five();
        let r = PaMap::rotation(&ratio(1, 7));
        let h = r.compose(&g.compose(&r));
        assert_eq!(h.degree(), g.degree());
        for k in 0..20 {
            let x = CirclePoint::new(ratio(k, 20));
            let want = g.eval(&x.shift(&ratio(1, 7))).shift(&ratio(1, 7));
            assert_eq!(h.eval(&x), want);
        }
    }

    #[test]
    fn float_copy_agrees_on_dyadics() {
        let t = examples::tent().to_float();
        assert_eq!(t.eval(0.25), 0.5);
        assert_eq!(t.eval(0.75), 0.5);
        assert_eq!(t.eval(0.5), 0.0);
    }
}

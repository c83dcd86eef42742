//! Exact Lebesgue measure-preservation check for piecewise-affine maps.
//!
//! A piecewise-affine `f` with nonzero slopes preserves Lebesgue measure iff
//! `Σ_{x ∈ F⁻¹(y)} 1/|F'(x)| = 1` for every `y` outside the finite set of
//! breakpoint images. The set of branches hit by `y` is constant between
//! consecutive breakpoint images, so one sample per cell decides the whole
//! circle.

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::circle::CirclePoint;
use crate::map::PaMap;
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureCheck {
    Preserving,
    Violated { witness: CirclePoint, branch_sum: Q },
}

impl Serialize for MeasureCheck {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            MeasureCheck::Preserving => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("measure_preserving", &true)?;
                m.end()
            }
            MeasureCheck::Violated {
                witness,
                branch_sum,
            } => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("measure_preserving", &false)?;
                m.serialize_entry("witness", witness)?;
                m.serialize_entry("branch_sum", &rational::format(branch_sum))?;
                m.end()
            }
        }
    }
}

impl MeasureCheck {
    pub fn is_preserving(&self) -> bool {
        matches!(self, MeasureCheck::Preserving)
    }
}

/// `Σ 1/|F'(x)|` over all preimages of `y`. Meaningful for `y` outside the
/// breakpoint images, where every preimage sits inside a segment.
pub fn branch_sum(f: &PaMap, y: &CirclePoint) -> Q {
    let y = y.value();
    let vs = f.values();
    let mut total = Q::zero();
    for (i, s) in f.slopes().iter().enumerate() {
        let (lo, hi) = if vs[i] < vs[i + 1] {
            (&vs[i], &vs[i + 1])
        } else {
            (&vs[i + 1], &vs[i])
        };
        // integers j with lo < y + j < hi
        let j_min = rational::floor_int(&(lo - y)) + 1;
        let j_max = rational::ceil_int(&(hi - y)) - 1;
        if j_max >= j_min {
            let count: num_bigint::BigInt = j_max - j_min + 1;
            let count = count.to_i64().expect("branch count fits");
            total += rational::int(count) / s.abs();
        }
    }
    total
}

/// Breakpoint images reduced mod 1, sorted and deduplicated.
pub fn value_cuts(f: &PaMap) -> Vec<Q> {
    let mut cuts: Vec<Q> = f.values().iter().map(rational::frac).collect();
    cuts.sort();
    cuts.dedup();
    cuts
}

/// One sample point inside each cell of the circle cut at `cuts`.
pub fn cell_midpoints(cuts: &[Q]) -> Vec<CirclePoint> {
    let mut mids = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        mids.push(CirclePoint::new((&w[0] + &w[1]) / rational::int(2)));
    }
    let wrap = (&cuts[cuts.len() - 1] + &cuts[0] + Q::one()) / rational::int(2);
    mids.push(CirclePoint::new(wrap));
    mids
}

pub fn verify_measure_preserving(f: &PaMap) -> MeasureCheck {
    let cuts = value_cuts(f);
    for y in cell_midpoints(&cuts) {
        let sum = branch_sum(f, &y);
        if !sum.is_one() {
            return MeasureCheck::Violated {
                witness: y,
                branch_sum: sum,
            };
        }
    }
    MeasureCheck::Preserving
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::rational::ratio;

    #[test]
    fn catalog_maps() {
        assert!(verify_measure_preserving(&examples::tent()).is_preserving());
        assert!(verify_measure_preserving(&examples::valley()).is_preserving());
        assert!(verify_measure_preserving(&examples::slope_five()).is_preserving());
        assert!(verify_measure_preserving(&examples::inv3()).is_preserving());
        assert!(verify_measure_preserving(&PaMap::rotation(&ratio(1, 3))).is_preserving());
    }

    #[test]
    fn c3_is_rejected_with_witness() {
        match verify_measure_preserving(&examples::c3()) {
            MeasureCheck::Violated {
                witness,
                branch_sum,
            } => {
                assert!(witness.value() > &ratio(0, 1) && witness.value() < &ratio(1, 2));
                assert_eq!(branch_sum, ratio(1, 2));
            }
            MeasureCheck::Preserving => panic!("c3 must be rejected"),
        }
        assert_eq!(
            branch_sum(&examples::c3(), &CirclePoint::new(ratio(3, 4))),
            ratio(3, 2)
        );
    }

    #[test]
    fn single_cut_point() {
        // rotations have one breakpoint image, so one cell wrapping the circle
        let r = PaMap::rotation(&ratio(2, 7));
        assert_eq!(value_cuts(&r), vec![ratio(2, 7)]);
        assert_eq!(cell_midpoints(&value_cuts(&r)).len(), 1);
    }
}

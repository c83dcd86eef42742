//! Images and preimages of arcs, and the uniform distance between maps.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::circle::{Arc, CirclePoint};
use crate::map::PaMap;
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("preimage of {0} has no non-degenerate component")]
    NoComponent(String),
}

/// Exact image `f(A)`. Returns the full circle once the lifted image spans
/// at least one period.
pub fn image_of_arc(f: &PaMap, arc: &Arc) -> Arc {
    let (a, b) = arc.lifted();
    let (lo, hi) = lifted_range(f, &a, &b);
    let span = &hi - &lo;
    if span >= Q::one() {
        return Arc::full();
    }
    Arc::new(CirclePoint::new(lo), span).expect("non-degenerate image of a non-degenerate arc")
}

/// `(min F, max F)` over the lifted interval `[a, b]`.
pub fn lifted_range(f: &PaMap, a: &Q, b: &Q) -> (Q, Q) {
    let fa = f.lift_eval(a);
    let fb = f.lift_eval(b);
    let mut lo = rational::min(&fa, &fb);
    let mut hi = rational::max(&fa, &fb);
    for (_, v) in f.lifted_nodes_in(a, b) {
        if v < lo {
            lo = v;
        } else if v > hi {
            hi = v;
        }
    }
    (lo, hi)
}

/// Merges a list of closed intervals; touching intervals are joined.
pub fn merge_intervals(mut ivs: Vec<(Q, Q)>) -> Vec<(Q, Q)> {
    ivs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Q, Q)> = Vec::with_capacity(ivs.len());
    for (s, e) in ivs {
        match out.last_mut() {
            Some(last) if s <= last.1 => {
                if e > last.1 {
                    last.1 = e;
                }
            }
            _ => out.push((s, e)),
        }
    }
    out
}

/// Preimage of a union of closed intervals of `[0, 1]` (sorted, disjoint,
/// read periodically) as merged non-degenerate intervals of `[0, 1]`.
pub fn preimage_intervals(f: &PaMap, targets: &[(Q, Q)]) -> Vec<(Q, Q)> {
    let mut out = Vec::new();
    if targets.is_empty() {
        return out;
    }
    let xs = f.breakpoints();
    let vs = f.values();
    let slopes = f.slopes();
    for i in 0..f.segment_count() {
        let (va, vb) = (&vs[i], &vs[i + 1]);
        let (lo, hi) = if va < vb { (va, vb) } else { (vb, va) };
        let mut j = rational::floor(lo) - Q::one();
        let j_end = rational::floor(hi);
        while j <= j_end {
            let lo_rel = lo - &j;
            let hi_rel = hi - &j;
            let first = targets.partition_point(|t| t.1 <= lo_rel);
            for t in &targets[first..] {
                if t.0 >= hi_rel {
                    break;
                }
                let y0 = rational::max(&(&t.0 + &j), lo);
                let y1 = rational::min(&(&t.1 + &j), hi);
                if y0 < y1 {
                    let x0 = &xs[i] + (&y0 - va) / &slopes[i];
                    let x1 = &xs[i] + (&y1 - va) / &slopes[i];
                    if x0 < x1 {
                        out.push((x0, x1));
                    } else {
                        out.push((x1, x0));
                    }
                }
            }
            j += Q::one();
        }
    }
    merge_intervals(out)
}

/// Turns merged intervals of `[0, 1]` into circle arcs, joining the pieces
/// that meet at 0.
pub fn intervals_to_arcs(mut ivs: Vec<(Q, Q)>) -> Vec<Arc> {
    if ivs.is_empty() {
        return Vec::new();
    }
    if ivs.len() == 1 && ivs[0].0.is_zero() && ivs[0].1.is_one() {
        return vec![Arc::full()];
    }
    if ivs.len() > 1 && ivs[0].0.is_zero() && ivs[ivs.len() - 1].1.is_one() {
        let head = ivs.remove(0);
        let last = ivs.last_mut().unwrap();
        last.1 = Q::one() + head.1;
    }
    ivs.into_iter()
        .map(|(s, e)| {
            let len = &e - &s;
            Arc::new(CirclePoint::new(s), len).expect("non-degenerate component")
        })
        .collect()
}

/// Non-degenerate connected components of `f⁻¹(A)`.
pub fn preimage_components(f: &PaMap, arc: &Arc) -> Vec<Arc> {
    if arc.is_full() {
        return vec![Arc::full()];
    }
    let mut comps = intervals_to_arcs(preimage_intervals(f, &arc.to_intervals()));
    comps.sort_by(|a, b| a.start().cmp(b.start()));
    comps
}

/// Largest circle distance between two components of `f⁻¹(A)`; zero when
/// there is a single component.
pub fn preimage_spread(f: &PaMap, arc: &Arc) -> Result<Q, GeometryError> {
    let comps = preimage_components(f, arc);
    if comps.is_empty() {
        return Err(GeometryError::NoComponent(arc.to_string()));
    }
    let mut best = Q::zero();
    for i in 0..comps.len() {
        for j in i + 1..comps.len() {
            let d = comps[i].distance(&comps[j]);
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// All `x` with `f(x) = y`, sorted.
pub fn point_preimages(f: &PaMap, y: &CirclePoint) -> Vec<CirclePoint> {
    let xs = f.breakpoints();
    let vs = f.values();
    let mut out = Vec::new();
    for (i, s) in f.slopes().iter().enumerate() {
        let (lo, hi) = if vs[i] < vs[i + 1] {
            (&vs[i], &vs[i + 1])
        } else {
            (&vs[i + 1], &vs[i])
        };
        let mut t = y.value() + Q::from_integer(rational::ceil_int(&(lo - y.value())));
        while &t <= hi {
            out.push(CirclePoint::new(&xs[i] + (&t - &vs[i]) / s));
            t += Q::one();
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Uniform distance `sup_x d(f(x), g(x))` with the arc-length metric on the
/// circle.
///
/// On each cell of the common refinement the lifted difference `D = F - G`
/// is affine, and `x ↦ dist(D(x), ℤ)` only bends where `D` crosses an
/// integer or a half-integer. The maximum over a cell is therefore `1/2` if
/// `D` reaches a half-integer there, and otherwise sits at a cell endpoint.
pub fn sup_distance(f: &PaMap, g: &PaMap) -> Q {
    let mut grid: Vec<Q> = f
        .breakpoints()
        .iter()
        .chain(g.breakpoints())
        .cloned()
        .collect();
    grid.sort();
    grid.dedup();
    let half = rational::half();
    let diff = |x: &Q| f.lift_eval(x) - g.lift_eval(x);
    let mut best = Q::zero();
    let mut prev = diff(&grid[0]);
    for x in &grid[1..] {
        let d_left = prev.clone();
        let d_right = diff(x);
        let (lo, hi) = if d_left <= d_right {
            (&d_left, &d_right)
        } else {
            (&d_right, &d_left)
        };
        // smallest half-integer >= lo
        let k = rational::ceil_int(&(lo - &half));
        let h = Q::from_integer(k) + &half;
        if &h <= hi {
            return half;
        }
        for d in [&d_left, &d_right] {
            let v = rational::dist_to_int(d);
            if v > best {
                best = v;
            }
        }
        prev = d_right;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::rational::ratio;

    fn arc(s: (i64, i64), len: (i64, i64)) -> Arc {
        Arc::new(CirclePoint::new(ratio(s.0, s.1)), ratio(len.0, len.1)).unwrap()
    }

    #[test]
    fn tent_images() {
        let t = examples::tent();
        assert_eq!(image_of_arc(&t, &arc((1, 4), (1, 2))), arc((1, 2), (1, 2)));
        assert_eq!(image_of_arc(&t, &arc((0, 1), (1, 4))), arc((0, 1), (1, 2)));
    }

    #[test]
    fn slope_five_branch_covers_circle() {
        let g = examples::slope_five();
        assert!(image_of_arc(&g, &arc((1, 5), (1, 5))).is_full());
    }

    #[test]
    fn tent_preimage_joins_across_zero() {
        let t = examples::tent();
        let comps = preimage_components(&t, &arc((0, 1), (1, 2)));
        assert_eq!(comps, vec![arc((3, 4), (1, 2))]);
        assert_eq!(
            preimage_spread(&t, &arc((0, 1), (1, 2))).unwrap(),
            ratio(0, 1)
        );
        assert_eq!(preimage_components(&t, &Arc::full()), vec![Arc::full()]);
    }

    #[test]
    fn slope_five_preimage_of_arc_at_critical_value() {
        // the turning point 1/5 maps onto the endpoint 0 of the target, so the
        // two pieces on either side of it form a single closed component
        let g = examples::slope_five();
        let a = arc((0, 1), (1, 10));
        let comps = preimage_components(&g, &a);
        assert_eq!(
            comps,
            vec![
                arc((9, 50), (1, 25)),
                arc((2, 5), (1, 50)),
                arc((3, 5), (1, 50)),
                arc((49, 50), (1, 50)),
            ]
        );
        let total: Q = comps.iter().map(|c| c.length().clone()).sum();
        assert_eq!(total, ratio(1, 10));
        assert_eq!(preimage_spread(&g, &a).unwrap(), ratio(2, 5));
    }

    #[test]
    fn slope_five_preimage_of_interior_arc_has_five_laps() {
        let g = examples::slope_five();
        let a = arc((1, 20), (1, 10));
        let comps = preimage_components(&g, &a);
        assert_eq!(comps.len(), 5);
        assert!(comps.iter().all(|c| c.length() == &ratio(1, 50)));
    }

    #[test]
    fn preimage_without_components() {
        // rotation by 1/2 hits every arc, so use an arc missed by nothing;
        // an empty preimage only arises for non-surjective maps
        let squash = PaMap::new(
            vec![ratio(0, 1), ratio(1, 2), ratio(1, 1)],
            vec![ratio(0, 1), ratio(1, 4), ratio(0, 1)],
        )
        .unwrap();
        let a = arc((1, 2), (1, 4));
        assert!(preimage_components(&squash, &a).is_empty());
        assert!(matches!(
            preimage_spread(&squash, &a),
            Err(GeometryError::NoComponent(_))
        ));
    }

    #[test]
    fn slope_five_zeros() {
        let pre = point_preimages(&examples::slope_five(), &CirclePoint::zero());
        let expected: Vec<CirclePoint> = (0..5).map(|k| CirclePoint::new(ratio(k, 5))).collect();
        assert_eq!(pre, expected);
    }

    #[test]
    fn distance_to_self_and_rotation() {
        let g = examples::slope_five();
        assert_eq!(sup_distance(&g, &g), ratio(0, 1));
        let shifted = PaMap::rotation(&ratio(1, 8)).compose(&g);
        assert_eq!(sup_distance(&shifted, &g), ratio(1, 8));
        let far = PaMap::rotation(&ratio(7, 8)).compose(&g);
        assert_eq!(sup_distance(&far, &g), ratio(1, 8));
    }

    #[test]
    fn tent_against_slope_five_matches_dense_sampling() {
        let t = examples::tent();
        let g = examples::slope_five();
        let rho = sup_distance(&t, &g);
        let n = 2000;
        let mut sampled = Q::zero();
        for k in 0..n {
            let x = CirclePoint::new(ratio(k, n));
            let d = t.eval(&x).distance(&g.eval(&x));
            if d > sampled {
                sampled = d;
            }
        }
        assert!(sampled <= rho);
        assert_eq!(rho, ratio(1, 2));
        assert_eq!(sampled, rho);
    }
}

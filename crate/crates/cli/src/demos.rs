//! The worked examples behind `pacircle examples`.

use pacircle::critical::critical_data;
use pacircle::geometry::image_of_arc;
use pacircle::rational::{self, ratio, Q};
use pacircle::rotor::{
    is_leo, leo_time, rotate, rotation_periodic_set, turning_points_in, LeoTime,
    PeriodicArcWitness, RotationPair, RotorError,
};
use pacircle::{examples, verify_measure_preserving, Arc, CirclePoint, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubarcTime {
    pub arc: Arc,
    pub leo_time: LeoTime,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TentInvariant {
    pub alpha: CirclePoint,
    pub beta: CirclePoint,
    /// `[-2β - α, 1 + α]`.
    pub arc: Arc,
    pub image: Arc,
    pub invariant: bool,
    pub subarcs: Vec<SubarcTime>,
}

/// Invariant arc of the rotated tent map; `None` when the formula does not
/// give a proper arc for this `(α, β)`.
pub fn tent_invariant(alpha: &Q, beta: &Q, max_n: usize) -> Option<TentInvariant> {
    let r = RotationPair::new(alpha.clone(), beta.clone());
    let t = rotate(&examples::tent(), &r);
    let a = -(beta * rational::int(2)) - alpha;
    let b = Q::from_integer(1.into()) + alpha;
    let len = &b - &a;
    let arc = Arc::new(CirclePoint::new(a), len.clone()).ok()?;
    if arc.is_full() {
        return None;
    }
    let image = image_of_arc(&t, &arc);
    let (lo, _) = arc.lifted();
    // the middle piece, a short piece in the middle and both end pieces
    let pieces = [
        (ratio(0, 1), ratio(1, 1)),
        (ratio(1, 4), ratio(1, 2)),
        (ratio(15, 32), ratio(1, 16)),
        (ratio(0, 1), ratio(1, 64)),
        (ratio(63, 64), ratio(1, 64)),
    ];
    let subarcs = pieces
        .iter()
        .map(|(off, frac)| {
            let sub = Arc::new(CirclePoint::new(&lo + off * &len), frac * &len).expect("subarc");
            SubarcTime {
                leo_time: leo_time(&t, &sub, max_n),
                arc: sub,
            }
        })
        .collect();
    Some(TentInvariant {
        alpha: r.alpha,
        beta: r.beta,
        invariant: image == arc,
        arc,
        image,
        subarcs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridCell {
    pub alpha: CirclePoint,
    pub beta: CirclePoint,
    /// Largest onto time over the sampled arcs, `None` if one timed out.
    pub max_leo_time: Option<usize>,
    /// Smallest `λ(f(A)) / λ(A)` over non-full iterates meeting fewer than
    /// three turning points.
    #[serde(with = "rational::serde_opt_str")]
    pub min_growth: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeFive {
    pub measure_preserving: bool,
    pub leo: bool,
    pub complete: bool,
    pub critical_values: Vec<CirclePoint>,
    pub arc_length: String,
    pub arcs_per_cell: usize,
    pub grid: Vec<GridCell>,
    pub all_onto: bool,
    pub growth_bound: String,
    pub growth_bound_holds: bool,
}

pub const SLOPE_FIVE_ARCS: usize = 20;
const SLOPE_FIVE_MAX_N: usize = 100;

pub fn slope_five(seed: u64) -> SlopeFive {
    let g = examples::slope_five();
    let decision = is_leo(&g, usize::MAX).expect("slope is 5");
    let cd = critical_data(&g);
    let len = ratio(1, 1 << 10);
    let bound = ratio(5, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let arcs: Vec<Arc> = (0..SLOPE_FIVE_ARCS)
        .map(|_| {
            let s = ratio(rng.random_range(0..1 << 20), 1 << 20);
            Arc::new(CirclePoint::new(s), len.clone()).expect("short arc")
        })
        .collect();
    let mut grid = Vec::new();
    for i in 0..5 {
        for j in 0..5 {
            let r = RotationPair::new(ratio(i, 5), ratio(j, 5));
            let h = rotate(&g, &r);
            let mut max_time = Some(0);
            let mut min_growth: Option<Q> = None;
            for a in &arcs {
                match leo_time(&h, a, SLOPE_FIVE_MAX_N) {
                    LeoTime::Onto { n } => max_time = max_time.map(|m: usize| m.max(n)),
                    LeoTime::Timeout { .. } => max_time = None,
                }
                let mut cur = a.clone();
                for _ in 0..SLOPE_FIVE_MAX_N {
                    let next = image_of_arc(&h, &cur);
                    if next.is_full() {
                        break;
                    }
                    if turning_points_in(&h, &cur) < 3 {
                        let q = next.length() / cur.length();
                        if min_growth.as_ref().is_none_or(|m| &q < m) {
                            min_growth = Some(q);
                        }
                    }
                    cur = next;
                }
            }
            grid.push(GridCell {
                alpha: r.alpha,
                beta: r.beta,
                max_leo_time: max_time,
                min_growth,
            });
        }
    }
    SlopeFive {
        measure_preserving: verify_measure_preserving(&g).is_preserving(),
        leo: decision.leo,
        complete: decision.complete,
        critical_values: cd.distinct_values(),
        arc_length: rational::format(&len),
        arcs_per_cell: SLOPE_FIVE_ARCS,
        all_onto: grid.iter().all(|c| c.max_leo_time.is_some()),
        growth_bound_holds: grid
            .iter()
            .all(|c| c.min_growth.as_ref().is_none_or(|m| m >= &bound)),
        growth_bound: rational::format(&bound),
        grid,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inv3 {
    pub measure_preserving: bool,
    pub critical_values: Vec<CirclePoint>,
    pub leo: bool,
    pub witness: Option<PeriodicArcWitness>,
    pub rotation_set: Vec<CirclePoint>,
    pub candidates: usize,
    pub complete: bool,
}

pub fn inv3(strategy: Strategy) -> Result<Inv3, RotorError> {
    let f = examples::inv3();
    let decision = is_leo(&f, usize::MAX)?;
    let set = rotation_periodic_set(&f, usize::MAX, strategy)?;
    Ok(Inv3 {
        measure_preserving: verify_measure_preserving(&f).is_preserving(),
        critical_values: critical_data(&f).distinct_values(),
        leo: decision.leo,
        witness: decision.witness,
        rotation_set: set.betas(),
        candidates: set.candidates,
        complete: set.complete && decision.complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tent_values() {
        let t = tent_invariant(&ratio(-1, 8), &ratio(-3, 32), 200).unwrap();
        assert!(t.invariant);
        assert_eq!(t.arc.start(), &CirclePoint::new(ratio(5, 16)));
        assert_eq!(t.arc.end(), CirclePoint::new(ratio(7, 8)));
        assert!(t
            .subarcs
            .iter()
            .all(|s| s.leo_time == LeoTime::Timeout { max_n: 200 }));
    }

    #[test]
    fn inv3_half() {
        let r = inv3(Strategy::Sequential).unwrap();
        assert!(!r.leo);
        assert_eq!(r.witness.unwrap().period, 1);
        assert!(r.rotation_set.contains(&CirclePoint::zero()));
    }
}

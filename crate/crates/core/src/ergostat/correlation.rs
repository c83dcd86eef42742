//! Exact correlations `λ(f⁻ⁿA ∩ B) − λ(A)λ(B)` from iterated preimages.

use num_traits::Zero;
use thiserror::Error;

use super::arc_measure;
use crate::circle::Arc;
use crate::geometry::preimage_intervals;
use crate::map::PaMap;
use crate::rational::{self, Q};

pub const DEFAULT_COMPONENT_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErgoError {
    /// `depth` is the first preimage depth whose component count exceeded
    /// the budget.
    #[error("preimage component budget {budget} exceeded at depth {depth}")]
    BudgetExceeded { depth: usize, budget: usize },
}

/// λ of the overlap of two sorted, disjoint interval lists in `[0, 1]`.
fn overlap(a: &[(Q, Q)], b: &[(Q, Q)]) -> Q {
    let mut total = Q::zero();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let lo = rational::max(&a[i].0, &b[j].0);
        let hi = rational::min(&a[i].1, &b[j].1);
        if lo < hi {
            total += hi - lo;
        }
        if a[i].1 < b[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    total
}

fn sorted_intervals(a: &Arc) -> Vec<(Q, Q)> {
    let mut v = a.to_intervals();
    v.sort();
    v
}

/// Correlations for `n = 0, …, depth`. Stops early with the partial series
/// when a preimage has more than `budget` components.
pub fn correlation_series(
    f: &PaMap,
    a: &Arc,
    b: &Arc,
    depth: usize,
    budget: usize,
) -> (Vec<Q>, Option<ErgoError>) {
    let base = arc_measure(a) * arc_measure(b);
    let bs = sorted_intervals(b);
    let mut cur = sorted_intervals(a);
    let mut out = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        if n > 0 {
            cur = preimage_intervals(f, &cur);
            if cur.len() > budget {
                return (out, Some(ErgoError::BudgetExceeded { depth: n, budget }));
            }
        }
        out.push(overlap(&cur, &bs) - &base);
    }
    (out, None)
}

/// `λ(f⁻ⁿA ∩ B) − λ(A)λ(B)`.
pub fn exact_correlation(
    f: &PaMap,
    a: &Arc,
    b: &Arc,
    n: usize,
    budget: usize,
) -> Result<Q, ErgoError> {
    let (mut s, err) = correlation_series(f, a, b, n, budget);
    match err {
        Some(e) => Err(e),
        None => Ok(s.pop().expect("series has n + 1 terms")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle::CirclePoint;
    use crate::examples;
    use crate::rational::ratio;

    fn arc(s: (i64, i64), l: (i64, i64)) -> Arc {
        Arc::new(CirclePoint::new(ratio(s.0, s.1)), ratio(l.0, l.1)).unwrap()
    }

    #[test]
    fn tent_half() {
        let t = examples::tent();
        let a = arc((0, 1), (1, 2));
        let c = |n| exact_correlation(&t, &a, &a, n, DEFAULT_COMPONENT_BUDGET).unwrap();
        assert_eq!(c(0), ratio(1, 4));
        assert_eq!(c(1), ratio(0, 1));
    }

    #[test]
    fn full_arc_is_uncorrelated() {
        let g = examples::slope_five();
        let b = arc((1, 3), (2, 7));
        let (s, err) = correlation_series(&g, &Arc::full(), &b, 4, DEFAULT_COMPONENT_BUDGET);
        assert!(err.is_none());
        assert!(s.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn rotation_by_third() {
        // brute force: f⁻ʲA is A shifted by -j/3
        let r = PaMap::rotation(&ratio(1, 3));
        let a = arc((0, 1), (1, 2));
        let (s, _) = correlation_series(&r, &a, &a, 5, DEFAULT_COMPONENT_BUDGET);
        for (j, c) in s.iter().enumerate() {
            let shifted = a.shift(&ratio(-(j as i64), 3));
            let expect = overlap(&sorted_intervals(&shifted), &sorted_intervals(&a)) - ratio(1, 4);
            assert_eq!(c, &expect);
        }
        assert_eq!(s[1], ratio(-1, 12));
    }

    #[test]
    fn budget_is_enforced() {
        let g = examples::slope_five();
        let a = arc((0, 1), (1, 2));
        let err = exact_correlation(&g, &a, &a, 6, 100).unwrap_err();
        let ErgoError::BudgetExceeded { depth, .. } = err;
        assert!((1..=6).contains(&depth));
        let (partial, _) = correlation_series(&g, &a, &a, 6, 100);
        assert_eq!(partial.len(), depth);
    }
}

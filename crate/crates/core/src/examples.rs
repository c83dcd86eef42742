//! Named maps used throughout the documentation, tests and CLI.

use crate::map::PaMap;
use crate::rational::{ratio, Q};

fn build(points: &[(i64, i64)], values: &[(i64, i64)]) -> PaMap {
    let q = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| ratio(n, d)).collect::<Vec<Q>>();
    PaMap::new(q(points), q(values)).expect("catalog map is valid")
}

/// Full tent map: lifting `0 → 1` on `[0, 1/2]`, `1 → 0` on `[1/2, 1]`.
pub fn tent() -> PaMap {
    build(&[(0, 1), (1, 2), (1, 1)], &[(0, 1), (1, 1), (0, 1)])
}

/// Valley map `x ↦ |2x - 1|`.
pub fn valley() -> PaMap {
    build(&[(0, 1), (1, 2), (1, 1)], &[(1, 1), (0, 1), (1, 1)])
}

/// Degree-one map with slope ±5 and lifting values `1, 0, 3, 2` at
/// `0, 1/5, 4/5, 1`. Both critical values coincide at 0.
pub fn slope_five() -> PaMap {
    build(
        &[(0, 1), (1, 5), (4, 5), (1, 1)],
        &[(1, 1), (0, 1), (3, 1), (2, 1)],
    )
}

/// Slope-3 degree-one map leaving both halves `[0, 1/2]` and `[1/2, 1]`
/// invariant.
pub fn inv3() -> PaMap {
    build(
        &[(0, 1), (1, 6), (2, 6), (3, 6), (4, 6), (5, 6), (1, 1)],
        &[(0, 1), (1, 2), (0, 1), (1, 2), (1, 1), (1, 2), (1, 1)],
    )
}

/// Continuous map that does not preserve Lebesgue measure.
pub fn c3() -> PaMap {
    build(
        &[(0, 1), (1, 2), (3, 4), (1, 1)],
        &[(0, 1), (1, 1), (1, 2), (1, 1)],
    )
}

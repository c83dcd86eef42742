//! Exact infimum of `λ(h(A)) / λ(A)` over proper arcs with `h(A) ≠ S¹`.
//!
//! An arc is never worse than the preimage component containing it, so the
//! infimum runs over pairs `(m, M)` and components of `h⁻¹([m, M])`. Cut the
//! value circle at the breakpoint values `u_0 < … < u_{r-1}` and the domain
//! into atoms, maximal intervals mapped monotonically onto one value cell.
//! While `m` and `M` stay inside fixed value cells, component lengths are
//! affine in `(m, M)`, so the ratio is linear-fractional and extremal at the
//! cell corners. Two kinds of corner matter:
//!
//! * `m = u_a`, `M = u_b + j` with `0 < M - m < 1`. The components there are
//!   unions of closed atoms of the cells `a, …, b - 1`, found by a union-find
//!   sweep over `b`.
//! * `M - m → 1` with `m` or `M` pinned at `u_a`. The image tends to the whole
//!   circle and the components tend to the gaps between the points where `h`
//!   touches `u_a` and leaves it on the excluded side.
//!
//! Corners on the diagonal `M = m` are tiny arcs with at most one turning
//! point, whose ratio exceeds `min|slope| / 2`. They are skipped.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::circle::CirclePoint;
use crate::map::PaMap;
use crate::measure::value_cuts;
use crate::rational::{self, Q};

/// Side on which the excluded sliver lies when `M - m → 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutSide {
    /// `h` drops below the pinned value next to the point.
    Below,
    /// `h` rises above the pinned value next to the point.
    Above,
}

/// Points `x` with `h(x) = y` next to which `h` leaves `y` on the given side.
pub fn cut_points(h: &PaMap, y: &CirclePoint, side: CutSide) -> Vec<CirclePoint> {
    let xs = h.breakpoints();
    let vs = h.values();
    let mut out = Vec::new();
    for (i, s) in h.slopes().iter().enumerate() {
        let (lo, hi) = if vs[i] < vs[i + 1] {
            (&vs[i], &vs[i + 1])
        } else {
            (&vs[i + 1], &vs[i])
        };
        // an increasing segment is below y left of the crossing
        let keep_left_end = (side == CutSide::Below) != s.is_positive();
        let mut t = y.value() + Q::from_integer(rational::ceil_int(&(lo - y.value())));
        while &t <= hi {
            let x = &xs[i] + (&t - &vs[i]) / s;
            let ok = if keep_left_end {
                x < xs[i + 1]
            } else {
                x > xs[i]
            };
            if ok {
                out.push(CirclePoint::new(x));
            }
            t += Q::one();
        }
    }
    out.sort();
    out.dedup();
    out
}

fn largest_gap(points: &[CirclePoint]) -> Q {
    if points.len() < 2 {
        return Q::one();
    }
    let mut best = Q::zero();
    for i in 0..points.len() {
        let g = points[i].forward_to(&points[(i + 1) % points.len()]);
        if g > best {
            best = g;
        }
    }
    best
}

struct Atoms {
    /// Atoms sorted by position, as lengths over a common denominator.
    lengths: Vec<BigInt>,
    denom: BigInt,
    /// Atom indices per value cell.
    by_cell: Vec<Vec<usize>>,
}

fn atoms(h: &PaMap, u: &[Q]) -> Atoms {
    let xs = h.breakpoints();
    let vs = h.values();
    let r = u.len();
    let mut raw: Vec<(Q, Q, usize)> = Vec::new();
    for (i, s) in h.slopes().iter().enumerate() {
        let (lo, hi) = if vs[i] < vs[i + 1] {
            (&vs[i], &vs[i + 1])
        } else {
            (&vs[i + 1], &vs[i])
        };
        let mut k = rational::floor(lo);
        let mut j = u
            .binary_search(&(lo - &k))
            .expect("segment ends are breakpoint values");
        let mut p = lo.clone();
        while &p < hi {
            let cell = j;
            j += 1;
            if j == r {
                j = 0;
                k += Q::one();
            }
            let q = rational::min(&(&u[j] + &k), hi);
            let x0 = &xs[i] + (&p - &vs[i]) / s;
            let x1 = &xs[i] + (&q - &vs[i]) / s;
            let (a, b) = if x0 < x1 { (x0, x1) } else { (x1, x0) };
            raw.push((a, b, cell));
            p = q;
        }
    }
    raw.sort_by(|p, q| p.0.cmp(&q.0));
    let denom = raw
        .iter()
        .fold(BigInt::one(), |acc, (a, b, _)| acc.lcm((b - a).denom()));
    let mut by_cell = vec![Vec::new(); r];
    let mut lengths = Vec::with_capacity(raw.len());
    for (idx, (a, b, cell)) in raw.into_iter().enumerate() {
        let len = b - a;
        lengths.push(len.numer() * (&denom / len.denom()));
        by_cell[cell].push(idx);
    }
    Atoms {
        lengths,
        denom,
        by_cell,
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Smallest `(M - m) / λ(K)` over corner pairs `m = u_a`, `M = u_b + j`.
fn corner_minimum(h: &PaMap, u: &[Q]) -> Option<Q> {
    let r = u.len();
    if r < 2 {
        return None;
    }
    let at = atoms(h, u);
    let n = at.lengths.len();
    // spans u_b - u_a as integers over a common denominator
    let u_denom = u.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let u_int: Vec<BigInt> = u
        .iter()
        .map(|v| v.numer() * (&u_denom / v.denom()))
        .collect();
    // best ratio kept as span / length, compared by cross-multiplication
    let mut best: Option<(BigInt, BigInt)> = None;
    for a in 0..r {
        let mut parent: Vec<usize> = (0..n).collect();
        let mut sum: Vec<BigInt> = at.lengths.clone();
        let mut included = vec![false; n];
        let mut max_len = BigInt::zero();
        for step in 0..r - 1 {
            let c = (a + step) % r;
            for &idx in &at.by_cell[c] {
                included[idx] = true;
                for nb in [(idx + n - 1) % n, (idx + 1) % n] {
                    if included[nb] {
                        let ra = find(&mut parent, idx);
                        let rb = find(&mut parent, nb);
                        if ra != rb {
                            parent[rb] = ra;
                            let moved = std::mem::take(&mut sum[rb]);
                            sum[ra] += moved;
                        }
                    }
                }
                let root = find(&mut parent, idx);
                if sum[root] > max_len {
                    max_len = sum[root].clone();
                }
            }
            let next = (c + 1) % r;
            let mut span = &u_int[next] - &u_int[a];
            if !span.is_positive() {
                span += &u_denom;
            }
            let better = match &best {
                None => true,
                Some((bs, bl)) => &span * bl < bs * &max_len,
            };
            if better {
                best = Some((span, max_len.clone()));
            }
        }
    }
    best.map(|(span, len)| Q::new(span * &at.denom, len * &u_denom))
}

/// Exact `inf λ(h(A)) / λ(A)` over proper arcs with `h(A) ≠ S¹`, ignoring
/// arcs with at most one turning point. For a measure-preserving `h` the
/// result is at least 1.
pub fn arc_ratio_infimum(h: &PaMap) -> Q {
    let u = value_cuts(h);
    let mut best = corner_minimum(h, &u);
    for v in &u {
        let y = CirclePoint::new(v.clone());
        for side in [CutSide::Below, CutSide::Above] {
            let ratio = Q::one() / largest_gap(&cut_points(h, &y, side));
            if best.as_ref().is_none_or(|b| &ratio < b) {
                best = Some(ratio);
            }
        }
    }
    best.expect("at least one breakpoint value")
}

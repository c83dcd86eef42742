//! Splitting duplicated critical values apart.
//!
//! A minimum `c` and a maximum `c'` sharing the value `y` are handled
//! together. On the decreasing piece left of `c` a window `[c - w, c]` with
//! `F(c - w) = Y + δ` is folded three times with partition `(w - e, e/2, e/2)`
//! and the last two folds are reflected about `Y`, so the minimum moves to
//! `c - e/2` with value `Y - δ`. The mirror construction at `c'` lifts the
//! maximum to `Y' + δ`. Both reflections move the same mass `e/δ` across `y`
//! in opposite directions, so Lebesgue measure is preserved.
//!
//! When every turning point at `y` has the same type, a regular 3-fold at a
//! monotone crossing of `y` first creates a turning point of the other type
//! at `y`.

use std::collections::HashMap;

use num_traits::{One, Signed};

use super::{splice, window_perturb_unchecked, PerturbError, WindowSpec};
use crate::circle::{Arc, CirclePoint};
use crate::critical::{critical_data, CriticalData, Turn, TurnKind};
use crate::geometry::sup_distance;
use crate::map::PaMap;
use crate::measure::verify_measure_preserving;
use crate::rational::{self, Q};

const MAX_HALVINGS: u32 = 64;

pub fn separate_critical_values(f: &PaMap, epsilon: &Q) -> Result<PaMap, PerturbError> {
    if !epsilon.is_positive() {
        return Err(PerturbError::InvalidEpsilon);
    }
    if !verify_measure_preserving(f).is_preserving() {
        return Err(PerturbError::NotMeasurePreserving);
    }
    let mut h = f.clone();
    let mut budget: HashMap<CirclePoint, (usize, usize)> = HashMap::new();
    let mut step: u32 = 0;
    loop {
        let cd = critical_data(&h);
        let Some((y, group)) = largest_group(&cd) else {
            break;
        };
        let entry = budget.entry(y.clone()).or_insert((0, 2 * group.len()));
        if entry.0 >= entry.1 {
            return Err(PerturbError::IterationBound {
                value: y.to_string(),
                steps: entry.0,
            });
        }
        entry.0 += 1;
        let delta0 = epsilon / pow2(step + 3);
        let kind = group[0].kind;
        h = if group.iter().all(|t| t.kind == kind) {
            add_opposite_turn(&h, &cd, &y, kind.opposite(), delta0)?
        } else {
            let (lo, hi) = closest_pair(&group);
            split_pair(&h, &cd, &y, lo, hi, delta0)?
        };
        step += 1;
    }
    if !verify_measure_preserving(&h).is_preserving() {
        return Err(PerturbError::Internal(
            "separation broke measure preservation".into(),
        ));
    }
    if &sup_distance(&h, f) >= epsilon {
        return Err(PerturbError::Internal(
            "separation moved the map by epsilon or more".into(),
        ));
    }
    Ok(h)
}

fn pow2(n: u32) -> Q {
    Q::from_integer(num_bigint::BigInt::one() << n)
}

/// The duplicated critical value with the most turning points; ties go to the
/// smaller value.
fn largest_group(cd: &CriticalData) -> Option<(CirclePoint, Vec<Turn>)> {
    let mut groups: Vec<(CirclePoint, Vec<Turn>)> = Vec::new();
    for t in &cd.turns {
        let v = t.value();
        match groups.iter_mut().find(|g| g.0 == v) {
            Some(g) => g.1.push(t.clone()),
            None => groups.push((v, vec![t.clone()])),
        }
    }
    groups
        .into_iter()
        .filter(|g| g.1.len() > 1)
        .min_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)))
}

/// Closest (min, max) pair in the group.
fn closest_pair(group: &[Turn]) -> (&Turn, &Turn) {
    let mut best: Option<(Q, &Turn, &Turn)> = None;
    for a in group.iter().filter(|t| t.kind == TurnKind::Min) {
        for b in group.iter().filter(|t| t.kind == TurnKind::Max) {
            let d = a.point.distance(&b.point);
            if best.as_ref().is_none_or(|(bd, _, _)| &d < bd) {
                best = Some((d, a, b));
            }
        }
    }
    let (_, a, b) = best.expect("group has both kinds");
    (a, b)
}

/// True when none of `candidates` coincides with a critical value other than `y`.
fn values_free(cd: &CriticalData, y: &CirclePoint, candidates: &[CirclePoint]) -> bool {
    candidates
        .iter()
        .all(|c| c != y && !cd.critical_values.iter().any(|v| v == c))
}

/// Length of the affine piece ending at the turning point.
fn left_piece(f: &PaMap, t: &Turn) -> (Q, Q) {
    let xs = f.breakpoints();
    let k = f.segment_count();
    let i = if t.index == 0 { k - 1 } else { t.index - 1 };
    (&xs[i + 1] - &xs[i], f.slopes()[i].abs())
}

fn split_pair(
    h: &PaMap,
    cd: &CriticalData,
    y: &CirclePoint,
    min: &Turn,
    max: &Turn,
    delta0: Q,
) -> Result<PaMap, PerturbError> {
    let (len_min, s_min) = left_piece(h, min);
    let (len_max, s_max) = left_piece(h, max);
    let four = rational::int(4);
    let mut delta = delta0;
    for _ in 0..MAX_HALVINGS {
        let w_min = &delta / &s_min;
        let w_max = &delta / &s_max;
        let fits = &w_min * &four <= len_min && &w_max * &four <= len_max;
        let new_vals = [y.shift(&-&delta), y.shift(&delta)];
        if fits && values_free(cd, y, &new_vals) {
            let e = rational::min(&w_min, &w_max) / rational::int(2);
            let half_e = &e / rational::int(2);
            let c = min.point.value();
            let yc = &min.lifted_value;
            let m = max.point.value();
            let ym = &max.lifted_value;
            let nodes = vec![
                (c - &w_min, yc + &delta),
                (c - &e, yc.clone()),
                (c - &half_e, yc - &delta),
                (m - &w_max, ym - &delta),
                (m - &e, ym.clone()),
                (m - &half_e, ym + &delta),
            ];
            return Ok(splice(h, nodes)?);
        }
        delta /= rational::int(2);
    }
    Err(PerturbError::EpsilonTooSmall {
        value: y.to_string(),
        halvings: MAX_HALVINGS,
    })
}

struct Crossing {
    x: Q,
    slope: Q,
    room: Q,
    /// Fold to the left of the crossing rather than to the right.
    left: bool,
}

/// Points where the lifting crosses `y` monotonically, with the room inside
/// one segment on the side where the lifting lies below `y` (for a new
/// maximum) or above it. Turning points end up with zero room.
fn crossings(h: &PaMap, y: &CirclePoint, want: TurnKind) -> Vec<Crossing> {
    let xs = h.breakpoints();
    let vs = h.values();
    let mut out = Vec::new();
    for (i, s) in h.slopes().iter().enumerate() {
        let (lo, hi) = if vs[i] < vs[i + 1] {
            (&vs[i], &vs[i + 1])
        } else {
            (&vs[i + 1], &vs[i])
        };
        let yv = y.value();
        let mut j = Q::from_integer(rational::ceil_int(&(lo - yv)));
        while &(yv + &j) <= hi {
            let target = yv + &j;
            let x = &xs[i] + (&target - &vs[i]) / s;
            // a new maximum needs the lifting below y, i.e. left of an
            // increasing crossing or right of a decreasing one
            let left = (want == TurnKind::Max) == s.is_positive();
            let room = if left { &x - &xs[i] } else { &xs[i + 1] - &x };
            j += Q::one();
            if !room.is_positive() {
                continue;
            }
            out.push(Crossing {
                x,
                slope: s.abs(),
                room,
                left,
            });
        }
    }
    out
}

fn add_opposite_turn(
    h: &PaMap,
    cd: &CriticalData,
    y: &CirclePoint,
    want: TurnKind,
    delta0: Q,
) -> Result<PaMap, PerturbError> {
    let best = crossings(h, y, want)
        .into_iter()
        .max_by(|a, b| {
            (&a.room * &a.slope)
                .cmp(&(&b.room * &b.slope))
                .then_with(|| b.x.cmp(&a.x))
        })
        .ok_or_else(|| PerturbError::NoCrossing(y.to_string()))?;
    let two = rational::int(2);
    let mut delta = delta0;
    for _ in 0..MAX_HALVINGS {
        let w = &delta / &best.slope;
        let fresh = if want == TurnKind::Max {
            y.shift(&-&delta)
        } else {
            y.shift(&delta)
        };
        if &w * &two <= best.room && values_free(cd, y, &[fresh]) {
            let start = if best.left {
                &best.x - &w
            } else {
                best.x.clone()
            };
            let arc = Arc::new(CirclePoint::new(start), w)
                .map_err(|e| PerturbError::Internal(e.to_string()))?;
            let spec = WindowSpec::regular(arc, 3)?;
            return Ok(window_perturb_unchecked(h, &spec)?);
        }
        delta /= rational::int(2);
    }
    Err(PerturbError::EpsilonTooSmall {
        value: y.to_string(),
        halvings: MAX_HALVINGS,
    })
}

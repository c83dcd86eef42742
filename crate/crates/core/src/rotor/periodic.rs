//! Periodic arcs, the rotation set `E₁(f)`, and the leo decision.
//!
//! For min |slope| > 2 every periodic arc of minimal period `n` has its
//! endpoints on critical values, all its iterates have the same length, and
//! `n` is at most the number of turning points. Searching arcs spanned by
//! pairs of critical values therefore decides leo.

use log::debug;
use serde::Serialize;

use super::{require_slope_above_two, rotate, RotationPair, RotorError};
use crate::circle::{Arc, CirclePoint};
use crate::critical::critical_data;
use crate::geometry::{image_of_arc, point_preimages};
use crate::map::PaMap;
use crate::par::{self, Strategy};
use crate::rational::Q;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicArcWitness {
    pub arc: Arc,
    pub period: usize,
    pub orbit: Vec<Arc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodicSearch {
    pub witness: Option<PeriodicArcWitness>,
    /// Largest period examined.
    pub bound: usize,
    /// False when the caller's bound was below the number of turning points,
    /// in which case an empty result proves nothing.
    pub complete: bool,
    /// Candidates dropped because an endpoint is a turning point.
    pub skipped: Vec<Arc>,
}

/// Arcs between two distinct critical values, both orientations, sorted.
fn candidate_arcs(values: &[CirclePoint]) -> Vec<Arc> {
    let mut arcs = Vec::new();
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            arcs.push(Arc::from_endpoints(a.clone(), b).expect("distinct endpoints"));
            arcs.push(Arc::from_endpoints(b.clone(), a).expect("distinct endpoints"));
        }
    }
    arcs.sort_by(|p, q| {
        p.start()
            .cmp(q.start())
            .then_with(|| p.length().cmp(q.length()))
    });
    arcs
}

/// First return time of `arc` to itself within `bound` steps.
fn first_return(f: &PaMap, arc: &Arc, bound: usize) -> Option<Vec<Arc>> {
    let mut orbit = vec![arc.clone()];
    let mut cur = arc.clone();
    for _ in 0..bound {
        cur = image_of_arc(f, &cur);
        if cur.is_full() || cur.length() != arc.length() {
            return None;
        }
        if &cur == arc {
            return Some(orbit);
        }
        orbit.push(cur.clone());
    }
    None
}

pub fn find_periodic_arc(f: &PaMap, max_period: usize) -> Result<PeriodicSearch, RotorError> {
    require_slope_above_two(f)?;
    let cd = critical_data(f);
    let k = cd.turns.len();
    let bound = max_period.min(k);
    let mut skipped = Vec::new();
    let mut best: Option<PeriodicArcWitness> = None;
    for arc in candidate_arcs(&cd.distinct_values()) {
        let ends = [arc.start().clone(), arc.end()];
        if ends.iter().any(|e| cd.turning_points.contains(e)) {
            debug!("skipping candidate arc {arc}: endpoint is a turning point");
            skipped.push(arc);
            continue;
        }
        if let Some(orbit) = first_return(f, &arc, bound) {
            let period = orbit.len();
            // candidates are sorted by start, so only a shorter period wins
            if best.as_ref().is_none_or(|b| period < b.period) {
                best = Some(PeriodicArcWitness { arc, period, orbit });
            }
        }
    }
    Ok(PeriodicSearch {
        witness: best,
        bound,
        complete: max_period >= k,
        skipped,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeoDecision {
    pub leo: bool,
    pub witness: Option<PeriodicArcWitness>,
    pub complete: bool,
}

pub fn is_leo(f: &PaMap, max_period: usize) -> Result<LeoDecision, RotorError> {
    let s = find_periodic_arc(f, max_period)?;
    Ok(LeoDecision {
        leo: s.witness.is_none(),
        witness: s.witness,
        complete: s.complete,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationSetEntry {
    pub beta: CirclePoint,
    pub witness: PeriodicArcWitness,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RotationSet {
    pub entries: Vec<RotationSetEntry>,
    pub candidates: usize,
    pub complete: bool,
}

impl RotationSet {
    pub fn betas(&self) -> Vec<CirclePoint> {
        self.entries.iter().map(|e| e.beta.clone()).collect()
    }
}

/// Inner rotations `β` with `f(v + β) = w` for critical values `v`, `w`.
pub fn candidate_betas(f: &PaMap) -> Vec<CirclePoint> {
    let cd = critical_data(f);
    let values = cd.distinct_values();
    let mut out = Vec::new();
    for w in &values {
        for x in point_preimages(f, w) {
            for v in &values {
                out.push(CirclePoint::new(x.value() - v.value()));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

pub fn rotation_periodic_set(
    f: &PaMap,
    max_period: usize,
    strategy: Strategy,
) -> Result<RotationSet, RotorError> {
    require_slope_above_two(f)?;
    let betas = candidate_betas(f);
    let results = par::map(strategy, &betas, |b| {
        let g = rotate(f, &RotationPair::new(Q::zero(), b.value().clone()));
        find_periodic_arc(&g, max_period)
    });
    let mut entries = Vec::new();
    let mut complete = true;
    for (beta, res) in betas.iter().zip(results) {
        let s = res?;
        complete &= s.complete;
        if let Some(witness) = s.witness {
            entries.push(RotationSetEntry {
                beta: beta.clone(),
                witness,
            });
        }
    }
    Ok(RotationSet {
        entries,
        candidates: betas.len(),
        complete,
    })
}

//! Rotations `T_{α,β}(f) = r_α ∘ f ∘ r_β`, arc iteration, leo certificates
//! and the periodic-arc decision procedure.

mod certificate;
mod delta;
mod periodic;

pub use certificate::{
    eta_raw, growth_check, leo_certificate, random_arc, CertificateError, Growth, LeoCertificate,
    NotCertified,
};
pub use delta::{arc_ratio_infimum, cut_points};
pub use periodic::{
    find_periodic_arc, is_leo, rotation_periodic_set, LeoDecision, PeriodicArcWitness,
    PeriodicSearch, RotationSet, RotationSetEntry,
};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::circle::{Arc, CirclePoint};
use crate::geometry::image_of_arc;
use crate::map::PaMap;
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RotorError {
    #[error("minimum |slope| {0} does not exceed 2")]
    PreconditionSlope(String),
    #[error("input map does not preserve Lebesgue measure")]
    NotMeasurePreserving,
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RotationPair {
    pub alpha: CirclePoint,
    pub beta: CirclePoint,
}

impl RotationPair {
    pub fn new(alpha: Q, beta: Q) -> Self {
        RotationPair {
            alpha: CirclePoint::new(alpha),
            beta: CirclePoint::new(beta),
        }
    }

    pub fn identity() -> Self {
        RotationPair::new(Q::zero(), Q::zero())
    }
}

/// `r_α ∘ f ∘ r_β`, with lifting `G(x) = F(x + β) + α`.
pub fn rotate(f: &PaMap, r: &RotationPair) -> PaMap {
    let a = r.alpha.value();
    let b = r.beta.value();
    let nodes = f
        .lifted_path(b, &(b + Q::one()))
        .into_iter()
        .map(|(x, v)| (x - b, v + a))
        .collect();
    PaMap::from_lifted_nodes(nodes).expect("rotated lifting is valid")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum LeoTime {
    Onto { n: usize },
    Timeout { max_n: usize },
}

/// Smallest `n ≤ max_n` with `f^n(A) = S¹`.
pub fn leo_time(f: &PaMap, arc: &Arc, max_n: usize) -> LeoTime {
    let mut a = arc.clone();
    if a.is_full() {
        return LeoTime::Onto { n: 0 };
    }
    for n in 1..=max_n {
        a = image_of_arc(f, &a);
        if a.is_full() {
            return LeoTime::Onto { n };
        }
    }
    LeoTime::Timeout { max_n }
}

/// `A, f(A), f²(A), …` up to `max_n` images, stopping after the first full
/// circle.
pub fn arc_orbit(f: &PaMap, arc: &Arc, max_n: usize) -> Vec<Arc> {
    let mut out = vec![arc.clone()];
    while out.len() <= max_n && !out.last().unwrap().is_full() {
        out.push(image_of_arc(f, out.last().unwrap()));
    }
    out
}

/// Number of turning points of `f` in the closed arc.
pub fn turning_points_in(f: &PaMap, arc: &Arc) -> usize {
    crate::critical::turns(f)
        .iter()
        .filter(|t| arc.contains(&t.point))
        .count()
}

pub(crate) fn require_slope_above_two(f: &PaMap) -> Result<(), RotorError> {
    let s = f.min_abs_slope();
    if s <= rational::int(2) {
        return Err(RotorError::PreconditionSlope(rational::format(&s)));
    }
    Ok(())
}

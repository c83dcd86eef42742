//! Perturbations that stay inside the space of measure-preserving
//! piecewise-affine maps.

mod sample;
mod separate;

pub use sample::{sample_certified_map, sample_map, SampleConfig};
pub use separate::separate_critical_values;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::circle::Arc;
use crate::map::{MapError, PaMap};
use crate::measure::verify_measure_preserving;
use crate::rational::{self, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PerturbError {
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("input map does not preserve Lebesgue measure")]
    NotMeasurePreserving,
    #[error("epsilon must be positive")]
    InvalidEpsilon,
    #[error("epsilon too small: no admissible window near critical value {value} after {halvings} halvings")]
    EpsilonTooSmall { value: String, halvings: u32 },
    #[error("critical value {value} still duplicated after {steps} steps")]
    IterationBound { value: String, steps: usize },
    #[error("no monotone crossing of critical value {0} to fold at")]
    NoCrossing(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<MapError> for PerturbError {
    fn from(e: MapError) -> Self {
        PerturbError::Internal(e.to_string())
    }
}

/// A proper arc cut into `m` consecutive pieces of the given lengths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSpec {
    pub arc: Arc,
    pub partition: Vec<Q>,
}

impl WindowSpec {
    pub fn new(arc: Arc, partition: Vec<Q>) -> Result<Self, PerturbError> {
        let w = WindowSpec { arc, partition };
        w.validate()?;
        Ok(w)
    }

    /// `m` equal pieces.
    pub fn regular(arc: Arc, m: usize) -> Result<Self, PerturbError> {
        if m == 0 {
            return Err(PerturbError::InvalidWindow(
                "fold count must be positive".into(),
            ));
        }
        let piece = arc.length() / rational::int(m as i64);
        WindowSpec::new(arc, vec![piece; m])
    }

    pub fn fold_count(&self) -> usize {
        self.partition.len()
    }

    pub fn is_regular(&self) -> bool {
        self.partition.windows(2).all(|w| w[0] == w[1])
    }

    fn validate(&self) -> Result<(), PerturbError> {
        let bad = |s: &str| Err(PerturbError::InvalidWindow(s.into()));
        if self.arc.is_full() {
            return bad("window arc must be proper");
        }
        if self.partition.len().is_multiple_of(2) {
            return bad("fold count must be odd");
        }
        if self.partition.iter().any(|p| !p.is_positive()) {
            return bad("partition lengths must be positive");
        }
        let total: Q = self.partition.iter().sum();
        if &total != self.arc.length() {
            return bad("partition lengths must sum to the arc length");
        }
        Ok(())
    }
}

/// Replaces `f` on the window by alternating affine copies of `f|A`, the
/// first one orientation-preserving.
pub fn window_perturb(f: &PaMap, w: &WindowSpec) -> Result<PaMap, PerturbError> {
    w.validate()?;
    if !verify_measure_preserving(f).is_preserving() {
        return Err(PerturbError::NotMeasurePreserving);
    }
    Ok(window_perturb_unchecked(f, w)?)
}

pub(crate) fn window_perturb_unchecked(f: &PaMap, w: &WindowSpec) -> Result<PaMap, MapError> {
    let (a, b) = w.arc.lifted();
    let len = w.arc.length();
    let inside = f.lifted_path(&a, &b);
    let mut nodes = Vec::with_capacity(inside.len() * w.partition.len() + f.segment_count() + 2);
    let mut start = a.clone();
    for (i, piece) in w.partition.iter().enumerate() {
        let scale = piece / len;
        for (x, v) in &inside {
            let t = if i % 2 == 0 {
                &start + (x - &a) * &scale
            } else {
                &start + (&b - x) * &scale
            };
            nodes.push((t, v.clone()));
        }
        start += piece;
    }
    nodes.extend(f.lifted_path(&b, &(&a + Q::one())));
    PaMap::from_lifted_nodes(nodes)
}

/// Adds lifted nodes to `f`. Each node must lie on a segment of `f` whose
/// interior contains no other breakpoint than the added ones.
pub(crate) fn splice(f: &PaMap, extra: Vec<(Q, Q)>) -> Result<PaMap, MapError> {
    let d = f.degree_q();
    let mut nodes = f.lifted_path(&Q::zero(), &Q::one());
    for (x, v) in extra {
        let n = rational::floor(&x);
        let v = v - &n * &d;
        nodes.push((x - n, v));
    }
    nodes.sort_by(|p, q| p.0.cmp(&q.0));
    PaMap::from_lifted_nodes(nodes)
}

/// Regular `m`-fold perturbation on every cell of a partition of the circle
/// into pieces of length at most `mesh` refining the breakpoints of `f`.
pub fn boost_slope(f: &PaMap, m: usize, mesh: &Q) -> Result<PaMap, PerturbError> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(PerturbError::InvalidWindow(format!(
            "fold count must be odd and at least 3, got {m}"
        )));
    }
    if !mesh.is_positive() {
        return Err(PerturbError::InvalidWindow("mesh must be positive".into()));
    }
    let xs = f.breakpoints();
    let vs = f.values();
    let mq = rational::int(m as i64);
    let mut nodes = Vec::new();
    for i in 0..f.segment_count() {
        let seg = &xs[i + 1] - &xs[i];
        let cells = rational::ceil_int(&(&seg / mesh));
        let cell = &seg / Q::from_integer(cells.clone());
        let dv = &(&vs[i + 1] - &vs[i]) / Q::from_integer(cells.clone());
        let mut u = xs[i].clone();
        let mut fu = vs[i].clone();
        let mut c = num_bigint::BigInt::zero();
        while c < cells {
            let fv = &fu + &dv;
            for t in 0..m {
                let x = &u + &cell * rational::int(t as i64) / &mq;
                let v = if t % 2 == 0 { fu.clone() } else { fv.clone() };
                nodes.push((x, v));
            }
            u += &cell;
            fu = fv;
            c += 1;
        }
    }
    nodes.push((Q::one(), vs[vs.len() - 1].clone()));
    Ok(PaMap::new(
        nodes.iter().map(|n| n.0.clone()).collect(),
        nodes.into_iter().map(|n| n.1).collect(),
    )?)
}

//! Expansion constants and the leo stability radius of a map with slopes
//! above 4 and distinct critical values.

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::delta::arc_ratio_infimum;
use super::RotorError;
use crate::circle::{Arc, CirclePoint};
use crate::critical::{critical_data, CriticalData};
use crate::geometry::image_of_arc;
use crate::map::PaMap;
use crate::measure::verify_measure_preserving;
use crate::rational::{self, Q};

const VALIDATION_ARCS: usize = 64;
const VALIDATION_SEED: u64 = 0x1ee0;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeoCertificate {
    #[serde(with = "rational::serde_str")]
    pub kappa: Q,
    #[serde(with = "rational::serde_str")]
    pub zeta: Q,
    /// `min(η_raw, ζ/2)`.
    #[serde(with = "rational::serde_str")]
    pub eta: Q,
    #[serde(with = "rational::serde_str")]
    pub eta_raw: Q,
    #[serde(with = "rational::serde_str")]
    pub xi: Q,
    /// `min(δ, 1/2)` where `1 + δ` is the exact arc-growth infimum.
    #[serde(with = "rational::serde_str")]
    pub delta_lb: Q,
    #[serde(with = "rational::serde_str")]
    pub delta_raw: Q,
    #[serde(with = "rational::serde_str")]
    pub epsilon: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotCertified {
    #[error("minimum |slope| {min_slope} is not above 4")]
    SlopeTooSmall { min_slope: String },
    #[error("critical values are not pairwise distinct")]
    DuplicateCriticalValues,
    #[error("fewer than two critical values, kappa is absent")]
    KappaAbsent,
    #[error("no pair of lifted turning points spans more than one period")]
    EtaUndefined,
    #[error("arc growth infimum does not exceed 1")]
    NoExpansion,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("not certified: {0}")]
    NotCertified(NotCertified),
    #[error(transparent)]
    Rotor(#[from] RotorError),
}

/// `1 + η_raw = min{H(C) - H(C') : |C - C'| < 1, H(C) - H(C') > 1}` over
/// lifted turning points.
pub fn eta_raw(h: &PaMap, cd: &CriticalData) -> Option<Q> {
    let d = h.degree_q();
    let mut best: Option<Q> = None;
    for a in &cd.turns {
        for b in &cd.turns {
            for j in -1i64..=1 {
                let jq = rational::int(j);
                let ca = a.point.value() + &jq;
                let diff_x = &ca - b.point.value();
                if diff_x.abs() >= Q::one() || (j == 0 && a.index == b.index) {
                    continue;
                }
                let diff = &a.lifted_value + &jq * &d - &b.lifted_value;
                if diff > Q::one() && best.as_ref().is_none_or(|v| &diff < v) {
                    best = Some(diff);
                }
            }
        }
    }
    best.map(|v| v - Q::one())
}

pub fn leo_certificate(h: &PaMap) -> Result<LeoCertificate, CertificateError> {
    let not = |r| Err(CertificateError::NotCertified(r));
    if !verify_measure_preserving(h).is_preserving() {
        return Err(RotorError::NotMeasurePreserving.into());
    }
    let s = h.min_abs_slope();
    if s <= rational::int(4) {
        return not(NotCertified::SlopeTooSmall {
            min_slope: rational::format(&s),
        });
    }
    let cd = critical_data(h);
    if !cd.values_distinct() {
        return not(NotCertified::DuplicateCriticalValues);
    }
    let Some(kappa) = cd.kappa.clone() else {
        return not(NotCertified::KappaAbsent);
    };
    let Some(eta_raw) = eta_raw(h, &cd) else {
        return not(NotCertified::EtaUndefined);
    };
    let zeta = cd.zeta.clone();
    let eta = rational::min(&eta_raw, &(&zeta / rational::int(2)));
    let delta_raw = arc_ratio_infimum(h) - Q::one();
    if !delta_raw.is_positive() {
        return not(NotCertified::NoExpansion);
    }
    let delta_lb = rational::min(&delta_raw, &rational::half());
    let inner = rational::min(&(&eta / rational::int(6)), &(&kappa / rational::int(3)));
    let epsilon = &delta_lb / rational::int(2) * inner / rational::int(2);
    validate_delta(h, &delta_raw)?;
    Ok(LeoCertificate {
        kappa,
        xi: zeta.clone(),
        zeta,
        eta,
        eta_raw,
        delta_lb,
        delta_raw,
        epsilon,
    })
}

/// Random arcs must never grow by less than the computed infimum.
fn validate_delta(h: &PaMap, delta_raw: &Q) -> Result<(), RotorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
    let bound = Q::one() + delta_raw;
    for _ in 0..VALIDATION_ARCS {
        let arc = random_arc(&mut rng);
        if let Growth::Ratio(r) = growth_check(h, &arc) {
            if r < bound {
                return Err(RotorError::Internal(format!(
                    "arc {arc} grows by {} below the computed infimum {}",
                    rational::format(&r),
                    rational::format(&bound)
                )));
            }
        }
    }
    Ok(())
}

/// Arc with dyadic start and length, the length in `(0, 1)`.
pub fn random_arc<R: Rng>(rng: &mut R) -> Arc {
    const BITS: u32 = 20;
    let scale = 1i64 << BITS;
    let start = rational::ratio(rng.random_range(0..scale), scale);
    let len = rational::ratio(rng.random_range(1..scale), scale);
    Arc::new(CirclePoint::new(start), len).expect("length in (0, 1)")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "growth", content = "ratio", rename_all = "lowercase")]
pub enum Growth {
    Full,
    Ratio(#[serde(with = "rational::serde_str")] Q),
}

pub fn growth_check(h: &PaMap, arc: &Arc) -> Growth {
    let img = image_of_arc(h, arc);
    if img.is_full() {
        Growth::Full
    } else {
        Growth::Ratio(img.length() / arc.length())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::perturb::{sample_certified_map, SampleConfig};
    use crate::rational::ratio;

    #[test]
    fn catalog_maps_are_not_certified() {
        assert_eq!(
            leo_certificate(&examples::slope_five()),
            Err(CertificateError::NotCertified(
                NotCertified::DuplicateCriticalValues
            ))
        );
        assert!(matches!(
            leo_certificate(&examples::tent()),
            Err(CertificateError::NotCertified(
                NotCertified::SlopeTooSmall { .. }
            ))
        ));
    }

    #[test]
    fn pipeline_map_is_certified() {
        let h = sample_certified_map(11, 3, &SampleConfig::default()).unwrap();
        let c = leo_certificate(&h).unwrap();
        for v in [&c.kappa, &c.zeta, &c.eta, &c.xi, &c.delta_lb, &c.epsilon] {
            assert!(v.is_positive());
        }
        assert!(c.eta <= &c.zeta / rational::int(2));
        assert!(c.delta_lb <= ratio(1, 2));
        let expected = &c.delta_lb / rational::int(2)
            * rational::min(&(&c.eta / rational::int(6)), &(&c.kappa / rational::int(3)))
            / rational::int(2);
        assert_eq!(c.epsilon, expected);
    }

    #[test]
    fn growth_cases() {
        let g = examples::slope_five();
        assert_eq!(growth_check(&g, &Arc::full()), Growth::Full);
        let a = Arc::new(CirclePoint::new(ratio(1, 3)), ratio(1, 100)).unwrap();
        assert_eq!(growth_check(&g, &a), Growth::Ratio(rational::int(5)));
    }
}

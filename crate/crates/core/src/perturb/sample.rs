//! Seeded random maps built from full laps.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{boost_slope, separate_critical_values, PerturbError};
use crate::map::PaMap;
use crate::rational::{self, Q};

/// Options for [`sample_certified_map`].
#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub folds: usize,
    pub mesh: Q,
    pub epsilon: Q,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            folds: 3,
            mesh: rational::ratio(1, 16),
            epsilon: rational::ratio(1, 64),
        }
    }
}

/// Random map whose lifting is a chain of `laps` full laps, each rising or
/// falling by exactly 1. Every value is hit once per lap, so the branch sum
/// is the total width, which is 1.
///
/// Lap widths are proportional to integer weights in `[10, 24]`, which keeps
/// every slope above `34/24`. Both directions always occur, so the map has
/// turning points, all at the same value.
pub fn sample_map(seed: u64, laps: usize) -> PaMap {
    assert!(laps >= 2, "at least two laps are needed");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights: Vec<i64> = (0..laps).map(|_| rng.random_range(10..=24)).collect();
    let mut up: Vec<bool> = (0..laps).map(|_| rng.random_bool(0.5)).collect();
    if up.iter().all(|&u| u == up[0]) {
        up[laps - 1] = !up[0];
    }
    let v0 = rational::ratio(rng.random_range(0..64), 64);
    let total: i64 = weights.iter().sum();
    let mut xs = vec![Q::from_integer(0.into())];
    let mut vs = vec![v0];
    let mut acc = 0;
    for (w, u) in weights.iter().zip(&up) {
        acc += w;
        xs.push(rational::ratio(acc, total));
        let step = if *u { Q::one() } else { -Q::one() };
        let next = vs.last().unwrap() + step;
        vs.push(next);
    }
    PaMap::new(xs, vs).expect("full-lap lifting is valid")
}

/// [`sample_map`] followed by [`boost_slope`] and
/// [`separate_critical_values`].
pub fn sample_certified_map(
    seed: u64,
    laps: usize,
    cfg: &SampleConfig,
) -> Result<PaMap, PerturbError> {
    let f = sample_map(seed, laps);
    let boosted = boost_slope(&f, cfg.folds, &cfg.mesh)?;
    separate_critical_values(&boosted, &cfg.epsilon)
}

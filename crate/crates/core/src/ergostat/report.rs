//! Fixed statistics battery with pass/fail verdicts.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::birkhoff::{birkhoff_trajectory, product_birkhoff_trajectory, OrbitBudget};
use super::correlation::{correlation_series, ErgoError, DEFAULT_COMPONENT_BUDGET};
use super::{dyadic_arc, ProductFunction, TestFunction};
use crate::circle::{Arc, CirclePoint};
use crate::map::PaMap;
use crate::par::{self, Strategy};
use crate::rational::{self, Q};

pub const CSV_HEADER: [&str; 4] = ["function", "n", "value", "defect"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingConfig {
    /// Orbit length per start.
    pub ell: usize,
    pub starts: usize,
    /// Largest correlation depth.
    pub depth: usize,
    pub seed: u64,
    pub threshold: f64,
    pub component_budget: usize,
    pub orbit_budget: OrbitBudget,
    #[serde(skip)]
    pub strategy: Strategy,
}

impl Default for MixingConfig {
    fn default() -> Self {
        MixingConfig {
            ell: 10_000,
            starts: 32,
            depth: 6,
            seed: 0,
            threshold: 0.05,
            component_budget: DEFAULT_COMPONENT_BUDGET,
            orbit_budget: OrbitBudget::default(),
            strategy: Strategy::default(),
        }
    }
}

/// One data point: a partial average at `n` steps, or a correlation at
/// depth `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesRow {
    pub function: String,
    pub n: usize,
    pub value: f64,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Defect {
    pub function: String,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingReport {
    pub map: String,
    pub config: MixingConfig,
    pub rows: Vec<SeriesRow>,
    /// Mean `|average − ∫h|` over starts, one per single-variable function.
    pub birkhoff_defects: Vec<Defect>,
    /// Same for the product system.
    pub product_defects: Vec<Defect>,
    /// Cesàro mean of `|correlation|` over the computed depths.
    pub correlation_defects: Vec<Defect>,
    pub exact_steps: usize,
    pub float_steps: usize,
    /// Depth at which the component budget ran out, if it did.
    pub budget_exceeded_at: Option<usize>,
    pub ergodic_consistent: bool,
    pub weak_mixing_consistent: bool,
}

impl MixingReport {
    pub fn csv_records(&self) -> impl Iterator<Item = [String; 4]> + '_ {
        self.rows.iter().map(|r| {
            [
                r.function.clone(),
                r.n.to_string(),
                format!("{:.12}", r.value),
                format!("{:.12}", r.defect),
            ]
        })
    }
}

fn single_battery() -> Vec<TestFunction> {
    let mut v: Vec<TestFunction> = (1..=4)
        .flat_map(|m| [TestFunction::Cos(m), TestFunction::Sin(m)])
        .collect();
    v.push(TestFunction::Indicator(dyadic_arc((0, 1), (1, 2))));
    v.push(TestFunction::Indicator(dyadic_arc((1, 4), (1, 4))));
    v
}

fn product_battery() -> Vec<ProductFunction> {
    let mut v: Vec<ProductFunction> = (1..=4)
        .flat_map(|m| {
            [
                ProductFunction(TestFunction::Cos(m), TestFunction::Cos(m)),
                ProductFunction(TestFunction::Sin(m), TestFunction::Sin(m)),
            ]
        })
        .collect();
    let half = TestFunction::Indicator(dyadic_arc((0, 1), (1, 2)));
    v.push(ProductFunction(half.clone(), half));
    v
}

fn arc_pairs() -> Vec<(Arc, Arc)> {
    vec![
        (dyadic_arc((0, 1), (1, 2)), dyadic_arc((0, 1), (1, 2))),
        (dyadic_arc((0, 1), (1, 4)), dyadic_arc((1, 2), (1, 4))),
        (dyadic_arc((1, 4), (1, 2)), dyadic_arc((0, 1), (1, 4))),
    ]
}

/// Seeded start point for task `i`; independent of how tasks are scheduled.
pub(crate) fn start_point(seed: u64, i: usize, coordinate: u64) -> CirclePoint {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * i as u64 + coordinate);
    let scale = 1i64 << 32;
    CirclePoint::new(rational::ratio(rng.random_range(0..scale), scale))
}

/// Checkpoints `1, 10, 100, …` below `ell`, then `ell`.
fn checkpoints(ell: usize) -> Vec<usize> {
    let mut v = Vec::new();
    let mut c = 1;
    while c < ell {
        v.push(c);
        c *= 10;
    }
    v.push(ell);
    v
}

struct Aggregate {
    rows: Vec<SeriesRow>,
    defect: Defect,
    exact: usize,
    float: usize,
}

fn aggregate(
    name: String,
    integral: f64,
    cps: &[usize],
    runs: Vec<(Vec<f64>, super::OrbitStats)>,
) -> Aggregate {
    let k = runs.len() as f64;
    let mut rows = Vec::with_capacity(cps.len());
    for (i, &n) in cps.iter().enumerate() {
        let value = runs.iter().map(|r| r.0[i]).sum::<f64>() / k;
        let defect = runs.iter().map(|r| (r.0[i] - integral).abs()).sum::<f64>() / k;
        rows.push(SeriesRow {
            function: name.clone(),
            n,
            value,
            defect,
        });
    }
    let defect = rows.last().map_or(0.0, |r| r.defect);
    Aggregate {
        rows,
        defect: Defect {
            function: name,
            defect,
        },
        exact: runs.iter().map(|r| r.1.exact_steps).sum(),
        float: runs.iter().map(|r| r.1.float_steps).sum(),
    }
}

pub fn mixing_report(f: &PaMap, name: &str, config: &MixingConfig) -> MixingReport {
    let cps = checkpoints(config.ell);
    let n_starts = config.starts.max(1);
    let mut rows = Vec::new();
    let mut exact_steps = 0;
    let mut float_steps = 0;

    let mut birkhoff_defects = Vec::new();
    for h in single_battery() {
        let runs = par::map_range(config.strategy, n_starts, |i| {
            let x = start_point(config.seed, i, 0);
            birkhoff_trajectory(f, &h, &x, config.ell, &cps, config.orbit_budget)
        });
        let agg = aggregate(h.to_string(), h.integral(), &cps, runs);
        rows.extend(agg.rows);
        birkhoff_defects.push(agg.defect);
        exact_steps += agg.exact;
        float_steps += agg.float;
    }

    let mut product_defects = Vec::new();
    for h in product_battery() {
        let runs = par::map_range(config.strategy, n_starts, |i| {
            let s = (
                start_point(config.seed, i, 0),
                start_point(config.seed, i, 1),
            );
            product_birkhoff_trajectory(f, &h, &s, config.ell, &cps, config.orbit_budget)
        });
        let agg = aggregate(h.to_string(), h.integral(), &cps, runs);
        rows.extend(agg.rows);
        product_defects.push(agg.defect);
        exact_steps += agg.exact;
        float_steps += agg.float;
    }

    let pairs = arc_pairs();
    let series = par::map(config.strategy, &pairs, |(a, b)| {
        correlation_series(f, a, b, config.depth, config.component_budget)
    });
    let mut correlation_defects = Vec::new();
    let mut budget_exceeded_at: Option<usize> = None;
    for ((a, b), (values, err)) in pairs.iter().zip(series) {
        let label = format!("corr[{a};{b}]");
        let mut cesaro = Q::zero();
        for (n, c) in values.iter().enumerate() {
            cesaro += c.abs();
            rows.push(SeriesRow {
                function: label.clone(),
                n,
                value: rational::to_f64(c),
                defect: rational::to_f64(&c.abs()),
            });
        }
        if let Some(ErgoError::BudgetExceeded { depth, .. }) = err {
            budget_exceeded_at = Some(budget_exceeded_at.map_or(depth, |d| d.min(depth)));
        }
        let terms = values.len().max(1);
        correlation_defects.push(Defect {
            function: label,
            defect: rational::to_f64(&cesaro) / terms as f64,
        });
    }

    let below = |ds: &[Defect]| ds.iter().all(|d| d.defect < config.threshold);
    let ergodic_consistent = below(&birkhoff_defects);
    let weak_mixing_consistent =
        ergodic_consistent && below(&product_defects) && below(&correlation_defects);

    MixingReport {
        map: name.to_string(),
        config: config.clone(),
        rows,
        birkhoff_defects,
        product_defects,
        correlation_defects,
        exact_steps,
        float_steps,
        budget_exceeded_at,
        ergodic_consistent,
        weak_mixing_consistent,
    }
}

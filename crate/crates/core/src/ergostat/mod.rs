//! Desk-scale ergodic statistics.
//!
//! Orbit averages start in exact arithmetic and continue in `f64` once the
//! orbit denominators or the step count exceed a budget. Expanding maps lose
//! about `log2(slope)` bits per step in floating point, so those averages are
//! statistical evidence only. Correlations are computed exactly from iterated
//! preimages and carry no round-off at all.

mod birkhoff;
mod correlation;
mod report;

pub use birkhoff::{
    birkhoff_average, birkhoff_trajectory, product_birkhoff, product_birkhoff_batch, OrbitBudget,
    OrbitStats,
};
pub use correlation::{correlation_series, exact_correlation, ErgoError, DEFAULT_COMPONENT_BUDGET};
pub use report::{mixing_report, MixingConfig, MixingReport, SeriesRow, CSV_HEADER};

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::circle::{Arc, CirclePoint};
use crate::rational::{self, Q};

/// Bounded test function on the circle with a closed-form integral.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TestFunction {
    Const,
    Cos(u32),
    Sin(u32),
    Indicator(Arc),
}

impl TestFunction {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            TestFunction::Const => 1.0,
            TestFunction::Cos(m) => (TAU * *m as f64 * x).cos(),
            TestFunction::Sin(m) => (TAU * *m as f64 * x).sin(),
            TestFunction::Indicator(a) => {
                if a.is_full() {
                    return 1.0;
                }
                let s = rational::to_f64(a.start().value());
                let t = (x - s).rem_euclid(1.0);
                if t <= rational::to_f64(a.length()) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Exact membership for indicators; the others go through `f64`.
    pub fn eval_exact(&self, x: &CirclePoint) -> f64 {
        match self {
            TestFunction::Indicator(a) => {
                if a.contains(x) {
                    1.0
                } else {
                    0.0
                }
            }
            _ => self.eval(rational::to_f64(x.value())),
        }
    }

    /// `∫ h dλ`.
    pub fn integral(&self) -> f64 {
        match self {
            TestFunction::Const => 1.0,
            TestFunction::Cos(0) => 1.0,
            TestFunction::Cos(_) | TestFunction::Sin(_) => 0.0,
            TestFunction::Indicator(a) => rational::to_f64(a.length()),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Const => f.write_str("const"),
            TestFunction::Cos(m) => write!(f, "cos{m}"),
            TestFunction::Sin(m) => write!(f, "sin{m}"),
            TestFunction::Indicator(a) => {
                write!(f, "ind:{}:{}", a.start(), rational::format(a.length()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown test function `{0}` (expected const, cos<m>, sin<m> or ind:<start>:<length>)")]
pub struct ParseFunctionError(pub String);

impl FromStr for TestFunction {
    type Err = ParseFunctionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseFunctionError(s.to_string());
        let t = s.trim();
        if t == "const" {
            return Ok(TestFunction::Const);
        }
        if let Some(m) = t.strip_prefix("cos") {
            return m.parse().map(TestFunction::Cos).map_err(|_| err());
        }
        if let Some(m) = t.strip_prefix("sin") {
            return m.parse().map(TestFunction::Sin).map_err(|_| err());
        }
        if let Some(rest) = t.strip_prefix("ind:") {
            let (a, l) = rest.split_once(':').ok_or_else(err)?;
            let a = rational::parse(a).map_err(|_| err())?;
            let l = rational::parse(l).map_err(|_| err())?;
            return Arc::new(CirclePoint::new(a), l)
                .map(TestFunction::Indicator)
                .map_err(|_| err());
        }
        Err(err())
    }
}

/// `h(x, y) = u(x) v(y)` on the torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductFunction(pub TestFunction, pub TestFunction);

impl ProductFunction {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.0.eval(x) * self.1.eval(y)
    }

    pub fn eval_exact(&self, x: &CirclePoint, y: &CirclePoint) -> f64 {
        self.0.eval_exact(x) * self.1.eval_exact(y)
    }

    pub fn integral(&self) -> f64 {
        self.0.integral() * self.1.integral()
    }
}

impl fmt::Display for ProductFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.0, self.1)
    }
}

impl FromStr for ProductFunction {
    type Err = ParseFunctionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once('*')
            .ok_or_else(|| ParseFunctionError(s.to_string()))?;
        Ok(ProductFunction(a.parse()?, b.parse()?))
    }
}

/// Dyadic arc `[k/2^j, (k+1)/2^j]`-style helper used by the report battery.
pub fn dyadic_arc(start: (i64, i64), len: (i64, i64)) -> Arc {
    Arc::new(
        CirclePoint::new(rational::ratio(start.0, start.1)),
        rational::ratio(len.0, len.1),
    )
    .expect("dyadic arc is proper")
}

pub(crate) fn arc_measure(a: &Arc) -> Q {
    a.length().clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["const", "cos1", "sin4", "ind:0:1/2"] {
            let f: TestFunction = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        let p: ProductFunction = "cos1*cos1".parse().unwrap();
        assert_eq!(p.integral(), 0.0);
        assert!("tan1".parse::<TestFunction>().is_err());
        assert!("ind:0:2".parse::<TestFunction>().is_err());
    }

    #[test]
    fn indicator_paths_agree() {
        let f: TestFunction = "ind:3/4:1/2".parse().unwrap();
        for k in 0..64 {
            let x = rational::ratio(2 * k + 1, 128);
            let p = CirclePoint::new(x.clone());
            assert_eq!(f.eval(rational::to_f64(&x)), f.eval_exact(&p));
        }
        assert_eq!(f.integral(), 0.5);
    }
}

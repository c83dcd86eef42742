//! Orbit averages along `f` and `f × f`.

use serde::Serialize;

use super::{ProductFunction, TestFunction};
use crate::circle::CirclePoint;
use crate::map::{FloatMap, PaMap};
use crate::par::{self, Strategy};
use crate::rational::{self};

/// When an exact orbit hands over to `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitBudget {
    /// Largest denominator size, in bits, kept exact.
    pub max_denom_bits: u64,
    /// Largest number of exact steps.
    pub max_exact_steps: usize,
}

impl Default for OrbitBudget {
    fn default() -> Self {
        OrbitBudget {
            max_denom_bits: 256,
            max_exact_steps: 256,
        }
    }
}

impl OrbitBudget {
    /// Everything in `f64` from the first term on.
    pub fn float_only() -> Self {
        OrbitBudget {
            max_denom_bits: 0,
            max_exact_steps: 0,
        }
    }

    pub fn unlimited() -> Self {
        OrbitBudget {
            max_denom_bits: u64::MAX,
            max_exact_steps: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitStats {
    pub value: f64,
    /// Terms evaluated on exact orbit points.
    pub exact_steps: usize,
    pub float_steps: usize,
}

enum Point {
    Exact(CirclePoint),
    Float(f64),
}

struct Orbit<'a> {
    f: &'a PaMap,
    fm: &'a FloatMap,
    budget: OrbitBudget,
    steps: usize,
    cur: Point,
}

impl<'a> Orbit<'a> {
    fn new(f: &'a PaMap, fm: &'a FloatMap, x: &CirclePoint, budget: OrbitBudget) -> Self {
        let mut o = Orbit {
            f,
            fm,
            budget,
            steps: 0,
            cur: Point::Exact(x.clone()),
        };
        o.check();
        o
    }

    fn check(&mut self) {
        if let Point::Exact(p) = &self.cur {
            if self.steps >= self.budget.max_exact_steps
                || rational::denom_bits(p.value()) > self.budget.max_denom_bits
            {
                self.cur = Point::Float(rational::to_f64(p.value()));
            }
        }
    }

    fn advance(&mut self) {
        self.cur = match &self.cur {
            Point::Exact(p) => Point::Exact(self.f.eval(p)),
            Point::Float(x) => Point::Float(self.fm.eval(*x)),
        };
        self.steps += 1;
        self.check();
    }

    fn is_exact(&self) -> bool {
        matches!(self.cur, Point::Exact(_))
    }

    fn eval(&self, h: &TestFunction) -> f64 {
        match &self.cur {
            Point::Exact(p) => h.eval_exact(p),
            Point::Float(x) => h.eval(*x),
        }
    }
}

fn checked_len(ell: usize) -> usize {
    assert!(ell >= 1, "orbit length must be at least 1");
    ell
}

/// Partial averages `(1/n) Σ_{k<n} h(f^k x)` at each checkpoint `n ≤ ℓ`
/// (sorted, each at least 1), plus the full average at `ℓ`.
pub fn birkhoff_trajectory(
    f: &PaMap,
    h: &TestFunction,
    x: &CirclePoint,
    ell: usize,
    checkpoints: &[usize],
    budget: OrbitBudget,
) -> (Vec<f64>, OrbitStats) {
    let ell = checked_len(ell);
    let fm = f.to_float();
    let mut orbit = Orbit::new(f, &fm, x, budget);
    let mut sum = 0.0;
    let mut exact = 0;
    let mut partial = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for k in 0..ell {
        if k > 0 {
            orbit.advance();
        }
        if orbit.is_exact() {
            exact += 1;
        }
        sum += orbit.eval(h);
        while next.peek().is_some_and(|&&c| c == k + 1) {
            partial.push(sum / (k + 1) as f64);
            next.next();
        }
    }
    let stats = OrbitStats {
        value: sum / ell as f64,
        exact_steps: exact,
        float_steps: ell - exact,
    };
    (partial, stats)
}

/// `(1/ℓ) Σ_{k<ℓ} h(f^k x)`.
pub fn birkhoff_average(
    f: &PaMap,
    h: &TestFunction,
    x: &CirclePoint,
    ell: usize,
    budget: OrbitBudget,
) -> OrbitStats {
    birkhoff_trajectory(f, h, x, ell, &[], budget).1
}

fn product_trajectory(
    f: &PaMap,
    fm: &FloatMap,
    h: &ProductFunction,
    start: &(CirclePoint, CirclePoint),
    ell: usize,
    checkpoints: &[usize],
    budget: OrbitBudget,
) -> (Vec<f64>, OrbitStats) {
    let ell = checked_len(ell);
    let mut ox = Orbit::new(f, fm, &start.0, budget);
    let mut oy = Orbit::new(f, fm, &start.1, budget);
    let mut sum = 0.0;
    let mut exact = 0;
    let mut partial = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for k in 0..ell {
        if k > 0 {
            ox.advance();
            oy.advance();
        }
        if ox.is_exact() && oy.is_exact() {
            exact += 1;
        }
        sum += ox.eval(&h.0) * oy.eval(&h.1);
        while next.peek().is_some_and(|&&c| c == k + 1) {
            partial.push(sum / (k + 1) as f64);
            next.next();
        }
    }
    let stats = OrbitStats {
        value: sum / ell as f64,
        exact_steps: exact,
        float_steps: ell - exact,
    };
    (partial, stats)
}

/// `(1/ℓ) Σ_{k<ℓ} h(f^k x, f^k y)`.
pub fn product_birkhoff(
    f: &PaMap,
    h: &ProductFunction,
    x: &CirclePoint,
    y: &CirclePoint,
    ell: usize,
    budget: OrbitBudget,
) -> OrbitStats {
    let fm = f.to_float();
    product_trajectory(f, &fm, h, &(x.clone(), y.clone()), ell, &[], budget).1
}

/// [`product_birkhoff`] over many start pairs, one task per pair.
pub fn product_birkhoff_batch(
    f: &PaMap,
    h: &ProductFunction,
    starts: &[(CirclePoint, CirclePoint)],
    ell: usize,
    budget: OrbitBudget,
    strategy: Strategy,
) -> Vec<OrbitStats> {
    let fm = f.to_float();
    par::map(strategy, starts, |s| {
        product_trajectory(f, &fm, h, s, ell, &[], budget).1
    })
}

pub(crate) fn product_birkhoff_trajectory(
    f: &PaMap,
    h: &ProductFunction,
    start: &(CirclePoint, CirclePoint),
    ell: usize,
    checkpoints: &[usize],
    budget: OrbitBudget,
) -> (Vec<f64>, OrbitStats) {
    let fm = f.to_float();
    product_trajectory(f, &fm, h, start, ell, checkpoints, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::rational::{int, ratio};

    fn pt(n: i64, d: i64) -> CirclePoint {
        CirclePoint::new(ratio(n, d))
    }

    #[test]
    fn rotation_identity_and_half() {
        let id = PaMap::rotation(&int(0));
        let h = TestFunction::Cos(3);
        let x = pt(1, 7);
        let v = birkhoff_average(&id, &h, &x, 50, OrbitBudget::default()).value;
        assert!((v - h.eval_exact(&x)).abs() < 1e-12);
        let half = PaMap::rotation(&ratio(1, 2));
        for k in 0..10 {
            let s = birkhoff_average(
                &half,
                &TestFunction::Cos(1),
                &pt(k, 10),
                2,
                OrbitBudget::default(),
            );
            assert!(s.value.abs() < 1e-15);
        }
    }

    #[test]
    fn tent_eventually_fixed() {
        // brute force: 1/8 -> 1/4 -> 1/2 -> 0 -> 0 ...
        let t = examples::tent();
        let h: TestFunction = "ind:0:1/2".parse().unwrap();
        let mut x = ratio(1, 8);
        let mut hits = 0;
        for _ in 0..40 {
            let p = CirclePoint::new(x.clone());
            if rational::to_f64(&x) <= 0.5 {
                hits += 1;
            }
            x = t.eval(&p).into_inner();
        }
        let s = birkhoff_average(&t, &h, &pt(1, 8), 40, OrbitBudget::default());
        assert_eq!(s.value, hits as f64 / 40.0);
        assert_eq!(s.exact_steps, 40);
        let h2: TestFunction = "ind:1/4:1/8".parse().unwrap();
        let s = birkhoff_average(&t, &h2, &pt(1, 8), 40, OrbitBudget::default());
        assert_eq!(s.value, 1.0 / 40.0);
    }

    #[test]
    fn product_rotation_half() {
        let half = PaMap::rotation(&ratio(1, 2));
        let h: ProductFunction = "cos1*cos1".parse().unwrap();
        let (x, y) = (pt(1, 9), pt(2, 7));
        let s = product_birkhoff(&half, &h, &x, &y, 2, OrbitBudget::default());
        assert!((s.value - h.eval_exact(&x, &y)).abs() < 1e-12);
        let one: ProductFunction = "const*const".parse().unwrap();
        let g = examples::slope_five();
        assert_eq!(
            product_birkhoff(&g, &one, &x, &y, 100, OrbitBudget::default()).value,
            1.0
        );
    }

    #[test]
    fn product_reduces_to_single() {
        let g = examples::slope_five();
        let h: ProductFunction = "sin2*const".parse().unwrap();
        let x = pt(3, 64);
        let a = product_birkhoff(&g, &h, &x, &pt(5, 11), 300, OrbitBudget::default());
        let b = birkhoff_average(&g, &TestFunction::Sin(2), &x, 300, OrbitBudget::default());
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn budget_switches_to_float() {
        let g = examples::slope_five();
        let budget = OrbitBudget {
            max_denom_bits: 256,
            max_exact_steps: 10,
        };
        let s = birkhoff_average(&g, &TestFunction::Cos(1), &pt(1, 3), 25, budget);
        assert_eq!((s.exact_steps, s.float_steps), (10, 15));
        let s = birkhoff_average(
            &g,
            &TestFunction::Cos(1),
            &pt(1, 3),
            25,
            OrbitBudget::float_only(),
        );
        assert_eq!(s.exact_steps, 0);
    }

    #[test]
    fn float_agrees_with_exact() {
        for f in [
            examples::slope_five(),
            examples::inv3(),
            crate::perturb::sample_map(5, 3),
        ] {
            for k in [1, 5, 17, 33] {
                let x = pt(k, 64);
                let h = TestFunction::Cos(1);
                let e = birkhoff_average(&f, &h, &x, 6, OrbitBudget::unlimited());
                let fl = birkhoff_average(&f, &h, &x, 6, OrbitBudget::float_only());
                assert!(
                    (e.value - fl.value).abs() < 1e-12,
                    "{} vs {}",
                    e.value,
                    fl.value
                );
            }
        }
    }

    #[test]
    fn batch_strategies_agree() {
        let g = examples::slope_five();
        let h: ProductFunction = "cos1*cos1".parse().unwrap();
        let starts: Vec<_> = (1..9).map(|k| (pt(k, 17), pt(k, 19))).collect();
        let a = product_birkhoff_batch(
            &g,
            &h,
            &starts,
            500,
            OrbitBudget::default(),
            Strategy::Sequential,
        );
        let b = product_birkhoff_batch(
            &g,
            &h,
            &starts,
            500,
            OrbitBudget::default(),
            Strategy::Parallel,
        );
        assert_eq!(a, b);
    }
}

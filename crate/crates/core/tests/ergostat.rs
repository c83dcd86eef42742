mod common;

use common::{base_map, proper_arc, rational_in_unit};
use num_traits::{Signed, Zero};
use pacircle::ergostat::{
    birkhoff_average, correlation_series, product_birkhoff, OrbitBudget, ProductFunction,
    TestFunction, DEFAULT_COMPONENT_BUDGET,
};
use pacircle::geometry::preimage_intervals;
use pacircle::rational::{self, Q};
use pacircle::CirclePoint;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn preimage_depths_conserve_length(kind in 0usize..5, seed in 0u64..200, a in proper_arc(), b in proper_arc()) {
        let f = base_map(kind, seed);
        let (series, err) = correlation_series(&f, &a, &b, 4, DEFAULT_COMPONENT_BUDGET);
        prop_assert!(err.is_none());
        let base = a.length() * b.length();
        let mut cur = a.to_intervals();
        cur.sort();
        for (n, c) in series.iter().enumerate() {
            if n > 0 {
                cur = preimage_intervals(&f, &cur);
            }
            let total = cur.iter().fold(Q::zero(), |acc, (s, e)| acc + (e - s));
            prop_assert_eq!(&total, a.length());
            let overlap = c + &base;
            prop_assert!(!overlap.is_negative() && &overlap <= a.length());
        }
        // Cesàro means are built from the same terms
        let mut sum = Q::zero();
        for (n, c) in series.iter().enumerate() {
            sum += c.abs();
            let cesaro = &sum / rational::int(n as i64 + 1);
            prop_assert!(!cesaro.is_negative());
        }
    }

    #[test]
    fn product_with_constant_is_single(kind in 0usize..5, seed in 0u64..200, x in rational_in_unit(), y in rational_in_unit(), m in 1u32..=4) {
        let f = base_map(kind, seed);
        let (x, y) = (CirclePoint::new(x), CirclePoint::new(y));
        let h = ProductFunction(TestFunction::Cos(m), TestFunction::Const);
        let p = product_birkhoff(&f, &h, &x, &y, 200, OrbitBudget::default());
        let s = birkhoff_average(&f, &TestFunction::Cos(m), &x, 200, OrbitBudget::default());
        prop_assert_eq!(p.value, s.value);
    }
}

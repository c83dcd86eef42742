#![allow(dead_code)]

use pacircle::examples;
use pacircle::perturb::sample_map;
use pacircle::rational::ratio;
use pacircle::rotor::{rotate, RotationPair};
use pacircle::{Arc, CirclePoint, PaMap, Q};
use proptest::prelude::*;

pub fn base_map(kind: usize, seed: u64) -> PaMap {
    match kind % 5 {
        0 => examples::tent(),
        1 => examples::slope_five(),
        2 => examples::inv3(),
        3 => sample_map(seed, 2 + (seed as usize % 3)),
        _ => PaMap::rotation(&ratio(seed as i64 % 17, 17)),
    }
}

pub fn rational_in_unit() -> impl Strategy<Value = Q> {
    (1i64..=97).prop_flat_map(|d| (0..d).prop_map(move |n| ratio(n, d)))
}

pub fn any_map() -> impl Strategy<Value = PaMap> {
    (
        0usize..5,
        0u64..1000,
        rational_in_unit(),
        rational_in_unit(),
    )
        .prop_map(|(k, s, a, b)| rotate(&base_map(k, s), &RotationPair::new(a, b)))
}

pub fn proper_arc() -> impl Strategy<Value = Arc> {
    (rational_in_unit(), 1i64..=96, 97i64..=400)
        .prop_map(|(s, n, d)| Arc::new(CirclePoint::new(s), ratio(n.min(d - 1), d)).unwrap())
}

/// `Σ 1/|F'(x)|` over `f(x) = y`, found point by point.
pub fn branch_sum_oracle(f: &PaMap, y: &CirclePoint) -> Q {
    let mut total = ratio(0, 1);
    for x in pacircle::geometry::point_preimages(f, y) {
        let s = &f.slopes()[f.segment_of(x.value())];
        total += ratio(1, 1) / pacircle::rational::abs(s);
    }
    total
}

mod common;

use common::{any_map, rational_in_unit};
use pacircle::critical::critical_data;
use pacircle::geometry::{image_of_arc, preimage_components, preimage_spread, sup_distance};
use pacircle::perturb::{sample_certified_map, SampleConfig};
use pacircle::rational::{ratio, Q};
use pacircle::rotor::{
    find_periodic_arc, growth_check, leo_certificate, random_arc, rotate, rotation_periodic_set,
    Growth, RotationPair,
};
use pacircle::{examples, Arc, CirclePoint, PaMap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pair() -> impl Strategy<Value = RotationPair> {
    (rational_in_unit(), rational_in_unit()).prop_map(|(a, b)| RotationPair::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rotation_is_isometry(f in any_map(), g in any_map(), r in pair()) {
        prop_assert_eq!(sup_distance(&rotate(&f, &r), &rotate(&g, &r)), sup_distance(&f, &g));
    }

    #[test]
    fn conjugacy_by_rotation(f in any_map(), r in pair(), gamma in rational_in_unit()) {
        let shifted = RotationPair::new(r.alpha.value() + &gamma, r.beta.value() - &gamma);
        let conj = PaMap::rotation(&-gamma.clone())
            .compose(&rotate(&f, &shifted).compose(&PaMap::rotation(&gamma)));
        prop_assert!(conj.circle_eq(&rotate(&f, &r)));
    }
}

fn certified(seed: u64) -> PaMap {
    sample_certified_map(seed, 2 + seed as usize % 3, &SampleConfig::default()).unwrap()
}

#[test]
fn certificate_constants_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..3 {
        let h = certified(seed);
        let c = leo_certificate(&h).unwrap();
        let bound = Q::from_integer(1.into()) + &c.delta_lb;
        for _ in 0..1000 {
            if let Growth::Ratio(r) = growth_check(&h, &random_arc(&mut rng)) {
                assert!(r > bound);
            }
        }
        for _ in 0..200 {
            let start = ratio(rng.random_range(0..1 << 20), 1 << 20);
            let len = &c.kappa * ratio(rng.random_range(1..=1000), 1000);
            let a = Arc::new(CirclePoint::new(start), len).unwrap();
            assert!(preimage_components(&h, &a).len() >= 2);
            assert!(preimage_spread(&h, &a).unwrap() >= c.xi);
        }
        for _ in 0..3 {
            let r = RotationPair::new(
                ratio(rng.random_range(0..1000), 1000),
                ratio(rng.random_range(0..1000), 1000),
            );
            let rc = leo_certificate(&rotate(&h, &r)).unwrap();
            assert_eq!(
                (&rc.kappa, &rc.eta, &rc.xi, &rc.delta_lb),
                (&c.kappa, &c.eta, &c.xi, &c.delta_lb)
            );
        }
    }
}

#[test]
fn witnesses_follow_structure() {
    let f = examples::inv3();
    let set = rotation_periodic_set(&f, 16, pacircle::Strategy::Parallel).unwrap();
    assert!(set.complete);
    for e in &set.entries {
        let g = rotate(&f, &RotationPair::new(ratio(0, 1), e.beta.value().clone()));
        let cd = critical_data(&g);
        let w = &e.witness;
        assert!(w.period <= cd.turns.len());
        for a in &w.orbit {
            assert_eq!(a.length(), w.arc.length());
        }
        let cv = cd.distinct_values();
        assert!(cv.contains(w.arc.start()) && cv.contains(&w.arc.end()));
        let mut cur = w.arc.clone();
        for a in &w.orbit {
            assert_eq!(&cur, a);
            cur = image_of_arc(&g, &cur);
        }
        assert_eq!(cur, w.arc);
        let again = find_periodic_arc(&g, 16).unwrap().witness.unwrap();
        assert_eq!(again.period, w.period);
    }
}

mod common;

use common::*;
use proptest::prelude::*;

use toric_newton::exact::{int, rat};
use toric_newton::jumping::{gauge, jumping_numbers_up_to};
use toric_newton::membership::{is_in_closure, is_interior};
use toric_newton::oracle::oracle_gauge;
use toric_newton::{GeneratorFamily, RationalVec};

fn body_and_points() -> impl Strategy<Value = (GeneratorFamily, RationalVec, RationalVec)> {
    family_strategy(2..=3).prop_flat_map(|b| {
        let n = b.dim();
        (Just(b), positive_vec_strategy(n), positive_vec_strategy(n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn monotone_and_superadditive((b, u, w) in body_and_points()) {
        let (Ok(gu), Ok(gw)) = (gauge(&b, &u), gauge(&b, &w)) else { return Ok(()) };
        let sum = gauge(&b, &u.add(&w)).unwrap().value;
        prop_assert!(sum >= &gu.value + &gw.value);
        prop_assert!(sum >= gu.value);
        prop_assert!(gu.verify(&b, &u).unwrap());
    }

    #[test]
    fn gauge_points_sit_on_the_boundary((b, u, _) in body_and_points()) {
        let Ok(g) = gauge(&b, &u) else { return Ok(()) };
        let x = u.scale(&g.value.recip());
        prop_assert!(is_in_closure(&b, &x).unwrap().answer);
        prop_assert!(!is_interior(&b, &x).unwrap().answer);
    }

    #[test]
    fn gauge_scales((b, u, _) in body_and_points(), m in (1..=12i64, 1..=5i64).prop_map(|(p, q)| rat(p, q))) {
        let Ok(g) = gauge(&b, &u) else { return Ok(()) };
        let scaled = gauge(&b.scale(&m).unwrap(), &u).unwrap().value;
        prop_assert_eq!(scaled, g.value / m);
    }
}

#[test]
fn scaling_on_example_bodies() {
    for (_, b) in example_bodies() {
        for m in [rat(1, 3), int(2), rat(7, 2)] {
            let scaled = b.scale(&m).unwrap();
            let u = RationalVec::new((0..b.dim()).map(|i| int(i as i64 + 1)).collect());
            assert_eq!(gauge(&scaled, &u).unwrap().value, gauge(&b, &u).unwrap().value / m);
        }
    }
}

#[test]
fn oracle_agrees_on_example_bodies() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for (name, b) in example_bodies() {
        for _ in 0..1000 {
            let u = RationalVec::new((0..b.dim()).map(|_| rat(rng.gen_range(1..=24), rng.gen_range(1..=4))).collect());
            let exact = to_f64(&gauge(&b, &u).unwrap().value);
            let approx = oracle_gauge(&b, &u.to_f64(), 1e-9).unwrap();
            assert!((exact - approx).abs() <= 1e-6, "{name} {u}: exact {exact}, oracle {approx}");
        }
    }
}

#[test]
fn enumeration_is_sorted_and_bounded() {
    let t = jumping_numbers_up_to(&hyperbola(), &int(2), 30).unwrap();
    let values = t.values();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
    assert!(values.iter().all(|x| *x > int(0) && *x <= int(2)));
    assert!(t.partial);
    for e in &t.entries {
        for w in &e.witnesses {
            assert_eq!(toric_newton::jumping::jumping_number(&hyperbola(), w).unwrap().value, e.value);
        }
    }
}

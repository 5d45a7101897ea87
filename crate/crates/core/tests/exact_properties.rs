mod common;

use proptest::prelude::*;

use toric_newton::exact::{lp_strict_dominate, lp_strict_dominate_eps, rat, DominationResult, EpsRational};
use toric_newton::Rational;

fn point_set(n: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    proptest::collection::vec(proptest::collection::vec((0..=12i64, 1..=3i64).prop_map(|(p, q)| rat(p, q)), n), 1..=6)
}

fn eps_value() -> impl Strategy<Value = EpsRational> {
    proptest::collection::vec((-6..=6i64, 1..=3i64).prop_map(|(p, q)| rat(p, q)), 1..=3)
        .prop_map(|c| EpsRational::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn domination_results_verify((points, u) in (2..=4usize).prop_flat_map(|n| (point_set(n), proptest::collection::vec((0..=12i64, 1..=3i64).prop_map(|(p, q)| rat(p, q)), n)))) {
        let result = lp_strict_dominate(&points, &u).unwrap();
        prop_assert!(result.verify(&points, &u).unwrap());
        if let DominationResult::Infeasible { normal } = &result {
            prop_assert!(normal.iter().all(|x| *x >= rat(0, 1)));
            prop_assert!(normal.iter().any(|x| *x > rat(0, 1)));
        }
    }

    #[test]
    fn perturbed_domination_verifies((points, u) in (2..=3usize).prop_flat_map(|n| (point_set(n), proptest::collection::vec((0..=12i64, 1..=3i64).prop_map(|(p, q)| rat(p, q)), n)))) {
        let pts: Vec<Vec<EpsRational>> = points.iter().map(|p| p.iter().cloned().map(EpsRational::constant).collect()).collect();
        let up: Vec<EpsRational> = u.iter().map(|x| EpsRational::linear(x.clone(), rat(1, 1))).collect();
        let result = lp_strict_dominate_eps(&pts, &up).unwrap();
        prop_assert!(result.verify(&pts, &up).unwrap());
        // u + ε dominates strictly iff u dominates weakly
        let weak = lp_strict_dominate(&points, &u).unwrap().is_feasible();
        prop_assert!(!weak || result.is_feasible());
    }

    #[test]
    fn epsilon_order_is_total(a in eps_value(), b in eps_value(), c in eps_value()) {
        prop_assert!(a <= b || b <= a);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        prop_assert_eq!(a == b, a.cmp(&b) == std::cmp::Ordering::Equal);
    }

    #[test]
    fn epsilon_sits_below_positive_rationals(p in 1..=1000i64, q in 1..=1000i64, r in -50..=50i64) {
        let e = EpsRational::epsilon();
        prop_assert!(EpsRational::constant(rat(0, 1)) < e);
        prop_assert!(e < EpsRational::constant(rat(p, q)));
        let x = EpsRational::constant(rat(r, q));
        let y = EpsRational::constant(rat(r + 1, q));
        prop_assert_eq!(x < y, rat(r, q) < rat(r + 1, q));
    }
}

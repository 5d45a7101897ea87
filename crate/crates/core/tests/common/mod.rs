#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use toric_newton::body::hyperbola_body;
use toric_newton::exact::{int, rat};
use toric_newton::{GeneratorFamily, Rational, RationalVec, TailSequence};

pub fn v(x: &[i64]) -> RationalVec {
    RationalVec::from_ints(x)
}

pub fn monomial() -> GeneratorFamily {
    GeneratorFamily::from_points(vec![v(&[2, 0]), v(&[0, 3])]).unwrap()
}

pub fn hyperbola() -> GeneratorFamily {
    hyperbola_body()
}

/// One asymptote at `x1 = 1/2`; `x2 = 1` is reached by the point `(3, 1)`.
pub fn shifted() -> GeneratorFamily {
    let t = TailSequence::new(RationalVec::new(vec![rat(1, 2), int(1)]), v(&[0, 1]), v(&[1, 0])).unwrap();
    GeneratorFamily::new(2, vec![v(&[3, 1])], vec![t]).unwrap()
}

/// `x1 = 1` is reached only at height `x3 = 2`.
pub fn plane_and_lines() -> GeneratorFamily {
    GeneratorFamily::new(
        3,
        vec![v(&[1, 1, 2])],
        vec![
            TailSequence::new(v(&[1, 1, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])).unwrap(),
            TailSequence::new(v(&[1, 1, 1]), v(&[1, 0, 0]), v(&[0, 1, 0])).unwrap(),
        ],
    )
    .unwrap()
}

pub fn example_bodies() -> Vec<(&'static str, GeneratorFamily)> {
    vec![
        ("monomial", monomial()),
        ("hyperbola", hyperbola()),
        ("shifted", shifted()),
        ("plane_and_lines", plane_and_lines()),
    ]
}

pub fn small_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(0..=max_num), rng.gen_range(1..=max_den))
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize, max_num: i64, max_den: i64) -> RationalVec {
    RationalVec::new((0..n).map(|_| small_rational(rng, max_num, max_den)).collect())
}

/// A small random family in dimension `n` with at least one tail; tails
/// escape along a few coordinates and converge along the rest.
pub fn random_family(rng: &mut ChaCha8Rng, n: usize) -> GeneratorFamily {
    let points = (0..rng.gen_range(0..=2))
        .map(|_| random_vec(rng, n, 8, 2))
        .collect();
    let tails = (0..rng.gen_range(1..=2))
        .map(|_| {
            let p = random_vec(rng, n, 4, 2);
            let mut q = vec![int(0); n];
            let escaping = rng.gen_range(1..n);
            for _ in 0..escaping {
                q[rng.gen_range(0..n)] = int(rng.gen_range(1..=2));
            }
            let r = RationalVec::new((0..n).map(|_| int(rng.gen_range(0..=2))).collect());
            TailSequence::new(p, RationalVec::new(q), r).unwrap()
        })
        .collect();
    GeneratorFamily::new(n, points, tails).unwrap()
}

pub fn to_f64(r: &Rational) -> f64 {
    RationalVec::new(vec![r.clone()]).to_f64()[0]
}

/// Random families from a seed, so failures replay from the printed seed.
pub fn family_strategy(dims: std::ops::RangeInclusive<usize>) -> impl proptest::strategy::Strategy<Value = GeneratorFamily> {
    use proptest::prelude::*;
    (any::<u64>(), dims).prop_map(|(seed, n)| {
        use rand::SeedableRng;
        random_family(&mut ChaCha8Rng::seed_from_u64(seed), n)
    })
}

pub fn rational_strategy(max_num: i64, max_den: i64) -> impl proptest::strategy::Strategy<Value = Rational> {
    use proptest::prelude::*;
    (0..=max_num, 1..=max_den).prop_map(|(p, q)| rat(p, q))
}

pub fn positive_vec_strategy(n: usize) -> impl proptest::strategy::Strategy<Value = RationalVec> {
    use proptest::prelude::*;
    proptest::collection::vec((1..=24i64, 1..=4i64).prop_map(|(p, q)| rat(p, q)), n).prop_map(RationalVec::new)
}

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use smallden::{brute_force_q_min, q_min, OpenInterval, Rational};

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

#[test]
fn known_values() {
    assert_eq!(q_min(&rat(9, 20), &rat(1, 50)).unwrap().q, BigInt::from(9));
    assert_eq!(q_min(&rat(1, 2), &rat(1, 1000)).unwrap().q, BigInt::from(2));
    assert_eq!(q_min(&rat(355, 113), &rat(1, 10_000_000)).unwrap().q, BigInt::from(113));
    // A width of one always holds an integer or touches it from both sides.
    assert_eq!(q_min(&rat(1, 3), &rat(2, 1)).unwrap().q, BigInt::from(1));
    assert!(q_min(&rat(1, 2), &Rational::zero()).is_err());
    assert!(q_min(&rat(1, 2), &rat(-1, 3)).is_err());
}

#[test]
fn decimal_and_fraction_inputs_agree() {
    let a = q_min(&"0.45".parse().unwrap(), &"0.02".parse().unwrap()).unwrap();
    let b = q_min(&rat(9, 20), &rat(1, 50)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn open_endpoints_are_excluded() {
    // (1/3, 1/2): neither endpoint counts, 2/5 is the first interior fraction.
    let i = OpenInterval::new(rat(1, 3), rat(1, 2)).unwrap();
    assert_eq!(smallden::smallest_denominator(&i).q, BigInt::from(5));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn matches_exhaustive_scan(a in -50_000i64..50_000, b in 1i64..5_000, c in 2i64..200_000) {
        let (x, delta) = (rat(a, b), rat(1, c));
        let w = q_min(&x, &delta).unwrap();
        let scan = brute_force_q_min(&OpenInterval::centered(&x, &delta).unwrap(), 1_000_000).unwrap();
        prop_assert_eq!(w.q, scan.q);
    }

    #[test]
    fn witness_is_reduced_and_inside(a in any::<i32>(), b in 1i64..1_000_000_000, c in 2i64..1_000_000_000_000) {
        let (x, delta) = (rat(a as i64, b), rat(1, c));
        let w = q_min(&x, &delta).unwrap();
        prop_assert!(OpenInterval::centered(&x, &delta).unwrap().contains(&w.fraction()));
        prop_assert!(w.p.gcd(&w.q) == BigInt::from(1));
        prop_assert!(w.q >= BigInt::from(1));
    }

    #[test]
    fn shrinking_never_lowers(a in 0i64..1_000_000, b in 1i64..1_000_000, c in 2i64..1_000_000, k in 2i64..100) {
        let x = rat(a, b);
        let wide = q_min(&x, &rat(1, c)).unwrap().q;
        let narrow = q_min(&x, &rat(1, c * k)).unwrap().q;
        prop_assert!(narrow >= wide);
    }

    #[test]
    fn integer_shift_and_reflection(a in 0i64..1_000_000, b in 1i64..1_000_000, c in 2i64..1_000_000_000, k in -1000i64..1000) {
        let (x, delta) = (rat(a, b), rat(1, c));
        let base = q_min(&x, &delta).unwrap().q;
        let shifted = &x + &Rational::from_integer(k);
        prop_assert_eq!(q_min(&shifted, &delta).unwrap().q, base.clone());
        let reflected = -&x;
        prop_assert_eq!(q_min(&reflected, &delta).unwrap().q, base);
    }
}

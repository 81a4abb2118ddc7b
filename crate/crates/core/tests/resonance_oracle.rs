use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallden::resonance::{dirichlet_shell_cap, leading_sign, resonance_order, ResonanceQuery};
use smallden::Rational;

/// `ω_i = a_i / den`, `δ = 1 / k`.
#[derive(Clone)]
struct Case {
    a: Vec<i64>,
    den: i64,
    k: i64,
}

impl Case {
    fn hits(&self, p: &[i64]) -> bool {
        let r: i128 = p.iter().zip(&self.a).map(|(&c, &x)| c as i128 * x as i128).sum();
        let m = r.rem_euclid(self.den as i128);
        let dist = m.min(self.den as i128 - m);
        let n2: i128 = p.iter().map(|&c| c as i128 * c as i128).sum();
        // dist/den <= |p|_2 / k
        (dist * self.k as i128).pow(2) <= (self.den as i128).pow(2) * n2
    }

    fn query(&self) -> ResonanceQuery {
        let omega = self.a.iter().map(|&x| Rational::new(x, self.den).unwrap()).collect();
        let delta = Rational::new(1, self.k).unwrap();
        let cap = dirichlet_shell_cap(self.a.len(), &delta);
        ResonanceQuery::new(omega, delta).unwrap().with_cap(cap)
    }

    /// Least `‖p‖₁` over the whole box `[-B, B]^d`.
    fn brute_force(&self, bound: i64) -> u64 {
        let d = self.a.len();
        let mut best = u64::MAX;
        let mut p = vec![-bound; d];
        loop {
            let l1: u64 = p.iter().map(|c| c.unsigned_abs()).sum();
            if l1 > 0 && l1 < best && self.hits(&p) {
                best = l1;
            }
            let mut i = 0;
            while i < d {
                p[i] += 1;
                if p[i] <= bound {
                    break;
                }
                p[i] = -bound;
                i += 1;
            }
            if i == d {
                return best;
            }
        }
    }
}

fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let d = rng.random_range(1..=3usize);
    let den = rng.random_range(1..=1_000_000i64);
    let a = (0..d).map(|_| rng.random_range(0..=den)).collect();
    let k = match d {
        1 => rng.random_range(2..=2000),
        2 => rng.random_range(2..=300),
        _ => rng.random_range(2..=60),
    };
    Case { a, den, k }
}

#[test]
fn minimal_order_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let case = random_case(&mut rng);
        let query = case.query();
        let res = resonance_order(&query).unwrap();
        let expect = case.brute_force(query.shell_cap as i64);
        assert_eq!(res.order, expect, "omega={:?}/{} delta=1/{}", case.a, case.den, case.k);
        assert!(case.hits(&res.p));
        assert_eq!(res.p.iter().map(|c| c.unsigned_abs()).sum::<u64>(), res.order);
        assert_eq!(leading_sign(&res.p), num_bigint::Sign::Plus);
    }
}

#[test]
fn order_is_symmetric_under_reflection_and_permutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..300 {
        let case = random_case(&mut rng);
        let base = resonance_order(&case.query()).unwrap().order;

        let mut reflected = case.a.clone();
        let i = rng.random_range(0..reflected.len());
        reflected[i] = case.den - reflected[i];
        let reflected = Case { a: reflected, ..case.clone() };
        assert_eq!(resonance_order(&reflected.query()).unwrap().order, base);

        let mut permuted = case.a.clone();
        permuted.rotate_left(1);
        let last = permuted.len() - 1;
        permuted.swap(0, last);
        let permuted = Case { a: permuted, ..case };
        assert_eq!(resonance_order(&permuted.query()).unwrap().order, base);
    }
}

#[test]
fn tiny_cap_is_an_error_not_a_wrong_answer() {
    let omega = vec![Rational::new(7071, 10_000).unwrap(), Rational::new(31_416, 100_000).unwrap()];
    let query = ResonanceQuery::new(omega, Rational::new(1, 1_000_000_000_000i64).unwrap()).unwrap().with_cap(3);
    assert!(matches!(resonance_order(&query), Err(smallden::Error::CapExceeded { .. })));
}

//! Special-function helpers shared by [`crate::moments`] and
//! [`crate::limit_law`]: compensated summation, Dirichlet eta / Riemann zeta
//! by Borwein's acceleration, Hurwitz zeta by Euler–Maclaurin, and the tail
//! of series weighted by central binomial coefficients.

use std::f64::consts::PI;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

const BORWEIN_TERMS: usize = 36;

/// Dirichlet eta `sum (-1)^(k-1) / k^s` for real `s > 0` (Borwein's
/// algorithm 2; error below `3 / (3 + sqrt 8)^36 ~ 1e-27` relative).
pub fn dirichlet_eta(s: f64) -> f64 {
    let n = BORWEIN_TERMS;
    let nf = n as f64;
    let mut d = Vec::with_capacity(n + 1);
    // t_i = (n+i-1)! 4^i / ((n-i)! (2i)!), and d_k = n * sum_{i<=k} t_i.
    let mut t = 1.0 / nf;
    let mut acc = 0.0;
    for i in 0..=n {
        acc += t;
        d.push(nf * acc);
        let fi = i as f64;
        if i < n {
            t *= 4.0 * (nf + fi) * (nf - fi) / ((2.0 * fi + 1.0) * (2.0 * fi + 2.0));
        }
    }
    let dn = d[n];
    let mut sum = CompensatedSum::new();
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum.add(sign * (d[k] - dn) / ((k + 1) as f64).powf(s));
    }
    -sum.value() / dn
}

/// Riemann zeta through `zeta(s) = eta(s) / (1 - 2^(1-s))`, real `s > 1`.
pub fn riemann_zeta(s: f64) -> f64 {
    dirichlet_eta(s) / (1.0 - (1.0 - s).exp2())
}

// B_2, B_4, ..., B_16.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Hurwitz zeta `sum_{k>=0} (k + a)^(-s)` for real `s > 1`, `a > 0`.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    assert!(s > 1.0 && a > 0.0, "hurwitz_zeta needs s > 1 and a > 0");
    let shift = if a < 25.0 { (25.0 - a).ceil() as usize } else { 0 };
    let mut sum = CompensatedSum::new();
    for k in 0..shift {
        sum.add((a + k as f64).powf(-s));
    }
    let b = a + shift as f64;
    let b_pow = b.powf(-s);
    sum.add(b * b_pow / (s - 1.0));
    sum.add(0.5 * b_pow);
    // Euler–Maclaurin corrections B_2m/(2m)! * s(s+1)...(s+2m-2) * b^(-s-2m+1).
    let mut rising = s;
    let mut factorial = 2.0;
    let mut power = b_pow / b;
    for (m, bern) in BERNOULLI_EVEN.iter().enumerate() {
        if m > 0 {
            let k = 2.0 * m as f64;
            rising *= (s + k - 1.0) * (s + k);
            factorial *= (k + 1.0) * (k + 2.0);
            power /= b * b;
        }
        sum.add(bern / factorial * rising * power);
    }
    sum.value()
}

/// Coefficients of `Gamma(j + 1/2) / Gamma(j + 1) * sqrt(j)` in powers of
/// `1/j`; equivalently `C(2j, j) / 4^j ~ (pi j)^(-1/2) * sum a_k j^(-k)`.
pub const CENTRAL_BINOMIAL_ASYMPTOTIC: [f64; 11] = [
    1.0,
    -1.0 / 8.0,
    1.0 / 128.0,
    5.0 / 1024.0,
    -21.0 / 32768.0,
    -399.0 / 262144.0,
    869.0 / 4194304.0,
    39325.0 / 33554432.0,
    -334477.0 / 2147483648.0,
    -28717403.0 / 17179869184.0,
    59697183.0 / 274877906944.0,
];

/// Number of leading terms summed explicitly by [`central_binomial_series`].
pub const EXPLICIT_TERMS: usize = 256;

/// `c_j = C(2j-1, j) / 2^(2j-1) = C(2j, j) / 4^j` for `j = 1..=count`.
pub fn central_binomial_weights(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 0.5;
    for j in 1..=count {
        out.push(c);
        let jf = j as f64;
        c *= (2.0 * jf + 1.0) / (2.0 * jf + 2.0);
    }
    out
}

/// `sum_{j>=1} c_j * f(j)` where `f(j) = sum_m g_m j^(-m - e)` for large `j`.
///
/// The first [`EXPLICIT_TERMS`] terms are summed directly from `term(j, c_j)`.
/// The remainder uses the asymptotic expansion of `c_j` and the coefficients
/// `g` (`tail_powers`, given as `(exponent, coefficient)` pairs of
/// `f(j) ~ sum coeff * j^(-exponent)`), each resolved by a Hurwitz zeta value.
pub fn central_binomial_series(
    term: impl Fn(usize, f64) -> f64,
    tail_powers: &[(f64, f64)],
) -> f64 {
    let weights = central_binomial_weights(EXPLICIT_TERMS);
    let mut sum = CompensatedSum::new();
    for (i, &c) in weights.iter().enumerate() {
        sum.add(term(i + 1, c));
    }
    let start = (EXPLICIT_TERMS + 1) as f64;
    let inv_sqrt_pi = 1.0 / PI.sqrt();
    for &(exponent, coeff) in tail_powers {
        for (k, a_k) in CENTRAL_BINOMIAL_ASYMPTOTIC.iter().enumerate() {
            let s = exponent + k as f64 + 0.5;
            sum.add(inv_sqrt_pi * a_k * coeff * hurwitz_zeta(s, start));
        }
    }
    sum.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct summation of 1/k^s with an integral tail correction; an
    /// independent route to zeta for the cross-check.
    fn zeta_direct(s: f64) -> f64 {
        let n = 200_000usize;
        let mut sum = CompensatedSum::new();
        for k in (1..=n).rev() {
            sum.add((k as f64).powf(-s));
        }
        let nf = n as f64;
        sum.add(nf.powf(1.0 - s) / (s - 1.0) - 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0));
        sum.value()
    }

    #[test]
    fn zeta_known_values() {
        assert!((riemann_zeta(2.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((riemann_zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((riemann_zeta(3.0) - 1.202_056_903_159_594_3).abs() < 1e-15);
        assert!((riemann_zeta(5.0) - 1.036_927_755_143_369_9).abs() < 1e-15);
    }

    #[test]
    fn zeta_matches_direct_and_hurwitz_routes() {
        for s in [2.0, 3.0, 4.5, 7.0, 12.0] {
            let borwein = riemann_zeta(s);
            assert!((borwein - zeta_direct(s)).abs() < 1e-13, "s = {s}");
            assert!((borwein - hurwitz_zeta(s, 1.0)).abs() < 1e-15, "s = {s}");
        }
    }

    #[test]
    fn eta_at_one_is_log_two() {
        // Borwein's scheme also converges at s = 1.
        assert!((dirichlet_eta(1.0) - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn hurwitz_shift_identity() {
        for (s, a) in [(1.5, 0.3), (2.5, 7.0), (3.0, 257.0)] {
            let lhs = hurwitz_zeta(s, a) - hurwitz_zeta(s, a + 1.0);
            let rhs = a.powf(-s);
            assert!((lhs - rhs).abs() < 1e-14 * rhs.max(1.0), "s={s} a={a}");
        }
    }

    #[test]
    fn central_binomial_weights_match_binomials() {
        let w = central_binomial_weights(10);
        // C(2j-1, j) / 2^(2j-1)
        let exact = [0.5, 0.375, 0.3125, 0.2734375, 0.24609375];
        for (a, b) in w.iter().zip(exact) {
            assert_eq!(*a, b);
        }
        // Asymptotic expansion at j = 256 agrees with the recursion.
        let w = central_binomial_weights(256);
        let j = 256.0f64;
        let approx: f64 = CENTRAL_BINOMIAL_ASYMPTOTIC
            .iter()
            .enumerate()
            .map(|(k, a)| a * j.powi(-(k as i32)))
            .sum::<f64>()
            / (PI * j).sqrt();
        assert!((w[255] - approx).abs() < 1e-16);
    }

    #[test]
    fn central_binomial_series_sums_to_two_log_two() {
        // sum c_j / j = 2 log 2
        let v = central_binomial_series(|j, c| c / j as f64, &[(1.0, 1.0)]);
        assert!((v - 2.0 * std::f64::consts::LN_2).abs() < 1e-15);
    }
}

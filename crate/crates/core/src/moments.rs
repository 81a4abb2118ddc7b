//! Closed-form logarithmic moments of the limit law.
//!
//! The chain is: zeta values → coefficients `c_k` of the logarithmic
//! derivative of `B(z, ½)` → Laurent coefficients `b_n` of `B(z, ½)` →
//! auxiliary moments `ρ_n` → shifted moments `μ̃_n` → log-moments `μ_n`.
//!
//! `b_n` has two independent routes (the recurrence driven by `c_k`, and the
//! partial-fraction series), and so does `μ_n` (binomial un-shifting of `μ̃`
//! built on the recurrence, and the explicit double sum built on the series).

use std::collections::BTreeMap;
use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{central_binomial_series, riemann_zeta, CompensatedSum};

/// Highest order for which the tables have been validated against
/// independent quadrature.
pub const VALIDATED_MAX_ORDER: usize = 8;

/// `ζ(k)` for integer `k >= 2`.
pub fn zeta_value(k: i32) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain("zeta_value", format!("k = {k} < 2")));
    }
    Ok(riemann_zeta(k as f64))
}

/// Coefficient of `z^k` in `-1/z + 2β(2z+1)`:
/// `c_{-1} = -1`, `c_0 = 2 log 2`, `c_k = 2 (-1)^k (2^k - 1) ζ(k+1)`.
pub fn c_coeff(k: i32) -> Result<f64> {
    match k {
        k if k < -1 => Err(Error::domain("c_coeff", format!("k = {k} < -1"))),
        -1 => Ok(-1.0),
        0 => Ok(2.0 * LN_2),
        k => {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Ok(2.0 * sign * ((k as f64).exp2() - 1.0) * riemann_zeta(k as f64 + 1.0))
        }
    }
}

/// Laurent coefficients `b_{-1}, b_0, ..., b_max` of `B(z, ½)` from the
/// recurrence `b_{n+1} = 1/(n+2) sum_{k=-1}^{n} c_{n-k} b_k`. Index `i` of
/// the result holds `b_{i-1}`.
pub fn laurent_b_recursive_table(max: usize) -> Vec<f64> {
    let c: Vec<f64> = (-1..=max as i32)
        .map(|k| c_coeff(k).expect("k >= -1"))
        .collect();
    let c_at = |k: i32| c[(k + 1) as usize];
    let mut b = vec![1.0, c_at(0)];
    for n in 0..max as i32 {
        let mut acc = CompensatedSum::new();
        for k in -1..=n {
            acc.add(c_at(n - k) * b[(k + 1) as usize]);
        }
        b.push(acc.value() / (n + 2) as f64);
    }
    b.truncate(max + 2);
    b
}

/// `b_n` from the recurrence, `n >= -1`.
pub fn laurent_b_recursive(n: i32) -> Result<f64> {
    if n < -1 {
        return Err(Error::domain("laurent_b_recursive", format!("n = {n} < -1")));
    }
    let table = laurent_b_recursive_table(n.max(0) as usize);
    Ok(table[(n + 1) as usize])
}

/// `b_n = (-1)^n sum_{j>=1} C(2j-1, j) / (2^(2j-1) j^(n+1))`, `n >= 0`.
pub fn laurent_b_series(n: u32) -> f64 {
    let p = n as i32 + 1;
    let sum = central_binomial_series(|j, c| c * (j as f64).powi(-p), &[(p as f64, 1.0)]);
    if n % 2 == 0 {
        sum
    } else {
        -sum
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `ρ_n` given `b_{n+1}`.
fn rho_from_b(n: usize, b_next: f64) -> f64 {
    let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
    let first = factorial(n) * sign * b_next / ((n + 1) as f64).exp2();
    let second = 2.0 * (-LN_2).powi(n as i32 + 2) / ((n + 2) * (n + 1)) as f64;
    24.0 / (PI * PI) * (first + second)
}

/// Closed forms of `b_0..=b_4` in `log 2`, `π` and `ζ(3)`, `ζ(5)`.
pub fn laurent_b_closed_form(n: usize) -> Option<f64> {
    let l = LN_2;
    let p2 = PI * PI;
    let z3 = riemann_zeta(3.0);
    let z5 = riemann_zeta(5.0);
    Some(match n {
        0 => 2.0 * l,
        1 => 2.0 * l * l - p2 / 6.0,
        2 => 2.0 * z3 + 4.0 / 3.0 * l.powi(3) - p2 / 3.0 * l,
        3 => 4.0 * z3 * l - p2 * p2 / 40.0 + 2.0 / 3.0 * l.powi(4) - p2 / 3.0 * l * l,
        4 => {
            6.0 * z5 + (4.0 * l * l - p2 / 3.0) * z3 + 4.0 / 15.0 * l.powi(5) - 2.0 * p2 / 9.0 * l.powi(3)
                - p2 * p2 / 20.0 * l
        }
        _ => return None,
    })
}

/// `ρ_n`, the n-th derivative at 0 of `(α+2) 2^(-α) M(α)`, via the recurrence
/// coefficients.
pub fn rho(n: usize) -> f64 {
    let b = laurent_b_recursive_table(n + 1);
    rho_from_b(n, b[n + 2])
}

/// `ρ_n` with `b_{n+1}` taken from the partial-fraction series; stable for
/// large `n`.
pub fn rho_series(n: usize) -> f64 {
    rho_from_b(n, laurent_b_series(n as u32 + 1))
}

fn mu_tilde_from_rho(n: usize, rho: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for j in 0..=n {
        acc.add((-2.0f64).powi(-(j as i32)) * rho[n - j] / factorial(n - j));
    }
    factorial(n) / 2.0 * acc.value()
}

/// Shifted log-moment `μ̃_n`, the n-th moment of `log s - log 2`.
pub fn mu_tilde(n: usize) -> f64 {
    let rhos: Vec<f64> = (0..=n).map(rho).collect();
    mu_tilde_from_rho(n, &rhos)
}

fn mu_from_mu_tilde(n: usize, mu_tilde: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for k in 0..=n {
        acc.add(binomial(n, k) * LN_2.powi((n - k) as i32) * mu_tilde[k]);
    }
    acc.value()
}

/// Log-moment `μ_n = ∫ (log s)^n η(s) ds`, by un-shifting `μ̃`.
pub fn mu(n: usize) -> f64 {
    let rhos: Vec<f64> = (0..=n).map(rho).collect();
    let tildes: Vec<f64> = (0..=n).map(|k| mu_tilde_from_rho(k, &rhos)).collect();
    mu_from_mu_tilde(n, &tildes)
}

/// `μ_n` from the explicit double sum over `ρ`, with `ρ` taken from the
/// partial-fraction series.
pub fn mu_explicit(n: usize) -> f64 {
    let rhos: Vec<f64> = (0..=n).map(rho_series).collect();
    let mut acc = CompensatedSum::new();
    for k in 0..=n {
        let outer = LN_2.powi((n - k) as i32) / factorial(n - k);
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc.add(outer * sign / ((j as f64).exp2() * factorial(k - j)) * rhos[k - j]);
        }
    }
    factorial(n) / 2.0 * acc.value()
}

/// Standard deviation and skewness of the limit law of `log q_min + ½ log δ`.
pub fn sigma_and_skewness() -> (f64, f64) {
    let (m1, m2, m3) = (mu(1), mu(2), mu(3));
    let sigma = (m2 - m1 * m1).sqrt();
    let gamma = (m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3)) / sigma.powi(3);
    (sigma, gamma)
}

/// Mean and standard deviation in the base-10, length-`2δ` convention used
/// for torus-map resonance studies.
pub fn meiss_sander_constants() -> (f64, f64) {
    let (m1, m2) = (mu(1), mu(2));
    let ln10 = std::f64::consts::LN_10;
    ((m1 - 0.5 * LN_2) / ln10, (m2 - m1 * m1).sqrt() / ln10)
}

/// All closed-form constants up to a chosen order.
#[derive(Debug, Clone, Serialize)]
pub struct MomentTable {
    pub max_order: usize,
    /// Orders above [`VALIDATED_MAX_ORDER`] are computed but not validated.
    pub validated: bool,
    pub zeta: BTreeMap<i32, f64>,
    pub c: BTreeMap<i32, f64>,
    pub b: BTreeMap<i32, f64>,
    pub b_series: BTreeMap<i32, f64>,
    pub rho: BTreeMap<i32, f64>,
    pub mu_tilde: BTreeMap<i32, f64>,
    pub mu: BTreeMap<i32, f64>,
    pub mu_explicit: BTreeMap<i32, f64>,
    pub sigma: f64,
    pub gamma: f64,
    pub mu1_ms: f64,
    pub sigma_ms: f64,
}

impl MomentTable {
    /// Builds the table for orders `0..=max_order`; `σ`, `γ` and the
    /// resonance-convention constants are always included.
    pub fn build(max_order: usize) -> Result<Self> {
        if max_order < 1 {
            return Err(Error::domain("MomentTable", "max_order must be >= 1"));
        }
        let k = max_order.max(3);
        let b_rec = laurent_b_recursive_table(k + 1);
        let rhos: Vec<f64> = (0..=k).map(|n| rho_from_b(n, b_rec[n + 2])).collect();
        let tildes: Vec<f64> = (0..=k).map(|n| mu_tilde_from_rho(n, &rhos)).collect();
        let mus: Vec<f64> = (0..=k).map(|n| mu_from_mu_tilde(n, &tildes)).collect();

        let (m1, m2, m3) = (mus[1], mus[2], mus[3]);
        let sigma = (m2 - m1 * m1).sqrt();
        let gamma = (m3 - 3.0 * m1 * m2 + 2.0 * m1.powi(3)) / sigma.powi(3);
        let ln10 = std::f64::consts::LN_10;

        let orders = 0..=max_order as i32;
        Ok(MomentTable {
            max_order,
            validated: max_order <= VALIDATED_MAX_ORDER,
            zeta: (2..=max_order as i32 + 2)
                .map(|s| (s, riemann_zeta(s as f64)))
                .collect(),
            c: (-1..=max_order as i32 + 1)
                .map(|i| (i, c_coeff(i).expect("i >= -1")))
                .collect(),
            b: (-1..=max_order as i32 + 1)
                .map(|i| (i, b_rec[(i + 1) as usize]))
                .collect(),
            b_series: (0..=max_order as i32 + 1)
                .map(|i| (i, laurent_b_series(i as u32)))
                .collect(),
            rho: orders.clone().map(|i| (i, rhos[i as usize])).collect(),
            mu_tilde: orders.clone().map(|i| (i, tildes[i as usize])).collect(),
            mu: orders.clone().map(|i| (i, mus[i as usize])).collect(),
            mu_explicit: orders.map(|i| (i, mu_explicit(i as usize))).collect(),
            sigma,
            gamma,
            mu1_ms: (m1 - 0.5 * LN_2) / ln10,
            sigma_ms: sigma / ln10,
        })
    }

    /// Largest disagreement between the two routes for `b_n` (absolute) and
    /// for `μ_n` (relative to `max(1, |μ_n|)`).
    pub fn route_disagreement(&self) -> (f64, f64) {
        let b_gap = self
            .b_series
            .iter()
            .map(|(n, v)| (v - self.b[n]).abs())
            .fold(0.0, f64::max);
        let mu_gap = self
            .mu_explicit
            .iter()
            .map(|(n, v)| (v - self.mu[n]).abs() / self.mu[n].abs().max(1.0))
            .fold(0.0, f64::max);
        (b_gap, mu_gap)
    }

    /// Aligned plain-text rendering.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "{:>4}  {:>22}  {:>22}  {:>22}  {:>22}", "n", "b_n", "rho_n", "mu~_n", "mu_n");
        for n in 0..=self.max_order as i32 {
            let _ = writeln!(
                out,
                "{:>4}  {:>22.15e}  {:>22.15e}  {:>22.15e}  {:>22.15e}",
                n, self.b[&n], self.rho[&n], self.mu_tilde[&n], self.mu[&n]
            );
        }
        let _ = writeln!(out, "sigma     = {:.10}", self.sigma);
        let _ = writeln!(out, "skewness  = {:.10}", self.gamma);
        let _ = writeln!(out, "mu1_ms    = {:.10}", self.mu1_ms);
        let _ = writeln!(out, "sigma_ms  = {:.10}", self.sigma_ms);
        if !self.validated {
            let _ = writeln!(out, "warning: orders above {VALIDATED_MAX_ORDER} are not validated");
        }
        out
    }
}

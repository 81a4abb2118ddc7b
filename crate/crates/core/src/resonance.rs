//! Minimal resonance orders `M(ω, δ)`: the least `‖p‖₁` over nonzero integer
//! vectors `p` for which some integer `q` gives `|p·ω - q| <= δ ‖p‖₂`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{block_rng, random_dyadic, run_blocks};
use crate::rational_core::{q_min, Rational};
use crate::stats::{fit_line, Estimate};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResonanceQuery {
    pub omega: Vec<Rational>,
    pub delta: Rational,
    pub shell_cap: u64,
}

/// `⌈δ^(-1/k)⌉`, snapping values within roundoff of an integer.
fn ceil_root_recip(delta: &Rational, k: f64) -> u64 {
    let x = (-delta.ln() / k).exp();
    let snapped = if (x - x.round()).abs() <= 1e-12 * x { x.round() } else { x.ceil() };
    snapped.max(1.0) as u64
}

/// `10 ⌈δ^(-1/(d+1))⌉`.
pub fn default_shell_cap(d: usize, delta: &Rational) -> u64 {
    10 * ceil_root_recip(delta, d as f64 + 1.0)
}

/// A shell bound that always contains a resonance: by Dirichlet's theorem
/// some `p` with `‖p‖∞ <= ⌈δ^(-1/d)⌉` has `|p·ω - q| < δ`.
pub fn dirichlet_shell_cap(d: usize, delta: &Rational) -> u64 {
    d as u64 * (ceil_root_recip(delta, d as f64) + 1)
}

impl ResonanceQuery {
    /// Query with the default shell cap.
    pub fn new(omega: Vec<Rational>, delta: Rational) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::NonPositiveDelta(delta.to_string()));
        }
        let shell_cap = default_shell_cap(omega.len(), &delta);
        let query = ResonanceQuery {
            omega,
            delta,
            shell_cap,
        };
        query.validate()?;
        Ok(query)
    }

    pub fn with_cap(mut self, shell_cap: u64) -> Self {
        self.shell_cap = shell_cap;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.omega.is_empty() {
            return Err(Error::domain("resonance_order", "omega must have at least one coordinate"));
        }
        if !self.delta.is_positive() {
            return Err(Error::NonPositiveDelta(self.delta.to_string()));
        }
        if self.shell_cap == 0 {
            return Err(Error::domain("resonance_order", "shell cap must be at least 1"));
        }
        let (zero, one) = (Rational::zero(), Rational::one());
        if let Some(w) = self.omega.iter().find(|w| **w < zero || **w > one) {
            return Err(Error::domain("resonance_order", format!("coordinate {w} outside [0, 1]")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceResult {
    /// `M = ‖p‖₁`.
    pub order: u64,
    pub p: Vec<i64>,
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub q: BigInt,
    /// `|p·ω - q| / ‖p‖₂`.
    pub distance: f64,
}

/// `δ = u / v` plus its float value.
struct Threshold {
    u: BigInt,
    v: BigInt,
    value: f64,
}

impl Threshold {
    fn new(delta: &Rational) -> Self {
        Threshold {
            u: delta.numer().clone(),
            v: delta.denom().clone(),
            value: delta.to_f64(),
        }
    }
}

const FILTER_MARGIN: f64 = 1e-9;
const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// Decides `dist(p·ω, ℤ) <= δ ‖p‖₂` for a fixed `ω`.
enum Kernel {
    /// `ω_i = a_i / 2^128`, arithmetic modulo 2^128.
    Dyadic { a: Vec<u128>, scale: BigInt },
    /// `ω_i = a_i / den`.
    Exact { a: Vec<BigInt>, den: BigInt },
}

fn norm2_sq(p: &[i64]) -> u128 {
    p.iter().map(|&c| (c as i128 * c as i128) as u128).sum()
}

impl Kernel {
    fn dyadic(a: Vec<u128>) -> Self {
        Kernel::Dyadic {
            a,
            scale: BigInt::one() << 128u32,
        }
    }

    fn new(omega: &[Rational]) -> Self {
        let dyadic_shift = |w: &Rational| -> Option<u32> {
            let den = w.denom();
            let bits = den.bits();
            (bits <= 129 && *den == BigInt::one() << (bits - 1)).then(|| 129 - bits as u32)
        };
        if omega.iter().all(|w| dyadic_shift(w).is_some()) {
            let mask = (BigInt::one() << 128u32) - 1;
            let a = omega
                .iter()
                .map(|w| {
                    let shifted = (w.numer() << dyadic_shift(w).unwrap()) & &mask;
                    shifted.to_u128().expect("masked to 128 bits")
                })
                .collect();
            return Kernel::dyadic(a);
        }
        let den = omega
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let a = omega.iter().map(|w| w.numer() * (&den / w.denom())).collect();
        Kernel::Exact { a, den }
    }

    fn hits(&self, p: &[i64], t: &Threshold) -> bool {
        let n2 = norm2_sq(p);
        match self {
            Kernel::Dyadic { a, scale } => {
                let r = p
                    .iter()
                    .zip(a)
                    .fold(0u128, |acc, (&c, &x)| acc.wrapping_add((c as i128 as u128).wrapping_mul(x)));
                let dist = r.min(r.wrapping_neg());
                let lhs = dist as f64 / TWO_POW_128;
                let rhs = t.value * (n2 as f64).sqrt();
                if rhs.is_normal() {
                    if lhs > rhs * (1.0 + FILTER_MARGIN) {
                        return false;
                    }
                    if lhs < rhs * (1.0 - FILTER_MARGIN) {
                        return true;
                    }
                }
                let left = BigInt::from(dist) * &t.v;
                let right = &t.u * scale;
                &left * &left <= &right * &right * BigInt::from(n2)
            }
            Kernel::Exact { a, den } => {
                let r: BigInt = p.iter().zip(a).map(|(&c, x)| x * c).sum();
                let m = r.mod_floor(den);
                let dist = (den - &m).min(m);
                let left = dist * &t.v;
                let right = &t.u * den;
                &left * &left <= &right * &right * BigInt::from(n2)
            }
        }
    }
}

/// Calls `f` on each integer vector of length `dims` and `‖p‖₁ = s` in
/// lexicographic order; stops early when `f` returns true.
fn each_in_shell(buf: &mut Vec<i64>, dims: usize, s: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    if dims == 0 {
        return s == 0 && f(buf);
    }
    // The last coordinate is forced to +-s.
    let step = if dims == 1 { (2 * s).max(1) as usize } else { 1 };
    for c in (-s..=s).step_by(step) {
        buf.push(c);
        let stop = each_in_shell(buf, dims - 1, s - c.abs(), f);
        buf.pop();
        if stop {
            return true;
        }
    }
    false
}

/// As [`each_in_shell`], restricted to vectors whose first nonzero entry is
/// positive (one of each pair `±p`).
fn each_canonical(buf: &mut Vec<i64>, dims: usize, s: i64, f: &mut dyn FnMut(&[i64]) -> bool) -> bool {
    if dims == 0 {
        return false;
    }
    let first = if dims == 1 { s } else { 0 };
    for c in first..=s {
        buf.push(c);
        let stop = if c == 0 {
            each_canonical(buf, dims - 1, s, f)
        } else {
            each_in_shell(buf, dims - 1, s - c, f)
        };
        buf.pop();
        if stop {
            return true;
        }
    }
    false
}

/// Canonical vectors of a shell in the order they are tested.
pub fn canonical_shell(d: usize, s: u64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    each_canonical(&mut Vec::with_capacity(d), d, s as i64, &mut |p| {
        out.push(p.to_vec());
        false
    });
    out
}

fn search(kernel: &Kernel, d: usize, t: &Threshold, cap: u64) -> Result<Vec<i64>> {
    let mut buf = Vec::with_capacity(d);
    for s in 1..=cap {
        let mut found = None;
        each_canonical(&mut buf, d, s as i64, &mut |p| {
            let hit = kernel.hits(p, t);
            if hit {
                found = Some(p.to_vec());
            }
            hit
        });
        if let Some(p) = found {
            return Ok(p);
        }
    }
    Err(Error::CapExceeded { cap })
}

fn round_half_even(x: &Rational) -> BigInt {
    let f = x.floor();
    let frac = x - &Rational::from(f.clone());
    let half = Rational::new(1, 2).expect("nonzero");
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => f,
        std::cmp::Ordering::Greater => f + 1,
        std::cmp::Ordering::Equal if f.is_even() => f,
        std::cmp::Ordering::Equal => f + 1,
    }
}

fn witness(omega: &[Rational], p: Vec<i64>) -> ResonanceResult {
    let dot = omega
        .iter()
        .zip(&p)
        .fold(Rational::zero(), |acc, (w, &c)| acc + w * &Rational::from(c));
    let q = round_half_even(&dot);
    let gap = (dot - Rational::from(q.clone())).abs();
    ResonanceResult {
        order: p.iter().map(|c| c.unsigned_abs()).sum(),
        distance: gap.to_f64() / (norm2_sq(&p) as f64).sqrt(),
        p,
        q,
    }
}

/// `M(ω, δ)` with the lexicographically least canonical witness of the
/// first shell that resonates.
pub fn resonance_order(query: &ResonanceQuery) -> Result<ResonanceResult> {
    query.validate()?;
    let kernel = Kernel::new(&query.omega);
    let t = Threshold::new(&query.delta);
    let p = search(&kernel, query.omega.len(), &t, query.shell_cap)?;
    Ok(witness(&query.omega, p))
}

/// Comparison of `M(ω, δ)` in one dimension with `q_min(ω, 2δ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionCheck {
    pub resonance: u64,
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub q_min: BigInt,
    /// The resonance witness satisfies `|pω - q| = δ|p|` exactly, so it lies
    /// on the boundary of the closed interval but outside the open one.
    pub boundary: bool,
}

impl ReductionCheck {
    /// Equal orders, or a difference explained by a boundary witness.
    pub fn agrees(&self) -> bool {
        BigInt::from(self.resonance) == self.q_min || self.boundary
    }
}

pub fn reduction_check_d1(omega: &Rational, delta: &Rational) -> Result<ReductionCheck> {
    let query = ResonanceQuery::new(vec![omega.clone()], delta.clone())?;
    let cap = dirichlet_shell_cap(1, delta);
    let res = resonance_order(&query.with_cap(cap))?;
    let two_delta = delta * &Rational::from(2);
    let qm = q_min(omega, &two_delta)?.q;
    let pq = Rational::new(res.q.clone(), res.p[0])?;
    let boundary = (omega - &pq).abs() == *delta;
    Ok(ReductionCheck {
        resonance: res.order,
        q_min: qm,
        boundary,
    })
}

/// One draw of `ω` with its order and `δ^(1/(d+1)) M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceSample {
    pub omega: Vec<f64>,
    pub order: u64,
    pub scaled: f64,
}

fn check_batch_args(d: usize, delta: &Rational, n: usize) -> Result<()> {
    if !(1..=3).contains(&d) {
        return Err(Error::domain("resonance batch", format!("dimension {d} not in 1..=3")));
    }
    if !delta.is_positive() {
        return Err(Error::NonPositiveDelta(delta.to_string()));
    }
    if n == 0 {
        return Err(Error::Config("batch size must be at least 1".into()));
    }
    Ok(())
}

/// `n` samples of `δ^(1/(d+1)) M(ω, δ)` with `ω` uniform in `[0,1)^d`.
///
/// Batches search up to the larger of the default cap and the Dirichlet
/// bound, so every draw terminates with its true order.
pub fn scaled_resonance_batch(
    d: usize,
    delta: &Rational,
    n: usize,
    seed: u64,
    shards: usize,
) -> Result<Vec<ResonanceSample>> {
    check_batch_args(d, delta, n)?;
    let t = Threshold::new(delta);
    let cap = default_shell_cap(d, delta).max(dirichlet_shell_cap(d, delta));
    let factor = (delta.ln() / (d as f64 + 1.0)).exp();
    run_blocks(n, shards, |b, range| {
        let mut rng = block_rng(seed, b);
        range
            .map(|_| {
                let omega: Vec<Rational> = (0..d).map(|_| random_dyadic(&mut rng)).collect();
                let a = omega
                    .iter()
                    .map(|w| {
                        let shift = 128 - (w.denom().bits() as u32 - 1);
                        (w.numer() << shift).to_u128().expect("below 2^128")
                    })
                    .collect();
                let p = search(&Kernel::dyadic(a), d, &t, cap)?;
                let order: u64 = p.iter().map(|c| c.unsigned_abs()).sum();
                Ok(ResonanceSample {
                    omega: omega.iter().map(Rational::to_f64).collect(),
                    order,
                    scaled: factor * order as f64,
                })
            })
            .collect()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopePoint {
    #[serde(serialize_with = "crate::cli::ser_display")]
    pub delta: Rational,
    pub log_delta: f64,
    pub mean_log_order: f64,
    pub stderr: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    pub d: usize,
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    /// Asymptotic slope `-1/(d+1)`.
    pub expected: f64,
    pub points: Vec<SlopePoint>,
}

/// Least-squares line through `(log δ, mean log M)`.
pub fn fit_log_expectation(d: usize, points: Vec<SlopePoint>) -> Result<SlopeFit> {
    let xs: Vec<f64> = points.iter().map(|p| p.log_delta).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_log_order).collect();
    let es: Vec<f64> = points.iter().map(|p| p.stderr).collect();
    let line = fit_line(&xs, &ys, Some(&es))?;
    Ok(SlopeFit {
        d,
        slope: line.slope,
        intercept: line.intercept,
        stderr: line.stderr,
        expected: -1.0 / (d as f64 + 1.0),
        points,
    })
}

/// Slope of `E[log M(ω, δ)]` against `log δ`. Every `δ` reuses the same
/// draws of `ω`.
pub fn log_expectation_slope(
    d: usize,
    deltas: &[Rational],
    n_per_delta: usize,
    seed: u64,
    shards: usize,
) -> Result<SlopeFit> {
    let mut sorted: Vec<&Rational> = deltas.iter().collect();
    sorted.sort();
    sorted.dedup();
    if sorted.len() < 3 {
        return Err(Error::Regression("need at least three distinct deltas".into()));
    }
    if let Some(bad) = sorted.iter().find(|x| !x.is_positive()) {
        return Err(Error::NonPositiveDelta(bad.to_string()));
    }
    let span = sorted[sorted.len() - 1] / sorted[0];
    if span < Rational::from(100) {
        return Err(Error::Regression("deltas must span at least two decades".into()));
    }
    let mut points = Vec::with_capacity(deltas.len());
    for delta in deltas {
        let batch = scaled_resonance_batch(d, delta, n_per_delta, seed, shards)?;
        let est = Estimate::of(batch.iter().map(|s| (s.order as f64).ln()))?;
        points.push(SlopePoint {
            delta: delta.clone(),
            log_delta: delta.ln(),
            mean_log_order: est.mean,
            stderr: est.stderr,
            samples: est.count,
        });
    }
    fit_log_expectation(d, points)
}

/// Sign of an integer vector's first nonzero entry; `0` for the zero vector.
pub fn leading_sign(p: &[i64]) -> Sign {
    match p.iter().find(|c| **c != 0) {
        Some(c) if c.is_positive() => Sign::Plus,
        Some(_) => Sign::Minus,
        None => Sign::NoSign,
    }
}

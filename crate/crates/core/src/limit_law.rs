//! The limit law of `log q_min(x, δ) + ½ log δ`.
//!
//! The density `η_log` is piecewise closed-form; its tails are
//! `(6/π²) e^{2s}` exactly on `s <= 0` and `(12/π²) e^{-2s} (1 + e^{-2s} + …)`
//! as `s → ∞`. Integrals over the real line are done by adaptive quadrature
//! on `[-40, 40]` with both tails added analytically.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::rho_series;
use crate::quadrature::{integrate_with_breaks, kronrod15};
use crate::special::{central_binomial_series, CompensatedSum};

/// `6/π²`.
pub const SIX_OVER_PI2: f64 = 6.0 / (PI * PI);

/// The mode of `η_log`, `½ log 2`.
pub const MODE: f64 = 0.5 * LN_2;

/// Quadrature window; outside it both tails are integrated in closed form.
pub const WINDOW: f64 = 40.0;

const QUAD_TOL: f64 = 1e-13;

/// Breakpoints splitting the window where the integrand changes character.
const BREAKS: [f64; 16] = [
    -WINDOW, -24.0, -12.0, -6.0, -2.0, 0.0, LN_2, 1.0, 1.5, 2.0, 4.0, 8.0, 16.0, 24.0, 32.0,
    WINDOW,
];

/// A density evaluation tagged with its argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityValue {
    pub s: f64,
    pub value: f64,
}

impl DensityValue {
    pub fn at(s: f64) -> Self {
        DensityValue {
            s,
            value: eta_log(s),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Branch {
    Left,
    Middle,
    Right,
}

/// Evaluates one branch of the piecewise formula, regardless of where `s` is.
pub(crate) fn eta_log_branch(branch: Branch, s: f64) -> f64 {
    match branch {
        Branch::Left => SIX_OVER_PI2 * (2.0 * s).exp(),
        Branch::Middle => SIX_OVER_PI2 * (-(2.0 * s).exp() + 2.0 + 4.0 * s),
        Branch::Right => {
            // With u = e^{-2s}, w = sqrt(1 - 4u) and v = 1 - w = 4u / (1 + w),
            // -e^{2s} + 2 + 2e^{2s} sqrt(1/4 - u) = -2v / (2 - v) and
            // log(1/2 + sqrt(1/4 - u)) = log1p(-v/2).
            let u = (-2.0 * s).exp();
            let w = (1.0 - 4.0 * u).max(0.0).sqrt();
            let v = 4.0 * u / (1.0 + w);
            SIX_OVER_PI2 * (-2.0 * v / (2.0 - v) - 4.0 * (-0.5 * v).ln_1p())
        }
    }
}

/// Limit density of `log q_min(x, δ) + ½ log δ`.
pub fn eta_log(s: f64) -> f64 {
    if s <= 0.0 {
        eta_log_branch(Branch::Left, s)
    } else if s <= LN_2 {
        eta_log_branch(Branch::Middle, s)
    } else {
        eta_log_branch(Branch::Right, s)
    }
}

/// Limit density of `δ^{1/2} q_min(x, δ)`, `η(t) = η_log(log t) / t`.
pub fn eta(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain("eta", format!("t = {t} must be positive")));
    }
    Ok(eta_log(t.ln()) / t)
}

/// `∫ s^n e^{rate·s} ds` antiderivative evaluated at `s`.
fn exp_poly_antiderivative(n: u32, rate: f64, s: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut coeff = 1.0 / rate; // (-1)^k n!/(n-k)! / rate^{k+1}
    for k in 0..=n {
        acc.add(coeff * s.powi((n - k) as i32));
        coeff *= -((n - k) as f64) / rate;
    }
    (rate * s).exp() * acc.value()
}

/// `∫_{-∞}^{-WINDOW} s^n e^{αs} η_log(s) ds`, exact.
fn left_tail(n: u32, alpha: f64) -> f64 {
    SIX_OVER_PI2 * exp_poly_antiderivative(n, alpha + 2.0, -WINDOW)
}

/// `∫_{WINDOW}^{∞} s^n e^{αs} η_log(s) ds` from the two-term tail expansion;
/// the neglected part is `O(e^{(α-6)·WINDOW})`.
fn right_tail(n: u32, alpha: f64) -> f64 {
    let c = 2.0 * SIX_OVER_PI2;
    -c * (exp_poly_antiderivative(n, alpha - 2.0, WINDOW)
        + exp_poly_antiderivative(n, alpha - 4.0, WINDOW))
}

/// Tabulated survival function `∫_L^∞ η_log(s) ds`.
pub struct LimitCdf {
    knots: Vec<f64>,
    /// `survival[i] = ∫_{knots[i]}^∞ η_log`.
    survival: Vec<f64>,
}

const CDF_STEP: f64 = 0.125;

impl LimitCdf {
    fn build() -> Self {
        let count = (2.0 * WINDOW / CDF_STEP) as usize;
        let mut knots: Vec<f64> = (0..=count).map(|i| -WINDOW + i as f64 * CDF_STEP).collect();
        knots.push(LN_2);
        knots.sort_by(f64::total_cmp);

        let right = 0.5 * SIX_OVER_PI2 * (2.0 * (-2.0 * WINDOW).exp() + (-4.0 * WINDOW).exp());
        let mut survival = vec![0.0; knots.len()];
        let mut acc = CompensatedSum::new();
        acc.add(right);
        survival[knots.len() - 1] = acc.value();
        for i in (0..knots.len() - 1).rev() {
            acc.add(integrate_with_breaks(eta_log, &knots[i..=i + 1], 1e-15).value);
            survival[i] = acc.value();
        }
        LimitCdf { knots, survival }
    }

    /// Shared table, built on first use.
    pub fn global() -> &'static LimitCdf {
        static TABLE: OnceLock<LimitCdf> = OnceLock::new();
        TABLE.get_or_init(LimitCdf::build)
    }

    pub fn survival(&self, l: f64) -> f64 {
        if l.is_nan() {
            return f64::NAN;
        }
        if l >= WINDOW {
            return 0.5 * SIX_OVER_PI2 * (2.0 * (-2.0 * l).exp() + (-4.0 * l).exp());
        }
        if l <= -WINDOW {
            let left = 0.5 * SIX_OVER_PI2 * ((-2.0 * WINDOW).exp() - (2.0 * l).exp());
            return self.survival[0] + left;
        }
        let i = self.knots.partition_point(|&k| k <= l) - 1;
        let (_, hi) = (self.knots[i], self.knots[i + 1]);
        let (piece, err) = kronrod15(&eta_log, l, hi);
        let piece = if err > 1e-15 {
            integrate_with_breaks(eta_log, &[l, hi], 1e-15).value
        } else {
            piece
        };
        self.survival[i + 1] + piece
    }

    pub fn cdf(&self, s: f64) -> f64 {
        1.0 - self.survival(s)
    }

    /// Quantile function; safeguarded Newton iteration on the CDF.
    pub fn quantile(&self, p: f64) -> f64 {
        assert!(p > 0.0 && p < 1.0, "quantile needs 0 < p < 1");
        // Closed form on the left branch: cdf(s) = (3/π²) e^{2s} for s <= 0.
        let left_mass = 0.5 * SIX_OVER_PI2;
        if p <= left_mass {
            return 0.5 * (p / left_mass).ln();
        }
        let (mut lo, mut hi) = (0.0, WINDOW);
        let mut s = MODE;
        for _ in 0..100 {
            let f = self.cdf(s) - p;
            if f.abs() < 1e-15 {
                break;
            }
            if f > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let newton = s - f / eta_log(s);
            s = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo < 1e-14 {
                break;
            }
        }
        s
    }
}

/// `∫_L^∞ η_log(s) ds` (absolute error well below 1e-10).
pub fn survival_eta_log(l: f64) -> f64 {
    LimitCdf::global().survival(l)
}

/// Limit CDF, `1 - survival_eta_log(s)`.
pub fn cdf_eta_log(s: f64) -> f64 {
    LimitCdf::global().cdf(s)
}

/// `∫ s^n e^{αs} η_log(s) ds` over the real line by quadrature plus
/// analytic tails; equals `∫_0^∞ t^α (log t)^n η(t) dt`.
pub fn generalized_moment_quadrature(n: u32, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let body = integrate_with_breaks(
        |s: f64| s.powi(n as i32) * (alpha * s).exp() * eta_log(s),
        &BREAKS,
        QUAD_TOL,
    );
    Ok(compensate3(left_tail(n, alpha), body.value, right_tail(n, alpha)))
}

fn compensate3(a: f64, b: f64, c: f64) -> f64 {
    [a, b, c].into_iter().collect::<CompensatedSum>().value()
}

/// `∫_ℝ η_log` computed piecewise, without assuming normalization.
pub fn total_mass() -> f64 {
    generalized_moment_quadrature(0, 0.0).expect("alpha = 0 is in range")
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha.abs() < 2.0) {
        return Err(Error::domain("mgf", format!("alpha = {alpha} outside (-2, 2)")));
    }
    Ok(())
}

/// `B(z, ½) = Γ(z) Γ(½) / Γ(z + ½)`.
pub fn beta_half(z: f64) -> Result<f64> {
    check_beta_arg(z)?;
    let shifted = z + 0.5;
    if shifted <= 0.0 && shifted == shifted.round() {
        // 1/Γ vanishes at the poles of Γ(z + ½).
        return Ok(0.0);
    }
    if z > 100.0 {
        let log = libm::lgamma(z) + libm::lgamma(0.5) - libm::lgamma(shifted);
        return Ok(log.exp());
    }
    Ok(libm::tgamma(z) * PI.sqrt() / libm::tgamma(shifted))
}

/// `B(z, ½)` from the partial-fraction expansion
/// `1/z + sum_{j>=1} (2j-1)!!/(2^j j!) / (z + j)`.
pub fn beta_half_series(z: f64) -> Result<f64> {
    check_beta_arg(z)?;
    if z.abs() > 128.0 {
        return Err(Error::domain("beta_half_series", format!("|z| = {} > 128", z.abs())));
    }
    // 1/(z+j) = sum_m (-z)^m j^{-m-1} for j > |z|.
    let ratio = (z.abs() / (crate::special::EXPLICIT_TERMS as f64 + 1.0)).max(1e-300);
    let orders = ((-20.0 / ratio.log10()).ceil() as usize).clamp(1, 80);
    let tail: Vec<(f64, f64)> = (0..orders)
        .map(|m| ((m + 1) as f64, (-z).powi(m as i32)))
        .collect();
    let sum = central_binomial_series(|j, c| c / (z + j as f64), &tail);
    Ok(1.0 / z + sum)
}

fn check_beta_arg(z: f64) -> Result<()> {
    if !z.is_finite() || (z <= 0.0 && z == z.round()) {
        return Err(Error::domain("beta_half", format!("z = {z} is a pole")));
    }
    Ok(())
}

/// Inside this radius `M(α)` is summed from its Taylor series; the closed
/// form loses about `2 log10(1/|α|)` digits to cancellation near zero.
pub const MGF_SERIES_RADIUS: f64 = 0.5;

const MGF_SERIES_TERMS: usize = 40;

/// `ρ_k / k!`, the Taylor coefficients of `(α + 2) 2^{-α} M(α)`.
fn mgf_series_coefficients() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut fact = 1.0;
        (0..MGF_SERIES_TERMS)
            .map(|k| {
                if k > 0 {
                    fact *= k as f64;
                }
                rho_series(k) / fact
            })
            .collect()
    })
}

/// Power-series evaluation of `M(α)`, accurate for `|α| <= 1/2`.
pub fn mgf_series(alpha: f64) -> f64 {
    let coeffs = mgf_series_coefficients();
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * alpha + c;
    }
    alpha.exp2() * acc / (alpha + 2.0)
}

/// `M(α) = 24/(π² α (α+2)) (2/α + 2^α B(-α/2, ½))` as written, for `α != 0`.
pub fn mgf_closed_form(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        return Err(Error::domain("mgf_closed_form", "alpha = 0 is a removable singularity"));
    }
    let b = beta_half(-0.5 * alpha)?;
    Ok(24.0 / (PI * PI * alpha * (alpha + 2.0)) * (2.0 / alpha + alpha.exp2() * b))
}

/// Moment generating function of `η_log`, i.e. `∫_0^∞ t^α η(t) dt`, for real
/// `|α| < 2`; `M(0) = 1`.
pub fn mgf(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if alpha == 0.0 {
        Ok(1.0)
    } else if alpha.abs() < MGF_SERIES_RADIUS {
        Ok(mgf_series(alpha))
    } else {
        mgf_closed_form(alpha)
    }
}

/// An evaluation of the moment generating function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MgfValue {
    pub alpha: f64,
    pub value: f64,
}

impl MgfValue {
    pub fn at(alpha: f64) -> Result<Self> {
        Ok(MgfValue {
            alpha,
            value: mgf(alpha)?,
        })
    }

    /// `(α + 2) 2^{-α} M(α)`, whose derivatives at zero are `ρ_n`.
    pub fn shifted(&self) -> f64 {
        (self.alpha + 2.0) * (-self.alpha).exp2() * self.value
    }
}

/// Base finite-difference step for derivative order `n`, before Richardson
/// extrapolation. Roundoff grows like `ε / h^n`, so higher orders need wider
/// stencils.
pub fn fd_base_step(n: u32) -> f64 {
    match n {
        0 | 1 => 1e-3,
        2 => 2e-2,
        3 => 6e-2,
        _ => 1.2e-1,
    }
}

fn central_difference(f: &impl Fn(f64) -> Result<f64>, x: f64, n: u32, h: f64) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    let mut binom = 1.0;
    for i in 0..=n {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let offset = (0.5 * n as f64 - i as f64) * h;
        acc.add(sign * binom * f(x + offset)?);
        binom *= (n - i) as f64 / (i + 1) as f64;
    }
    Ok(acc.value() / h.powi(n as i32))
}

/// Generalized moment `μ_{n,α} = d^n M / dα^n`, by central differences of
/// [`mgf`] with two levels of Richardson extrapolation.
pub fn generalized_moment(n: u32, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n > 4 {
        return Err(Error::domain("generalized_moment", format!("n = {n} > 4")));
    }
    if n == 0 {
        return mgf(alpha);
    }
    // Keep the widest stencil inside (-2, 2).
    let reach = 0.5 * n as f64;
    let room = 0.9 * (2.0 - alpha.abs()) / reach;
    let h = fd_base_step(n).min(room);
    let d0 = central_difference(&mgf, alpha, n, h)?;
    let d1 = central_difference(&mgf, alpha, n, h / 2.0)?;
    let d2 = central_difference(&mgf, alpha, n, h / 4.0)?;
    let r0 = (4.0 * d1 - d0) / 3.0;
    let r1 = (4.0 * d2 - d1) / 3.0;
    Ok((16.0 * r1 - r0) / 15.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn density_examples() {
        assert!(close(eta_log(0.0), 0.607_927_101_854_026_6, 1e-15));
        assert!(close(eta_log(MODE), 12.0 * LN_2 / (PI * PI), 1e-15));
        assert!(close(eta_log(MODE), 0.842_765_913_272_194_5, 1e-15));
        assert!(close(eta_log(LN_2), SIX_OVER_PI2 * (4.0 * LN_2 - 2.0), 1e-15));
        assert!(close(eta_log(LN_2), 0.469_677_622_836_335_8, 1e-15));
        assert!(close(eta_log(3.0), 0.003_021_302_744_372_46, 1e-16));
    }

    #[test]
    fn branches_agree_at_seams() {
        let at0 = (eta_log_branch(Branch::Left, 0.0), eta_log_branch(Branch::Middle, 0.0));
        assert!((at0.0 - at0.1).abs() < 1e-14);
        let at2 = (
            eta_log_branch(Branch::Middle, LN_2),
            eta_log_branch(Branch::Right, LN_2),
        );
        assert!((at2.0 - at2.1).abs() < 1e-14, "{at2:?}");
    }

    #[test]
    fn tails() {
        for s in [-0.5, -3.0, -17.25] {
            assert_eq!(eta_log(s), SIX_OVER_PI2 * (-2.0 * f64::abs(s)).exp());
        }
        for s in [8.0, 12.0, 30.0, 200.0] {
            let ratio = eta_log(s) / (2.0 * SIX_OVER_PI2 * (-2.0 * s).exp());
            assert!((ratio - 1.0).abs() < 0.01, "s = {s}: {ratio}");
        }
        // Second-order tail coefficient.
        let s = 5.0f64;
        let u = (-2.0 * s).exp();
        let two_term = 2.0 * SIX_OVER_PI2 * (u + u * u);
        assert!((eta_log(s) / two_term - 1.0).abs() < 5.0 * u * u);
    }

    #[test]
    fn companion_density() {
        assert!(close(eta(1.0).unwrap(), SIX_OVER_PI2, 1e-15));
        let e = std::f64::consts::E;
        assert!(close(eta(1.0 / e).unwrap(), SIX_OVER_PI2 / e, 1e-15));
        assert!(eta(0.0).is_err());
        assert!(eta(-1.0).is_err());
        let mass = integrate_with_breaks(
            |t: f64| eta(t).unwrap(),
            &[1e-12, 0.5, 1.0, 2.0, 4.0, 16.0, 1e3, 1e6],
            1e-12,
        );
        // ∫_{t>1e6} η ≈ (6/π²) t^{-2}, ∫_{t<1e-12} η ≈ (3/π²) t^2.
        assert!(close(mass.value + SIX_OVER_PI2 * 1e-12, 1.0, 1e-9));
    }

    #[test]
    fn survival_examples() {
        assert!(close(survival_eta_log(-1e3), 1.0, 1e-12));
        assert!(close(survival_eta_log(-60.0), 1.0, 1e-12));
        assert!(close(survival_eta_log(0.0), 1.0 - 3.0 / (PI * PI), 1e-13));
        assert!(close(survival_eta_log(LN_2), 0.181_000_371_925_183_1, 1e-13));
        assert!(close(survival_eta_log(1.0), 0.088_923_808_374_892_28, 1e-13));
        assert!(close(survival_eta_log(3.0), 0.001_508_773_407_489_021, 1e-14));
        let s10 = survival_eta_log(10.0);
        assert!(s10 <= 1e-8);
        assert!(close(s10, 1.253_031_149_456_346e-9, 1e-17));
        assert!(close(s10 / (SIX_OVER_PI2 * (-20.0f64).exp()), 1.0, 1e-8));
        // Partial-panel evaluation agrees with knot values.
        assert!(close(survival_eta_log(0.0625 + 1e-300), survival_eta_log(0.0625), 1e-15));
    }

    #[test]
    fn quantile_inverts_cdf() {
        let cdf = LimitCdf::global();
        for p in [1e-6, 0.1, 0.303, 0.5, 0.9, 0.999999] {
            let s = cdf.quantile(p);
            assert!(close(cdf.cdf(s), p, 1e-13), "p = {p}");
        }
    }

    #[test]
    fn normalization() {
        assert!(close(total_mass(), 1.0, 1e-12));
    }

    #[test]
    fn beta_examples_and_paths() {
        assert!(close(beta_half(1.0).unwrap(), 2.0, 1e-14));
        assert!(close(beta_half(0.5).unwrap(), PI, 1e-14));
        assert!(close(beta_half(2.0).unwrap(), 4.0 / 3.0, 1e-14));
        assert_eq!(beta_half(-0.5).unwrap(), 0.0);
        for z in [0.1, 0.25, 0.5, 1.0, 2.5, -0.25, -0.75, -1.5, 7.3] {
            let (a, b) = (beta_half(z).unwrap(), beta_half_series(z).unwrap());
            assert!((a - b).abs() < 1e-12 * a.abs().max(1.0), "z = {z}: {a} vs {b}");
        }
        assert!(close(beta_half_series(0.1).unwrap(), 11.323_086_975_215_753, 1e-12));
        assert!(close(beta_half(-0.25).unwrap(), -2.396_280_469_471_184_4, 1e-12));
        for pole in [0.0, -1.0, -3.0] {
            assert!(beta_half(pole).is_err());
            assert!(beta_half_series(pole).is_err());
        }
    }

    #[test]
    fn mgf_values() {
        assert_eq!(mgf(0.0).unwrap(), 1.0);
        assert!(close(mgf(1.0).unwrap(), 16.0 / (PI * PI), 1e-12));
        assert!(close(mgf(-1.0).unwrap(), 12.0 * (4.0 - PI) / (PI * PI), 1e-12));
        assert!(mgf(2.0).is_err());
        assert!(mgf(-2.5).is_err());
        assert!(mgf(f64::NAN).is_err());
        // Series and closed form overlap away from zero.
        for a in [-0.6, -0.45, 0.3, 0.45, 0.7] {
            let (s, c) = (mgf_series(a), mgf_closed_form(a).unwrap());
            assert!(close(s, c, 1e-13), "alpha = {a}: {s} vs {c}");
        }
        // Continuity through zero.
        assert!(close(mgf(1e-9).unwrap(), 1.0, 1e-9));
        let v = MgfValue::at(0.0).unwrap();
        assert!(close(v.shifted(), 2.0, 1e-15));
    }

    #[test]
    fn mgf_matches_quadrature() {
        let reference = [
            (-1.5, 1.576_136_927_184_473_3),
            (-1.0, 1.043_698_180_626_725),
            (-0.5, 0.946_260_890_829_766_2),
            (0.5, 1.188_906_323_998_889),
            (1.0, 1.621_138_938_277_404_3),
            (1.5, 2.907_643_522_275_100_4),
        ];
        for (a, r) in reference {
            let q = generalized_moment_quadrature(0, a).unwrap();
            let m = mgf(a).unwrap();
            assert!(close(q, r, 1e-10), "quadrature alpha = {a}");
            assert!(close(m, r, 1e-12), "mgf alpha = {a}");
        }
    }

    #[test]
    fn generalized_moment_table_values() {
        let l = LN_2;
        let p2 = PI * PI;
        let table = [
            (0, 1.0, 16.0 / p2),
            (1, 0.0, 6.0 * 1.202_056_903_159_594_3 / p2 - 0.5),
            (1, 1.0, 16.0 * (3.0 * PI - 7.0) / (3.0 * p2)),
            (2, 1.0, 32.0 * (34.0 + 3.0 * PI * (6.0 * l - 7.0)) / (9.0 * p2)),
            (1, -1.0, 12.0 * (4.0 - PI * 4f64.ln()) / p2),
            (2, -1.0, (192.0 - PI * (p2 + 24.0 + 48.0 * l * l)) / p2),
        ];
        for (n, a, expected) in table {
            let fd = generalized_moment(n, a).unwrap();
            let quad = generalized_moment_quadrature(n, a).unwrap();
            assert!(close(quad, expected, 1e-9), "quad n={n} a={a}: {quad} vs {expected}");
            assert!(close(fd, expected, 1e-7), "fd n={n} a={a}: {fd} vs {expected}");
        }
        // μ_{2,1} pinned by the quadrature oracle (mpmath, 40 digits).
        assert!(close(generalized_moment(2, 1.0).unwrap(), 2.602_145_552_809_275_8, 1e-7));
        assert!(close(generalized_moment(3, 1.0).unwrap(), 7.369_192_587_182_377_5, 1e-6));
    }

    #[test]
    fn generalized_moment_domain() {
        assert!(generalized_moment(5, 0.0).is_err());
        assert!(generalized_moment(1, 2.0).is_err());
        // Near the edge the stencil shrinks but stays finite.
        assert!(generalized_moment(2, 1.9).unwrap().is_finite());
    }
}

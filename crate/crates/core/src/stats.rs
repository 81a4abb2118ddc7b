//! Small statistics toolkit: Kolmogorov–Smirnov distances, sample moments
//! with standard errors, and a weighted-error least-squares line.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::CompensatedSum;

/// One-sample KS distance `sup |F_n(x) - F(x)|`; `values` need not be sorted.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    let mut i = 0;
    while i < sorted.len() {
        // Treat a run of ties as one jump of the empirical CDF.
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let below = i as f64 / n;
        let at = j as f64 / n;
        worst = worst.max((f - below).abs()).max((at - f).abs());
        i = j;
    }
    Ok(worst)
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut worst = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        worst = worst.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(worst)
}

/// Critical KS distance at the 99% level for `n` samples (asymptotic).
pub fn ks_critical_99(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

/// Mean of `f(x)` over the sample together with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

impl Estimate {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let values: Vec<f64> = values.into_iter().collect();
        if values.is_empty() {
            return Err(Error::EmptyBatch);
        }
        let n = values.len() as f64;
        let mean = values.iter().copied().collect::<CompensatedSum>().value() / n;
        let var = if values.len() > 1 {
            values
                .iter()
                .map(|v| (v - mean).powi(2))
                .collect::<CompensatedSum>()
                .value()
                / (n - 1.0)
        } else {
            0.0
        };
        Ok(Estimate {
            mean,
            stderr: (var / n).sqrt(),
            count: values.len(),
        })
    }

    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn covers(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.stderr
    }
}

/// Least-squares line `y = intercept + slope * x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope propagated from the per-point errors of
    /// `y`; falls back to residual scatter when those are absent.
    pub stderr: f64,
    pub points: usize,
}

/// Ordinary least squares of `ys` on `xs`; `y_errors` (optional) are the
/// standard errors of each `y`, used only for the slope's error bar.
pub fn fit_line(xs: &[f64], ys: &[f64], y_errors: Option<&[f64]>) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::Regression("x and y lengths differ".into()));
    }
    if xs.len() < 2 {
        return Err(Error::Regression("need at least two points".into()));
    }
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Regression("all x values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let stderr = match y_errors {
        Some(errs) => xs
            .iter()
            .zip(errs)
            .map(|(x, e)| ((x - x_mean) / sxx * e).powi(2))
            .sum::<f64>()
            .sqrt(),
        None if xs.len() > 2 => {
            let rss: f64 = xs
                .iter()
                .zip(ys)
                .map(|(x, y)| (y - intercept - slope * x).powi(2))
                .sum();
            (rss / (n - 2.0) / sxx).sqrt()
        }
        None => 0.0,
    };
    Ok(LineFit {
        slope,
        intercept,
        stderr,
        points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_single_point_at_median() {
        let d = ks_statistic(&[0.0], |x| if x < 0.0 { 0.0 } else { 0.5 + x }).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn ks_uniform_grid_is_small() {
        let n = 1000;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn ks_handles_ties() {
        let d = ks_statistic(&[1.0, 1.0, 1.0, 1.0], |x| if x < 1.0 { 0.0 } else { 0.5 }).unwrap();
        assert!((d - 0.5).abs() < 1e-15);
        assert!(ks_statistic(&[], |x| x).is_err());
    }

    #[test]
    fn two_sample() {
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[2.0, 1.0]).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&[0.0], &[1.0]).unwrap(), 1.0);
    }

    #[test]
    fn estimate_and_coverage() {
        let e = Estimate::of([1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(e.mean, 2.5);
        assert!((e.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert!(e.covers(3.0, 1.0));
        assert!(!e.covers(4.0, 1.0));
        assert!(Estimate::of(Vec::new()).is_err());
    }

    #[test]
    fn line_fit() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let fit = fit_line(&xs, &[1.0, 3.0, 5.0, 7.0], None).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-15 && (fit.intercept - 1.0).abs() < 1e-15);
        assert!(fit.stderr < 1e-12);
        let flat = fit_line(&xs, &[4.0; 4], Some(&[0.1; 4])).unwrap();
        assert_eq!(flat.slope, 0.0);
        assert!((flat.stderr - 0.1 / 5f64.sqrt()).abs() < 1e-15);
        assert!(fit_line(&[1.0, 1.0], &[0.0, 1.0], None).is_err());
        assert!(fit_line(&[1.0], &[0.0], None).is_err());
    }
}

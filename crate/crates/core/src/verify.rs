//! The numerical acceptance suite, one function per criterion.
//!
//! Every check returns a [`Report`] holding a pass/fail [`Outcome`] and the
//! CSV/JSON artifacts it produced. Artifacts embed a [`RunManifest`] whose
//! timestamp comes from [`VerifyOptions`], so repeated runs with the same
//! options give byte-identical files.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::cli::{fmt_g17, json_with_manifest, write_csv, RunManifest};
use crate::error::Result;
use crate::experiments::{
    batch_histogram, block_rng, ks_distance, log_moment_estimate, resonance_convention, sample, SampleConfig,
};
use crate::limit_law::{
    eta_log, eta_log_branch, generalized_moment_quadrature, mgf, total_mass, Branch, LimitCdf, SIX_OVER_PI2, WINDOW,
};
use crate::moments::{laurent_b_closed_form, laurent_b_recursive, laurent_b_series, MomentTable};
use crate::quadrature::integrate;
use crate::rational_core::{brute_force_q_min, smallest_denominator, OpenInterval, Rational};
use crate::resonance::{log_expectation_slope, reduction_check_d1, scaled_resonance_batch};

/// Timestamp written into verify manifests unless overridden.
pub const FIXED_TIMESTAMP: &str = "1970-01-01T00:00:00Z";

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub shards: usize,
    pub timestamp: String,
    /// Reduced sample sizes for smoke runs; statistical thresholds are not
    /// meaningful at this size.
    pub quick: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 20_240_601,
            shards: 4,
            timestamp: FIXED_TIMESTAMP.to_string(),
            quick: false,
        }
    }
}

impl VerifyOptions {
    fn manifest(&self, name: &str) -> RunManifest {
        RunManifest::new(&format!("verify/{name}"), self.seed, &self.timestamp).param("quick", self.quick)
    }

    fn size(&self, full: usize, quick: usize) -> usize {
        if self.quick {
            quick
        } else {
            full
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:>2} {:<28} {:>8.2}s  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone)]
pub struct Artifact {
    pub file: String,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub outcome: Outcome,
    pub artifacts: Vec<Artifact>,
}

struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks {
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    fn finish(self, id: u8, name: &'static str, start: Instant, artifacts: Vec<Artifact>) -> Report {
        let passed = self.failures.is_empty();
        let detail = if passed { self.notes.join("; ") } else { self.failures.join("; ") };
        Report {
            outcome: Outcome {
                id,
                name,
                passed,
                detail,
                seconds: start.elapsed().as_secs_f64(),
            },
            artifacts,
        }
    }
}

fn csv_artifact(file: &str, manifest: &RunManifest, columns: &[&str], rows: Vec<Vec<String>>) -> Artifact {
    let mut buf = Vec::new();
    write_csv(&mut buf, manifest, columns, rows).expect("writing to memory");
    Artifact {
        file: file.to_string(),
        contents: String::from_utf8(buf).expect("utf-8"),
    }
}

fn json_artifact(file: &str, manifest: &RunManifest, body: impl Serialize) -> Artifact {
    Artifact {
        file: file.to_string(),
        contents: json_with_manifest(manifest, body),
    }
}

fn r(s: &str) -> Rational {
    s.parse().expect("literal rational")
}

/// Whether `value` rounds to `printed` at the printed number of decimals.
pub fn matches_printed(value: f64, printed: &str) -> bool {
    let decimals = printed.split('.').nth(1).map_or(0, str::len);
    format!("{value:.decimals$}") == printed
}

/// Criterion 1: closed-form constants against their printed values.
pub fn closed_form_constants(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let table = MomentTable::build(3)?;
    let printed = [
        ("mu1", table.mu[&1], "0.230763"),
        ("mu2", table.mu[&2], "0.509457"),
        ("mu3", table.mu[&3], "0.269423"),
        ("sigma", table.sigma, "0.67543"),
        ("gamma", table.gamma, "-0.190475"),
        ("rho1", table.rho[&1], "0.0752316"),
        ("rho2", table.rho[&2], "0.415242"),
        ("rho3", table.rho[&3], "0.429262"),
        ("mu1_ms", table.mu1_ms, "-0.0502959"),
        ("sigma_ms", table.sigma_ms, "0.293336"),
    ];
    let mut c = Checks::new();
    let mismatched: Vec<String> = printed
        .iter()
        .filter(|(_, v, p)| !matches_printed(*v, p))
        .map(|(n, v, p)| format!("{n}={v} (printed {p})"))
        .collect();
    c.check(
        mismatched.is_empty(),
        if mismatched.is_empty() {
            "10 constants match printed digits".to_string()
        } else {
            mismatched.join(", ")
        },
    );
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 1.0, format!("{secs:.3}s < 1s"));
    let artifact = json_artifact("moments.json", &opts.manifest("moments").param("max_n", 3), &table);
    Ok(c.finish(1, "closed-form constants", start, vec![artifact]))
}

/// Criterion 2: both routes to `b_n` agree and match the closed forms.
pub fn laurent_routes(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let mut c = Checks::new();
    let mut rows = Vec::new();
    let mut worst_gap = 0.0f64;
    let mut worst_closed = 0.0f64;
    for n in 0..=8u32 {
        let rec = laurent_b_recursive(n as i32)?;
        let ser = laurent_b_series(n);
        worst_gap = worst_gap.max((rec - ser).abs());
        let closed = laurent_b_closed_form(n as usize);
        if let Some(cf) = closed {
            worst_closed = worst_closed.max((rec - cf).abs()).max((ser - cf).abs());
        }
        rows.push(vec![
            n.to_string(),
            fmt_g17(rec),
            fmt_g17(ser),
            closed.map_or(String::new(), fmt_g17),
        ]);
    }
    c.check(worst_gap < 1e-12, format!("route gap {worst_gap:.2e} < 1e-12"));
    c.check(worst_closed < 1e-12, format!("closed-form gap {worst_closed:.2e} < 1e-12"));
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 1.0, format!("{secs:.3}s < 1s"));
    let artifact = csv_artifact(
        "laurent_b.csv",
        &opts.manifest("laurent_b"),
        &["n", "recursive", "series", "closed_form"],
        rows,
    );
    Ok(c.finish(2, "dual-path Laurent coefficients", start, vec![artifact]))
}

/// Criterion 3: MGF closed form against reference values and quadrature.
pub fn mgf_spot_values(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let mut c = Checks::new();
    let p2 = PI * PI;
    let e1 = (mgf(1.0)? - 16.0 / p2).abs();
    let em1 = (mgf(-1.0)? - 12.0 * (4.0 - PI) / p2).abs();
    c.check(e1 < 1e-12 && em1 < 1e-12, format!("reference gaps {e1:.1e}, {em1:.1e}"));
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for alpha in [-1.5, -1.0, -0.5, 0.5, 1.0, 1.5] {
        let closed = mgf(alpha)?;
        let quad = generalized_moment_quadrature(0, alpha)?;
        worst = worst.max((closed - quad).abs());
        rows.push(vec![fmt_g17(alpha), fmt_g17(closed), fmt_g17(quad)]);
    }
    c.check(worst < 1e-7, format!("quadrature gap {worst:.1e} < 1e-7"));
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 10.0, format!("{secs:.2}s < 10s"));
    let artifact = csv_artifact("mgf.csv", &opts.manifest("mgf"), &["alpha", "closed_form", "quadrature"], rows);
    Ok(c.finish(3, "MGF spot values", start, vec![artifact]))
}

/// Criterion 4: continuity, normalization and the mass below zero.
pub fn density_integrity(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let mut c = Checks::new();
    let seam0 = (eta_log_branch(Branch::Left, 0.0) - eta_log_branch(Branch::Middle, 0.0)).abs();
    let seam1 = (eta_log_branch(Branch::Middle, LN_2) - eta_log_branch(Branch::Right, LN_2)).abs();
    c.check(seam0 < 1e-14 && seam1 < 1e-14, format!("seams {seam0:.1e}, {seam1:.1e}"));
    let mass = total_mass();
    c.check((mass - 1.0).abs() < 1e-10, format!("mass - 1 = {:.1e}", mass - 1.0));
    // ∫_{-∞}^{-W} (6/π²) e^{2s} ds = (3/π²) e^{-2W}.
    let below = integrate(eta_log, -WINDOW, 0.0, 1e-14).value + 0.5 * SIX_OVER_PI2 * (-2.0 * WINDOW).exp();
    let gap = (below - 3.0 / (PI * PI)).abs();
    c.check(gap < 1e-10, format!("mass below 0 gap {gap:.1e}"));
    let rows = (0..701)
        .map(|i| {
            let s = -3.0 + 7.0 * i as f64 / 700.0;
            vec![fmt_g17(s), fmt_g17(eta_log(s)), fmt_g17(LimitCdf::global().cdf(s))]
        })
        .collect();
    let manifest = opts.manifest("density").param("lo", -3).param("hi", 4).param("steps", 701);
    let artifact = csv_artifact("density.csv", &manifest, &["s", "eta_log", "cdf"], rows);
    Ok(c.finish(4, "density integrity", start, vec![artifact]))
}

fn random_interval<R: Rng>(rng: &mut R) -> OpenInterval {
    let b: u64 = rng.random_range(1..=1u64 << 32);
    let a: i64 = rng.random_range(-(b as i64)..=b as i64);
    let lo = Rational::new(a, b).expect("positive denominator");
    // A second endpoint with denominator in [2^26, 2^32], at distance about 2^-k.
    let b2: u64 = rng.random_range(1u64 << 26..=1u64 << 32);
    let k: u32 = rng.random_range(0..=24);
    let bump = (b2 >> k) as i64;
    let hi_num = (lo.clone() * Rational::from(b2 as i64)).floor() + 1 + bump;
    let hi = Rational::new(hi_num, b2).expect("positive denominator");
    OpenInterval::new(lo, hi).expect("hi exceeds lo by construction")
}

/// Criterion 5: descent against brute force on random intervals.
pub fn qmin_oracle(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let count = opts.size(10_000, 500);
    let mut rng = block_rng(opts.seed, 5);
    let mut mismatches = Vec::new();
    let mut max_q = BigInt::from(0);
    let mut total_q = 0.0;
    for _ in 0..count {
        let interval = random_interval(&mut rng);
        let w = smallest_denominator(&interval);
        let q: u64 = (&w.q).try_into().expect("q fits in u64 for these widths");
        let at_q = brute_force_q_min(&interval, q);
        let below = brute_force_q_min(&interval, q - 1);
        let valid = interval.contains(&w.fraction()) && num_integer::Integer::gcd(&w.p, &w.q) == BigInt::from(1);
        if at_q.as_ref().map(|b| &b.q) != Some(&w.q) || below.is_some() || !valid {
            mismatches.push(interval.to_string());
        }
        total_q += q as f64;
        if w.q > max_q {
            max_q = w.q;
        }
    }
    let mut c = Checks::new();
    c.check(
        mismatches.is_empty(),
        format!("{count} intervals, {} mismatches, max q {max_q}", mismatches.len()),
    );
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 60.0, format!("{secs:.1}s < 60s"));
    let body = json!({
        "intervals": count,
        "mismatches": mismatches,
        "max_q": max_q.to_string(),
        "mean_q": total_q / count as f64,
    });
    let artifact = json_artifact("qmin_oracle.json", &opts.manifest("qmin_oracle").param("count", count), body);
    Ok(c.finish(5, "q_min oracle equivalence", start, vec![artifact]))
}

/// Criterion 6: convergence at `δ = 1e-8`.
pub fn empirical_convergence(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let n = opts.size(100_000, 5_000);
    let delta = r("1e-8");
    let batch = sample(&SampleConfig::continuous(delta.clone(), n, opts.seed).with_shards(1))?;
    let ks = ks_distance(&batch)?;
    let mean = log_moment_estimate(&batch, 1)?;
    let mu1 = crate::moments::mu(1);
    let ms = resonance_convention(&batch)?;
    let mut c = Checks::new();
    c.check(ks < 0.02, format!("KS {ks:.4} < 0.02"));
    c.check(
        mean.covers(mu1, 3.0),
        format!("mean {:.5} vs {mu1:.5} ({:.1} se)", mean.mean, (mean.mean - mu1) / mean.stderr),
    );
    let mu1_band = 0.001 + 3.0 * ms.mu1_stderr;
    let sigma_band = 0.0006 + 3.0 * ms.sigma_stderr;
    c.check(
        (ms.mu1 + 0.05).abs() <= mu1_band,
        format!("mu1_ms {:.5} in -0.05 +- {mu1_band:.4}", ms.mu1),
    );
    c.check(
        (ms.sigma - 0.2935).abs() <= sigma_band,
        format!("sigma_ms {:.5} in 0.2935 +- {sigma_band:.4}", ms.sigma),
    );
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 300.0, format!("{secs:.1}s single-threaded"));
    let body = json!({
        "ks": ks,
        "mean": mean,
        "mu1": mu1,
        "resonance_convention": ms,
    });
    let manifest = opts
        .manifest("convergence")
        .param("delta", delta.to_string())
        .param("n_samples", n);
    let artifact = json_artifact("convergence.json", &manifest, body);
    Ok(c.finish(6, "empirical convergence", start, vec![artifact]))
}

/// Criterion 7: the grid population `x = j/3000`, `δ = 1/3000`.
pub fn grid_histogram(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let delta = r("1/3000");
    let batch = sample(&SampleConfig::grid(delta.clone(), 3000, Rational::zero()).with_shards(opts.shards))?;
    let ks = ks_distance(&batch)?;
    let hist = batch_histogram(&batch, -3.0, 4.0, 70)?;
    let centered = sample(&SampleConfig::grid(delta, 3000, r("1/6000")).with_shards(opts.shards))?;
    let ks_centered = ks_distance(&centered)?;
    let mut c = Checks::new();
    c.check(ks < 0.05, format!("KS {ks:.4} < 0.05 (x0 = 0)"));
    c.notes.push(format!("x0 = 1/6000 gives KS {ks_centered:.4}"));
    let manifest = opts
        .manifest("grid_histogram")
        .param("grid_n", 3000)
        .param("delta", "1/3000")
        .param("x0", "0")
        .param("bins", 70);
    let rows = hist
        .rows()
        .map(|(lo, hi, count, density)| vec![fmt_g17(lo), fmt_g17(hi), count.to_string(), fmt_g17(density)])
        .collect();
    let artifacts = vec![
        csv_artifact("grid_hist.csv", &manifest, &["bin_lo", "bin_hi", "count", "density"], rows),
        json_artifact(
            "grid_summary.json",
            &manifest,
            json!({
                "ks": ks,
                "ks_x0_1_6000": ks_centered,
                "underflow": hist.underflow,
                "overflow": hist.overflow,
                "total": hist.total,
            }),
        ),
    ];
    Ok(c.finish(7, "grid histogram", start, artifacts))
}

/// Criterion 8: one-dimensional resonance orders equal `q_min(ω, 2δ)`.
pub fn d1_reduction(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let count = opts.size(1000, 100);
    let mut rng = block_rng(opts.seed, 8);
    let (mut equal, mut disagreements) = (0usize, Vec::new());
    let mut boundary = Vec::new();
    for i in 0..count {
        let b: i64 = rng.random_range(1..=10_000);
        let omega = Rational::new(rng.random_range(0..=b), b)?;
        let delta = if i % 10 == 9 {
            // Put a small-denominator fraction exactly on the boundary.
            let q: i64 = rng.random_range(1..=12);
            let p = (omega.clone() * Rational::from(q)).floor();
            let gap = (omega.clone() - Rational::new(p, q)?).abs();
            if gap.is_positive() && gap < r("1/10") {
                gap
            } else {
                r("1/97")
            }
        } else {
            let e: i64 = rng.random_range(100..=10_000);
            Rational::new(rng.random_range(1..=e / 10), e)?
        };
        let check = reduction_check_d1(&omega, &delta)?;
        if BigInt::from(check.resonance) == check.q_min {
            equal += 1;
        } else if check.boundary {
            boundary.push(json!({
                "omega": omega.to_string(),
                "delta": delta.to_string(),
                "resonance": check.resonance,
                "q_min": check.q_min.to_string(),
            }));
        } else {
            disagreements.push(format!("omega={omega} delta={delta}"));
        }
    }
    let mut c = Checks::new();
    c.check(
        disagreements.is_empty(),
        format!(
            "{count} pairs: {equal} equal, {} boundary, {} disagree",
            boundary.len(),
            disagreements.len()
        ),
    );
    let body = json!({
        "pairs": count,
        "equal": equal,
        "boundary_cases": boundary,
        "disagreements": disagreements,
    });
    let artifact = json_artifact("d1_reduction.json", &opts.manifest("d1_reduction").param("pairs", count), body);
    Ok(c.finish(8, "d = 1 reduction", start, vec![artifact]))
}

/// Criterion 9: log-expectation slopes for `d = 1, 2`.
pub fn scaling_law(opts: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let n = opts.size(10_000, 500);
    let deltas: Vec<Rational> = ["1e-3", "1e-4", "1e-5", "1e-6"].iter().map(|s| r(s)).collect();
    let delta_strings: Vec<String> = deltas.iter().map(|d| d.to_string()).collect();
    let mut c = Checks::new();
    let mut artifacts = Vec::new();
    for d in [2usize, 1] {
        let fit = log_expectation_slope(d, &deltas, n, opts.seed, opts.shards)?;
        let target = -1.0 / (d as f64 + 1.0);
        c.check(
            (fit.slope - target).abs() < 0.02,
            format!("d={d} slope {:.4} (se {:.4}) vs {target:.4}", fit.slope, fit.stderr),
        );
        let manifest = opts
            .manifest(&format!("slope_d{d}"))
            .param("d", d)
            .param("deltas", &delta_strings)
            .param("n_per_delta", n);
        artifacts.push(json_artifact(&format!("slope_d{d}.json"), &manifest, &fit));
    }
    let delta = r("1e-4");
    let batch = scaled_resonance_batch(2, &delta, 1000, 7, opts.shards)?;
    let rows = batch
        .iter()
        .map(|s| {
            let mut row: Vec<String> = s.omega.iter().map(|w| fmt_g17(*w)).collect();
            row.push(s.order.to_string());
            row.push(fmt_g17(s.scaled));
            row
        })
        .collect();
    let manifest = RunManifest::new("verify/resonance", 7, &opts.timestamp)
        .param("d", 2)
        .param("delta", "1/10000")
        .param("n", 1000);
    artifacts.push(csv_artifact(
        "resonance_d2.csv",
        &manifest,
        &["omega1", "omega2", "M", "scaled"],
        rows,
    ));
    let secs = start.elapsed().as_secs_f64();
    c.check(secs < 600.0, format!("{secs:.1}s < 600s"));
    Ok(c.finish(9, "scaling law", start, artifacts))
}

type Criterion = fn(&VerifyOptions) -> Result<Report>;

/// Criteria 1 to 9 in order.
pub const CRITERIA: [Criterion; 9] = [
    closed_form_constants,
    laurent_routes,
    mgf_spot_values,
    density_integrity,
    qmin_oracle,
    empirical_convergence,
    grid_histogram,
    d1_reduction,
    scaling_law,
];

fn error_report(id: u8, err: &crate::Error) -> Report {
    Report {
        outcome: Outcome {
            id,
            name: "error",
            passed: false,
            detail: err.to_string(),
            seconds: 0.0,
        },
        artifacts: Vec::new(),
    }
}

/// Runs criteria 1 to 9.
pub fn run_criteria(opts: &VerifyOptions) -> Vec<Report> {
    CRITERIA
        .iter()
        .enumerate()
        .map(|(i, f)| f(opts).unwrap_or_else(|e| error_report(i as u8 + 1, &e)))
        .collect()
}

/// Criterion 10: two runs (one single-sharded) give identical artifacts.
pub fn determinism(opts: &VerifyOptions, first: &[Report]) -> Report {
    let start = Instant::now();
    let single = VerifyOptions {
        shards: 1,
        ..opts.clone()
    };
    let second = run_criteria(&single);
    let files = |reports: &[Report]| -> Vec<(String, String)> {
        reports
            .iter()
            .flat_map(|r| r.artifacts.iter().map(|a| (a.file.clone(), a.contents.clone())))
            .collect()
    };
    let (a, b) = (files(first), files(&second));
    let differing: Vec<&str> = a
        .iter()
        .zip(&b)
        .filter(|(x, y)| x != y)
        .map(|(x, _)| x.0.as_str())
        .collect();
    let mut c = Checks::new();
    c.check(
        a.len() == b.len() && differing.is_empty() && !a.is_empty(),
        format!("{} artifacts compared, {} differ {:?}", a.len(), differing.len(), differing),
    );
    c.finish(10, "determinism", start, Vec::new())
}

/// Runs all ten criteria.
pub fn run_all(opts: &VerifyOptions) -> Vec<Report> {
    let mut reports = run_criteria(opts);
    let det = determinism(opts, &reports);
    reports.push(det);
    reports
}

/// Writes every artifact of `reports` into `dir`, plus `summary.json`.
pub fn write_artifacts(dir: &Path, opts: &VerifyOptions, reports: &[Report]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for report in reports {
        for a in &report.artifacts {
            std::fs::write(dir.join(&a.file), &a.contents)?;
        }
    }
    let outcomes: Vec<serde_json::Value> = reports
        .iter()
        .map(|r| json!({ "id": r.outcome.id, "name": r.outcome.name, "passed": r.outcome.passed }))
        .collect();
    std::fs::write(
        dir.join("summary.json"),
        json_with_manifest(&opts.manifest("summary"), json!({ "criteria": outcomes })),
    )
}

/// One line per criterion.
pub fn render(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{}", r.outcome.line());
    }
    out
}

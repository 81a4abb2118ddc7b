//! Command-line front end and the output conventions it shares with
//! [`crate::verify`]: run manifests, 17-significant-digit floats and
//! manifest-headed CSV.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::Error;
use crate::experiments::{self, SampleConfig, SamplingMode};
use crate::limit_law;
use crate::moments::{MomentTable, VALIDATED_MAX_ORDER};
use crate::rational_core::{q_min, bigint_ln, Rational};
use crate::resonance::{self, ResonanceQuery};
use crate::stats::ks_critical_99;
use crate::verify::{self, VerifyOptions};

pub(crate) fn ser_display<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Formats `x` with 17 significant digits: fixed notation for decimal
/// exponents in `[-5, 17)`, scientific otherwise.
pub fn fmt_g17(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

/// Everything needed to regenerate an output file.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub tool_version: String,
    pub timestamp: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: u64, timestamp: &str) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: timestamp.to_string(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        let v = serde_json::to_value(value).expect("parameter serializes");
        self.parameters.insert(key.to_string(), v);
        self
    }

    /// The `#`-prefixed single-line header used by CSV outputs.
    pub fn header_line(&self) -> String {
        format!("#{}", serde_json::to_string(self).expect("manifest serializes"))
    }

    /// Recovers the manifest from the first line of a CSV file.
    pub fn parse_header(line: &str) -> Option<Self> {
        serde_json::from_str(line.strip_prefix('#')?).ok()
    }
}

/// Current UTC time, or `SOURCE_DATE_EPOCH` when set, as RFC 3339.
pub fn default_timestamp() -> String {
    use chrono::{DateTime, SecondsFormat, Utc};
    let when = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse::<i64>().ok())
        .and_then(|secs| DateTime::from_timestamp(secs, 0))
        .unwrap_or_else(Utc::now);
    when.to_rfc3339_opts(SecondsFormat::Secs, true)
}

/// Writes a manifest header, a column line, then one line per row.
pub fn write_csv<W: Write + ?Sized, R, I>(out: &mut W, manifest: &RunManifest, columns: &[&str], rows: I) -> io::Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    writeln!(out, "{}", manifest.header_line())?;
    writeln!(out, "{}", columns.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

/// JSON document with the manifest embedded under `"manifest"`.
pub fn json_with_manifest(manifest: &RunManifest, body: impl Serialize) -> String {
    let mut value = serde_json::to_value(body).expect("body serializes");
    let manifest = serde_json::to_value(manifest).expect("manifest serializes");
    match value.as_object_mut() {
        Some(map) => {
            map.insert("manifest".into(), manifest);
        }
        None => value = serde_json::json!({ "manifest": manifest, "result": value }),
    }
    let mut s = serde_json::to_string_pretty(&value).expect("json");
    s.push('\n');
    s
}

#[derive(Debug, Parser)]
#[command(name = "smallden", version, about = "Smallest denominators, their limit law and resonance orders")]
pub struct Cli {
    /// Write to FILE (a directory for `verify`) instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker shards; results do not depend on this. Capped by QMIN_THREADS.
    #[arg(long, global = true)]
    pub shards: Option<usize>,
    /// Timestamp recorded in output manifests.
    #[arg(long, global = true)]
    pub timestamp: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Interval length (exact rational or decimal).
    #[arg(long, value_parser = parse_rational)]
    pub delta: Rational,
    /// Sample the grid x0 + j/N instead of uniform x.
    #[arg(long)]
    pub grid: bool,
    /// Grid size N.
    #[arg(long = "N", visible_alias = "grid-n")]
    pub grid_n: Option<u64>,
    /// Grid offset.
    #[arg(long, value_parser = parse_rational, default_value = "0", allow_negative_numbers = true)]
    pub x0: Rational,
    /// Number of samples (defaults to N on a grid, 10000 otherwise).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest denominator in (x - delta/2, x + delta/2).
    Qmin {
        #[arg(value_parser = parse_rational, allow_negative_numbers = true)]
        x: Rational,
        #[arg(value_parser = parse_rational, allow_negative_numbers = true)]
        delta: Rational,
    },
    /// Closed-form moment table up to order MAX_N.
    Moments {
        max_n: usize,
        /// JSON only.
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Aligned table only.
        #[arg(long)]
        text: bool,
    },
    /// Limit density on STEPS equally spaced points of [LO, HI].
    Density {
        #[arg(allow_negative_numbers = true)]
        lo: f64,
        #[arg(allow_negative_numbers = true)]
        hi: f64,
        steps: usize,
    },
    /// Moment generating function, or its N-th derivative.
    Mgf {
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(required = true, allow_negative_numbers = true)]
        alphas: Vec<f64>,
    },
    /// Scaled log-denominators, one per line.
    Sample(SampleArgs),
    /// Histogram of scaled log-denominators.
    Hist {
        #[command(flatten)]
        sampling: SampleArgs,
        #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
        lo: f64,
        #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
        hi: f64,
        #[arg(long, default_value_t = 70)]
        bins: usize,
    },
    /// Kolmogorov-Smirnov distance to the limit law.
    Ks(SampleArgs),
    /// Minimal resonance orders: one query with --omega, else a random batch.
    Resonance {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_parser = parse_rational)]
        delta: Rational,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Comma-separated coordinates of a single query.
        #[arg(long, value_parser = parse_rational, value_delimiter = ',')]
        omega: Option<Vec<Rational>>,
        /// Largest shell searched for a single query.
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Slope of mean log M against log delta.
    Slope {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_parser = parse_rational, value_delimiter = ',', default_value = "1e-3,1e-4,1e-5,1e-6")]
        deltas: Vec<Rational>,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Runs the acceptance suite.
    Verify {
        #[arg(long, default_value_t = VerifyOptions::default().seed)]
        seed: u64,
        /// Reduced sample sizes.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(String),
    ClosedPipe,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } | Error::EmptyBatch => Failure::Compute(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure::ClosedPipe;
        }
        Failure::Compute(format!("i/o: {e}"))
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn sample_config(args: &SampleArgs, shards: usize) -> Result<SampleConfig, Failure> {
    let mode = match (args.grid, args.grid_n) {
        (true, Some(grid_n)) => SamplingMode::Grid {
            grid_n,
            x0: args.x0.clone(),
        },
        (true, None) => return Err(usage("--grid needs --N")),
        (false, Some(_)) => return Err(usage("--N is only meaningful with --grid")),
        (false, None) => SamplingMode::Continuous,
    };
    let n_samples = match (&mode, args.n) {
        (_, Some(n)) => n,
        (SamplingMode::Grid { grid_n, .. }, None) => *grid_n as usize,
        (SamplingMode::Continuous, None) => 10_000,
    };
    let config = SampleConfig {
        delta: args.delta.clone(),
        mode,
        n_samples,
        seed: args.seed,
        shards,
    };
    config.validate()?;
    Ok(config)
}

fn sample_manifest(name: &str, config: &SampleConfig, timestamp: &str) -> RunManifest {
    RunManifest::new(name, config.seed, timestamp).param("config", config)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<bool, Failure> {
    let shards = cli.shards.unwrap_or_else(experiments::default_shards);
    if shards == 0 {
        return Err(usage("--shards must be at least 1"));
    }
    let timestamp = cli.timestamp.clone().unwrap_or_else(default_timestamp);
    match cli.command {
        Command::Qmin { x, delta } => {
            let w = q_min(&x, &delta)?;
            let scaled = bigint_ln(&w.q) + 0.5 * delta.ln();
            writeln!(out, "q={} p={} scaled_log={}", w.q, w.fraction(), fmt_g17(scaled))?;
        }
        Command::Moments { max_n, json, text } => {
            if !(1..=VALIDATED_MAX_ORDER).contains(&max_n) {
                return Err(usage(format!("max_n must be in 1..={VALIDATED_MAX_ORDER}, got {max_n}")));
            }
            let table = MomentTable::build(max_n)?;
            let manifest = RunManifest::new("moments", 0, &timestamp).param("max_n", max_n);
            if !text {
                write!(out, "{}", json_with_manifest(&manifest, &table))?;
            }
            if !json {
                write!(out, "{}", table.to_text())?;
            }
        }
        Command::Density { lo, hi, steps } => {
            if steps == 0 || !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
                return Err(usage("density needs finite LO <= HI and STEPS >= 1"));
            }
            let manifest = RunManifest::new("density", 0, &timestamp)
                .param("lo", lo)
                .param("hi", hi)
                .param("steps", steps);
            let rows = (0..steps).map(|i| {
                let s = if steps == 1 { lo } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 };
                vec![fmt_g17(s), fmt_g17(limit_law::eta_log(s))]
            });
            write_csv(out, &manifest, &["s", "eta_log"], rows)?;
        }
        Command::Mgf { n, alphas } => {
            let values = alphas
                .iter()
                .map(|&a| {
                    let v = if n == 0 { limit_law::mgf(a)? } else { limit_law::generalized_moment(n, a)? };
                    Ok(vec![fmt_g17(a), n.to_string(), fmt_g17(v)])
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let manifest = RunManifest::new("mgf", 0, &timestamp).param("n", n).param("alphas", &alphas);
            write_csv(out, &manifest, &["alpha", "n", "value"], values)?;
        }
        Command::Sample(args) => {
            let config = sample_config(&args, shards)?;
            let batch = experiments::sample(&config)?;
            let manifest = sample_manifest("sample", &config, &timestamp);
            write_csv(out, &manifest, &["value"], batch.values.iter().map(|v| [fmt_g17(*v)]))?;
        }
        Command::Hist { sampling, lo, hi, bins } => {
            let config = sample_config(&sampling, shards)?;
            let batch = experiments::sample(&config)?;
            let hist = experiments::batch_histogram(&batch, lo, hi, bins)?;
            let manifest = sample_manifest("hist", &config, &timestamp)
                .param("lo", lo)
                .param("hi", hi)
                .param("bins", bins);
            let rows = hist
                .rows()
                .map(|(a, b, c, d)| vec![fmt_g17(a), fmt_g17(b), c.to_string(), fmt_g17(d)]);
            write_csv(out, &manifest, &["bin_lo", "bin_hi", "count", "density"], rows)?;
            if hist.underflow + hist.overflow > 0 {
                eprintln!("{} values below {lo}, {} at or above {hi}", hist.underflow, hist.overflow);
            }
        }
        Command::Ks(args) => {
            let config = sample_config(&args, shards)?;
            let batch = experiments::sample(&config)?;
            let body = json!({
                "ks": experiments::ks_distance(&batch)?,
                "n": batch.len(),
                "critical_99": ks_critical_99(batch.len()),
                "mean": experiments::log_moment_estimate(&batch, 1)?,
                "nonpositive_fraction": experiments::nonpositive_fraction(&batch)?,
            });
            write!(out, "{}", json_with_manifest(&sample_manifest("ks", &config, &timestamp), body))?;
        }
        Command::Resonance { d, delta, n, seed, omega, cap } => match omega {
            Some(omega) => {
                let mut query = ResonanceQuery::new(omega.clone(), delta.clone())?;
                if let Some(cap) = cap {
                    query = query.with_cap(cap);
                }
                let res = resonance::resonance_order(&query)?;
                let manifest = RunManifest::new("resonance", 0, &timestamp)
                    .param("omega", omega.iter().map(|w| w.to_string()).collect::<Vec<_>>())
                    .param("delta", delta.to_string())
                    .param("shell_cap", query.shell_cap);
                write!(out, "{}", json_with_manifest(&manifest, &res))?;
            }
            None => {
                let batch = resonance::scaled_resonance_batch(d, &delta, n, seed, shards)?;
                let manifest = RunManifest::new("resonance", seed, &timestamp)
                    .param("d", d)
                    .param("delta", delta.to_string())
                    .param("n", n);
                let mut columns: Vec<String> = (1..=d).map(|i| format!("omega{i}")).collect();
                columns.push("M".into());
                columns.push("scaled".into());
                let columns: Vec<&str> = columns.iter().map(String::as_str).collect();
                let rows = batch.iter().map(|s| {
                    let mut row: Vec<String> = s.omega.iter().map(|w| fmt_g17(*w)).collect();
                    row.push(s.order.to_string());
                    row.push(fmt_g17(s.scaled));
                    row
                });
                write_csv(out, &manifest, &columns, rows)?;
            }
        },
        Command::Slope { d, deltas, n, seed } => {
            let fit = resonance::log_expectation_slope(d, &deltas, n, seed, shards)?;
            let manifest = RunManifest::new("slope", seed, &timestamp)
                .param("d", d)
                .param("deltas", deltas.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                .param("n_per_delta", n);
            write!(out, "{}", json_with_manifest(&manifest, &fit))?;
        }
        Command::Verify { .. } => unreachable!("handled by run"),
    }
    Ok(true)
}

fn run_verify(cli: &Cli, seed: u64, quick: bool) -> Result<bool, Failure> {
    let opts = VerifyOptions {
        seed,
        shards: cli.shards.unwrap_or_else(experiments::default_shards).max(1),
        timestamp: cli.timestamp.clone().unwrap_or_else(|| verify::FIXED_TIMESTAMP.to_string()),
        quick,
    };
    let mut all_passed = true;
    let mut reports = Vec::new();
    for (i, criterion) in verify::CRITERIA.iter().enumerate() {
        let report = criterion(&opts).map_err(|e| Failure::Compute(format!("criterion {}: {e}", i + 1)))?;
        println!("{}", report.outcome.line());
        all_passed &= report.outcome.passed;
        reports.push(report);
    }
    let det = verify::determinism(&opts, &reports);
    println!("{}", det.outcome.line());
    all_passed &= det.outcome.passed;
    reports.push(det);
    if let Some(dir) = &cli.out {
        verify::write_artifacts(dir, &opts, &reports)?;
    }
    Ok(all_passed)
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify { seed, quick } => run_verify(&cli, *seed, *quick),
        _ => match &cli.out {
            Some(path) => File::create(path)
                .map_err(Failure::from)
                .and_then(|f| {
                    let mut w = BufWriter::new(f);
                    let ok = execute(cli, &mut w)?;
                    w.flush()?;
                    Ok(ok)
                }),
            None => {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                execute(cli, &mut lock)
            }
        },
    };
    match result {
        Ok(true) | Err(Failure::ClosedPipe) => 0,
        Ok(false) => 1,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_formatting() {
        assert_eq!(fmt_g17(0.230_762_969_401_438_5), "0.23076296940143851");
        assert_eq!(fmt_g17(1.0), "1.0000000000000000");
        assert_eq!(fmt_g17(-2.5e-9), "-2.5000000000000001e-9");
        assert_eq!(fmt_g17(123456.0), "123456.00000000000");
        assert_eq!(fmt_g17(0.0), "0.0000000000000000");
        for x in [std::f64::consts::PI, 1e-300, -7.25e22, 0.1, 9.999_999_999_999_999e-6] {
            let s = fmt_g17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            assert_eq!(digits.trim_start_matches('0').len(), 17, "{s}");
        }
    }

    #[test]
    fn manifest_round_trip() {
        let m = RunManifest::new("sample", 42, "2000-01-01T00:00:00Z").param("delta", "1/3000");
        let line = m.header_line();
        assert!(line.starts_with("#{"));
        assert_eq!(RunManifest::parse_header(&line).unwrap(), m);
        let mut buf = Vec::new();
        write_csv(&mut buf, &m, &["a", "b"], vec![vec!["1".to_string(), "2".to_string()]]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("a,b"));
        assert_eq!(text.lines().nth(2), Some("1,2"));
    }
}

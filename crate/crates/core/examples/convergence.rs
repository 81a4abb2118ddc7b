//! Empirical moments at shrinking δ, compared with the limiting values.

use smallden::experiments::{ks_distance, log_moment_estimate, sample, SampleConfig};
use smallden::moments::mu;
use smallden::Rational;

fn main() -> smallden::Result<()> {
    let n = 20_000;
    println!("target mu1 = {:.6}, mu2 = {:.6}", mu(1), mu(2));
    for k in [2, 4, 6, 8, 10] {
        let delta = Rational::new(1, 10u64.pow(k))?;
        let batch = sample(&SampleConfig::continuous(delta, n, 7))?;
        let m1 = log_moment_estimate(&batch, 1)?;
        let m2 = log_moment_estimate(&batch, 2)?;
        println!(
            "delta=1e-{k:<2}  mean {:+.4} ± {:.4}  second {:.4} ± {:.4}  KS {:.4}",
            m1.mean,
            m1.stderr,
            m2.mean,
            m2.stderr,
            ks_distance(&batch)?
        );
    }
    Ok(())
}

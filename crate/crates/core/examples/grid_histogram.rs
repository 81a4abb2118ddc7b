//! Grid sample `x = j/N` with `δ = 1/N`, binned against the limit density.
//!
//!     cargo run --release --example grid_histogram -- 6000

use smallden::experiments::{batch_histogram, ks_distance, sample, SampleConfig};
use smallden::limit_law::eta_log;
use smallden::Rational;

fn main() -> smallden::Result<()> {
    let grid_n: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6000);
    let delta = Rational::new(1, grid_n)?;
    let config = SampleConfig::grid(delta, grid_n, Rational::zero());
    let batch = sample(&config)?;
    let hist = batch_histogram(&batch, -3.0, 4.0, 35)?;

    println!("N = {grid_n}, KS distance to the limit law = {:.4}", ks_distance(&batch)?);
    for (lo, hi, count, density) in hist.rows() {
        let mid = 0.5 * (lo + hi);
        let bar = "#".repeat((density * 80.0).round() as usize);
        println!("{mid:+5.1} {count:5} {density:.3} {:.3} {bar}", eta_log(mid));
    }
    Ok(())
}

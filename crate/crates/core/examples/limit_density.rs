//! Tabulates the limiting density of `log q_min + (1/2) log δ` and checks its mass.

use smallden::limit_law::{cdf_eta_log, eta_log, total_mass, LimitCdf, MODE};

fn main() {
    println!("{:>6} {:>12} {:>12}", "s", "density", "cdf");
    for i in 0..=28 {
        let s = -3.0 + 0.25 * i as f64;
        println!("{s:6.2} {:12.8} {:12.8}", eta_log(s), cdf_eta_log(s));
    }
    println!("\ntotal mass - 1 = {:.2e}", total_mass() - 1.0);
    println!("peak at s = log(2)/2 = {MODE:.6}, height {:.8}", eta_log(MODE));
    let cdf = LimitCdf::global();
    for p in [0.01, 0.25, 0.5, 0.75, 0.99] {
        println!("quantile({p}) = {:+.6}", cdf.quantile(p));
    }
}

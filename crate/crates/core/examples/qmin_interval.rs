//! Smallest denominators of a few intervals, checked against a direct scan.
//!
//!     cargo run --example qmin_interval -- 9/20 1/50

use smallden::{brute_force_q_min, q_min, OpenInterval, Rational};

fn main() -> smallden::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let queries: Vec<(Rational, Rational)> = if args.len() == 2 {
        vec![(args[0].parse()?, args[1].parse()?)]
    } else {
        [("9/20", "1/50"), ("0.3", "1/30"), ("355/113", "1e-7"), ("0.61803398875", "1e-12")]
            .iter()
            .map(|(x, d)| Ok((x.parse()?, d.parse()?)))
            .collect::<smallden::Result<_>>()?
    };

    for (x, delta) in &queries {
        let w = q_min(x, delta)?;
        let scaled = smallden::rational_core::bigint_ln(&w.q) + 0.5 * delta.ln();
        print!("x={x} delta={delta}: q_min={} via {}  log q + log(delta)/2 = {scaled:.6}", w.q, w.fraction());
        let interval = OpenInterval::centered(x, delta)?;
        match brute_force_q_min(&interval, 1_000_000) {
            Some(b) => println!("  [scan agrees: {}]", b.q == w.q),
            None => println!("  [beyond scan range]"),
        }
    }
    Ok(())
}

//! Mean log resonance order against log δ in dimensions one to three.

use smallden::resonance::{log_expectation_slope, resonance_order, ResonanceQuery};
use smallden::Rational;

fn main() -> smallden::Result<()> {
    let q = ResonanceQuery::new(vec![Rational::new(1, 3)?, Rational::new(1, 7)?], Rational::new(1, 1000)?)?;
    let r = resonance_order(&q)?;
    println!("omega=(1/3,1/7) delta=1/1000: M={} p={:?} q={}", r.order, r.p, r.q);

    let deltas: Vec<Rational> = (2..=5).map(|k| Rational::new(1, 10u64.pow(k))).collect::<smallden::Result<_>>()?;
    for d in 1..=3 {
        let ds = if d == 3 { &deltas[..3] } else { &deltas[..] };
        let fit = log_expectation_slope(d, ds, 2000, 11, smallden::experiments::default_shards())?;
        println!("d={d}: slope {:+.4} ± {:.4} (expected {:+.4})", fit.slope, fit.stderr, fit.expected);
    }
    Ok(())
}

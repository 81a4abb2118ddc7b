//! In one dimension the minimal order is the smallest denominator of a
//! doubled-width interval, except when a fraction sits on its boundary.

use smallden::resonance::reduction_check_d1;
use smallden::Rational;

fn main() -> smallden::Result<()> {
    let cases = [("9/20", "1/100"), ("9/20", "1/20"), ("3/10", "1/30"), ("0.7071", "1e-6"), ("1/7", "1/49")];
    for (w, d) in cases {
        let omega: Rational = w.parse()?;
        let delta: Rational = d.parse()?;
        let c = reduction_check_d1(&omega, &delta)?;
        let tag = if !c.agrees() { "MISMATCH" } else if c.boundary { "boundary" } else { "equal" };
        println!("omega={omega:<8} delta={delta:<8} resonance={:<5} q_min={:<5} {tag}", c.resonance, c.q_min);
    }
    Ok(())
}

//! The moment generating function on a grid, with closed form and quadrature compared.

use smallden::limit_law::{generalized_moment, generalized_moment_quadrature, mgf};

fn main() -> smallden::Result<()> {
    println!("{:>6} {:>20} {:>20} {:>10}", "alpha", "M(alpha)", "quadrature", "gap");
    for i in -8..=8 {
        let alpha = 0.1 * i as f64;
        let closed = mgf(alpha)?;
        let quad = generalized_moment_quadrature(0, alpha)?;
        println!("{alpha:6.2} {closed:20.16} {quad:20.16} {:10.1e}", (closed - quad).abs());
    }
    println!("\nderivatives at alpha = 0.3:");
    for n in 1..=4 {
        let fd = generalized_moment(n, 0.3)?;
        let quad = generalized_moment_quadrature(n, 0.3)?;
        println!("  n={n}: {fd:+.12}  (quadrature {quad:+.12})");
    }
    Ok(())
}

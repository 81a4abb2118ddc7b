//! Prints the log-moment constants and the two Laurent-coefficient routes side by side.

use smallden::moments::{laurent_b_recursive, laurent_b_series, MomentTable};

fn main() -> smallden::Result<()> {
    let table = MomentTable::build(8)?;
    print!("{}", table.to_text());

    println!("\n n   recursion              series                 gap");
    for n in 0..=8 {
        let r = laurent_b_recursive(n)?;
        let s = laurent_b_series(n as u32);
        println!("{n:2}   {r:+.15e}  {s:+.15e}  {:.1e}", (r - s).abs());
    }
    let (db, dmu) = table.route_disagreement();
    println!("\nmax b gap {db:.2e}, max relative mu gap {dmu:.2e}");
    Ok(())
}

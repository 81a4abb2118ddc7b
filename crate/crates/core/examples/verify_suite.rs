//! Runs the acceptance criteria in quick mode and prints one line each.

use smallden::verify::{render, run_all, VerifyOptions};

fn main() {
    let opts = VerifyOptions { quick: true, ..VerifyOptions::default() };
    print!("{}", render(&run_all(&opts)));
}

//! Runs the heterogeneous-fear system alongside its two constant-fear
//! bounding systems for every figure configuration and reports the
//! comparison margins and the detected terminal state.
//!
//!     cargo run --release --example pde_sandwich -- 1000

use std::time::Instant;

use allelofear::verify::{run_figure, FIGURES};
use rayon::prelude::*;

fn main() -> allelofear::Result<()> {
    let n: usize = std::env::args()
        .nth(1)
        .map_or(1000, |s| s.parse().expect("interval count"));
    let start = Instant::now();
    let results: Vec<_> = FIGURES.par_iter().map(|c| run_figure(c, n)).collect();
    println!(
        "{:<5} {:<12} {:>11} {:>11} {:>10}  {:<10} expected",
        "fig", "init", "tilde exc", "hat exc", "tol", "verdict"
    );
    for (case, r) in FIGURES.iter().zip(results) {
        let r = r?;
        println!(
            "{:<5} {:<12} {:>11.3e} {:>11.3e} {:>10.3e}  {:<10} {}{}",
            r.figure,
            format!("{:?}", r.init),
            r.max_tilde_excess,
            r.max_hat_excess,
            r.tolerance,
            r.verdict.as_deref().unwrap_or("none"),
            case.expected,
            if r.sandwich { "" } else { "  (comparison violated)" }
        );
    }
    println!("n = {n}, {:.2}s", start.elapsed().as_secs_f64());
    Ok(())
}

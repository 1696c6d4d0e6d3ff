//! The three time-course examples: below the fear threshold the species
//! coexist, above it `y` dies out. Trajectories go to `time_course_*.csv`
//! in the given directory (default: the system temp dir).
//!
//!     cargo run --release --example time_course -- out/

use std::path::PathBuf;

use allelofear::io::commands::ode_outcome;
use allelofear::io::output::{trajectory_csv, write_atomic};
use allelofear::model::{thresholds, ModelParams, Param};
use allelofear::ode::integrate;
use allelofear::verify::{EXAMPLES, EXAMPLE_INIT};

fn main() -> allelofear::Result<()> {
    let dir = std::env::args().nth(1).map_or_else(std::env::temp_dir, PathBuf::from);
    for (i, (a, b, c, m, k_lo, k_hi)) in EXAMPLES.into_iter().enumerate() {
        let base = ModelParams::new(a, b, c, k_lo, m)?;
        println!(
            "example {}: a={a} b={b} c={c} m={m}, k* = {:.4}",
            i + 1,
            thresholds(&base).k_star
        );
        for k in [k_lo, k_hi] {
            let p = base.with(Param::K, k);
            let tr = integrate(&p, EXAMPLE_INIT, 1000.0, 1e-10, 1e-12)?;
            let end = tr.final_state();
            let path = dir.join(format!("time_course_{}_k{k}.csv", i + 1));
            write_atomic(&path, trajectory_csv(&tr.times, &tr.states).as_bytes())?;
            println!(
                "  k = {k:<4} -> ({:.6}, {:.6}) {:<14} transient ends {:?}, {} steps  [{}]",
                end[0],
                end[1],
                ode_outcome(&p, end),
                tr.transient_end(),
                tr.times.len() - 1,
                path.display()
            );
        }
    }
    Ok(())
}

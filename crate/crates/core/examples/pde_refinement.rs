//! Grid refinement for the reaction-diffusion solver: halves the cell twice
//! and reports the largest nodal change divided by `h^2`, the quantity that
//! fixes the constant in the comparison tolerance.
//!
//!     cargo run --release --example pde_refinement

use std::f64::consts::PI;

use allelofear::pde::{integrate_pde, make_fear_field, FearSpec, InitialData, PdeOptions, PdeRun, SANDWICH_C};
use allelofear::verify::FIGURES;

fn main() -> allelofear::Result<()> {
    let times = [1.0, 5.0, 20.0, 100.0, 500.0];
    let grids = [250usize, 500, 1000];
    let mut overall: f64 = 0.0;
    for case in FIGURES.iter().step_by(2) {
        let spec = FearSpec::ShiftedSine {
            base: case.base,
            amplitude: case.amplitude,
            frequency: 10.0,
        };
        let runs = grids
            .iter()
            .map(|&n| {
                let field = make_fear_field(&spec, PI, n)?;
                let init = InitialData::Flat {
                    u: case.init[0],
                    v: case.init[1],
                };
                integrate_pde(
                    &case.params,
                    &field,
                    [1.0, 1.0],
                    &init,
                    500.0,
                    &times,
                    &PdeOptions::default(),
                )
            })
            .collect::<allelofear::Result<Vec<PdeRun>>>()?;
        for (i, pair) in runs.windows(2).enumerate() {
            let n = grids[i];
            let h = PI / n as f64;
            let mut worst: f64 = 0.0;
            for (c, f) in pair[0].snapshots.iter().zip(&pair[1].snapshots) {
                for j in 0..=n {
                    worst = worst.max((c.u[j] - f.u[2 * j]).abs()).max((c.v[j] - f.v[2 * j]).abs());
                }
            }
            overall = overall.max(worst / (h * h));
            println!(
                "fig {:<4} {:?} n = {n:>4} -> {:>4}: max change {worst:.3e}, / h^2 = {:.4}",
                case.figure,
                case.init,
                2 * n,
                worst / (h * h)
            );
        }
    }
    println!("largest change / h^2 = {overall:.4}; constant in use = {SANDWICH_C}");
    Ok(())
}

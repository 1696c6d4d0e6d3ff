//! Checks the strong-competition restrictions at the extreme fear values,
//! compares the two saddles and their separatrices, and runs one probe on
//! each side of the wedge.
//!
//!     cargo run --release --example strong_competition_wedge

use std::f64::consts::PI;

use allelofear::model::ModelParams;
use allelofear::pde::{make_fear_field, wedge_check, FearSpec, PdeOptions};

fn main() -> allelofear::Result<()> {
    let p = ModelParams::new(0.2, 0.2, 1.1, 0.0, 0.15)?;
    let spec = FearSpec::ShiftedSine {
        base: 4.0,
        amplitude: 1.0,
        frequency: 10.0,
    };
    let field = make_fear_field(&spec, PI, 1000)?;
    println!("k_hat = {}, k_tilde = {}", field.k_hat, field.k_tilde);
    let probes = [([0.01, 1.5], "(0,1)"), ([1.5, 0.5], "(1,0)")];
    let r = wedge_check(&p, &field, [1.0, 1.0], &probes, 500.0, &PdeOptions::default())?;
    for c in &r.restrictions {
        println!(
            "  k = {:<3} {:<28} {:>10.5} vs {:>10.5}  {}",
            c.k,
            c.name,
            c.lhs,
            c.rhs,
            if c.holds { "ok" } else { "violated" }
        );
    }
    println!("saddle at k_hat   ({:.5}, {:.5})", r.saddle_hat[0], r.saddle_hat[1]);
    println!("saddle at k_tilde ({:.5}, {:.5})", r.saddle_tilde[0], r.saddle_tilde[1]);
    println!(
        "v ordered: {}, separatrix gap {:.3e} over {} levels",
        r.v_ordered, r.max_ordering_gap, r.levels
    );
    for probe in &r.probes {
        println!(
            "  probe {:?}: expected {}, got {:?}",
            probe.init, probe.expected, probe.report.verdict
        );
    }
    println!("wedge holds: {}", r.holds);
    Ok(())
}

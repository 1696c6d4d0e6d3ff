//! Scans `m` through the saddle-node value and checks the transversality
//! conditions there, then scans `k` through `k*` and `c` through 1.
//!
//!     cargo run --release --example bifurcation_scan

use allelofear::bifurcation::{saddle_node_points, scan, transversality_e1, transversality_e2, transversality_sn};
use allelofear::model::{thresholds, ModelParams, Param};
use allelofear::verify::FIG9;

fn main() -> allelofear::Result<()> {
    for t in saddle_node_points(FIG9.a, FIG9.c, FIG9.k) {
        println!("closed-form saddle node: m_SN = {:.10} at E = {:.8}", t.m_sn, t.e);
        let at = FIG9.with(Param::M, t.m_sn);
        let r = transversality_sn(&at, t.e)?;
        println!("  scalars {:?} -> {:?}", r.scalars, r.verdict);
    }
    let d = scan(&FIG9, Param::M, 0.10, 0.15, 51)?;
    for s in d.samples.iter().step_by(10) {
        println!("  m = {:.3}: {} interior equilibria", s.value, s.interior_count());
    }
    for e in &d.events {
        println!(
            "  event {:?} at m = {:.10} in [{:.3e}, {:.3e}]",
            e.kind, e.value, e.bracket[0], e.bracket[1]
        );
    }

    let p = ModelParams::new(0.3, 0.2, 0.5, 0.0, 0.3)?;
    let k_star = thresholds(&p).k_star;
    let r = transversality_e1(&p.with(Param::K, k_star))?;
    println!(
        "E1 at k* = {k_star:.6}: scalars {:?}, closed form {:?} -> {:?}",
        r.scalars, r.closed_form, r.verdict
    );
    let d = scan(&p, Param::K, 0.8 * k_star, 1.2 * k_star, 41)?;
    for e in &d.events {
        println!("  event {:?} at k = {:.10}", e.kind, e.value);
    }

    let p = ModelParams::new(0.2, 0.2, 1.0, 0.4, 0.3)?;
    let r = transversality_e2(&p)?;
    println!(
        "E2 at c = 1: scalars {:?}, closed form {:?} -> {:?}",
        r.scalars, r.closed_form, r.verdict
    );
    Ok(())
}

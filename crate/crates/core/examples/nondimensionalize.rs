//! Maps dimensional rates to the five model parameters and prints the
//! derived thresholds.
//!
//!     cargo run --example nondimensionalize

use allelofear::model::{cubic, nondimensionalize, thresholds, RawParams};

fn main() -> allelofear::Result<()> {
    let raw = RawParams::with_natural_scalings(1.0, 2.0, 1.0, 1.0, 0.5, 0.6, 0.1, 0.4);
    let p = nondimensionalize(&raw)?;
    println!("raw     {raw:?}");
    println!("model   a={} b={} c={} k={} m={}", p.a, p.b, p.c, p.k, p.m);

    let th = thresholds(&p);
    println!("k*  = {:.6}", th.k_star);
    println!("m*  = {:.6}", th.m_star);
    println!("m** = {:.6}", th.m_star_star);
    println!("m1  = {:.6}   m2 = {:.6}", th.m1, th.m2);

    let u = cubic(&p);
    println!("u(x) = {:.6} x^3 + {:.6} x^2 + {:.6} x + {:.6}", u.a1, u.a2, u.a3, u.a4);
    Ok(())
}

//! Lists every equilibrium with its eigenvalues and kind, and shows which
//! branch of the existence analysis predicts the interior ones.
//!
//!     cargo run --example equilibrium_inventory -- 0.3 0.2 1.1 1.1 0.12

use allelofear::equilibria::{all_equilibria, existence_case};
use allelofear::model::ModelParams;

fn main() -> allelofear::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("parameters are numbers"))
        .collect();
    let p = match args.as_slice() {
        [a, b, c, k, m] => ModelParams::new(*a, *b, *c, *k, *m)?,
        [] => ModelParams::new(0.3, 0.2, 1.1, 1.1, 0.12)?,
        _ => panic!("expected five values: a b c k m"),
    };
    println!("{p:?}");
    for e in all_equilibria(&p) {
        println!(
            "{:<4} ({:>10.6}, {:>10.6})  {:<34} mult {}  eig {:.4} / {:.4}  residual {:.1e}",
            e.label.to_string(),
            e.point[0],
            e.point[1],
            format!("{:?}", e.kind),
            e.multiplicity,
            e.eigenvalues[0],
            e.eigenvalues[1],
            e.residual
        );
    }
    let case = existence_case(&p);
    println!(
        "existence: m vs m1 {:?}, c vs 1 {:?}, m vs m2 {:?}, k vs k* {:?} -> {:?} predicts {:?}",
        case.m_vs_m1, case.c_vs_one, case.m_vs_m2, case.k_vs_k_star, case.row, case.labels
    );
    Ok(())
}

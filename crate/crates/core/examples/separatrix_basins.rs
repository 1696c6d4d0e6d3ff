//! Traces the stable manifold of the interior saddle in the bistable regime
//! and sorts a grid of initial data by the attractor it reaches.
//!
//!     cargo run --release --example separatrix_basins

use allelofear::equilibria::all_equilibria;
use allelofear::model::ModelParams;
use allelofear::ode::{basin_classify, dulac_audit, trace_separatrix, BasinLabel};

fn main() -> allelofear::Result<()> {
    let p = ModelParams::new(0.3, 0.2, 1.1, 4.5, 0.15)?;
    let eqs = all_equilibria(&p);
    let saddle = eqs
        .iter()
        .find(|e| e.kind.is_saddle() && e.point[0] > 0.0 && e.point[1] > 0.0)
        .expect("an interior saddle at these parameters");
    let sep = trace_separatrix(&p, saddle, 200.0)?;
    println!(
        "saddle {} at ({:.6}, {:.6}), stable direction {:?}",
        saddle.label, saddle.point[0], saddle.point[1], sep.stable_vector
    );
    for (i, b) in sep.branches.iter().enumerate() {
        let end = b.points.last().expect("non-empty branch");
        println!(
            "  branch {i}: {} points, arc length {:.4}, ends at ({:.4}, {:.4})",
            b.points.len(),
            b.arc_length.last().unwrap(),
            end[0],
            end[1]
        );
    }

    let n = 12;
    let grid: Vec<[f64; 2]> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| [0.06 * i as f64 / n as f64, 1.5 * j as f64 / n as f64]))
        .collect();
    let labels = basin_classify(&p, &grid, 400.0, 1e-3)?;
    println!("basins on (0, 0.06] x (0, 1.5], x: (1,0), y: (0,1) (rows: y from high to low):");
    for j in (0..n).rev() {
        let row: String = (0..n)
            .map(|i| match labels[i * n + j] {
                BasinLabel::Attractor(l) => match l.to_string().as_str() {
                    "E1" => 'x',
                    "E2" => 'y',
                    _ => '*',
                },
                BasinLabel::Undecided => '?',
            })
            .collect();
        println!("  {row}");
    }

    let d = dulac_audit(&p, (0.01, 1.0), (0.01, 1.0), 200)?;
    println!(
        "Dulac divergence max {:.4} at {:?} over {} points",
        d.max_value, d.argmax, d.points
    );
    Ok(())
}

//! Runs a JSON configuration through the same path as the command-line
//! tool and writes the report and artifacts.
//!
//!     cargo run --release --example run_config -- crates/core/examples/configs/simulate_pde.json out/

use std::path::{Path, PathBuf};

use allelofear::io::{run_config, RunConfig};

fn main() -> allelofear::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map_or_else(
        || Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/configs/equilibria.json"),
        PathBuf::from,
    );
    let cfg = RunConfig::load(&path)?;
    let analysis = cfg.validate()?;
    println!("{} from {}", analysis.name(), path.display());
    let out = run_config(&cfg)?;
    match args.next() {
        Some(dir) => {
            for p in out.write(Path::new(&dir), &cfg.formats())? {
                println!("wrote {}", p.display());
            }
        }
        None => print!("{}", out.envelope.to_json()),
    }
    if let Some(s) = &out.envelope.summary {
        println!("{} checks passed, {} failed", s.passed, s.failed);
    }
    Ok(())
}

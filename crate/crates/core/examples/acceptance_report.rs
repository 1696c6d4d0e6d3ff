//! Runs acceptance criteria by number and prints one line each.
//!
//!     cargo run --release --example acceptance_report -- 1 3 9

use allelofear::verify::run;

fn main() {
    let ids: Vec<u8> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("criterion number"))
        .collect();
    let ids = if ids.is_empty() { (1..=10).collect() } else { ids };
    let mut failed = 0;
    for id in ids {
        let c = run(id);
        failed += usize::from(!c.passed);
        println!("{}", c.line());
    }
    println!("{failed} failed");
}

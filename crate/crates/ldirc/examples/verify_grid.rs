//! Runs every consistency check on all tuples up to a level.
//!
//!     cargo run --release --example verify_grid -- [max_level]

use ldirc::sweep::{run_sweep, Filter, SweepSpec};

fn main() -> ldirc::Result<()> {
    let max = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let mut spec = SweepSpec::up_to(max);
    spec.filters = vec![Filter::NcBelowNs];
    spec.seeds = vec![1, 2, 3];
    let r = run_sweep(&spec)?;
    println!("{} tuples, {} ms", r.grid_size, r.elapsed_ms);
    for c in &r.checks {
        println!(
            "  {:<9} checked {:>5}  failures {}",
            c.name.name(),
            c.checked,
            c.failures.len()
        );
        for f in c.failures.iter().take(3) {
            println!("    {}: {}", f.params, f.detail);
        }
    }
    std::process::exit(if r.ok() { 0 } else { 1 });
}

//! Sum-capacity, every upper bound and the serving scheme for a few tuples.

use ldirc::schemes::classify_regime;
use ldirc::{ld_sum_capacity, ld_upper_bounds, LdParams};

fn main() {
    for p in [
        LdParams::new(4, 2, 3, 5),
        LdParams::new(3, 3, 5, 4),
        LdParams::new(2, 1, 0, 3),
        LdParams::new(7, 3, 3, 5),
    ] {
        let b = ld_upper_bounds(&p);
        println!("{p}: capacity {}", ld_sum_capacity(&p));
        for e in &b.entries {
            let tag = if !e.applicable {
                "  n/a"
            } else if e.label == b.binding {
                "  <-"
            } else {
                ""
            };
            println!("  {:<14} {:>3}{tag}", e.label.name(), e.value);
        }
        match classify_regime(&p) {
            Ok((s, col)) => println!("  scheme {s}, column {col}"),
            Err(e) => println!("  {e}"),
        }
    }
}

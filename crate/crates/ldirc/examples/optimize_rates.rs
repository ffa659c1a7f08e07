//! Exhaustive search over a scheme's constraint system, compared with the
//! closed-form table allocation.

use ldirc::rate_opt::{check_allocation, compile_constraints, optimize_regime};
use ldirc::rational::qi;
use ldirc::schemes::allocate_for;
use ldirc::{ld_sum_capacity, LdParams};

fn main() -> ldirc::Result<()> {
    for p in [
        LdParams::new(3, 1, 2, 5),
        LdParams::new(6, 2, 1, 5),
        LdParams::new(5, 3, 2, 6),
        LdParams::new(1, 2, 5, 4),
    ] {
        let table = allocate_for(&p)?;
        let opt = optimize_regime(&p)?;
        println!(
            "{p}: capacity {} table {} optimum {} ({} nodes, {})",
            ld_sum_capacity(&p),
            table.sum_rate(),
            opt.sum_rate,
            opt.nodes,
            opt.allocation.scheme
        );
    }

    // a table allocation pushed past its constraints
    let p = LdParams::new(3, 1, 2, 5);
    let mut a = allocate_for(&p)?;
    *a.lengths.get_mut("p").unwrap() += qi(1);
    for v in check_allocation(&compile_constraints(a.scheme, &p), &a)? {
        println!("  violated {v}");
    }
    Ok(())
}

//! Runs the block-Markov WI-1 scheme bit by bit and prints the trace.

use ldirc::schemes::{achieved_rate, allocate_for, expected_delivered, simulate};
use ldirc::{ld_sum_capacity, LdParams};

fn main() -> ldirc::Result<()> {
    let p = LdParams::new(3, 1, 2, 5);
    let a = allocate_for(&p)?;
    let n = 6;
    println!("{p}: {} ({}), capacity {}", a.scheme, a.column, ld_sum_capacity(&p));
    println!(
        "lengths {:?}",
        a.lengths.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>()
    );

    let (trace, out) = simulate(a.scheme, &p, &a, n, 7)?;
    println!("k x1 x2 xr y1 y2 yr");
    print!("{}", trace.dump());
    println!(
        "success {}, delivered {:?} (expected total {}), rate over {n} blocks {}",
        out.success,
        out.delivered_bits,
        expected_delivered(&a, n),
        achieved_rate(&out, n)?
    );
    Ok(())
}

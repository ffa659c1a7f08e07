//! Splits a Gaussian relay channel into N sub-channels and compares the
//! LD capacity at that scale with N times the GDoF.

use ldirc::gaussian::{gdof_achievable_check, plan_subchannels};
use ldirc::rational::q;
use ldirc::GdofParams;

fn main() -> ldirc::Result<()> {
    let power = 2f64.powi(20);
    for n in [2, 5, 10] {
        let plan = plan_subchannels(power, 1.0, 1.0, 1.0, 2f64.powi(-4), n)?;
        println!(
            "N={n:>2} delta={:.3} levels=({}, {}, {}, {}) R_s={} flagged={}",
            plan.delta,
            plan.n_d,
            plan.n_c,
            plan.n_r,
            plan.n_s,
            plan.r_s_exact.as_deref().unwrap_or("?"),
            plan.delta_too_small
        );
    }

    let g = GdofParams::new(q(1, 2), q(1, 10), q(7, 10))?;
    for n in [10, 20, 30] {
        let c = gdof_achievable_check(&g, n)?;
        println!(
            "{g} N={n}: LD capacity {} vs N*d {} equal={}",
            c.ld_capacity, c.scaled_gdof, c.equal
        );
    }
    Ok(())
}

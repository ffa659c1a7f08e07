//! GDoF of the relay channel against the plain interference channel
//! along alpha, for one (beta, gamma) pair.
//!
//!     cargo run --example gdof_curve -- [beta] [gamma]

use ldirc::cli::{curve_rows, CurveSpec};
use ldirc::rational::{parse_rational, render};

fn main() -> ldirc::Result<()> {
    let mut args = std::env::args().skip(1);
    let beta = parse_rational(&args.next().unwrap_or_else(|| "2".into()))?;
    let gamma = parse_rational(&args.next().unwrap_or_else(|| "3".into()))?;
    let mut spec = CurveSpec::new(beta, gamma);
    spec.step = ldirc::rational::q(1, 4);

    println!("beta = {}, gamma = {}", render(beta), render(gamma));
    println!("{:>6} {:>6} {:>6}  binding", "alpha", "d_irc", "d_ic");
    for r in curve_rows(&spec)? {
        let ic = r.d_ic.map(render).unwrap_or_default();
        println!("{:>6} {:>6} {:>6}  {}", render(r.alpha), render(r.d_irc), ic, r.binding);
    }
    Ok(())
}

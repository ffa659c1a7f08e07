//! Channel outputs of the LD relay channel for one hand-picked input.

use ldirc::{relay_output, rx_output, BitWord, LdParams};

fn main() -> ldirc::Result<()> {
    let p = LdParams::new(4, 2, 3, 5);
    let q = p.q() as usize;
    println!("{p}, q = {q}");

    let x1 = BitWord::parse("10110")?;
    let x2 = BitWord::parse("01101")?;
    let xr = BitWord::parse("11000")?;
    println!("x1 = {x1}  x2 = {x2}  xr = {xr}");
    println!("S^2 x1 = {}", x1.shift_down(2));

    println!("y_r = {}", relay_output(&p, &x1, &x2)?);
    println!("y_1 = {}", rx_output(&p, 1, &x1, &x2, &xr)?);
    println!("y_2 = {}", rx_output(&p, 2, &x1, &x2, &xr)?);

    // inputs must have exactly q levels
    let short = BitWord::parse("101")?;
    println!("short input: {}", relay_output(&p, &short, &x2).unwrap_err());
    Ok(())
}

//! Exact rationals used for GDoF exponents and half-bit rates.

use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i64>;

/// Largest denominator produced when a decimal input is converted.
pub const MAX_DENOMINATOR: i64 = 1_000_000;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(n)
}

/// `(x)^+`
pub fn pos(x: Q) -> Q {
    if x.is_negative() {
        Q::zero()
    } else {
        x
    }
}

/// Parses `"p/q"`, an integer, or a decimal such as `"0.7"` or `"1e-1"`.
/// Decimals go through continued fractions with denominators capped at
/// [`MAX_DENOMINATOR`].
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().map_err(|_| bad())?;
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        if d == 0 {
            return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<i64>() {
        return Ok(qi(n));
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    from_f64(x, MAX_DENOMINATOR).ok_or_else(bad)
}

/// Best rational approximation of `x` with denominator at most `max_den`.
pub fn from_f64(x: f64, max_den: i64) -> Option<Q> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    // convergents h/k
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    loop {
        let a = v.floor();
        let ai = a as i64;
        let k2 = ai.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            // semiconvergent check
            let t = (max_den - k0) / k1;
            let (hs, ks) = (t * h1 + h0, t * k1 + k0);
            let cand_a = Q::new(h1, k1);
            let best = if ks > 0 {
                let cand_b = Q::new(hs, ks);
                let ea = (to_f64(cand_a) - x.abs()).abs();
                let eb = (to_f64(cand_b) - x.abs()).abs();
                if eb < ea {
                    cand_b
                } else {
                    cand_a
                }
            } else {
                cand_a
            };
            return Some(if neg { -best } else { best });
        }
        let h2 = ai.checked_mul(h1)?.checked_add(h0)?;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = v - a;
        if frac < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    let r = Q::new(h1, k1);
    Some(if neg { -r } else { r })
}

pub fn to_f64(x: Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Decimal rendering with 12 significant digits and no trailing zeros.
pub fn render(x: Q) -> String {
    let v = to_f64(x);
    if v == 0.0 {
        return "0".to_string();
    }
    let s = format!("{:.11e}", v);
    let r: f64 = s.parse().unwrap_or(v);
    format!("{r}")
}

pub fn lcm_denominators(xs: &[Q]) -> i64 {
    xs.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()))
}

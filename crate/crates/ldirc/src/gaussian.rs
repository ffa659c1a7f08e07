//! Sub-channel bookkeeping between the Gaussian IRC and LD levels.
//!
//! Channel gains enter as power gains `h_x^2`. Floors of logarithms are
//! computed exactly whenever the power and the gain are powers of two.

use num_traits::Zero;
use serde::Serialize;

use crate::capacity::ld_sum_capacity;
use crate::error::{Error, Result};
use crate::gdof::{gdof, scale_to_ld, GdofParams};
use crate::rational::{qi, Q};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubchannelPlan {
    pub power: f64,
    /// Power gains h_d^2, h_c^2, h_r^2, h_s^2.
    pub gains: [f64; 4],
    pub n: u32,
    pub delta: f64,
    pub n_d: u32,
    pub n_c: u32,
    pub n_r: u32,
    pub n_s: u32,
    /// Rate of one sub-channel in bits, 0.5 log2(delta / 4).
    pub r_s: f64,
    /// R_s as an exact rational when the power is a power of two.
    pub r_s_exact: Option<String>,
    /// Set when delta <= 4, i.e. R_s <= 0 and the plan carries nothing.
    pub delta_too_small: bool,
    /// Integer l with P h_c^2 = h_d^2 delta^l, when one exists.
    pub alignment: Option<i64>,
}

/// Exponent k with x = 2^k, if x is an exact power of two.
fn log2_exact(x: f64) -> Option<i64> {
    if x <= 0.0 || !x.is_finite() {
        return None;
    }
    let k = x.log2().round();
    if (2f64).powi(k as i32) == x {
        Some(k as i64)
    } else {
        None
    }
}

/// floor(log(P g) / log(delta)) with delta = P^(1/N).
fn levels(power: f64, gain: f64, n: u32) -> u32 {
    if let (Some(a), Some(b)) = (log2_exact(power), log2_exact(gain)) {
        return (n as i64 * (a + b)).div_euclid(a).max(0) as u32;
    }
    let ratio = n as f64 * (power * gain).ln() / power.ln();
    let mut f = ratio.floor();
    // guard band against rounding just below an integer
    if (ratio - ratio.round()).abs() < 1e-9 {
        f = ratio.round();
    }
    f.max(0.0) as u32
}

pub fn plan_subchannels(power: f64, hd2: f64, hc2: f64, hr2: f64, hs2: f64, n: u32) -> Result<SubchannelPlan> {
    if n == 0 {
        return Err(Error::InvalidInput("sub-channel count N must be at least 1".into()));
    }
    let gains = [hd2, hc2, hr2, hs2];
    if !power.is_finite() || gains.iter().any(|g| !g.is_finite() || *g <= 0.0) {
        return Err(Error::InvalidInput("power and gains must be positive and finite".into()));
    }
    let min_gain = gains.iter().copied().fold(f64::INFINITY, f64::min);
    if power * min_gain <= 1.0 {
        return Err(Error::InvalidInput(format!(
            "not interference limited: P * min h^2 = {} <= 1",
            power * min_gain
        )));
    }
    let delta = match log2_exact(power) {
        Some(a) => 2f64.powf(a as f64 / n as f64),
        None => power.powf(1.0 / n as f64),
    };
    let (r_s, r_s_exact, delta_too_small) = match log2_exact(power) {
        Some(a) => {
            let r = (Q::new(a, n as i64) - qi(2)) / qi(2);
            (crate::rational::to_f64(r), Some(r.to_string()), Q::new(a, n as i64) <= qi(2))
        }
        None => {
            let r = 0.5 * (delta / 4.0).log2();
            (r, None, delta <= 4.0)
        }
    };
    let alignment = match (log2_exact(power), log2_exact(hc2), log2_exact(hd2)) {
        (Some(a), Some(c), Some(d)) => {
            let num = n as i64 * (a + c - d);
            (num % a == 0).then_some(num / a)
        }
        _ => {
            let l = n as f64 * (power * hc2 / hd2).ln() / power.ln();
            ((l - l.round()).abs() < 1e-9).then_some(l.round() as i64)
        }
    };
    Ok(SubchannelPlan {
        power,
        gains,
        n,
        delta,
        n_d: levels(power, hd2, n),
        n_c: levels(power, hc2, n),
        n_r: levels(power, hr2, n),
        n_s: levels(power, hs2, n),
        r_s,
        r_s_exact,
        delta_too_small,
        alignment,
    })
}

/// k_d + k_c alpha + k_r beta + k_s gamma.
pub fn gdof_limit(kd: i64, kc: i64, kr: i64, ks: i64, g: &GdofParams) -> Q {
    qi(kd) + qi(kc) * g.alpha + qi(kr) * g.beta + qi(ks) * g.gamma
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AchievableCheck {
    pub ld_capacity: u32,
    pub scaled_gdof: String,
    pub equal: bool,
}

/// Compares the LD capacity at scale N with N times the GDoF.
pub fn gdof_achievable_check(g: &GdofParams, n: u32) -> Result<AchievableCheck> {
    let den = g.denominator_lcm();
    if n == 0 || (n as i64) % den != 0 {
        return Err(Error::InvalidInput(format!("N = {n} is not a positive multiple of {den}")));
    }
    let cap = ld_sum_capacity(&scale_to_ld(g, n));
    let scaled = gdof(g) * qi(n as i64);
    Ok(AchievableCheck {
        ld_capacity: cap,
        scaled_gdof: scaled.to_string(),
        equal: scaled == qi(cap as i64),
    })
}

impl AchievableCheck {
    pub fn scaled_gdof_value(&self) -> Q {
        crate::rational::parse_rational(&self.scaled_gdof).unwrap_or_else(|_| Q::zero())
    }
}

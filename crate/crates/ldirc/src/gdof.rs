//! GDoF of the Gaussian IRC and its upper bounds, in exact rationals.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::capacity::{BoundEntry, BoundSet};
use crate::error::{Error, Result};
use crate::ld::LdParams;
use crate::rational::{pos, qi, Q};

/// GDoF bounds carry the same identifiers as their LD counterparts.
pub use crate::capacity::LdBound as GdofBound;

/// Channel exponents normalised by the direct link: alpha (cross), beta
/// (relay-destination), gamma (source-relay).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GdofParams {
    pub alpha: Q,
    pub beta: Q,
    pub gamma: Q,
}

impl Serialize for GdofParams {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GdofParams", 3)?;
        st.serialize_field("alpha", &self.alpha.to_string())?;
        st.serialize_field("beta", &self.beta.to_string())?;
        st.serialize_field("gamma", &self.gamma.to_string())?;
        st.end()
    }
}

impl GdofParams {
    pub fn new(alpha: Q, beta: Q, gamma: Q) -> Result<Self> {
        if alpha < Q::zero() || beta < Q::zero() || gamma < Q::zero() {
            return Err(Error::InvalidInput("GDoF exponents must be non-negative".into()));
        }
        Ok(GdofParams { alpha, beta, gamma })
    }

    /// Least common multiple of the three denominators.
    pub fn denominator_lcm(&self) -> i64 {
        crate::rational::lcm_denominators(&[self.alpha, self.beta, self.gamma])
    }
}

impl fmt::Display for GdofParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha={}, beta={}, gamma={})", self.alpha, self.beta, self.gamma)
    }
}

fn max2(a: Q, b: Q) -> Q {
    a.max(b)
}

fn max3(a: Q, b: Q, c: Q) -> Q {
    a.max(b).max(c)
}

fn min_of(xs: &[Q]) -> Q {
    xs.iter().copied().fold(xs[0], |m, x| m.min(x))
}

/// Sum GDoF of the IRC.
pub fn gdof(g: &GdofParams) -> Q {
    let one = Q::one();
    let two = qi(2);
    let (a, b, c) = (g.alpha, g.beta, g.gamma);
    if a == one {
        return max2(one, b.min(c));
    }
    if c > a {
        min_of(&[
            two * max2(one, b),
            max3(one, a, b) + max2(one, a) - pos(a - pos(c - max2(one, a))),
            b + two * max2(one, a) - a,
            two * max3(c, b + c - a, one - a),
            max2(one, a) + max2(one, c),
            two * max2(a, b + pos(one - a)),
        ])
    } else {
        min_of(&[
            two * max2(one, b),
            two * max2(one, c),
            max3(one, a, b) + max2(one, a) - a,
            two * max2(one, a) - a + c,
            two * max3(a, b, one - a),
            two * max2(a, one + c - a),
        ])
    }
}

/// Sum GDoF of the two-user IC without relay.
pub fn gdof_ic(alpha: Q) -> Q {
    let one = Q::one();
    let two = qi(2);
    if alpha <= one {
        max2(two - two * alpha, two * alpha).min(two - alpha)
    } else {
        alpha.min(two)
    }
}

/// Evaluates the eight GDoF upper bounds with their applicability conditions.
pub fn gdof_upper_bounds(g: &GdofParams) -> BoundSet<GdofBound, Q> {
    let one = Q::one();
    let two = qi(2);
    let (a, b, c) = (g.alpha, g.beta, g.gamma);
    let entry = |label, value, applicable| BoundEntry {
        label,
        value,
        applicable,
    };
    BoundSet::from_entries(vec![
        entry(GdofBound::EqualGain, max2(one, b.min(c)), a == one),
        entry(GdofBound::RelayCross, max3(one, a, b) + max2(one, a), true),
        entry(GdofBound::RelayGenie, b + two * max2(one, a) - a, true),
        entry(GdofBound::SourceGenie, max2(one, a) + max2(one, c), true),
        entry(
            GdofBound::SourceIc,
            two * max3(a, b, one - max2(a, c)) + two * pos(c - a),
            true,
        ),
        entry(GdofBound::RelayIc, two * max2(a, b + one - a), b <= a && a <= one),
        entry(GdofBound::ReceiverCut, two * max2(one, b), true),
        entry(
            GdofBound::SourceExcess,
            max3(one, b, a) + max2(one, a) - a + pos(c - max2(one, a)),
            true,
        ),
    ])
}

fn floor_mul(x: Q, n: u32) -> u32 {
    (x * qi(n as i64)).floor().to_integer() as u32
}

/// (n_d, n_c, n_r, n_s) = (N, floor(alpha N), floor(beta N), floor(gamma N)).
pub fn scale_to_ld(g: &GdofParams, n: u32) -> LdParams {
    LdParams::new(n, floor_mul(g.alpha, n), floor_mul(g.beta, n), floor_mul(g.gamma, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::ld_sum_capacity;
    use crate::rational::q;

    fn g(a: Q, b: Q, c: Q) -> GdofParams {
        GdofParams::new(a, b, c).unwrap()
    }

    #[test]
    fn gdof_examples() {
        assert_eq!(gdof(&g(q(1, 2), q(1, 10), q(7, 10))), q(6, 5));
        assert_eq!(gdof(&g(qi(1), qi(2), qi(3))), qi(2));
        assert_eq!(gdof(&g(q(3, 2), qi(2), qi(3))), q(7, 2));
        assert_eq!(gdof(&g(qi(2), qi(2), qi(3))), qi(3));
    }

    #[test]
    fn ic_examples() {
        assert_eq!(gdof_ic(qi(0)), qi(2));
        assert_eq!(gdof_ic(qi(1)), qi(1));
        assert_eq!(gdof_ic(q(1, 2)), qi(1));
        assert_eq!(gdof_ic(qi(3)), qi(2));
    }

    #[test]
    fn bound_examples() {
        let b = gdof_upper_bounds(&g(q(3, 2), qi(2), qi(3)));
        assert_eq!(b.get(GdofBound::RelayGenie), Some(q(7, 2)));
        assert!(b.is_binding(GdofBound::RelayGenie));
        // RelayCross ties at 3.5 and is listed first.
        assert_eq!(b.binding, GdofBound::RelayCross);
        let b = gdof_upper_bounds(&g(q(1, 2), q(1, 10), q(7, 10)));
        let e = b.entries.iter().find(|e| e.label == GdofBound::RelayIc).unwrap();
        assert!(e.applicable);
        assert_eq!(e.value, q(6, 5));
        assert_eq!(b.binding, GdofBound::RelayIc);
        assert_eq!(b.min(), q(6, 5));
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(scale_to_ld(&g(qi(1), qi(1), qi(1)), 7), LdParams::new(7, 7, 7, 7));
        let p = scale_to_ld(&g(q(1, 2), q(1, 10), q(7, 10)), 10);
        assert_eq!(p, LdParams::new(10, 5, 1, 7));
        assert_eq!(ld_sum_capacity(&p) as i64, 12);
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(GdofParams::new(q(-1, 2), qi(0), qi(0)).is_err());
    }
}

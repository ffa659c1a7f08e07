//! Linear deterministic interference relay channel: bit words, the down-shift
//! operator and the relay/receiver input-output maps.

use std::fmt;

use crate::error::{Error, Result};

/// The four channel strengths in bit levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct LdParams {
    pub nd: u32,
    pub nc: u32,
    pub nr: u32,
    pub ns: u32,
}

/// Coarse operating regime of a parameter tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Regime {
    /// n_s <= n_c: the source-relay links are no stronger than the cross links.
    WeakerSource,
    /// n_c < n_s and n_c < n_d.
    WeakInterference,
    /// n_c < n_s and n_d < n_c.
    StrongInterference,
    /// n_c < n_s and n_c = n_d.
    IntermediateInterference,
}

impl LdParams {
    pub const fn new(nd: u32, nc: u32, nr: u32, ns: u32) -> Self {
        LdParams { nd, nc, nr, ns }
    }

    pub fn q(&self) -> u32 {
        self.nd.max(self.nc).max(self.nr).max(self.ns)
    }

    /// Multiplies every level by `factor`.
    pub fn scaled(&self, factor: u32) -> Self {
        LdParams::new(self.nd * factor, self.nc * factor, self.nr * factor, self.ns * factor)
    }

    pub fn regime(&self) -> Regime {
        if self.ns <= self.nc {
            Regime::WeakerSource
        } else if self.nc < self.nd {
            Regime::WeakInterference
        } else if self.nd < self.nc {
            Regime::StrongInterference
        } else {
            Regime::IntermediateInterference
        }
    }

    /// Levels as signed integers, handy for closed forms with subtractions.
    pub fn signed(&self) -> (i64, i64, i64, i64) {
        (self.nd as i64, self.nc as i64, self.nr as i64, self.ns as i64)
    }
}

impl fmt::Display for LdParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n_d={}, n_c={}, n_r={}, n_s={})", self.nd, self.nc, self.nr, self.ns)
    }
}

/// A binary column vector; index 0 is the top-most level.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitWord {
    bits: Vec<bool>,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        BitWord { bits: vec![false; len] }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitWord { bits }
    }

    /// Parses a string of '0'/'1' characters, top level first.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!("not a bit: {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitWord::from_bits)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, b: bool) {
        self.bits[i] = b;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|b| !b)
    }

    pub fn xor(&self, other: &BitWord) -> Result<BitWord> {
        check_len(other, self.len())?;
        Ok(BitWord {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Applies S^s: every bit moves s levels down, the top s levels become zero.
    pub fn shift_down(&self, s: usize) -> BitWord {
        let q = self.len();
        let mut out = BitWord::zeros(q);
        for i in s..q {
            out.bits[i] = self.bits[i - s];
        }
        out
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

pub fn shift_down(v: &BitWord, s: usize) -> BitWord {
    v.shift_down(s)
}

fn check_len(w: &BitWord, q: usize) -> Result<()> {
    if w.len() != q {
        return Err(Error::LengthMismatch {
            expected: q,
            got: w.len(),
        });
    }
    Ok(())
}

/// y_r = S^{q-n_s} x1 xor S^{q-n_s} x2.
pub fn relay_output(p: &LdParams, x1: &BitWord, x2: &BitWord) -> Result<BitWord> {
    let q = p.q() as usize;
    check_len(x1, q)?;
    check_len(x2, q)?;
    let s = q - p.ns as usize;
    x1.shift_down(s).xor(&x2.shift_down(s))
}

/// y_j = S^{q-n_d} x_j xor S^{q-n_c} x_l xor S^{q-n_r} x_r, with l the other transmitter.
pub fn rx_output(p: &LdParams, j: usize, x1: &BitWord, x2: &BitWord, xr: &BitWord) -> Result<BitWord> {
    let q = p.q() as usize;
    check_len(x1, q)?;
    check_len(x2, q)?;
    check_len(xr, q)?;
    let (own, other) = match j {
        1 => (x1, x2),
        2 => (x2, x1),
        _ => return Err(Error::InvalidInput(format!("receiver index must be 1 or 2, got {j}"))),
    };
    own.shift_down(q - p.nd as usize)
        .xor(&other.shift_down(q - p.nc as usize))?
        .xor(&xr.shift_down(q - p.nr as usize))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> BitWord {
        BitWord::parse(s).unwrap()
    }

    #[test]
    fn shift_examples() {
        assert_eq!(w("1011").shift_down(2), w("0010"));
        assert_eq!(w("1011").shift_down(0), w("1011"));
        assert_eq!(w("1011").shift_down(4), w("0000"));
        assert_eq!(w("1011").shift_down(9), w("0000"));
    }

    #[test]
    fn relay_example() {
        let p = LdParams::new(3, 0, 0, 2);
        assert_eq!(relay_output(&p, &w("110"), &w("011")).unwrap(), w("010"));
    }

    #[test]
    fn receiver_example() {
        let p = LdParams::new(3, 1, 2, 0);
        // S^0(101) xor S^2(110) xor S^1(010) = 101 xor 001 xor 001
        let y1 = rx_output(&p, 1, &w("101"), &w("110"), &w("010")).unwrap();
        assert_eq!(y1, w("101"));
    }

    #[test]
    fn empty_words_when_all_links_absent() {
        let p = LdParams::new(0, 0, 0, 0);
        let e = BitWord::zeros(0);
        assert!(relay_output(&p, &e, &e).unwrap().is_empty());
        assert!(rx_output(&p, 2, &e, &e, &e).unwrap().is_empty());
    }

    #[test]
    fn length_mismatch_is_reported() {
        let p = LdParams::new(3, 1, 2, 2);
        let err = relay_output(&p, &w("10"), &w("101")).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { expected: 3, got: 2 }));
    }

    #[test]
    fn regime_is_total() {
        for nd in 0..5 {
            for nc in 0..5 {
                for ns in 0..5 {
                    let p = LdParams::new(nd, nc, 1, ns);
                    let r = p.regime();
                    let expect = if ns <= nc {
                        Regime::WeakerSource
                    } else if nc < nd {
                        Regime::WeakInterference
                    } else if nd < nc {
                        Regime::StrongInterference
                    } else {
                        Regime::IntermediateInterference
                    };
                    assert_eq!(r, expect);
                }
            }
        }
    }
}

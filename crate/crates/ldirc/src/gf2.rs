//! GF(2) linear functionals over message bits and an incremental basis.
//!
//! A [`Func`] is a linear form over a fixed set of binary variables. A
//! [`Basis`] stores observed functionals together with their observed
//! values and answers whether another functional, and its value, follows.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Func {
    words: Vec<u64>,
}

impl Func {
    pub fn zeros(nvars: usize) -> Self {
        Func {
            words: vec![0; nvars.div_ceil(64)],
        }
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut f = Func::zeros(nvars);
        f.flip(i);
        f
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &Func) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Func) -> Func {
        let mut f = self.clone();
        f.xor_assign(other);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn highest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(i, &w)| (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b))
    }

    /// Evaluates the form on a full assignment.
    pub fn eval(&self, values: &[bool]) -> bool {
        self.support().fold(false, |acc, i| acc ^ values[i])
    }
}

impl fmt::Debug for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<usize> = self.support().collect();
        write!(f, "Func{v:?}")
    }
}

/// An observation that contradicts the values already in a [`Basis`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inconsistent;

/// Row-echelon basis keyed by the highest set variable of each row.
#[derive(Clone, Debug)]
pub struct Basis {
    rows: Vec<(Func, bool)>,
    pivot: Vec<Option<usize>>,
}

impl Basis {
    pub fn new(nvars: usize) -> Self {
        Basis {
            rows: Vec::new(),
            pivot: vec![None; nvars],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `f` against the basis; returns the residual and the
    /// accumulated value of the rows used.
    pub fn reduce(&self, f: &Func) -> (Func, bool) {
        let mut r = f.clone();
        let mut val = false;
        while let Some(h) = r.highest() {
            match self.pivot[h] {
                Some(idx) => {
                    r.xor_assign(&self.rows[idx].0);
                    val ^= self.rows[idx].1;
                }
                None => break,
            }
        }
        (r, val)
    }

    /// Adds an observation. Returns `Ok(true)` when it extends the basis and
    /// [`Inconsistent`] when it is dependent but its value contradicts it.
    pub fn insert(&mut self, f: &Func, value: bool) -> Result<bool, Inconsistent> {
        let (r, v) = self.reduce(f);
        match r.highest() {
            None => {
                if v == value {
                    Ok(false)
                } else {
                    Err(Inconsistent)
                }
            }
            Some(h) => {
                self.pivot[h] = Some(self.rows.len());
                self.rows.push((r, value ^ v));
                Ok(true)
            }
        }
    }

    /// Value of `f` if it lies in the span.
    pub fn solve(&self, f: &Func) -> Option<bool> {
        let (r, v) = self.reduce(f);
        r.is_zero().then_some(v)
    }

    /// Rows whose support lies entirely below variable `limit`. Together they
    /// span every combination in the basis that avoids variables >= `limit`.
    pub fn rows_below(&self, limit: usize) -> impl Iterator<Item = &(Func, bool)> + '_ {
        self.rows.iter().filter(move |(f, _)| f.highest().is_some_and(|h| h < limit))
    }

    pub fn contains(&self, f: &Func) -> bool {
        self.reduce(f).0.is_zero()
    }
}

/// Rank of a set of functionals.
pub fn rank(nvars: usize, fs: &[Func]) -> usize {
    let mut b = Basis::new(nvars);
    for f in fs {
        let _ = b.insert(f, false);
    }
    b.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_xor_system() {
        let n = 70;
        let mut b = Basis::new(n);
        // x0 ^ x65 = 1, x65 = 0
        let mut f = Func::unit(n, 0);
        f.flip(65);
        assert_eq!(b.insert(&f, true), Ok(true));
        assert_eq!(b.solve(&Func::unit(n, 0)), None);
        assert_eq!(b.insert(&Func::unit(n, 65), false), Ok(true));
        assert_eq!(b.solve(&Func::unit(n, 0)), Some(true));
        assert_eq!(b.insert(&f, true), Ok(false));
        assert_eq!(b.insert(&f, false), Err(Inconsistent));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn highest_and_eval() {
        let mut f = Func::zeros(130);
        assert_eq!(f.highest(), None);
        f.flip(3);
        f.flip(129);
        assert_eq!(f.highest(), Some(129));
        let mut vals = vec![false; 130];
        vals[3] = true;
        assert!(f.eval(&vals));
        vals[129] = true;
        assert!(!f.eval(&vals));
        assert_eq!(f.support().collect::<Vec<_>>(), vec![3, 129]);
    }
}

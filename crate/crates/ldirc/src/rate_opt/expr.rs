//! Piecewise-linear expressions over the variables of a constraint system.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::rational::{pos, Q};

/// Fixed-point resolution used by the interval evaluator: 1/8 bit.
pub(crate) const UNIT: i64 = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Q),
    Var(usize),
    /// Integer linear combination.
    Lin(Vec<(i64, Expr)>),
    Half(Box<Expr>),
    /// `(e)^+`
    Pos(Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    /// `then` when `cond > 0`, `other` otherwise.
    IfPos {
        cond: Box<Expr>,
        then: Box<Expr>,
        other: Box<Expr>,
    },
}

pub fn c(x: impl Into<Q>) -> Expr {
    Expr::Const(x.into())
}

pub fn half(e: Expr) -> Expr {
    Expr::Half(Box::new(e))
}

pub fn p(e: Expr) -> Expr {
    Expr::Pos(Box::new(e))
}

pub fn min(a: Expr, b: Expr) -> Expr {
    Expr::Min(Box::new(a), Box::new(b))
}

pub fn if_pos(cond: Expr, then: Expr, other: Expr) -> Expr {
    Expr::IfPos {
        cond: Box::new(cond),
        then: Box::new(then),
        other: Box::new(other),
    }
}

fn terms(e: Expr, k: i64) -> Vec<(i64, Expr)> {
    match e {
        Expr::Lin(ts) => ts.into_iter().map(|(a, t)| (a * k, t)).collect(),
        other => vec![(k, other)],
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        let mut t = terms(self, 1);
        t.extend(terms(rhs, 1));
        Expr::Lin(t)
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        let mut t = terms(self, 1);
        t.extend(terms(rhs, -1));
        Expr::Lin(t)
    }
}

impl Mul<Expr> for i64 {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Lin(terms(rhs, self))
    }
}

impl Expr {
    pub fn eval(&self, vals: &[Q]) -> Q {
        match self {
            Expr::Const(x) => *x,
            Expr::Var(i) => vals[*i],
            Expr::Lin(ts) => ts
                .iter()
                .fold(Q::zero(), |acc, (k, e)| acc + Q::from_integer(*k) * e.eval(vals)),
            Expr::Half(e) => e.eval(vals) / 2,
            Expr::Pos(e) => pos(e.eval(vals)),
            Expr::Min(a, b) => a.eval(vals).min(b.eval(vals)),
            Expr::IfPos { cond, then, other } => {
                if cond.eval(vals) > Q::zero() {
                    then.eval(vals)
                } else {
                    other.eval(vals)
                }
            }
        }
    }

    /// Enclosing interval in units of 1/[`UNIT`], given one interval per variable.
    pub(crate) fn bounds(&self, iv: &[(i64, i64)]) -> (i64, i64) {
        match self {
            Expr::Const(x) => {
                let v = (x * UNIT).floor().to_integer();
                let w = (x * UNIT).ceil().to_integer();
                (v, w)
            }
            Expr::Var(i) => iv[*i],
            Expr::Lin(ts) => ts.iter().fold((0, 0), |(lo, hi), (k, e)| {
                let (a, b) = e.bounds(iv);
                if *k >= 0 {
                    (lo + k * a, hi + k * b)
                } else {
                    (lo + k * b, hi + k * a)
                }
            }),
            Expr::Half(e) => {
                let (a, b) = e.bounds(iv);
                (a.div_euclid(2), (b + 1).div_euclid(2))
            }
            Expr::Pos(e) => {
                let (a, b) = e.bounds(iv);
                (a.max(0), b.max(0))
            }
            Expr::Min(x, y) => {
                let (a, b) = x.bounds(iv);
                let (c, d) = y.bounds(iv);
                (a.min(c), b.min(d))
            }
            Expr::IfPos { cond, then, other } => {
                let (a, b) = cond.bounds(iv);
                if a > 0 {
                    then.bounds(iv)
                } else if b <= 0 {
                    other.bounds(iv)
                } else {
                    let (x, y) = then.bounds(iv);
                    let (u, v) = other.bounds(iv);
                    (x.min(u), y.max(v))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn exact_and_interval_agree_on_points() {
        let x = Expr::Var(0);
        let y = Expr::Var(1);
        let e = min(half(x.clone()), p(x.clone() - c(qi(2)))) + 2 * if_pos(y.clone() - c(qi(1)), y.clone(), c(qi(0)));
        for (a, b) in [(q(3, 2), qi(2)), (qi(5), q(1, 2)), (qi(0), qi(0))] {
            let exact = e.eval(&[a, b]);
            let pa = (a * UNIT).to_integer();
            let pb = (b * UNIT).to_integer();
            let (lo, hi) = e.bounds(&[(pa, pa), (pb, pb)]);
            assert_eq!((lo, hi), ((exact * UNIT).to_integer(), (exact * UNIT).to_integer()));
        }
    }

    #[test]
    fn interval_encloses_range() {
        let x = Expr::Var(0);
        let e = c(qi(3)) - x.clone() + p(x - c(qi(1)));
        let (lo, hi) = e.bounds(&[(0, 4 * UNIT)]);
        for v in 0..=4 {
            let exact = e.eval(&[qi(v)]) * UNIT;
            assert!(Q::from_integer(lo) <= exact && exact <= Q::from_integer(hi));
        }
    }
}

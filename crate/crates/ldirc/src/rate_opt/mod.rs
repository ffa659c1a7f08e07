//! Scheme constraint systems and an exhaustive optimizer over them.
//!
//! Each scheme's feasibility conditions are transcribed into a
//! [`ConstraintSet`] whose variables are the keys of a [`RateAllocation`].
//! [`optimize`] searches all half-integer assignments of the free variables
//! with interval pruning, independently of the allocation tables.

mod expr;
mod systems;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ld::LdParams;
use crate::rational::Q;
use crate::schemes::{classify_regime, Column, RateAllocation, SchemeId};

use expr::UNIT;
pub use expr::{c, half, if_pos, min, p, Expr};
pub use systems::compile_constraints;

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: &'static str,
    /// Zero-block length rather than a signal class.
    pub padding: bool,
    /// `None` for a free variable, otherwise its defining expression over
    /// earlier variables.
    pub def: Option<Expr>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Eq,
    Ge,
}

/// Activation condition on a constraint.
#[derive(Clone, Debug, PartialEq)]
pub enum Guard {
    Positive(Expr),
    Zero(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub id: String,
    pub lhs: Expr,
    pub rel: Rel,
    pub rhs: Expr,
    /// All guards must hold for the constraint to be active.
    pub guards: Vec<Guard>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSet {
    pub scheme: SchemeId,
    pub params: LdParams,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Sum-rate as a function of the variables.
    pub objective: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub id: String,
    pub lhs: Q,
    pub rhs: Q,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: lhs={} rhs={}", self.id, self.lhs, self.rhs)
    }
}

fn holds(rel: Rel, l: Q, r: Q) -> bool {
    match rel {
        Rel::Le => l <= r,
        Rel::Eq => l == r,
        Rel::Ge => l >= r,
    }
}

impl ConstraintSet {
    pub fn index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn free_variables(&self) -> Vec<&'static str> {
        self.variables.iter().filter(|v| v.def.is_none()).map(|v| v.name).collect()
    }

    fn guard_active(&self, guards: &[Guard], vals: &[Q]) -> bool {
        guards.iter().all(|g| match g {
            Guard::Positive(e) => e.eval(vals) > Q::zero(),
            Guard::Zero(e) => e.eval(vals) <= Q::zero(),
        })
    }

    /// Fills derived values in place and returns the violated constraints.
    fn violations(&self, vals: &mut [Q], given: Option<&[Q]>) -> Vec<Violation> {
        let mut out = Vec::new();
        for (i, v) in self.variables.iter().enumerate() {
            if let Some(d) = &v.def {
                vals[i] = d.eval(vals);
                if let Some(g) = given {
                    if g[i] != vals[i] {
                        out.push(Violation {
                            id: format!("derived:{}", v.name),
                            lhs: g[i],
                            rhs: vals[i],
                        });
                    }
                }
            }
        }
        for (i, v) in self.variables.iter().enumerate() {
            let x = given.map_or(vals[i], |g| g[i]);
            if x < Q::zero() {
                out.push(Violation {
                    id: format!("nonneg:{}", v.name),
                    lhs: x,
                    rhs: Q::zero(),
                });
            }
        }
        for con in &self.constraints {
            if !self.guard_active(&con.guards, vals) {
                continue;
            }
            let (l, r) = (con.lhs.eval(vals), con.rhs.eval(vals));
            if !holds(con.rel, l, r) {
                out.push(Violation {
                    id: con.id.clone(),
                    lhs: l,
                    rhs: r,
                });
            }
        }
        out
    }

    fn to_allocation(&self, vals: &[Q], column: Column) -> RateAllocation {
        let mut lengths = BTreeMap::new();
        let mut paddings = BTreeMap::new();
        for (v, x) in self.variables.iter().zip(vals) {
            if v.padding {
                paddings.insert(v.name.to_string(), *x);
            } else {
                lengths.insert(v.name.to_string(), *x);
            }
        }
        RateAllocation {
            params: self.params,
            scheme: self.scheme,
            column,
            lengths,
            paddings,
        }
    }

    fn values_of(&self, a: &RateAllocation) -> Result<Vec<Q>> {
        for k in a.lengths.keys().chain(a.paddings.keys()) {
            if self.index(k).is_none() {
                return Err(Error::UnknownVariable(k.clone()));
            }
        }
        self.variables
            .iter()
            .map(|v| a.var(v.name).ok_or_else(|| Error::UnknownVariable(v.name.to_string())))
            .collect()
    }

    /// Objective value at an allocation, with derived variables recomputed.
    pub fn objective_at(&self, a: &RateAllocation) -> Result<Q> {
        let mut vals = self.values_of(a)?;
        self.violations(&mut vals, None);
        Ok(self.objective.eval(&vals))
    }
}

/// Every violated active constraint, wrong derived value or negative
/// variable of `a` with respect to `cs`.
pub fn check_allocation(cs: &ConstraintSet, a: &RateAllocation) -> Result<Vec<Violation>> {
    let given = cs.values_of(a)?;
    let mut vals = given.clone();
    Ok(cs.violations(&mut vals, Some(&given)))
}

/// Column label attached to optimizer output.
pub fn optimizer_column(scheme: SchemeId) -> Column {
    Column {
        scheme,
        table: "optimizer",
        column: "",
    }
}

struct Search<'a> {
    cs: &'a ConstraintSet,
    free: Vec<usize>,
    max: i64,
    step: i64,
    iv: Vec<(i64, i64)>,
    best: Option<(Q, Vec<Q>)>,
    nodes: u64,
}

impl Search<'_> {
    fn refresh(&mut self) {
        for (i, v) in self.cs.variables.iter().enumerate() {
            if let Some(d) = &v.def {
                self.iv[i] = d.bounds(&self.iv);
            }
        }
    }

    fn guard_state(&self, guards: &[Guard]) -> Option<bool> {
        let mut all = true;
        for g in guards {
            let (lo, hi) = match g {
                Guard::Positive(e) | Guard::Zero(e) => e.bounds(&self.iv),
            };
            let pos = if lo > 0 {
                Some(true)
            } else if hi <= 0 {
                Some(false)
            } else {
                None
            };
            match (g, pos) {
                (Guard::Positive(_), Some(false)) | (Guard::Zero(_), Some(true)) => return Some(false),
                (_, None) => all = false,
                _ => {}
            }
        }
        all.then_some(true)
    }

    fn pruned(&self) -> bool {
        for (i, v) in self.cs.variables.iter().enumerate() {
            if v.def.is_some() && self.iv[i].1 < 0 {
                return true;
            }
        }
        for con in &self.cs.constraints {
            if self.guard_state(&con.guards) != Some(true) {
                continue;
            }
            let (a, b) = con.lhs.bounds(&self.iv);
            let (x, y) = con.rhs.bounds(&self.iv);
            let dead = match con.rel {
                Rel::Le => a > y,
                Rel::Ge => b < x,
                Rel::Eq => a > y || b < x,
            };
            if dead {
                return true;
            }
        }
        if let Some((best, _)) = &self.best {
            let ub = self.cs.objective.bounds(&self.iv).1;
            if Q::new(ub, UNIT) <= *best {
                return true;
            }
        }
        false
    }

    fn run(&mut self, depth: usize) {
        self.nodes += 1;
        self.refresh();
        if self.pruned() {
            return;
        }
        if depth == self.free.len() {
            let mut vals: Vec<Q> = self.iv.iter().map(|(lo, _)| Q::new(*lo, UNIT)).collect();
            if self.cs.violations(&mut vals, None).is_empty() {
                let obj = self.cs.objective.eval(&vals);
                if self.best.as_ref().is_none_or(|(b, _)| obj > *b) {
                    self.best = Some((obj, vals));
                }
            }
            return;
        }
        let idx = self.free[depth];
        let mut v = self.max;
        while v >= 0 {
            self.iv[idx] = (v, v);
            self.run(depth + 1);
            v -= self.step;
        }
        self.iv[idx] = (0, self.max);
        self.refresh();
    }
}

/// Result of an exhaustive search.
#[derive(Clone, Debug)]
pub struct Optimum {
    pub allocation: RateAllocation,
    pub sum_rate: Q,
    /// Search-tree nodes visited.
    pub nodes: u64,
    pub feasible: bool,
}

/// Maximizes the objective over half-integer values of the free variables
/// in `[0, q]` (the integer range `[0, 2q]` in half-bit units). Among
/// maximizers the lexicographically largest assignment, in variable order,
/// is returned. An infeasible system yields the all-zero allocation and rate 0.
pub fn optimize(cs: &ConstraintSet) -> Optimum {
    let max = cs.params.q() as i64 * UNIT;
    let free: Vec<usize> = cs
        .variables
        .iter()
        .enumerate()
        .filter(|(_, v)| v.def.is_none())
        .map(|(i, _)| i)
        .collect();
    let mut iv = vec![(0, 0); cs.variables.len()];
    for &i in &free {
        iv[i] = (0, max);
    }
    let mut s = Search {
        cs,
        free,
        max,
        step: UNIT / 2,
        iv,
        best: None,
        nodes: 0,
    };
    s.run(0);
    let column = optimizer_column(cs.scheme);
    match s.best {
        Some((obj, vals)) => Optimum {
            allocation: cs.to_allocation(&vals, column),
            sum_rate: obj,
            nodes: s.nodes,
            feasible: true,
        },
        None => {
            let zeros = vec![Q::zero(); cs.variables.len()];
            Optimum {
                allocation: cs.to_allocation(&zeros, column),
                sum_rate: Q::zero(),
                nodes: s.nodes,
                feasible: false,
            }
        }
    }
}

/// Optimum of the scheme that serves `p`. For WI-3 both variants are
/// searched and the better one is kept (variant a on ties).
pub fn optimize_regime(p: &LdParams) -> Result<Optimum> {
    let (scheme, _) = classify_regime(p)?;
    if scheme.is_wi3() {
        let a = optimize(&compile_constraints(SchemeId::WI3a, p));
        let b = optimize(&compile_constraints(SchemeId::WI3b, p));
        let nodes = a.nodes + b.nodes;
        let mut best = if b.feasible && (!a.feasible || b.sum_rate > a.sum_rate) {
            b
        } else {
            a
        };
        best.nodes = nodes;
        return Ok(best);
    }
    Ok(optimize(&compile_constraints(scheme, p)))
}

/// [`optimize_regime`] over many tuples on the rayon pool.
pub fn optimize_many(ps: &[LdParams]) -> Vec<(LdParams, Result<Optimum>)> {
    ps.par_iter().map(|p| (*p, optimize_regime(p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::ld_sum_capacity;
    use crate::rational::qi;
    use crate::schemes::allocate;

    #[test]
    fn wi1_example_optimum() {
        let p = LdParams::new(3, 1, 2, 5);
        let cs = compile_constraints(SchemeId::WI1, &p);
        assert_eq!(cs.free_variables().len(), 6);
        let o = optimize(&cs);
        assert_eq!(o.sum_rate, qi(6));
        assert!(check_allocation(&cs, &o.allocation).unwrap().is_empty());
        assert_eq!(o.allocation.sum_rate(), qi(6));
    }

    #[test]
    fn si_example_optimum() {
        let p = LdParams::new(1, 2, 5, 4);
        let o = optimize(&compile_constraints(SchemeId::SI, &p));
        assert_eq!(o.sum_rate, qi(6));
        assert_eq!(Q::from_integer(ld_sum_capacity(&p) as i64), qi(6));
    }

    #[test]
    fn zero_levels_give_zero() {
        let p = LdParams::new(0, 0, 0, 0);
        for s in SchemeId::ALL {
            assert_eq!(optimize(&compile_constraints(s, &p)).sum_rate, Q::zero());
        }
    }

    #[test]
    fn table_allocation_is_feasible_and_private_overflow_is_named() {
        let p = LdParams::new(3, 1, 2, 5);
        let cs = compile_constraints(SchemeId::WI1, &p);
        let a = allocate(SchemeId::WI1, &p).unwrap();
        assert!(check_allocation(&cs, &a).unwrap().is_empty());
        assert_eq!(cs.objective_at(&a).unwrap(), a.sum_rate());
        let mut bad = a.clone();
        bad.lengths.insert("p".into(), qi(3));
        let v = check_allocation(&cs, &bad).unwrap();
        assert!(v.iter().any(|v| v.id == "private-below-cross"), "{v:?}");
    }

    #[test]
    fn all_zero_wi1_allocation_is_feasible() {
        let p = LdParams::new(3, 1, 2, 5);
        let cs = compile_constraints(SchemeId::WI1, &p);
        let zeros = vec![Q::zero(); cs.variables.len()];
        let a = cs.to_allocation(&zeros, optimizer_column(SchemeId::WI1));
        assert!(check_allocation(&cs, &a).unwrap().is_empty());
    }

    #[test]
    fn label_mismatch_is_an_error() {
        let p = LdParams::new(3, 1, 2, 5);
        let cs = compile_constraints(SchemeId::WI1, &p);
        let mut a = allocate(SchemeId::WI1, &p).unwrap();
        a.paddings.insert("l9".into(), qi(0));
        assert_eq!(check_allocation(&cs, &a), Err(Error::UnknownVariable("l9".into())));
        let mut a = allocate(SchemeId::WI1, &p).unwrap();
        a.lengths.remove("cf");
        assert_eq!(check_allocation(&cs, &a), Err(Error::UnknownVariable("cf".into())));
    }

    #[test]
    fn ii_is_pinned() {
        let p = LdParams::new(3, 3, 5, 4);
        let cs = compile_constraints(SchemeId::II, &p);
        assert!(cs.free_variables().is_empty());
        let o = optimize(&cs);
        assert_eq!(o.allocation.len("cm"), qi(3));
        assert_eq!(o.allocation.len("df"), qi(1));
        assert_eq!(o.sum_rate, allocate(SchemeId::II, &p).unwrap().sum_rate());
    }
}

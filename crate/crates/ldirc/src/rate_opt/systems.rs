//! Constraint systems of the five schemes.
//!
//! Variables are physical lengths: a DF slot is twice its rate and a common
//! slot is its codeword length, matching the allocation keys.

use num_traits::Zero;

use super::expr::{c, half, if_pos, min, p, Expr};
use super::{Constraint, ConstraintSet, Guard, Rel, Variable};
use crate::ld::LdParams;
use crate::rational::{qi, Q};
use crate::schemes::SchemeId;

struct Builder {
    vars: Vec<Variable>,
    cons: Vec<Constraint>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            vars: Vec::new(),
            cons: Vec::new(),
        }
    }

    fn add(&mut self, name: &'static str, padding: bool, def: Option<Expr>) -> Expr {
        self.vars.push(Variable { name, padding, def });
        Expr::Var(self.vars.len() - 1)
    }

    fn free(&mut self, name: &'static str) -> Expr {
        self.add(name, false, None)
    }

    fn free_pad(&mut self, name: &'static str) -> Expr {
        self.add(name, true, None)
    }

    fn derived(&mut self, name: &'static str, def: Expr) -> Expr {
        self.add(name, false, Some(def))
    }

    fn derived_pad(&mut self, name: &'static str, def: Expr) -> Expr {
        self.add(name, true, Some(def))
    }

    fn push(&mut self, id: &str, lhs: Expr, rel: Rel, rhs: Expr, guards: Vec<Guard>) {
        self.cons.push(Constraint {
            id: id.to_string(),
            lhs,
            rel,
            rhs,
            guards,
        });
    }

    fn le(&mut self, id: &str, lhs: Expr, rhs: Expr) {
        self.push(id, lhs, Rel::Le, rhs, vec![]);
    }

    fn le_if(&mut self, id: &str, guards: Vec<Guard>, lhs: Expr, rhs: Expr) {
        self.push(id, lhs, Rel::Le, rhs, guards);
    }

    fn finish(self, scheme: SchemeId, params: LdParams, objective: Expr) -> ConstraintSet {
        ConstraintSet {
            scheme,
            params,
            variables: self.vars,
            constraints: self.cons,
            objective,
        }
    }
}

fn pos(e: Expr) -> Guard {
    Guard::Positive(e)
}

fn zero(e: Expr) -> Guard {
    Guard::Zero(e)
}

fn k(x: u32) -> Expr {
    c(qi(x as i64))
}

/// Constraint system of `scheme` instantiated at `p`.
pub fn compile_constraints(scheme: SchemeId, prm: &LdParams) -> ConstraintSet {
    match scheme {
        SchemeId::WI1 => wi1(prm),
        SchemeId::WI2 => wi2(prm),
        SchemeId::WI3a | SchemeId::WI3b => wi3(scheme, prm),
        SchemeId::SI => si(prm),
        SchemeId::II => ii(prm),
    }
}

fn wi1(prm: &LdParams) -> ConstraintSet {
    let (nd, nc, nr, ns, q) = (k(prm.nd), k(prm.nc), k(prm.nr), k(prm.ns), k(prm.q()));
    let mut b = Builder::new();
    let cn = b.free("cn");
    let df1 = b.free("df1");
    let df2 = b.free("df2");
    let cf = b.free("cf");
    let pr = b.free("p");
    let l1 = b.free_pad("l1");
    b.derived("cn1", df1.clone());
    b.derived("cn2", cn.clone() - df1.clone());

    b.le("cn1-within-cn", df1.clone(), cn.clone());
    b.le(
        "tx-length",
        2 * cn.clone() + cf.clone() + pr.clone() + df2.clone() + l1.clone(),
        q,
    );
    let top = l1.clone() + cf.clone() + pr.clone() + 2 * cn.clone() + df2.clone();
    b.le_if("relay-sees-top", vec![pos(cn.clone() + df2.clone())], top, ns.clone());
    b.le_if(
        "relay-sees-cf",
        vec![zero(cn.clone() + df2.clone())],
        l1.clone() + cf.clone(),
        ns.clone(),
    );
    b.le(
        "relay-forwards",
        cf.clone() + df1.clone() + df2.clone(),
        p(nr.clone() - nd.clone() + l1.clone()),
    );
    b.le_if("relay-below-cross", vec![pos(cn.clone())], nc.clone() - l1.clone(), nr);
    b.le("private-below-cross", pr.clone(), nd.clone() - nc);
    let tail = p(cn.clone() + df2.clone() - p(ns - nd.clone()));
    b.le("rx-direct-length", l1 + cn.clone() + cf.clone() + pr.clone() + tail, nd);

    let obj = 2 * cn + df1 + df2 + 2 * cf + 2 * pr;
    b.finish(SchemeId::WI1, *prm, obj)
}

fn wi2(prm: &LdParams) -> ConstraintSet {
    let (nd, nc, nr, ns, q) = (k(prm.nd), k(prm.nc), k(prm.nr), k(prm.ns), k(prm.q()));
    let mut b = Builder::new();
    let cm = b.free("cm");
    let cn = b.free("cn");
    let cf = b.free("cf");
    let p1 = b.free("p1");
    let p2 = b.free("p2");
    let l1 = b.free_pad("l1");
    let l4 = b.derived_pad("l4", p(cf.clone() - cn.clone()));
    let base = nr.clone() - nd.clone() + cm.clone() + cn.clone() + cf.clone();
    let l2_def = if_pos(
        l4.clone(),
        p(base.clone()),
        if_pos(cf.clone() - l4.clone(), p(base + l1.clone() + p1.clone()), nr.clone()),
    );
    let l2 = b.derived_pad("l2", l2_def);
    let l3 = b.derived_pad("l3", if_pos(l4.clone(), p1.clone(), c(Q::zero())));
    let l5 = b.derived_pad("l5", nr.clone() - nc.clone() + cm.clone());
    let l6 = b.derived_pad("l6", min(cn.clone(), p(nc.clone() - cm.clone())));

    let top = cm.clone() + 2 * cn.clone() + cf.clone() + l1.clone() + p1.clone();
    b.le("tx-length", top.clone() + p2.clone(), q);
    b.le("relay-sees-top", top, ns);
    b.le("relay-cf-layer-fits", l2.clone() + cf.clone() + l3.clone(), nr.clone());
    b.le("relay-cn-layer-fits", l5 + l6, nr.clone());
    b.le_if(
        "relay-below-common",
        vec![pos(cf.clone())],
        nr.clone() - l2.clone(),
        nd.clone() - cm.clone(),
    );
    b.le("common-within-cross", cm.clone(), nc.clone());
    let below = nd.clone() - cm.clone() - cn.clone() - cf.clone();
    b.le_if("relay-below-signal", vec![pos(cf.clone())], nr.clone() - l2.clone(), below);
    b.le(
        "cross-signal-covered",
        nc.clone() - cm.clone() - cn.clone() - cf.clone() - l1.clone(),
        c(Q::zero()),
    );
    // Where the relay CF blocks arrive at the receiver. When the (.)^+ in l2
    // clips they arrive lower than aligned and must still end inside the
    // zero gap (CF1) and the cleared CN slot (CF2).
    let arrive = nd.clone() - nr.clone() + l2.clone();
    let gap_end = cm.clone() + cn.clone() + cf.clone() + l1.clone();
    b.le_if(
        "relay-cf1-inside-gap",
        vec![pos(l4.clone())],
        arrive.clone() + l4.clone(),
        gap_end.clone(),
    );
    let cn_end = gap_end + p1.clone() + cn.clone();
    b.le_if(
        "relay-cf2-inside-cn",
        vec![pos(cf.clone())],
        arrive + l3.clone() + cf.clone(),
        cn_end,
    );
    b.push("cf-split-fits", l1, Rel::Ge, l4, vec![]);

    let rcm = min(half(cm.clone()), p(nc - nd + cm));
    let obj = 2 * (rcm + cn + cf + p1 + p2);
    b.finish(SchemeId::WI2, *prm, obj)
}

fn wi3(scheme: SchemeId, prm: &LdParams) -> ConstraintSet {
    let (nd, nc, nr, ns, q) = (k(prm.nd), k(prm.nc), k(prm.nr), k(prm.ns), k(prm.q()));
    let va = scheme == SchemeId::WI3a;
    let z = || c(Q::zero());
    let mut b = Builder::new();
    let cm1 = b.free("cm1");
    let cm2 = b.free("cm2");
    let cn1 = if va { b.free("cn1") } else { b.derived("cn1", z()) };
    let cn2 = b.free("cn2");
    let cn3 = if va { b.derived("cn3", z()) } else { b.free("cn3") };
    let p1 = if va { b.free("p1") } else { b.derived("p1", z()) };
    let p2 = b.free("p2");
    let l1u = b.free_pad("l1u");
    let l1d = if va { b.free_pad("l1d") } else { b.derived_pad("l1d", z()) };
    let l1 = l1u.clone() + l1d.clone();
    let ncp = p(nc.clone() - cm1.clone());
    let ndp = nd.clone() - cm1.clone();
    let aligned = nr.clone() - ncp.clone() + cm2.clone();
    let (l2_def, l3_def) = if va {
        (if_pos(cn1.clone() + cn2.clone(), aligned, nr.clone()), z())
    } else {
        (
            if_pos(
                cn2.clone(),
                aligned,
                if_pos(cn3.clone(), nr.clone() - cn3.clone(), nr.clone()),
            ),
            if_pos(cn2.clone(), l1.clone(), z()),
        )
    };
    let l2 = b.derived_pad("l2", l2_def);
    let l3 = b.derived_pad("l3", l3_def);
    let nrp = nr.clone() - l2.clone();

    let cns = 2 * cn1.clone() + 2 * cn2.clone() + 2 * cn3.clone();
    let tot = cm1.clone() + cm2.clone() + cns + p1.clone() + p2.clone() + l1.clone();
    b.le("tx-length", tot.clone(), q);
    b.le_if("relay-sees-top", vec![pos(cn2.clone() + cn3.clone())], tot, ns.clone());
    let upper = cm1.clone() + cm2.clone() + 2 * cn1.clone() + p1.clone() + l1u.clone();
    b.le_if(
        "relay-sees-cn1",
        vec![zero(cn2.clone() + cn3.clone()), pos(cn1.clone())],
        upper,
        ns,
    );
    b.le(
        "relay-layer-fits",
        cn1.clone() + cn2.clone() + cn3.clone() + l2.clone() + l3,
        nr.clone(),
    );
    b.le_if(
        "relay-below-common",
        vec![pos(cm1.clone())],
        nr - l2,
        nd.clone() - cm1.clone(),
    );

    let gap = ndp.clone() - ncp.clone();
    if va {
        let direct = cm1.clone() + cm2.clone() + 2 * cn1.clone() + cn2.clone() + p1.clone() + l1.clone() + p2.clone();
        b.le("rx-direct-length", direct, nd.clone());
        let stack = cm2.clone() + cn1.clone() + cn2.clone() + p1.clone();
        b.le("rx-cross-gap", stack.clone(), gap);
        b.le("rx-relay-gap", stack, ndp.clone() - nrp.clone());
        b.push(
            "relay-aligned",
            ncp.clone() - cm2.clone(),
            Rel::Eq,
            nrp,
            vec![pos(cn1.clone() + cn2.clone())],
        );
        let rest = ndp - cm2.clone() - 2 * cn1.clone() - cn2.clone() - p1.clone() - l1;
        b.le_if("common-decodable", vec![pos(cm2.clone())], rest, ncp.clone() - cm2.clone());
        let exposed = ncp - cm2.clone() - cn1.clone() - cn2.clone();
        b.push("private-aligned", exposed.clone(), Rel::Eq, z(), vec![pos(p1.clone())]);
        let cover = l1u + if_pos(cn1.clone(), z(), l1d);
        b.le_if("cross-covered", vec![zero(p1.clone())], exposed - cover, z());
    } else {
        let direct = cm1.clone() + cm2.clone() + cn2.clone() + l1.clone() + cn3.clone() + p2.clone();
        b.le("rx-direct-length", direct, nd.clone());
        let stack = cm2.clone() + cn2.clone();
        b.le("rx-cross-gap", stack.clone(), gap.clone());
        b.le("rx-relay-gap", stack, ndp.clone() - nrp.clone());
        let rest = ndp - cm2.clone() - cn2.clone() - l1;
        b.le_if("common-decodable", vec![pos(cm2.clone())], rest, ncp.clone() - cm2.clone());
        b.push(
            "relay-aligned",
            nrp.clone(),
            Rel::Eq,
            ncp - cm2.clone(),
            vec![pos(cn2.clone())],
        );
        b.push("relay-cn3-aligned", nrp, Rel::Eq, cn3.clone(), vec![zero(cn2.clone())]);
        b.le("private-below-cross", p2.clone(), gap);
    }

    let rcm1 = min(half(cm1.clone()), p(nc - nd + cm1));
    let obj = 2 * (rcm1 + cm2 + cn1 + cn2 + cn3 + p1 + p2);
    b.finish(scheme, *prm, obj)
}

fn si(prm: &LdParams) -> ConstraintSet {
    let (nd, nc, nr, ns, q) = (k(prm.nd), k(prm.nc), k(prm.nr), k(prm.ns), k(prm.q()));
    let mut b = Builder::new();
    let cm1 = b.free("cm1");
    let cm2 = b.free("cm2");
    let cf1 = b.free("cf1");
    let cf2 = b.free("cf2");
    let df1 = b.free("df1");
    let df2 = b.free("df2");
    let cn1 = b.derived("cn1", df1.clone());
    let cn2 = b.free("cn2");
    let l1 = b.free_pad("l1");
    let ndp = p(nd.clone() - cm1.clone());
    let ncp = nc.clone() - cm1.clone();
    let l2_def = p(nr.clone() - (ncp.clone() - l1.clone() + cf2.clone() + df1.clone() + df2.clone()));
    let l2 = b.derived_pad("l2", l2_def);
    let nrp = nr.clone() - l2.clone();
    let relay = df1.clone() + df2.clone() + cf1.clone() + cf2.clone();
    let l3 = b.derived_pad("l3", nrp.clone() - relay.clone() - cn1.clone() - cn2.clone());
    let _ = l3;

    let tot =
        cm1.clone() + cm2.clone() + cf1.clone() + cf2.clone() + 2 * cn1.clone() + 2 * cn2.clone() + df2.clone() + l1.clone();
    b.le("tx-length", tot.clone(), q);
    b.le("relay-sees-top", tot, ns);
    b.le_if(
        "relay-below-common",
        vec![pos(cm1.clone())],
        nr - l2,
        nc.clone() - cm1.clone(),
    );
    let upper = cm2.clone() + cf1.clone();
    b.le("cross-common-above-relay", upper.clone(), p(ncp.clone() - nrp.clone()));
    b.le("cross-common-above-direct", upper, ncp.clone() - ndp.clone());
    b.le_if(
        "relay-above-direct",
        vec![pos(cm2.clone())],
        relay.clone(),
        p(nrp.clone() - ndp.clone()),
    );
    let rest = ncp.clone() - cm2.clone() - cf1.clone() - l1.clone();
    b.le("relay-above-cross-rest", relay, p(nrp.clone() - rest.clone()));
    b.le("direct-common-visible", cm2.clone(), p(ndp - rest.clone()));
    let left = rest - cf2.clone() - cn1.clone() - cn2.clone();
    b.push("cross-signal-fits", left.clone(), Rel::Ge, c(Q::zero()), vec![]);
    b.le("relay-cn-fits", cn1.clone() + cn2.clone(), nrp);
    b.le("cross-signal-covered", left - df2.clone(), c(Q::zero()));

    let rcm1 = min(half(cm1.clone()), p(nd - nc + cm1));
    let obj = 2 * (rcm1 + cm2 + cf1 + cf2 + cn1 + cn2) + df1 + df2;
    b.finish(SchemeId::SI, *prm, obj)
}

fn ii(prm: &LdParams) -> ConstraintSet {
    let (nd, nr, ns, q) = (k(prm.nd), k(prm.nr), k(prm.ns), k(prm.q()));
    let mut b = Builder::new();
    let cm = b.derived("cm", nd.clone());
    let df = b.derived("df", min(p(ns - nd.clone()), p(nr - nd)));
    b.le("tx-length", cm.clone() + df.clone(), q);
    b.finish(SchemeId::II, *prm, cm + df)
}

//! Rate-allocation tables, one function per scheme. Every stored value is a
//! physical length (DF slots hold twice their rate, common slots hold the
//! codeword length).

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use super::{half as h, p_ as pp, prop_regime, Column, PropRegime, RateAllocation, SchemeId};
use crate::error::{Error, Result};
use crate::ld::LdParams;
use crate::rational::{q, qi, Q};

fn col(scheme: SchemeId, table: &'static str, column: &'static str) -> Column {
    Column { scheme, table, column }
}

fn build(p: &LdParams, scheme: SchemeId, column: Column, lengths: &[(&str, Q)], paddings: &[(&str, Q)]) -> RateAllocation {
    let conv = |xs: &[(&str, Q)]| xs.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>();
    RateAllocation {
        params: *p,
        scheme,
        column,
        lengths: conv(lengths),
        paddings: conv(paddings),
    }
}

fn min(a: Q, b: Q) -> Q {
    a.min(b)
}

fn max(a: Q, b: Q) -> Q {
    a.max(b)
}

/// Allocation for `p` under `scheme`. Fails if `p` is served by another
/// scheme or if no table column matches.
pub fn allocate(scheme: SchemeId, p: &LdParams) -> Result<RateAllocation> {
    let a = allocate_regime(p)?;
    let same = a.scheme == scheme || (a.scheme.is_wi3() && scheme.is_wi3());
    if !same {
        return Err(Error::InvalidInput(format!("{p} is served by {}, not {scheme}", a.scheme)));
    }
    Ok(a)
}

pub(super) fn allocate_regime(p: &LdParams) -> Result<RateAllocation> {
    let (nd, nc, nr, ns) = p.signed();
    let (nd, nc, nr, ns) = (qi(nd), qi(nc), qi(nr), qi(ns));
    match prop_regime(p)? {
        PropRegime::Ii => Ok(ii(p, nd, nr, ns)),
        PropRegime::Si => si(p, nd, nc, nr, ns),
        PropRegime::Wi1(c) => Ok(wi1(p, c, nd, nc, nr, ns)),
        PropRegime::Wi2(r) => wi2(p, r, nd, nc, nr, ns),
        PropRegime::Wi3(_) => wi3(p, nd, nc, nr, ns),
    }
}

fn ii(p: &LdParams, nd: Q, nr: Q, ns: Q) -> RateAllocation {
    let df = min(pp(ns - nd), pp(nr - nd));
    build(
        p,
        SchemeId::II,
        col(SchemeId::II, "n_c=n_d", ""),
        &[("cm", nd), ("df", df)],
        &[],
    )
}

const WI1_COLUMNS: [&str; 4] = [
    "n_c<n_d<=n_s<=n_r",
    "n_c<=n_s<=n_d<=n_r",
    "n_c<n_d<=n_r<=n_s",
    "n_c<=n_r<=n_d<=n_s",
];

fn wi1(p: &LdParams, c: usize, nd: Q, nc: Q, nr: Q, ns: Q) -> RateAllocation {
    let z = Q::zero();
    let two = qi(2);
    let (l1, rcn, rdf1, rdf2, rcf, rp);
    match c {
        0 => {
            l1 = z;
            rdf2 = h(pp(ns - nd - nc));
            rcf = pp(pp(nc + nd - ns) - two * pp(nd + nc - nr));
            rp = nd - nc;
            rcn = h(ns - rcf - rp - two * rdf2);
            rdf1 = h(min(rcn, nr - nd - rcf - two * rdf2));
        }
        1 => {
            rcn = z;
            rdf1 = z;
            rdf2 = z;
            rcf = h(min(two * nc, nr - nd + nc));
            rp = nd - nc;
            l1 = pp(rcf - (nr - nd));
        }
        2 => {
            l1 = z;
            rcn = h(min(two * nc, max(ns + nc - nr, two * ns - two * nd)));
            rdf1 = h(pp(nr - nd - (ns - nd - nc).abs()));
            rdf2 = h(min(pp(ns - nd - nc), nr - nd));
            rcf = min(pp(nd + nc - ns), nr - nd);
            rp = nd - nc;
        }
        _ => {
            l1 = z;
            rcn = h(min(two * nc, ns + nc - nd));
            rdf1 = z;
            rdf2 = z;
            rcf = z;
            rp = nd - nc;
        }
    }
    let df1 = two * rdf1;
    build(
        p,
        SchemeId::WI1,
        col(SchemeId::WI1, "WI-1", WI1_COLUMNS[c]),
        &[
            ("cn", rcn),
            ("cn1", df1),
            ("cn2", rcn - df1),
            ("df1", df1),
            ("df2", two * rdf2),
            ("cf", rcf),
            ("p", rp),
        ],
        &[("l1", l1)],
    )
}

/// Alignment paddings of WI-2 that follow from the free lengths.
#[allow(clippy::too_many_arguments)]
pub(crate) fn wi2_derived(nr: Q, nd: Q, nc: Q, cm: Q, rcn: Q, rcf: Q, rp1: Q, l1: Q) -> [(&'static str, Q); 5] {
    let l4 = pp(rcf - rcn);
    let (cf1, cf2) = (l4, rcf - l4);
    let l2 = if cf1 > Q::zero() {
        pp(nr - nd + cm + rcn + rcf)
    } else if cf2 > Q::zero() {
        pp(nr - nd + cm + rcn + rcf + l1 + rp1)
    } else {
        nr
    };
    let l3 = if cf1 > Q::zero() { rp1 } else { Q::zero() };
    let l5 = nr - nc + cm;
    let l6 = min(rcn, pp(nc - cm));
    [("l2", l2), ("l3", l3), ("l4", l4), ("l5", l5), ("l6", l6)]
}

fn wi2(p: &LdParams, reg: usize, nd: Q, nc: Q, nr: Q, ns: Q) -> Result<RateAllocation> {
    let z = Q::zero();
    let hc = h(nc);
    let c32 = q(3, 2) * nc;
    let (mut rcm, mut rcn, mut rcf, mut rp1) = (z, z, z, z);
    let rp2;
    let table = ["n_c<=n_s<=n_r<=n_d", "n_c<=n_r<=n_s, 2n_s<=2n_d-n_c"][reg];
    let column;
    if nr + ns <= nd {
        column = "n_r+n_s<=n_d";
        rp2 = nd - nc;
    } else if nr + ns <= nd + hc {
        column = "n_d<n_r+n_s<=n_d+n_c/2";
        if reg == 0 {
            let m = max(nc, nd - nr);
            rcn = ns - m;
            rcf = nr - nd + ns;
            rp1 = m - nc;
        } else {
            let t = max(z, qi(2) * ns - qi(2) * nc + nr - nd);
            rcn = ns - nc - t;
            rcf = nr - nd + ns;
            rp1 = t;
        }
        rp2 = nd - ns;
    } else if reg == 0 && nd < min(nr + ns - hc, c32) {
        column = "n_d<min(n_r+n_s-n_c/2, 3n_c/2)";
        rcm = hc;
        rp1 = ns - nc;
        rp2 = nd - ns;
    } else if reg == 1 || (c32 <= nd && nd < nr + ns - hc) {
        column = if reg == 0 {
            "3n_c/2<=n_d<n_r+n_s-n_c/2"
        } else {
            "n_d+n_c/2<n_r+n_s"
        };
        let t = pp(ns - c32);
        rcn = ns - nc - t;
        rcf = hc;
        rp1 = t;
        rp2 = nd - ns;
    } else {
        return Err(Error::NoMatchingColumn(format!("{p}: WI-2 table [{table}]")));
    }
    let cm = qi(2) * rcm;
    let l1 = nd - cm - qi(2) * rcn - rcf - rp1 - rp2;
    let mut pads = vec![("l1", l1)];
    pads.extend(wi2_derived(nr, nd, nc, cm, rcn, rcf, rp1, l1));
    Ok(build(
        p,
        SchemeId::WI2,
        col(SchemeId::WI2, table, column),
        &[("cm", cm), ("cn", rcn), ("cf", rcf), ("p1", rp1), ("p2", rp2)],
        &pads,
    ))
}

const WI3_T1: &str = "n_r<=n_c<n_d<=n_s, n_c<n_r+n_d-n_c";
const WI3_T2: &str = "n_r<=n_c<n_d<=n_s, n_r+n_d-n_c<=n_c";
const WI3_T3: &str = "n_r<=n_c<=n_s<=n_d, n_c<=n_r+n_d-n_c or n_s<=n_d-n_c";
const WI3_T4: &str = "n_r<=n_c<=n_s<=n_d<min(2n_c-n_r, n_s+n_c) or n_c<=n_r<=n_s<=n_d<=n_s+n_c/2";

/// Which WI-3 table headers contain `p` (in listed order).
pub fn wi3_tables_matching(p: &LdParams) -> Vec<&'static str> {
    let (nd, nc, nr, ns) = p.signed();
    let mut out = Vec::new();
    if nr <= nc && nc < nd && nd <= ns && nr + nd - nc > nc {
        out.push(WI3_T1);
    }
    if nr <= nc && nc < nd && nd <= ns && nr + nd - nc <= nc {
        out.push(WI3_T2);
    }
    if nr <= nc && nc <= ns && ns <= nd && (nc <= nr + nd - nc || ns <= nd - nc) {
        out.push(WI3_T3);
    }
    let p1 = nr <= nc && nc <= ns && ns <= nd && nd < (2 * nc - nr).min(ns + nc);
    let qh = nc <= nr && nr <= ns && ns <= nd && 2 * nd <= 2 * ns + nc;
    if p1 || qh {
        out.push(WI3_T4);
    }
    out
}

fn wi3(p: &LdParams, nd: Q, nc: Q, nr: Q, ns: Q) -> Result<RateAllocation> {
    let z = Q::zero();
    let two = qi(2);
    let three = qi(3);
    let hc = h(nc);
    let (mut lcm1, mut rcm2, mut rcn1, mut rcn2, mut rcn3) = (z, z, z, z, z);
    let (mut rp1, mut rp2, mut l1u, mut l1d) = (z, z, z, z);
    let tables = wi3_tables_matching(p);
    let Some(&table) = tables.first() else {
        return Err(Error::NoMatchingColumn(format!("{p}: no WI-3 table header applies")));
    };
    let column;
    if table == WI3_T1 {
        if ns + nc <= nd + two * nr {
            if three * nc <= ns + nd {
                column = "n_s+n_c<=n_d+2n_r, 3n_c<=n_s+n_d";
                rcm2 = h(nc + nd - ns);
                rcn1 = h(min(pp(three * nd - three * nc - ns), two * rcm2));
                rcn2 = min(pp(nd - nc - rcm2 - rcn1), ns - nd);
                rp1 = pp(nd - two * nc);
                rcn3 = ns - nd - rcn2;
            } else {
                column = "n_s+n_c<=n_d+2n_r, n_s+n_d<3n_c";
                lcm1 = nc + nd - ns;
                rcn2 = min(nd - nc, ns - nd);
                rp1 = pp(two * nd - nc - ns);
                rcn3 = pp(nc + ns - two * nd);
            }
            rp2 = min(nc - rcm2 - rcn3, nd - nc - rp1 - rcn1);
        } else if nd <= two * nc {
            column = "n_d+2n_r<n_s+n_c, n_d<=2n_c";
            rcm2 = nc - nr;
            rcn1 = pp(nr - two * nc + two * nd - ns);
            rcn2 = min(ns - nd, nd - two * nc + nr);
            rcn3 = pp(nc - nd + nr);
            rp2 = min(nd - nc, nr);
        } else {
            column = "n_d+2n_r<n_s+n_c, 2n_c<n_d";
            rcm2 = nc - nr;
            rcn1 = min(nr, nc - nr);
            rcn2 = pp(two * nr - nc);
            rp1 = nd - two * nc;
            rp2 = nr;
        }
        l1u = rcm2 - rcn1;
    } else if table == WI3_T2 {
        if ns < min(nr + nd, three * nc - nd) {
            column = "n_s<min(n_r+n_d, 3n_c-n_d)";
            lcm1 = nc + nd - ns;
            rcn2 = min(nd - nc, ns - nd);
            rp1 = pp(two * nd - nc - ns);
            rcn3 = pp(nc + ns - two * nd);
            rp2 = min(nc - rcm2 - rcn3, nd - nc - rp1 - rcn1);
        } else if three * nc <= min(ns + nd, two * nd + nr) {
            column = "3n_c<=min(n_s+n_d, 2n_d+n_r)";
            rcm2 = nd - nc;
            rcn3 = pp(three * nc - two * nd);
            rp2 = (two * nc - nd) - rcn3;
        } else if two * nd <= min(two * ns - two * nr, three * nc - nr) {
            column = "2n_d<=min(2n_s-2n_r, 3n_c-n_r)";
            lcm1 = nc - nr;
            rcn3 = pp(nc + nr - nd);
            rcn2 = nr - rcn3;
            rp1 = pp(nd - nr - nc);
            rp2 = (nd - nc) - rp1;
        } else {
            return Err(Error::NoMatchingColumn(format!("{p}: WI-3 table [{table}]")));
        }
        l1u = rcm2 - rcn1;
    } else if table == WI3_T3 {
        if ns <= nd - nc {
            column = "n_s<=n_d-n_c";
            rp2 = nd - nc;
            l1d = nc;
        } else {
            let inner = nc - nr <= nd - nc && nd - nc < ns;
            let shared = two * (nd - ns) <= nc && nc <= two * nr;
            if !inner {
                return Err(Error::NoMatchingColumn(format!("{p}: WI-3 table [{table}]")));
            }
            if shared && two * nd <= three * nc {
                column = "2(n_d-n_s)<=n_c<=2n_r, 2n_d<=3n_c";
                lcm1 = nc;
                rp1 = nd - nc;
            } else if shared {
                column = "2(n_d-n_s)<=n_c<=2n_r, 3n_c<2n_d";
                rcm2 = hc;
                rp1 = pp(nd - two * nc);
                rcn1 = nd - q(3, 2) * nc - rp1;
                rp2 = hc;
            } else if two * ns <= min(two * nd - nc, two * (nr + nd - nc)) {
                column = "2n_s<=min(2n_d-n_c, 2(n_r+n_d-n_c))";
                rcm2 = nd - ns;
                rcn1 = min(ns - nc, nc + ns - nd);
                rp1 = pp(nd - two * nc);
                rp2 = nc + ns - nd;
            } else if max(nr + nd - ns, two * nr) <= nc {
                column = "max(n_r+n_d-n_s, 2n_r)<=n_c";
                rcm2 = nc - nr;
                rcn1 = nr - pp(two * nc - nd);
                rp1 = pp(nd - two * nc);
                rp2 = nr;
            } else {
                return Err(Error::NoMatchingColumn(format!("{p}: WI-3 table [{table}]")));
            }
            if lcm1 == nc {
                // The common slot fills the whole interference window, no zero gap is needed.
                l1u = z;
                l1d = z;
            } else {
                l1u = pp(two * nc - nd);
                l1d = rcm2 - rcn1 - l1u;
            }
        }
    } else {
        let p1 = nr <= nc && nc <= ns && ns <= nd && nd < min(two * nc - nr, ns + nc);
        if p1 && two * nd <= three * nc {
            column = "n_r<=n_c, 2n_d<=3n_c";
            lcm1 = nc;
            rp1 = nd - nc;
        } else if p1 {
            column = "n_r<=n_c, 3n_c<2n_d";
            rcm2 = two * nc - nd;
            rp2 = nd - nc;
            l1u = nd - nc;
        } else if two * nd <= three * nc {
            column = "n_c<=n_r, 2n_d<=3n_c";
            lcm1 = nc;
            rp1 = nd - nc;
        } else {
            column = "n_c<=n_r, 3n_c<2n_d";
            rcm2 = hc;
            rcn1 = min(nd - q(3, 2) * nc, hc);
            rp1 = pp(nd - two * nc);
            rp2 = hc;
            l1u = pp(two * nc - nd);
            l1d = rcm2 - rcn1 - l1u;
        }
    }
    let scheme = if rcn3 > z { SchemeId::WI3b } else { SchemeId::WI3a };
    let ncp = pp(nc - lcm1);
    let (l2, l3) = wi3_derived(scheme, nr, ncp, rcm2, rcn1, rcn2, rcn3, l1u + l1d);
    Ok(build(
        p,
        scheme,
        col(scheme, table, column),
        &[
            ("cm1", lcm1),
            ("cm2", rcm2),
            ("cn1", rcn1),
            ("cn2", rcn2),
            ("cn3", rcn3),
            ("p1", rp1),
            ("p2", rp2),
        ],
        &[("l1u", l1u), ("l1d", l1d), ("l2", l2), ("l3", l3)],
    ))
}

/// Relay alignment paddings of WI-3: top zero block ℓ2 and gap ℓ3.
#[allow(clippy::too_many_arguments)]
pub(crate) fn wi3_derived(scheme: SchemeId, nr: Q, ncp: Q, rcm2: Q, rcn1: Q, rcn2: Q, rcn3: Q, l1: Q) -> (Q, Q) {
    let z = Q::zero();
    if scheme == SchemeId::WI3a {
        let l2 = if rcn1 > z || rcn2 > z { nr - ncp + rcm2 } else { nr };
        (l2, z)
    } else if rcn2 > z {
        (nr - ncp + rcm2, l1)
    } else if rcn3 > z {
        (nr - rcn3, z)
    } else {
        (nr, z)
    }
}

const SI_T1: &str = "n_d<n_c, n_d<=n_r";
const SI_T2: &str = "n_d<n_c, n_r<n_d";

fn si(p: &LdParams, nd: Q, nc: Q, nr: Q, ns: Q) -> Result<RateAllocation> {
    let z = Q::zero();
    let two = qi(2);
    let three = qi(3);
    let (mut lcm1, mut rcm2, mut rcf1, mut rcf2) = (z, z, z, z);
    let (mut rdf1, mut rdf2, mut rcn2, mut l1) = (z, z, z, z);
    let table;
    let column;
    if nd <= nr {
        table = SI_T1;
        if nc <= nr {
            if max(two * nc, nr) <= ns {
                column = "n_c<=n_r, max(2n_c, n_r)<=n_s";
                rdf1 = h(min(nr - nc, nc));
                rdf2 = h(pp(nr - two * nc));
                rcn2 = pp(two * nc - nr);
            } else if max(nr, ns) <= two * nc {
                column = "n_c<=n_r, max(n_r, n_s)<=2n_c";
                rcf2 = min(h(nr + nc - ns), two * nc - ns);
                rdf1 = h(pp(nr + ns - three * nc));
                l1 = h(pp(three * nc - nr - ns));
                rcn2 = (ns - nc) - two * rdf1;
            } else if max(ns, two * nc) <= nr {
                column = "n_c<=n_r, max(n_s, 2n_c)<=n_r";
                rcf2 = pp(two * nc - ns);
                rdf1 = min(h(ns - nc), h(nc));
                rdf2 = h(pp(ns - two * nc));
            } else {
                return Err(Error::NoMatchingColumn(format!("{p}: SI table [{table}]")));
            }
        } else if two * nr <= ns {
            column = "n_r<n_c, 2n_r<=n_s";
            rcf1 = pp(nr - ns + nc);
            rcn2 = min(nr, ns - nc);
            l1 = nc - nr;
        } else {
            column = "n_r<n_c, n_s<2n_r";
            rcf1 = nc - nr;
            rcf2 = nr - h(ns);
            rcn2 = ns - nc;
            l1 = nc - h(ns);
        }
    } else {
        table = SI_T2;
        if two * nd <= min(ns, nr + nc) {
            column = "2n_d<=min(n_s, n_r+n_c)";
            rcn2 = min(nr, ns - nc);
            rcm2 = nd - rcn2;
            l1 = nc - nd;
        } else if ns <= min(nr + nc, two * nd) {
            column = "n_s<=min(n_r+n_c, 2n_d)";
            lcm1 = two * nc - ns;
            rcn2 = ns - nc;
        } else if nr + nc <= min(ns, two * nd) {
            column = "n_r+n_c<=min(n_s, 2n_d)";
            lcm1 = nc - nr;
            rcn2 = nr;
        } else {
            return Err(Error::NoMatchingColumn(format!("{p}: SI table [{table}]")));
        }
    }
    let (df1, df2) = (two * rdf1, two * rdf2);
    let ncp = nc - lcm1;
    let l2 = pp(nr - (ncp - l1 + rcf2 + df1 + df2));
    let nrp = nr - l2;
    let l3 = nrp - df1 - df2 - rcf1 - rcf2 - df1 - rcn2;
    Ok(build(
        p,
        SchemeId::SI,
        col(SchemeId::SI, table, column),
        &[
            ("cm1", lcm1),
            ("cm2", rcm2),
            ("cf1", rcf1),
            ("cf2", rcf2),
            ("df1", df1),
            ("df2", df2),
            ("cn1", df1),
            ("cn2", rcn2),
        ],
        &[("l1", l1), ("l2", l2), ("l3", l3)],
    ))
}

/// Information rate of a common slot of length `len`; `gap` is the level
/// offset between the two users' copies at the receiver (own minus other).
pub(crate) fn common_rate(len: Q, gap: Q) -> Q {
    min(h(len), pp(len - gap))
}

pub(super) fn info_rates(a: &RateAllocation) -> BTreeMap<String, Q> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: Q| {
        if !v.is_zero() {
            m.insert(k.to_string(), v);
        }
    };
    let (nd, nc) = (qi(a.params.nd as i64), qi(a.params.nc as i64));
    match a.scheme {
        SchemeId::II => {
            put("cm", a.len("cm"));
            put("df", a.len("df"));
        }
        SchemeId::WI1 => {
            put("cn1", a.len("cn1"));
            put("cn2", a.len("cn2"));
            put("df1", h(a.len("df1")));
            put("df2", h(a.len("df2")));
            put("cf", a.len("cf"));
            put("p", a.len("p"));
        }
        SchemeId::WI2 => {
            put("cm", common_rate(a.len("cm"), nd - nc));
            for k in ["cn", "cf", "p1", "p2"] {
                put(k, a.len(k));
            }
        }
        SchemeId::WI3a | SchemeId::WI3b => {
            put("cm1", common_rate(a.len("cm1"), nd - nc));
            for k in ["cm2", "cn1", "cn2", "cn3", "p1", "p2"] {
                put(k, a.len(k));
            }
        }
        SchemeId::SI => {
            put("cm1", common_rate(a.len("cm1"), nc - nd));
            for k in ["cm2", "cf1", "cf2", "cn1", "cn2"] {
                put(k, a.len(k));
            }
            put("df1", h(a.len("df1")));
            put("df2", h(a.len("df2")));
        }
    }
    m
}

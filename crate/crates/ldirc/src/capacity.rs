//! Sum-capacity of the LD-IRC and its upper bounds, in integer arithmetic.

use std::fmt;

use serde::Serialize;

use crate::ld::LdParams;

/// One evaluated bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundEntry<L, V> {
    pub label: L,
    pub value: V,
    pub applicable: bool,
}

/// Labeled bound evaluations plus the binding (minimal applicable) label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundSet<L, V> {
    pub entries: Vec<BoundEntry<L, V>>,
    pub binding: L,
}

impl<L: Copy + PartialEq, V: Copy + Ord> BoundSet<L, V> {
    /// Builds the set; ties on the minimum go to the earliest entry.
    pub fn from_entries(entries: Vec<BoundEntry<L, V>>) -> Self {
        let binding = entries
            .iter()
            .filter(|e| e.applicable)
            .fold(None::<&BoundEntry<L, V>>, |best, e| match best {
                Some(b) if b.value <= e.value => Some(b),
                _ => Some(e),
            })
            .expect("at least one bound is always applicable")
            .label;
        BoundSet { entries, binding }
    }

    /// Whether `label` is applicable and attains the minimum (ties allowed).
    pub fn is_binding(&self, label: L) -> bool {
        let m = self.min();
        self.entries.iter().any(|e| e.label == label && e.applicable && e.value == m)
    }

    pub fn min(&self) -> V {
        self.get(self.binding).expect("binding label present")
    }

    pub fn get(&self, label: L) -> Option<V> {
        self.entries.iter().find(|e| e.label == label).map(|e| e.value)
    }

    pub fn applicable(&self) -> impl Iterator<Item = &BoundEntry<L, V>> {
        self.entries.iter().filter(|e| e.applicable)
    }
}

/// Identifiers of the LD upper bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LdBound {
    /// max{n_d, min{n_r, n_s}}, valid only when n_c = n_d.
    EqualGain,
    /// max{n_d,n_c,n_r} + max{n_d,n_c}.
    RelayCross,
    /// n_r + 2max{n_d,n_c} - n_c.
    RelayGenie,
    /// max{n_d,n_c} + max{n_d,n_s}.
    SourceGenie,
    /// 2max{n_c, n_r, n_d - max{n_c,n_s}} + 2(n_s - n_c)^+.
    SourceIc,
    /// 2max{n_c, n_r + (n_d - n_c)^+}.
    RelayIc,
    /// 2max{n_d, n_r}.
    ReceiverCut,
    /// max{n_d,n_r,n_c} + max{n_d,n_c} - n_c + (n_s - max{n_d,n_c})^+.
    SourceExcess,
}

impl LdBound {
    pub const ALL: [LdBound; 8] = [
        LdBound::EqualGain,
        LdBound::RelayCross,
        LdBound::RelayGenie,
        LdBound::SourceGenie,
        LdBound::SourceIc,
        LdBound::RelayIc,
        LdBound::ReceiverCut,
        LdBound::SourceExcess,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LdBound::EqualGain => "equal-gain",
            LdBound::RelayCross => "relay-cross",
            LdBound::RelayGenie => "relay-genie",
            LdBound::SourceGenie => "source-genie",
            LdBound::SourceIc => "source-ic",
            LdBound::RelayIc => "relay-ic",
            LdBound::ReceiverCut => "receiver-cut",
            LdBound::SourceExcess => "source-excess",
        }
    }
}

impl fmt::Display for LdBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

fn max3(a: i64, b: i64, c: i64) -> i64 {
    a.max(b).max(c)
}

/// Sum-capacity over all parameter tuples.
///
/// Three closed forms cover the parameter space: the equal-gain value when
/// n_c = n_d, the weaker-source formula when n_s <= n_c, and the
/// stronger-source formula otherwise. The equal-gain case is checked first:
/// with n_c = n_d both receivers see the same output, so the sum rate can
/// never exceed what one receiver decodes.
pub fn ld_sum_capacity(p: &LdParams) -> u32 {
    let (nd, nc, nr, ns) = p.signed();
    let v = if nc == nd {
        nd.max(nr.min(ns))
    } else if ns <= nc {
        weaker_source_terms(p).into_iter().min().unwrap()
    } else {
        stronger_source_terms(p).into_iter().min().unwrap()
    };
    v as u32
}

/// The six terms of the weaker-source (n_s <= n_c) capacity formula.
pub fn weaker_source_terms(p: &LdParams) -> [i64; 6] {
    let (nd, nc, nr, ns) = p.signed();
    [
        2 * nd.max(nr),
        2 * nd.max(ns),
        max3(nd, nc, nr) + nd.max(nc) - nc,
        2 * nd.max(nc) - nc + ns,
        2 * max3(nc, nr, nd - nc),
        2 * nc.max(nd + ns - nc),
    ]
}

/// The six terms of the stronger-source (n_c < n_s) capacity formula.
pub fn stronger_source_terms(p: &LdParams) -> [i64; 6] {
    let (nd, nc, nr, ns) = p.signed();
    [
        2 * nd.max(nr),
        max3(nd, nc, nr) + nd.max(nc) - pos(nc - pos(ns - nd.max(nc))),
        nr + 2 * nd.max(nc) - nc,
        2 * max3(ns, nr + ns - nc, nd - nc),
        nd.max(nc) + nd.max(ns),
        2 * nc.max(nr + pos(nd - nc)),
    ]
}

/// Evaluates every LD upper bound.
pub fn ld_upper_bounds(p: &LdParams) -> BoundSet<LdBound, i64> {
    let (nd, nc, nr, ns) = p.signed();
    let entry = |label, value, applicable| BoundEntry {
        label,
        value,
        applicable,
    };
    BoundSet::from_entries(vec![
        entry(LdBound::EqualGain, nd.max(nr.min(ns)), nc == nd),
        entry(LdBound::RelayCross, max3(nd, nc, nr) + nd.max(nc), true),
        entry(LdBound::RelayGenie, nr + 2 * nd.max(nc) - nc, true),
        entry(LdBound::SourceGenie, nd.max(nc) + nd.max(ns), true),
        entry(LdBound::SourceIc, 2 * max3(nc, nr, nd - nc.max(ns)) + 2 * pos(ns - nc), true),
        entry(LdBound::RelayIc, 2 * nc.max(nr + pos(nd - nc)), true),
        entry(LdBound::ReceiverCut, 2 * nd.max(nr), true),
        entry(
            LdBound::SourceExcess,
            max3(nd, nr, nc) + nd.max(nc) - nc + pos(ns - nd.max(nc)),
            true,
        ),
    ])
}

/// Sum-capacity of the symmetric LD interference channel without relay.
pub fn ld_ic_sum_capacity(nd: u32, nc: u32) -> u32 {
    let (n, m) = (nd as i64, nc as i64);
    let v = if m <= n {
        (2 * (n - m).max(m)).min(2 * n - m)
    } else {
        m.min(2 * n)
    };
    v as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(nd: u32, nc: u32, nr: u32, ns: u32) -> LdParams {
        LdParams::new(nd, nc, nr, ns)
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(ld_sum_capacity(&p(3, 3, 5, 4)), 4);
        assert_eq!(ld_sum_capacity(&p(4, 2, 3, 5)), 7);
        assert_eq!(stronger_source_terms(&p(4, 2, 3, 5)), [8, 7, 9, 12, 9, 10]);
        assert_eq!(ld_sum_capacity(&p(2, 1, 0, 3)), 2);
        assert_eq!(stronger_source_terms(&p(2, 1, 0, 3)), [4, 4, 3, 6, 5, 2]);
    }

    #[test]
    fn bound_examples() {
        let b = ld_upper_bounds(&p(4, 2, 3, 5));
        assert_eq!(b.get(LdBound::RelayGenie), Some(9));
        assert_eq!(b.get(LdBound::SourceExcess), Some(7));
        assert_eq!(b.binding, LdBound::SourceExcess);
        assert_eq!(b.min(), 7);

        let b = ld_upper_bounds(&p(3, 3, 5, 4));
        assert!(b.entries[0].applicable);
        assert_eq!(b.get(LdBound::EqualGain), Some(4));
        assert_eq!(b.binding, LdBound::EqualGain);

        let b = ld_upper_bounds(&p(4, 2, 3, 5));
        assert!(!b.entries[0].applicable);
    }

    #[test]
    fn relay_off_matches_interference_channel() {
        assert_eq!(ld_sum_capacity(&p(2, 1, 0, 3)), ld_ic_sum_capacity(2, 1));
        assert_eq!(ld_ic_sum_capacity(2, 1), 2);
    }

    #[test]
    fn discontinuity_at_equal_gains() {
        let at = ld_sum_capacity(&p(4, 4, 6, 6));
        let below = ld_sum_capacity(&p(4, 3, 6, 6));
        assert_eq!(at, 6);
        assert_eq!(below, 9);
        assert!(below - at > 1);
    }
}

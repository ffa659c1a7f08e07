//! Regime classification, rate-allocation tables, transmit layouts and the
//! bit-level simulator for the five transmission schemes.

mod layout;
mod sim;
mod tables;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ld::LdParams;
use crate::rational::{pos, qi, Q};

pub use layout::{build_layouts, ClassInfo, ClassKind, Content, Layer, Layouts, Segment};
pub use sim::{
    achieved_rate, expected_delivered, find_common_code, simulate, simulate_with, BlockRecord, LedgerEntry, Messages, SimOutcome,
    TransmissionTrace, ViolatedStep,
};
pub use tables::{allocate, wi3_tables_matching};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SchemeId {
    WI1,
    WI2,
    WI3a,
    WI3b,
    SI,
    II,
}

impl SchemeId {
    pub const ALL: [SchemeId; 6] = [
        SchemeId::WI1,
        SchemeId::WI2,
        SchemeId::WI3a,
        SchemeId::WI3b,
        SchemeId::SI,
        SchemeId::II,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::WI1 => "WI1",
            SchemeId::WI2 => "WI2",
            SchemeId::WI3a => "WI3a",
            SchemeId::WI3b => "WI3b",
            SchemeId::SI => "SI",
            SchemeId::II => "II",
        }
    }

    /// WI3a and WI3b share one transmit structure.
    pub fn is_wi3(self) -> bool {
        matches!(self, SchemeId::WI3a | SchemeId::WI3b)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| *c != '-' && *c != '_')
            .collect::<String>()
            .to_ascii_uppercase();
        Ok(match norm.as_str() {
            "WI1" => SchemeId::WI1,
            "WI2" => SchemeId::WI2,
            "WI3A" => SchemeId::WI3a,
            "WI3B" => SchemeId::WI3b,
            "SI" => SchemeId::SI,
            "II" => SchemeId::II,
            _ => return Err(Error::InvalidInput(format!("unknown scheme {s:?}"))),
        })
    }
}

/// Which rate-allocation table column serves a tuple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Column {
    pub scheme: SchemeId,
    /// Regime header of the table (shared by its columns).
    pub table: &'static str,
    /// Condition of the column within the table.
    pub column: &'static str,
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.column.is_empty() {
            write!(f, "{} [{}]", self.scheme, self.table)
        } else {
            write!(f, "{} [{}; {}]", self.scheme, self.table, self.column)
        }
    }
}

/// Integer-or-half-integer lengths of one scheme instance.
///
/// `lengths` holds physical vector lengths per signal class (a DF slot is
/// twice its information rate, a common slot is its codeword length).
/// `paddings` holds the zero-block lengths. The keys are the variables of
/// the scheme's constraint system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RateAllocation {
    pub params: LdParams,
    pub scheme: SchemeId,
    pub column: Column,
    #[serde(serialize_with = "ser_map")]
    pub lengths: BTreeMap<String, Q>,
    #[serde(serialize_with = "ser_map")]
    pub paddings: BTreeMap<String, Q>,
}

fn ser_map<S: serde::Serializer>(m: &BTreeMap<String, Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &v.to_string())?;
    }
    map.end()
}

impl RateAllocation {
    pub fn len(&self, class: &str) -> Q {
        self.lengths.get(class).copied().unwrap_or_else(Q::zero)
    }

    pub fn pad(&self, name: &str) -> Q {
        self.paddings.get(name).copied().unwrap_or_else(Q::zero)
    }

    /// Value of a constraint-system variable (length or padding).
    pub fn var(&self, name: &str) -> Option<Q> {
        self.lengths.get(name).or_else(|| self.paddings.get(name)).copied()
    }

    /// Smallest factor that makes every stored length and information rate integral.
    pub fn integral_scale(&self) -> u32 {
        let mut all: Vec<Q> = self.lengths.values().chain(self.paddings.values()).copied().collect();
        all.extend(self.info_rates().values().copied());
        crate::rational::lcm_denominators(&all) as u32
    }

    /// Information bits per channel use carried by each class of one user.
    pub fn info_rates(&self) -> BTreeMap<String, Q> {
        tables::info_rates(self)
    }

    /// Bits per channel use for each user (index 0 = user 1).
    pub fn user_rates(&self) -> [Q; 2] {
        let r: Q = self.info_rates().values().copied().sum();
        if self.scheme == SchemeId::II {
            [r, Q::zero()]
        } else {
            [r, r]
        }
    }

    pub fn sum_rate(&self) -> Q {
        let [a, b] = self.user_rates();
        a + b
    }
}

fn wi1_regime(p: &LdParams) -> Option<usize> {
    let (nd, nc, nr, ns) = (p.nd, p.nc, p.nr, p.ns);
    if nc < nd && nd <= ns && ns <= nr {
        Some(0)
    } else if nc <= ns && ns <= nd && nd <= nr {
        Some(1)
    } else if nc < nd && nd <= nr && nr <= ns {
        Some(2)
    } else if nc <= nr && nr <= nd && nd <= ns {
        Some(3)
    } else {
        None
    }
}

fn wi2_regime(p: &LdParams) -> Option<usize> {
    let (nd, nc, nr, ns) = (p.nd, p.nc, p.nr, p.ns);
    if nc <= ns && ns <= nr && nr <= nd {
        Some(0)
    } else if nc <= nr && nr <= ns && 2 * ns + nc <= 2 * nd {
        Some(1)
    } else {
        None
    }
}

fn wi3_regime(p: &LdParams) -> Option<usize> {
    let (nd, nc, nr, ns) = (p.nd, p.nc, p.nr, p.ns);
    if nr <= nc && nc < nd && nd <= ns {
        Some(0)
    } else if nr <= nc && nc <= ns && ns <= nd {
        Some(1)
    } else if nc <= nr && nr <= ns && ns <= nd && 2 * nd < 2 * ns + nc {
        Some(2)
    } else {
        None
    }
}

/// Closed-form regime of a tuple with n_c < n_s (scheme and formula index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PropRegime {
    Wi1(usize),
    Wi2(usize),
    Wi3(usize),
    Si,
    Ii,
}

pub fn prop_regime(p: &LdParams) -> Result<PropRegime> {
    if p.ns <= p.nc {
        return Err(Error::OutOfScope(format!("{p}: schemes cover n_c < n_s only")));
    }
    if p.nc == p.nd {
        return Ok(PropRegime::Ii);
    }
    if p.nd < p.nc {
        return Ok(PropRegime::Si);
    }
    if let Some(i) = wi1_regime(p) {
        return Ok(PropRegime::Wi1(i));
    }
    if let Some(i) = wi2_regime(p) {
        return Ok(PropRegime::Wi2(i));
    }
    if let Some(i) = wi3_regime(p) {
        return Ok(PropRegime::Wi3(i));
    }
    Err(Error::NoMatchingColumn(format!("{p}: no weak-interference regime applies")))
}

/// Scheme and table column serving `p` (requires n_c < n_s).
pub fn classify_regime(p: &LdParams) -> Result<(SchemeId, Column)> {
    let a = allocate_for(p)?;
    Ok((a.scheme, a.column))
}

/// Allocation of the scheme selected by [`classify_regime`].
pub fn allocate_for(p: &LdParams) -> Result<RateAllocation> {
    tables::allocate_regime(p)
}

/// Closed-form sum-rate of the scheme regime covering `p`.
pub fn scheme_sum_rate(scheme: SchemeId, p: &LdParams) -> Result<u32> {
    let (chosen, _) = classify_regime(p)?;
    if chosen != scheme && !(chosen.is_wi3() && scheme.is_wi3()) {
        return Err(Error::InvalidInput(format!("{p} is served by {chosen}, not {scheme}")));
    }
    let (nd, nc, nr, ns) = p.signed();
    let v = match prop_regime(p)? {
        PropRegime::Ii => nd.max(nr.min(ns)),
        PropRegime::Si => (2 * nd.max(nr)).min(nr.max(nc) + ns - nc).min(ns + nc).min(nc + nr),
        PropRegime::Wi1(i) => [
            (ns + nd).min(nr + ns - nc),
            (2 * nd).min(nr + nd - nc),
            (nr + nd).min(nr + ns - nc),
            (2 * nd).min(ns + nd - nc),
        ][i],
        PropRegime::Wi2(_) => (2 * nd - nc).min(2 * (nr + ns - nc).max(nd - nc)),
        PropRegime::Wi3(i) => [
            (ns + nd - nc).min(2 * nd + nr - nc).min(2 * nc.max(nr + nd - nc)),
            (2 * nd - nc).min(2 * ns.max(nd - nc)).min(2 * nc.max(nr + nd - nc)),
            (2 * nd - nc).min(2 * (nr + ns - nc).max(nd - nc)),
        ][i],
    };
    Ok(v as u32)
}

pub(crate) fn half(x: Q) -> Q {
    x / qi(2)
}

pub(crate) fn p_(x: Q) -> Q {
    pos(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(nd: u32, nc: u32, nr: u32, ns: u32) -> LdParams {
        LdParams::new(nd, nc, nr, ns)
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_regime(&p(3, 3, 5, 4)).unwrap().0, SchemeId::II);
        assert_eq!(classify_regime(&p(1, 2, 5, 4)).unwrap().0, SchemeId::SI);
        let (s, c) = classify_regime(&p(3, 1, 2, 5)).unwrap();
        assert_eq!(s, SchemeId::WI1);
        assert_eq!(c.column, "n_c<=n_r<=n_d<=n_s");
        assert!(matches!(classify_regime(&p(3, 3, 5, 3)), Err(Error::OutOfScope(_))));
    }

    #[test]
    fn sum_rate_examples() {
        assert_eq!(scheme_sum_rate(SchemeId::WI1, &p(2, 1, 4, 3)).unwrap(), 5);
        assert_eq!(scheme_sum_rate(SchemeId::SI, &p(1, 2, 5, 4)).unwrap(), 6);
        assert_eq!(scheme_sum_rate(SchemeId::II, &p(3, 3, 5, 4)).unwrap(), 4);
        assert!(scheme_sum_rate(SchemeId::SI, &p(3, 3, 5, 4)).is_err());
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in SchemeId::ALL {
            assert_eq!(s.name().parse::<SchemeId>().unwrap(), s);
        }
        assert_eq!("wi-1".parse::<SchemeId>().unwrap(), SchemeId::WI1);
        assert!("XX".parse::<SchemeId>().is_err());
    }
}

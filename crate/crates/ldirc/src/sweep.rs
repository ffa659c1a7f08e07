//! Grid sweeps: run selected consistency checks over every tuple of a
//! parameter box and collect failures.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{ld_sum_capacity, ld_upper_bounds};
use crate::error::{Error, Result};
use crate::ld::LdParams;
use crate::rate_opt::{check_allocation, compile_constraints, optimize_regime};
use crate::rational::Q;
use crate::schemes::{allocate_for, classify_regime, expected_delivered, scheme_sum_rate, simulate};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// Bound minimum = capacity = scheme closed form.
    Sandwich,
    /// Table allocation satisfies its constraint system at capacity.
    Tables,
    /// Table allocation decodes bit by bit with the expected bit count.
    Simulate,
    /// Exhaustive optimum = table sum-rate = capacity.
    Optimize,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Sandwich, Check::Tables, Check::Simulate, Check::Optimize];

    pub fn name(self) -> &'static str {
        match self {
            Check::Sandwich => "sandwich",
            Check::Tables => "tables",
            Check::Simulate => "simulate",
            Check::Optimize => "optimize",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidInput(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Filter {
    /// n_c < n_s
    NcBelowNs,
    /// n_c != n_d
    NcNotNd,
}

impl Filter {
    pub fn keep(self, p: &LdParams) -> bool {
        match self {
            Filter::NcBelowNs => p.nc < p.ns,
            Filter::NcNotNd => p.nc != p.nd,
        }
    }
}

impl FromStr for Filter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.replace(' ', "").as_str() {
            "nc<ns" => Ok(Filter::NcBelowNs),
            "nc!=nd" => Ok(Filter::NcNotNd),
            _ => Err(Error::InvalidInput(format!(
                "unknown filter {s:?} (expected nc<ns or nc!=nd)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub nd: RangeInclusive<u32>,
    pub nc: RangeInclusive<u32>,
    pub nr: RangeInclusive<u32>,
    pub ns: RangeInclusive<u32>,
    pub filters: Vec<Filter>,
    pub checks: Vec<Check>,
    /// Worker threads; 0 picks the rayon default.
    pub workers: usize,
    /// Blocks per simulation.
    pub blocks: usize,
    pub seeds: Vec<u64>,
}

impl SweepSpec {
    /// All four levels in `0..=max`, no filters, all checks, n = 10, seed 1.
    pub fn up_to(max: u32) -> Self {
        SweepSpec {
            nd: 0..=max,
            nc: 0..=max,
            nr: 0..=max,
            ns: 0..=max,
            filters: vec![],
            checks: Check::ALL.to_vec(),
            workers: 0,
            blocks: 10,
            seeds: vec![1],
        }
    }

    pub fn tuples(&self) -> Vec<LdParams> {
        let mut out = Vec::new();
        for nd in self.nd.clone() {
            for nc in self.nc.clone() {
                for nr in self.nr.clone() {
                    for ns in self.ns.clone() {
                        let p = LdParams::new(nd, nc, nr, ns);
                        if self.filters.iter().all(|f| f.keep(&p)) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub params: LdParams,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: Check,
    /// Tuples the check applied to (every check needs n_c < n_s).
    pub checked: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub grid_size: usize,
    pub checks: Vec<CheckReport>,
    pub elapsed_ms: u128,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.failures.is_empty())
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }
}

/// `None` when the check does not apply to `p`.
fn run_one(check: Check, p: &LdParams, spec: &SweepSpec) -> Option<std::result::Result<(), String>> {
    let cap = ld_sum_capacity(p);
    let capq = Q::from_integer(cap as i64);
    // the bounds and schemes are only claimed tight for n_c < n_s
    if p.ns <= p.nc {
        return None;
    }
    let fail = |msg: String| Some(Err(msg));
    match check {
        Check::Sandwich => {
            let b = ld_upper_bounds(p);
            if b.min() != cap as i64 {
                return fail(format!("bound minimum {} ({}) != capacity {cap}", b.min(), b.binding));
            }
            match classify_regime(p).and_then(|(s, _)| scheme_sum_rate(s, p)) {
                Ok(r) if r == cap => {}
                Ok(r) => return fail(format!("scheme sum-rate {r} != capacity {cap}")),
                Err(e) => return fail(e.to_string()),
            }
            Some(Ok(()))
        }
        Check::Tables => {
            let a = match allocate_for(p) {
                Ok(a) => a,
                Err(e) => return fail(e.to_string()),
            };
            let cs = compile_constraints(a.scheme, p);
            match check_allocation(&cs, &a) {
                Ok(v) if v.is_empty() => {}
                Ok(v) => {
                    let names: Vec<String> = v.iter().map(|v| v.to_string()).collect();
                    return fail(format!("{}: {}", a.column, names.join("; ")));
                }
                Err(e) => return fail(e.to_string()),
            }
            if a.sum_rate() != capq {
                return fail(format!("{}: sum-rate {} != capacity {cap}", a.column, a.sum_rate()));
            }
            Some(Ok(()))
        }
        Check::Simulate => {
            let a = match allocate_for(p) {
                Ok(a) => a,
                Err(e) => return fail(e.to_string()),
            };
            let want = expected_delivered(&a, spec.blocks);
            for &seed in &spec.seeds {
                match simulate(a.scheme, p, &a, spec.blocks, seed) {
                    Ok((_, o)) if !o.success => {
                        let why = o.violated_step.map(|v| v.to_string()).unwrap_or_default();
                        return fail(format!("seed {seed}: {why}"));
                    }
                    Ok((_, o)) if Q::from_integer(o.delivered_total() as i64) != want => {
                        return fail(format!(
                            "seed {seed}: delivered {} bits, expected {want}",
                            o.delivered_total()
                        ));
                    }
                    Ok(_) => {}
                    Err(e) => return fail(format!("seed {seed}: {e}")),
                }
            }
            Some(Ok(()))
        }
        Check::Optimize => {
            let o = match optimize_regime(p) {
                Ok(o) => o,
                Err(e) => return fail(e.to_string()),
            };
            let table = allocate_for(p).map(|a| a.sum_rate());
            if o.sum_rate != capq || table != Ok(capq) {
                return fail(format!(
                    "optimum {} table {:?} capacity {cap}",
                    o.sum_rate,
                    table.map(|t| t.to_string())
                ));
            }
            Some(Ok(()))
        }
    }
}

/// Runs every selected check on every tuple of the grid.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepReport> {
    let start = Instant::now();
    let tuples = spec.tuples();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| Error::InvalidInput(format!("worker pool: {e}")))?;
    let mut checks = Vec::new();
    for &check in &spec.checks {
        let results: Vec<(LdParams, Option<std::result::Result<(), String>>)> =
            pool.install(|| tuples.par_iter().map(|p| (*p, run_one(check, p, spec))).collect());
        let checked = results.iter().filter(|(_, r)| r.is_some()).count();
        let failures = results
            .into_iter()
            .filter_map(|(p, r)| match r {
                Some(Err(detail)) => Some(Failure { params: p, detail }),
                _ => None,
            })
            .collect();
        checks.push(CheckReport {
            name: check,
            checked,
            failures,
        });
    }
    Ok(SweepReport {
        grid_size: tuples.len(),
        checks,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_passes_everything() {
        let mut spec = SweepSpec::up_to(3);
        spec.blocks = 4;
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.grid_size, 256);
        assert!(r.ok(), "{:?}", r.checks);
        for c in &r.checks {
            assert_eq!(c.checked, 4 * 4 * 6);
        }
    }

    #[test]
    fn filters_and_empty_ranges() {
        let mut spec = SweepSpec::up_to(2);
        spec.filters = vec![Filter::NcBelowNs, Filter::NcNotNd];
        assert!(spec.tuples().iter().all(|p| p.nc < p.ns && p.nc != p.nd));
        #[allow(clippy::reversed_empty_ranges)]
        {
            spec.nd = 3..=2;
        }
        let r = run_sweep(&spec).unwrap();
        assert_eq!(r.grid_size, 0);
        assert!(r.ok());
    }

    #[test]
    fn parses_names() {
        assert_eq!("Simulate".parse::<Check>().unwrap(), Check::Simulate);
        assert_eq!("nc < ns".parse::<Filter>().unwrap(), Filter::NcBelowNs);
        assert!("nd>ns".parse::<Filter>().is_err());
    }
}

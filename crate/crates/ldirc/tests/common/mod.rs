#![allow(dead_code)]

use std::path::PathBuf;

use ldirc::cli::CurveSpec;
use ldirc::ld::LdParams;
use ldirc::ld_sum_capacity;
use ldirc::rate_opt::{check_allocation, compile_constraints};
use ldirc::rational::{parse_rational, Q};
use ldirc::schemes::{allocate_for, scheme_sum_rate};

/// (beta, gamma) of the shipped curve files.
pub const CURVES: [(&str, &str); 8] = [
    ("0.1", "0.7"),
    ("0.4", "0.7"),
    ("0.7", "0.7"),
    ("1.5", "0.7"),
    ("0.2", "3"),
    ("1.5", "3"),
    ("2", "3"),
    ("6", "3"),
];

pub fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn curve_file(beta: &str, gamma: &str) -> PathBuf {
    golden(&format!("curve_b{beta}_g{gamma}.csv"))
}

pub fn curve_spec(beta: &str, gamma: &str) -> CurveSpec {
    CurveSpec::new(parse_rational(beta).unwrap(), parse_rational(gamma).unwrap())
}

#[derive(Debug, serde::Deserialize)]
pub struct TableRow {
    pub scheme: String,
    pub table: String,
    pub column: String,
    pub nd: u32,
    pub nc: u32,
    pub nr: u32,
    pub ns: u32,
    pub sum_rate: u32,
}

impl TableRow {
    pub fn params(&self) -> LdParams {
        LdParams::new(self.nd, self.nc, self.nr, self.ns)
    }
}

pub fn table_rows() -> Vec<TableRow> {
    let mut r = csv::Reader::from_path(golden("table_columns.csv")).expect("table_columns.csv");
    r.deserialize().map(|row| row.expect("table row")).collect()
}

/// Column match, zero violations, and table sum-rate = closed form = capacity.
pub fn check_table_row(row: &TableRow) -> Result<(), String> {
    let p = row.params();
    let a = allocate_for(&p).map_err(|e| format!("{p}: {e}"))?;
    if a.scheme.to_string() != row.scheme || a.column.table != row.table || a.column.column != row.column {
        return Err(format!("{p}: served by {}", a.column));
    }
    let v = check_allocation(&compile_constraints(a.scheme, &p), &a).map_err(|e| e.to_string())?;
    if !v.is_empty() {
        let v: Vec<String> = v.iter().map(|v| v.to_string()).collect();
        return Err(format!("{p} {}: {}", a.column, v.join("; ")));
    }
    let closed = scheme_sum_rate(a.scheme, &p).map_err(|e| e.to_string())?;
    let want = Q::from_integer(row.sum_rate as i64);
    if a.sum_rate() != want || closed != row.sum_rate || ld_sum_capacity(&p) != row.sum_rate {
        return Err(format!(
            "{p}: table {} closed form {closed} capacity {} golden {}",
            a.sum_rate(),
            ld_sum_capacity(&p),
            row.sum_rate
        ));
    }
    Ok(())
}

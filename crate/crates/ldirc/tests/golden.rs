mod common;

use std::collections::BTreeMap;

use common::{check_table_row, curve_file, curve_spec, table_rows, CURVES};
use ldirc::cli::curve_csv;

#[test]
fn every_table_row_passes() {
    let rows = table_rows();
    let bad: Vec<String> = rows.iter().filter_map(|r| check_table_row(r).err()).collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn every_table_column_has_three_tuples() {
    // WI3a and WI3b rows share table columns
    let mut per: BTreeMap<(String, String), usize> = BTreeMap::new();
    for r in table_rows() {
        *per.entry((r.table, r.column)).or_default() += 1;
    }
    // WI-1: 4, WI-2: 7, WI-3: 16, SI: 8, II: 1
    assert_eq!(per.len(), 36);
    for (k, n) in per {
        assert!(n >= 3, "{k:?} has {n} tuples");
    }
}

#[test]
fn curves_match_golden() {
    for (b, g) in CURVES {
        let want = std::fs::read_to_string(curve_file(b, g)).unwrap();
        assert_eq!(curve_csv(&curve_spec(b, g)).unwrap(), want, "beta={b} gamma={g}");
    }
}

#[test]
fn curve_files_use_lf_and_fixed_header() {
    for (b, g) in CURVES {
        let text = std::fs::read_to_string(curve_file(b, g)).unwrap();
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().next(), Some("alpha,d_irc,d_ic,binding"));
        assert_eq!(text.lines().count(), 62);
    }
}

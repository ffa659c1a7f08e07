//! Lists the first few in-regime tuples of every rate-allocation table
//! column as CSV: `scheme,table,column,nd,nc,nr,ns,sum_rate`.
//!
//!     cargo run --example table_columns -- [max_level] [per_column]

use std::collections::BTreeMap;
use std::io;

use ldirc::ld::LdParams;
use ldirc::schemes::{allocate_for, scheme_sum_rate};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let max: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(16);
    let per: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);

    let mut found: BTreeMap<(String, String, String), Vec<(LdParams, u32)>> = BTreeMap::new();
    for nd in 0..=max {
        for nc in 0..=max {
            for nr in 0..=max {
                for ns in nc + 1..=max {
                    let p = LdParams::new(nd, nc, nr, ns);
                    let a = allocate_for(&p)?;
                    let key = (a.scheme.to_string(), a.column.table.to_string(), a.column.column.to_string());
                    let rows = found.entry(key).or_default();
                    if rows.len() < per {
                        rows.push((p, scheme_sum_rate(a.scheme, &p)?));
                    }
                }
            }
        }
    }

    let mut w = csv::Writer::from_writer(io::stdout().lock());
    w.write_record(["scheme", "table", "column", "nd", "nc", "nr", "ns", "sum_rate"])?;
    for ((scheme, table, column), rows) in &found {
        for (p, r) in rows {
            let nums = [p.nd, p.nc, p.nr, p.ns, *r].map(|x| x.to_string());
            w.write_record(
                [scheme.as_str(), table, column]
                    .into_iter()
                    .chain(nums.iter().map(String::as_str)),
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

//! Command-line front end. Human-readable reports go to stderr, JSON and
//! CSV to stdout (or a file), so the output can be piped.

use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value};

use crate::capacity::{ld_sum_capacity, ld_upper_bounds, BoundSet, LdBound};
use crate::error::{Error, Result};
use crate::gaussian::{gdof_achievable_check, plan_subchannels};
use crate::gdof::{gdof, gdof_ic, gdof_upper_bounds, GdofParams};
use crate::ld::LdParams;
use crate::rational::{parse_rational, render, Q};
use crate::schemes::{achieved_rate, allocate, classify_regime, expected_delivered, simulate, SchemeId};
use crate::sweep::{run_sweep, Check, Filter, SweepSpec};

#[derive(Parser, Debug)]
#[command(
    name = "ldirc",
    version,
    about = "Capacity, GDoF and scheme simulation for the LD interference relay channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sum-capacity, bounds and the serving scheme of one tuple.
    Capacity(Levels),
    /// All LD upper bounds of one tuple.
    Bounds(Levels),
    /// Sum GDoF, the IC reference and the GDoF bounds.
    Gdof(GdofArgs),
    /// GDoF curve over alpha as CSV.
    Curve(CurveArgs),
    /// Grid verification; exits non-zero on any failure.
    Verify(VerifyArgs),
    /// Bit-level run of a scheme.
    Simulate(SimulateArgs),
    /// Sub-channel decomposition of a Gaussian channel.
    Subchannels(SubchannelArgs),
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Levels {
    #[arg(long)]
    pub nd: u32,
    #[arg(long)]
    pub nc: u32,
    #[arg(long)]
    pub nr: u32,
    #[arg(long)]
    pub ns: u32,
}

impl Levels {
    pub fn params(&self) -> LdParams {
        LdParams::new(self.nd, self.nc, self.nr, self.ns)
    }
}

fn rational_arg(s: &str) -> std::result::Result<Q, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Args, Debug)]
pub struct GdofArgs {
    /// Cross exponent, as p/q or a decimal.
    #[arg(long, value_parser = rational_arg)]
    pub alpha: Q,
    #[arg(long, value_parser = rational_arg)]
    pub beta: Q,
    #[arg(long, value_parser = rational_arg)]
    pub gamma: Q,
    /// Also compare with the LD capacity at N levels per unit exponent.
    #[arg(long)]
    pub scale: Option<u32>,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[arg(long, value_parser = rational_arg)]
    pub beta: Q,
    #[arg(long, value_parser = rational_arg)]
    pub gamma: Q,
    #[arg(long, value_parser = rational_arg, default_value = "0")]
    pub alpha_from: Q,
    #[arg(long, value_parser = rational_arg, default_value = "3")]
    pub alpha_to: Q,
    #[arg(long, value_parser = rational_arg, default_value = "1/20")]
    pub step: Q,
    /// Leave the d_ic column empty.
    #[arg(long)]
    pub no_ic: bool,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn range_arg(s: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    let bad = || format!("expected a level or a range a-b, got {s:?}");
    let (a, b) = match s.split_once("..=").or_else(|| s.split_once('-')) {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    Ok(a..=b)
}

fn check_arg(s: &str) -> std::result::Result<Check, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn filter_arg(s: &str) -> std::result::Result<Filter, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Every level ranges over 0..=max unless overridden.
    #[arg(long, default_value_t = 8)]
    pub max: u32,
    #[arg(long, value_parser = range_arg)]
    pub nd: Option<RangeInclusive<u32>>,
    #[arg(long, value_parser = range_arg)]
    pub nc: Option<RangeInclusive<u32>>,
    #[arg(long, value_parser = range_arg)]
    pub nr: Option<RangeInclusive<u32>>,
    #[arg(long, value_parser = range_arg)]
    pub ns: Option<RangeInclusive<u32>>,
    /// Tuple filter: "nc<ns" or "nc!=nd" (repeatable).
    #[arg(long = "filter", value_parser = filter_arg)]
    pub filters: Vec<Filter>,
    /// sandwich, tables, simulate or optimize (repeatable; default sandwich).
    #[arg(long = "check", value_parser = check_arg)]
    pub checks: Vec<Check>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Blocks per simulation.
    #[arg(short = 'n', long, default_value_t = 10)]
    pub blocks: usize,
    #[arg(long = "seed", default_values_t = [1u64])]
    pub seeds: Vec<u64>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub scheme: SchemeId,
    #[command(flatten)]
    pub levels: Levels,
    /// Number of blocks.
    #[arg(short = 'n', default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Write one line per channel use (k x1 x2 xr y1 y2 yr) to this file.
    #[arg(long)]
    pub dump_trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SubchannelArgs {
    /// Transmit power P.
    #[arg(long)]
    pub power: f64,
    /// Power gains h_d^2, h_c^2, h_r^2, h_s^2.
    #[arg(long)]
    pub hd2: f64,
    #[arg(long)]
    pub hc2: f64,
    #[arg(long)]
    pub hr2: f64,
    #[arg(long)]
    pub hs2: f64,
    /// Number of sub-channels N.
    #[arg(short = 'N', long = "subchannels")]
    pub n: u32,
}

/// One row of a GDoF curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveRow {
    pub alpha: Q,
    pub d_irc: Q,
    pub d_ic: Option<Q>,
    pub binding: LdBound,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurveSpec {
    pub beta: Q,
    pub gamma: Q,
    pub alpha_from: Q,
    pub alpha_to: Q,
    pub step: Q,
    pub include_ic: bool,
}

impl CurveSpec {
    /// Default alpha grid [0, 3] in steps of 1/20.
    pub fn new(beta: Q, gamma: Q) -> Self {
        CurveSpec {
            beta,
            gamma,
            alpha_from: Q::zero(),
            alpha_to: Q::from_integer(3),
            step: Q::new(1, 20),
            include_ic: true,
        }
    }
}

pub fn curve_rows(spec: &CurveSpec) -> Result<Vec<CurveRow>> {
    if spec.step <= Q::zero() {
        return Err(Error::InvalidInput("curve step must be positive".into()));
    }
    let mut rows = Vec::new();
    let mut alpha = spec.alpha_from;
    while alpha <= spec.alpha_to {
        let g = GdofParams::new(alpha, spec.beta, spec.gamma)?;
        rows.push(CurveRow {
            alpha,
            d_irc: gdof(&g),
            d_ic: spec.include_ic.then(|| gdof_ic(alpha)),
            binding: gdof_upper_bounds(&g).binding,
        });
        alpha += spec.step;
    }
    Ok(rows)
}

/// CSV with header `alpha,d_irc,d_ic,binding`, LF line endings.
pub fn curve_csv(spec: &CurveSpec) -> Result<String> {
    let mut s = String::from("alpha,d_irc,d_ic,binding\n");
    for r in curve_rows(spec)? {
        let ic = r.d_ic.map(render).unwrap_or_default();
        s.push_str(&format!("{},{},{},{}\n", render(r.alpha), render(r.d_irc), ic, r.binding));
    }
    Ok(s)
}

fn bounds_json<V: Copy + Ord>(b: &BoundSet<LdBound, V>, show: impl Fn(V) -> Value) -> Value {
    let entries: Vec<Value> = b
        .entries
        .iter()
        .map(|e| json!({"bound": e.label.name(), "value": show(e.value), "applicable": e.applicable}))
        .collect();
    json!({"binding": b.binding.name(), "min": show(b.min()), "entries": entries})
}

fn bounds_text<V: std::fmt::Display + Copy + Ord>(b: &BoundSet<LdBound, V>) -> String {
    let mut s = String::new();
    for e in &b.entries {
        let mark = if !e.applicable {
            " (not applicable)"
        } else if e.label == b.binding {
            " <- binding"
        } else {
            ""
        };
        s.push_str(&format!("  {:<14} {}{}\n", e.label.name(), e.value, mark));
    }
    s
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
    writeln!(out, "{text}").map_err(io_err)
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(format!("I/O error: {e}"))
}

fn q_json(x: Q) -> Value {
    json!(x.to_string())
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Capacity(l) => cmd_capacity(&l.params(), out, err),
        Command::Bounds(l) => cmd_bounds(&l.params(), out, err),
        Command::Gdof(a) => cmd_gdof(&a, out, err),
        Command::Curve(a) => cmd_curve(&a, out, err),
        Command::Verify(a) => cmd_verify(&a, out, err),
        Command::Simulate(a) => cmd_simulate(&a, out, err),
        Command::Subchannels(a) => cmd_subchannels(&a, out, err),
    }
}

fn cmd_capacity(p: &LdParams, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cap = ld_sum_capacity(p);
    let b = ld_upper_bounds(p);
    let scheme = classify_regime(p);
    let (scheme_name, column) = match &scheme {
        Ok((s, c)) => (json!(s.name()), json!(c.to_string())),
        Err(_) => (Value::Null, Value::Null),
    };
    let text = format!(
        "{p}\ncapacity {cap}\nregime {:?}\nscheme {}\nbounds:\n{}",
        p.regime(),
        match &scheme {
            Ok((_, c)) => c.to_string(),
            Err(e) => e.to_string(),
        },
        bounds_text(&b)
    );
    err.write_all(text.as_bytes()).map_err(io_err)?;
    write_json(
        out,
        &json!({
            "params": p,
            "capacity": cap,
            "regime": p.regime(),
            "scheme": scheme_name,
            "column": column,
            "bounds": bounds_json(&b, |v| json!(v)),
        }),
    )?;
    Ok(0)
}

fn cmd_bounds(p: &LdParams, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let b = ld_upper_bounds(p);
    write!(err, "{p}\n{}", bounds_text(&b)).map_err(io_err)?;
    write_json(out, &json!({"params": p, "bounds": bounds_json(&b, |v| json!(v))}))?;
    Ok(0)
}

fn cmd_gdof(a: &GdofArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let g = GdofParams::new(a.alpha, a.beta, a.gamma)?;
    let d = gdof(&g);
    let ic = gdof_ic(a.alpha);
    let b = gdof_upper_bounds(&g);
    write!(err, "{g}\nd_irc {d} ({})\nd_ic {ic}\nbounds:\n{}", render(d), bounds_text(&b)).map_err(io_err)?;
    let mut v = json!({
        "params": g,
        "d_irc": q_json(d),
        "d_ic": q_json(ic),
        "bounds": bounds_json(&b, q_json),
    });
    if let Some(n) = a.scale {
        let c = gdof_achievable_check(&g, n)?;
        writeln!(
            err,
            "LD capacity at N={n}: {} vs N*d = {} -> equal {}",
            c.ld_capacity, c.scaled_gdof, c.equal
        )
        .map_err(io_err)?;
        v["scaled_check"] = json!({"n": n, "ld_capacity": c.ld_capacity, "scaled_gdof": c.scaled_gdof, "equal": c.equal});
    }
    write_json(out, &v)?;
    Ok(0)
}

fn cmd_curve(a: &CurveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let spec = CurveSpec {
        beta: a.beta,
        gamma: a.gamma,
        alpha_from: a.alpha_from,
        alpha_to: a.alpha_to,
        step: a.step,
        include_ic: !a.no_ic,
    };
    let csv = curve_csv(&spec)?;
    match &a.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(io_err)?;
            writeln!(err, "wrote {} rows to {}", csv.lines().count() - 1, path.display()).map_err(io_err)?;
        }
        None => out.write_all(csv.as_bytes()).map_err(io_err)?,
    }
    Ok(0)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut spec = SweepSpec::up_to(a.max);
    for (slot, given) in [
        (&mut spec.nd, &a.nd),
        (&mut spec.nc, &a.nc),
        (&mut spec.nr, &a.nr),
        (&mut spec.ns, &a.ns),
    ] {
        if let Some(r) = given {
            *slot = r.clone();
        }
    }
    spec.filters = a.filters.clone();
    spec.checks = if a.checks.is_empty() {
        vec![Check::Sandwich]
    } else {
        a.checks.clone()
    };
    spec.workers = a.workers;
    spec.blocks = a.blocks;
    spec.seeds = a.seeds.clone();
    let report = run_sweep(&spec)?;
    writeln!(err, "{} tuples in {} ms", report.grid_size, report.elapsed_ms).map_err(io_err)?;
    for c in &report.checks {
        writeln!(
            err,
            "  {:<9} checked {:>6}  failures {}",
            c.name.name(),
            c.checked,
            c.failures.len()
        )
        .map_err(io_err)?;
        for f in &c.failures {
            writeln!(err, "    {} {}", f.params, f.detail).map_err(io_err)?;
        }
    }
    let v = serde_json::to_value(&report).map_err(|e| Error::InvalidInput(e.to_string()))?;
    write_json(out, &v)?;
    Ok(if report.ok() { 0 } else { 1 })
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let p = a.levels.params();
    let alloc = allocate(a.scheme, &p)?;
    let (trace, outcome) = simulate(alloc.scheme, &p, &alloc, a.n, a.seed)?;
    if let Some(path) = &a.dump_trace {
        std::fs::write(path, trace.dump()).map_err(io_err)?;
    }
    let achieved = achieved_rate(&outcome, a.n).ok();
    let lengths: Vec<String> = alloc.lengths.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let pads: Vec<String> = alloc.paddings.iter().map(|(k, v)| format!("{k}={v}")).collect();
    write!(
        err,
        "{p}\n{}\nlengths {}\npaddings {}\nscale {}\ndelivered {:?} (expected {})\nachieved rate {}\nasymptotic rate {}\nsuccess {}\n",
        alloc.column,
        lengths.join(" "),
        pads.join(" "),
        outcome.scale,
        outcome.delivered_bits,
        expected_delivered(&alloc, a.n),
        achieved.map(|r| r.to_string()).unwrap_or_else(|| "undefined".into()),
        alloc.sum_rate(),
        outcome.success
    )
    .map_err(io_err)?;
    if let Some(v) = &outcome.violated_step {
        writeln!(err, "violated: {v}").map_err(io_err)?;
    }
    write_json(
        out,
        &json!({
            "params": p,
            "scheme": alloc.scheme.name(),
            "column": alloc.column.to_string(),
            "allocation": alloc,
            "n": a.n,
            "seed": a.seed,
            "scale": outcome.scale,
            "delivered_bits": outcome.delivered_bits,
            "achieved_rate": achieved.map(q_json),
            "asymptotic_rate": q_json(alloc.sum_rate()),
            "success": outcome.success,
            "violated_step": outcome.violated_step.as_ref().map(|v| v.to_string()),
        }),
    )?;
    Ok(if outcome.success { 0 } else { 1 })
}

fn cmd_subchannels(a: &SubchannelArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let plan = plan_subchannels(a.power, a.hd2, a.hc2, a.hr2, a.hs2, a.n)?;
    write!(
        err,
        "N={} delta={}\nN_d={} N_c={} N_r={} N_s={}\nR_s={}{}\n",
        plan.n,
        plan.delta,
        plan.n_d,
        plan.n_c,
        plan.n_r,
        plan.n_s,
        plan.r_s_exact.clone().unwrap_or_else(|| plan.r_s.to_string()),
        if plan.delta_too_small {
            " (delta <= 4: no usable sub-channel rate)"
        } else {
            ""
        }
    )
    .map_err(io_err)?;
    let v = serde_json::to_value(&plan).map_err(|e| Error::InvalidInput(e.to_string()))?;
    write_json(out, &v)?;
    Ok(0)
}

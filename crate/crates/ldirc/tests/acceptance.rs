//! One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{check_table_row, table_rows};
use ldirc::gaussian::{gdof_achievable_check, plan_subchannels};
use ldirc::rational::{q, qi};
use ldirc::sweep::{run_sweep, Check, Filter, SweepReport, SweepSpec};
use ldirc::{gdof, gdof_ic, gdof_upper_bounds, GdofParams, Q};

const SANDWICH_LIMIT: Duration = Duration::from_secs(1);
const OPTIMIZE_LIMIT: Duration = Duration::from_secs(600);
const SIMULATE_LIMIT: Duration = Duration::from_secs(300);
const FEATURE_LIMIT: Duration = Duration::from_secs(1);
const SAMPLED_TRIPLES: usize = 200;
const SAMPLE_SEED: u64 = 20;

type Criterion = fn() -> Outcome;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    let mut detail = summary;
    for f in failures.iter().take(5) {
        detail.push_str(&format!("\n    {f}"));
    }
    Outcome {
        ok: failures.is_empty(),
        detail,
    }
}

fn timed(limit: Duration, start: Instant, mut o: Outcome) -> Outcome {
    let took = start.elapsed();
    o.detail
        .push_str(&format!(" [{} ms, limit {} ms]", took.as_millis(), limit.as_millis()));
    if took > limit {
        o.ok = false;
    }
    o
}

fn sweep(max: u32, check: Check, seeds: Vec<u64>) -> SweepReport {
    let mut spec = SweepSpec::up_to(max);
    spec.filters = vec![Filter::NcBelowNs];
    spec.checks = vec![check];
    spec.seeds = seeds;
    spec.blocks = 10;
    run_sweep(&spec).expect("sweep")
}

fn sweep_outcome(r: &SweepReport) -> Outcome {
    let c = &r.checks[0];
    let fails: Vec<String> = c.failures.iter().map(|f| format!("{}: {}", f.params, f.detail)).collect();
    outcome(&fails, format!("{} tuples, {} failures", c.checked, fails.len()))
}

fn ld_sandwich() -> Outcome {
    let start = Instant::now();
    let r = sweep(8, Check::Sandwich, vec![1]);
    timed(SANDWICH_LIMIT, start, sweep_outcome(&r))
}

fn table_golden() -> Outcome {
    let rows = table_rows();
    let fails: Vec<String> = rows.iter().filter_map(|r| check_table_row(r).err()).collect();
    outcome(&fails, format!("{} golden rows, {} failures", rows.len(), fails.len()))
}

fn optimizer_oracle() -> Outcome {
    let start = Instant::now();
    let r = sweep(6, Check::Optimize, vec![1]);
    timed(OPTIMIZE_LIMIT, start, sweep_outcome(&r))
}

fn decode_round_trip() -> Outcome {
    let start = Instant::now();
    let r = sweep(6, Check::Simulate, vec![1, 2, 3]);
    timed(SIMULATE_LIMIT, start, sweep_outcome(&r))
}

/// alpha in k/12 (alpha != 1), beta in k/12, gamma in (alpha, 4] on the same grid.
fn gdof_grid() -> Vec<GdofParams> {
    let mut out = Vec::new();
    for a in (0..=36).filter(|&a| a != 12) {
        for b in 0..=36 {
            for c in a + 1..=48 {
                out.push(GdofParams::new(q(a, 12), q(b, 12), q(c, 12)).unwrap());
            }
        }
    }
    out
}

fn gdof_sandwich() -> Outcome {
    let grid = gdof_grid();
    let mut fails = Vec::new();
    for g in &grid {
        let b = gdof_upper_bounds(g);
        let d = gdof(g);
        if d != b.min() || b.get(b.binding) != Some(d) {
            fails.push(format!("{g}: gdof {d}, bound min {} ({})", b.min(), b.binding));
        }
    }
    outcome(&fails, format!("{} grid points, {} failures", grid.len(), fails.len()))
}

/// Uniform numerator over a uniform denominator in 1..=12, value in [0, 4].
fn sample_exponent(rng: &mut ChaCha8Rng) -> Q {
    let den = rng.gen_range(1..=12i64);
    q(rng.gen_range(0..=4 * den), den)
}

fn scaling_bridge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let mut fails = Vec::new();
    let mut n = 0;
    while n < SAMPLED_TRIPLES {
        let (alpha, beta, gamma) = (
            sample_exponent(&mut rng),
            sample_exponent(&mut rng),
            sample_exponent(&mut rng),
        );
        if gamma <= alpha || alpha == qi(1) {
            continue;
        }
        n += 1;
        let g = GdofParams::new(alpha, beta, gamma).unwrap();
        let base = g.denominator_lcm() as u32;
        for scale in [base, 2 * base] {
            match gdof_achievable_check(&g, scale) {
                Ok(c) if c.equal => {}
                Ok(c) => fails.push(format!("{g} N={scale}: LD {} vs N*d {}", c.ld_capacity, c.scaled_gdof)),
                Err(e) => fails.push(format!("{g} N={scale}: {e}")),
            }
        }
    }
    outcome(&fails, format!("{n} triples at N and 2N, {} failures", fails.len()))
}

fn curve(beta: Q, gamma: Q, alpha: Q) -> Q {
    gdof(&GdofParams::new(alpha, beta, gamma).unwrap())
}

fn figure_features() -> Outcome {
    let start = Instant::now();
    let mut fails = Vec::new();

    // (a) non-monotone in the strong-interference range
    let (d15, d2) = (curve(qi(2), qi(3), q(3, 2)), curve(qi(2), qi(3), qi(2)));
    if !(d15 == q(7, 2) && d2 == qi(3) && d15 > d2) {
        fails.push(format!("(a) d(1.5)={d15} d(2)={d2}"));
    }

    // (b) no relay gain for alpha <= 1 - gamma
    for k in 0..=18 {
        let a = q(k, 60);
        let d = curve(q(1, 10), q(7, 10), a);
        if d != gdof_ic(a) {
            fails.push(format!("(b) alpha={a}: d_irc={d} d_ic={}", gdof_ic(a)));
        }
    }

    // (c) strict gain and slope -1 on (0, 2/3)
    let pts: Vec<(Q, Q)> = (1..40).map(|k| q(k, 60)).map(|a| (a, curve(q(7, 10), q(7, 10), a))).collect();
    for &(a, d) in &pts {
        if d <= gdof_ic(a) {
            fails.push(format!("(c) alpha={a}: d_irc={d} d_ic={}", gdof_ic(a)));
        }
    }
    for w in pts.windows(2) {
        let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        if slope != qi(-1) {
            fails.push(format!("(c) slope {slope} on [{}, {}]", w[0].0, w[1].0));
        }
    }

    // (d) the relay never hurts
    let grid = gdof_grid();
    for g in &grid {
        if gdof(g) < gdof_ic(g.alpha) {
            fails.push(format!("(d) {g}: d_irc={} d_ic={}", gdof(g), gdof_ic(g.alpha)));
        }
    }
    let summary = format!(
        "(a)-(d) over {} points, {} failures",
        grid.len() + 19 + pts.len() + 2,
        fails.len()
    );
    timed(FEATURE_LIMIT, start, outcome(&fails, summary))
}

fn subchannel_ledger() -> Outcome {
    let mut fails = Vec::new();
    let power = 2f64.powi(20);
    let hs2 = 2f64.powi(-4);
    match plan_subchannels(power, 1.0, 1.0, 1.0, hs2, 5) {
        Ok(p) => {
            if p.n_s != 4 || p.r_s != 1.0 || p.r_s_exact.as_deref() != Some("1") || p.delta_too_small {
                fails.push(format!(
                    "N=5: N_s={} R_s={} exact={:?} flagged={}",
                    p.n_s, p.r_s, p.r_s_exact, p.delta_too_small
                ));
            }
        }
        Err(e) => fails.push(format!("N=5: {e}")),
    }
    // delta = 2^(20/N) <= 4 exactly when N >= 10
    for n in 1..=24u32 {
        match plan_subchannels(power, 1.0, 1.0, 1.0, hs2, n) {
            Ok(p) if p.delta_too_small != (n >= 10) => {
                fails.push(format!("N={n}: delta={} flagged={}", p.delta, p.delta_too_small))
            }
            Ok(_) => {}
            Err(e) => fails.push(format!("N={n}: {e}")),
        }
    }
    outcome(
        &fails,
        format!("N_s/R_s at N=5, delta flag for N=1..24, {} failures", fails.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("ld-sandwich", ld_sandwich),
        ("table-golden", table_golden),
        ("optimizer-oracle", optimizer_oracle),
        ("decode-round-trip", decode_round_trip),
        ("gdof-sandwich", gdof_sandwich),
        ("scaling-bridge", scaling_bridge),
        ("figure-features", figure_features),
        ("subchannel-ledger", subchannel_ledger),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        all &= o.ok;
        println!("{} {} {name}: {}", if o.ok { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use proptest::prelude::*;

use ldirc::capacity::ld_ic_sum_capacity;
use ldirc::rate_opt::{check_allocation, compile_constraints, optimize_regime};
use ldirc::rational::{parse_rational, q, qi};
use ldirc::schemes::{allocate_for, expected_delivered, simulate};
use ldirc::{gdof, gdof_ic, gdof_upper_bounds, ld_sum_capacity, ld_upper_bounds, relay_output, rx_output, scale_to_ld};
use ldirc::{BitWord, GdofParams, LdParams, Q};

fn params(max: u32) -> impl Strategy<Value = LdParams> {
    (0..=max, 0..=max, 0..=max, 0..=max).prop_map(|(nd, nc, nr, ns)| LdParams::new(nd, nc, nr, ns))
}

/// Tuples the schemes cover.
fn covered(max: u32) -> impl Strategy<Value = LdParams> {
    params(max).prop_filter("n_c < n_s", |p| p.nc < p.ns)
}

fn word(len: usize) -> impl Strategy<Value = BitWord> {
    proptest::collection::vec(any::<bool>(), len).prop_map(BitWord::from_bits)
}

fn triple() -> impl Strategy<Value = GdofParams> {
    (0..=48i64, 0..=48i64, 0..=48i64, 1..=12i64)
        .prop_filter("gamma > alpha, alpha != 1", |(a, _, c, d)| c > a && *a != *d)
        .prop_map(|(a, b, c, d)| GdofParams::new(q(a, d), q(b, d), q(c, d)).unwrap())
}

proptest! {
    #[test]
    fn shifts_compose(w in word(9), s in 0usize..6, t in 0usize..6) {
        prop_assert_eq!(w.shift_down(s).shift_down(t), w.shift_down(s + t));
        prop_assert!(w.shift_down(9).is_zero());
    }

    #[test]
    fn channel_is_linear(p in params(6), seed in any::<u64>()) {
        let q = p.q() as usize;
        let mut bits = seed;
        let mut draw = || {
            BitWord::from_bits((0..q).map(|_| { bits = bits.rotate_left(7) ^ 0x9e37_79b9_7f4a_7c15; bits & 1 == 1 }).collect())
        };
        let (a1, a2, ar, b1, b2, br) = (draw(), draw(), draw(), draw(), draw(), draw());
        let x = |u: &BitWord, v: &BitWord| u.xor(v).unwrap();
        let yr = relay_output(&p, &x(&a1, &b1), &x(&a2, &b2)).unwrap();
        prop_assert_eq!(yr, x(&relay_output(&p, &a1, &a2).unwrap(), &relay_output(&p, &b1, &b2).unwrap()));
        for j in [1, 2] {
            let y = rx_output(&p, j, &x(&a1, &b1), &x(&a2, &b2), &x(&ar, &br)).unwrap();
            let sep = x(&rx_output(&p, j, &a1, &a2, &ar).unwrap(), &rx_output(&p, j, &b1, &b2, &br).unwrap());
            prop_assert_eq!(y, sep);
        }
    }

    #[test]
    fn capacity_below_every_bound(p in params(12)) {
        let cap = ld_sum_capacity(&p) as i64;
        for e in ld_upper_bounds(&p).applicable() {
            prop_assert!(cap <= e.value, "{} {} = {} < {}", p, e.label.name(), e.value, cap);
        }
    }

    #[test]
    fn capacity_is_tight_when_source_stronger(p in covered(12)) {
        prop_assert_eq!(ld_sum_capacity(&p) as i64, ld_upper_bounds(&p).min());
    }

    #[test]
    fn capacity_scales_linearly(p in params(8), k in 1u32..5) {
        prop_assert_eq!(ld_sum_capacity(&p.scaled(k)), k * ld_sum_capacity(&p));
    }

    #[test]
    fn stronger_relay_links_never_hurt(p in params(10)) {
        let c = ld_sum_capacity(&p);
        prop_assert!(ld_sum_capacity(&LdParams::new(p.nd, p.nc, p.nr + 1, p.ns)) >= c);
        prop_assert!(ld_sum_capacity(&LdParams::new(p.nd, p.nc, p.nr, p.ns + 1)) >= c);
    }

    #[test]
    fn relay_never_hurts(p in params(12)) {
        prop_assert!(ld_sum_capacity(&p) >= ld_ic_sum_capacity(p.nd, p.nc));
        let off = LdParams::new(p.nd, p.nc, 0, 0);
        if p.nc != p.nd {
            prop_assert_eq!(ld_sum_capacity(&off), ld_ic_sum_capacity(p.nd, p.nc));
        }
    }

    #[test]
    fn table_allocations_meet_capacity(p in covered(14)) {
        let a = allocate_for(&p).unwrap();
        let v = check_allocation(&compile_constraints(a.scheme, &p), &a).unwrap();
        prop_assert!(v.is_empty(), "{} {}: {:?}", p, a.column, v);
        prop_assert_eq!(a.sum_rate(), qi(ld_sum_capacity(&p) as i64));
    }

    #[test]
    fn gdof_is_min_of_bounds(g in triple()) {
        let b = gdof_upper_bounds(&g);
        prop_assert_eq!(gdof(&g), b.min());
        prop_assert!(b.is_binding(b.binding));
        prop_assert!(gdof(&g) >= gdof_ic(g.alpha));
    }

    #[test]
    fn gdof_matches_scaled_ld(g in triple(), k in 1u32..4) {
        let n = g.denominator_lcm() as u32 * k;
        prop_assert_eq!(qi(ld_sum_capacity(&scale_to_ld(&g, n)) as i64), gdof(&g) * qi(n as i64));
    }

    #[test]
    fn ic_gdof_matches_ld_ic(n in 1u32..30, m in 0u32..60) {
        prop_assert_eq!(gdof_ic(q(m as i64, n as i64)) * qi(n as i64), qi(ld_ic_sum_capacity(n, m) as i64));
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let x = q(n, d);
        prop_assert_eq!(parse_rational(&x.to_string()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn optimum_is_feasible_and_equals_capacity(p in covered(5)) {
        let o = optimize_regime(&p).unwrap();
        prop_assert!(o.feasible);
        let cs = compile_constraints(o.allocation.scheme, &p);
        prop_assert!(check_allocation(&cs, &o.allocation).unwrap().is_empty());
        prop_assert_eq!(o.sum_rate, o.allocation.sum_rate());
        prop_assert_eq!(o.sum_rate, qi(ld_sum_capacity(&p) as i64));
    }

    #[test]
    fn simulation_delivers_every_bit(p in covered(7), seed in any::<u64>(), n in 3usize..8) {
        let a = allocate_for(&p).unwrap();
        let (trace, out) = simulate(a.scheme, &p, &a, n, seed).unwrap();
        prop_assert!(out.success, "{} {:?}", p, out.violated_step);
        prop_assert_eq!(Q::from_integer(out.delivered_total() as i64), expected_delivered(&a, n));
        prop_assert!(trace.ledger.iter().all(|e| e.ok()));
    }
}

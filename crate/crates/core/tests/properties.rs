use proptest::prelude::*;

use snumbers::blockspace::{block_norm, tail_e, BlockVector, SeqSpec, TailMethod};
use snumbers::domain::{packing_profile, CubeChain, DyadicDomain, PredicateDomain, Shape};
use snumbers::envelope::{build_envelope, fit_slope, rho_additive_bound, verify_exponent};
use snumbers::exponents::{
    finite_measure_exponent_eval, func_exponent, func_exponent_eval, seq_exponent, SNumberKind,
};
use snumbers::format::g12;
use snumbers::params::{int, limiting_exponent, rat, EmbeddingParams, ExtReal, Rational};
use snumbers::suite::weyl_representatives;
use snumbers::widths::{diag_l2_snumbers, gelfand_exact};

fn ext_strategy() -> impl Strategy<Value = ExtReal> {
    (0i128..=24).prop_map(|k| ExtReal::from_recip(rat(k, 12)).unwrap())
}

fn params_strategy() -> impl Strategy<Value = (EmbeddingParams, Rational)> {
    (
        (
            ext_strategy(),
            ext_strategy(),
            ext_strategy(),
            ext_strategy(),
        ),
        -6i128..=6,
        -12i128..=60,
        1u32..=3,
        0i128..=8,
    )
        .prop_map(|((p1, q1, p2, q2), s2, gap, d, bk)| {
            let s2 = rat(s2, 6);
            let s1 = s2 + rat(gap, 12);
            let params = EmbeddingParams::new((p1, q1, s1), (p2, q2, s2), d).unwrap();
            (params, int(d as i128) + rat(bk, 4))
        })
}

fn compact_spec() -> impl Strategy<Value = SeqSpec> {
    (
        (
            ext_strategy(),
            ext_strategy(),
            ext_strategy(),
            ext_strategy(),
        ),
        prop::sample::select(vec![rat(1, 1), rat(3, 2), rat(2, 1)]),
        1i128..=16,
    )
        .prop_map(|((p1, q1, p2, q2), b, extra)| {
            let delta = b * limiting_exponent(p1, p2) + rat(extra, 8);
            SeqSpec::geometric(p1, q1, p2, q2, delta, b).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ext_real_order_reverses_reciprocals(a in 0i128..=48, b in 0i128..=48) {
        let (x, y) = (ExtReal::from_recip(rat(a, 12)).unwrap(), ExtReal::from_recip(rat(b, 12)).unwrap());
        prop_assert_eq!(x.cmp(&y), b.cmp(&a));
        prop_assert_eq!(x.to_string().parse::<ExtReal>().unwrap(), x);
    }

    #[test]
    fn function_routes_agree((params, b) in params_strategy()) {
        for kind in SNumberKind::ALL {
            prop_assert!(func_exponent_eval(&params, b, kind).is_ok());
            prop_assert!(finite_measure_exponent_eval(&params, kind).is_ok());
        }
    }

    #[test]
    fn exact_exponents_are_ordered((params, b) in params_strategy()) {
        let beta: Vec<_> = SNumberKind::ALL
            .iter()
            .map(|&k| func_exponent(&params, b, k).unwrap().exact())
            .collect();
        if let [Some(a), Some(c), Some(d), Some(x)] = beta[..] {
            prop_assert!(x >= c && c >= a && d >= a);
        }
    }

    #[test]
    fn gelfand_matches_closed_form(n in 1u64..=200, k in 1u64..=200, i in 0usize..6) {
        let grid = [("1", "1"), ("2", "1"), ("4", "2"), ("inf", "1"), ("inf", "2"), ("3/2", "3/2")];
        let (p1, p2): (ExtReal, ExtReal) = (grid[i].0.parse().unwrap(), grid[i].1.parse().unwrap());
        let got = gelfand_exact(n, k, p1, p2).unwrap();
        let e = p2.recip_f64() - p1.recip_f64();
        let want = if k > n { 0.0 } else { ((n - k + 1) as f64).powf(e) };
        prop_assert!((got - want).abs() <= 1e-12 * want.max(1.0));
    }

    #[test]
    fn diagonal_snumbers_are_sorted_entries(mut w in prop::collection::vec(0.0f64..10.0, 1..60), k in 1usize..70) {
        w.sort_by(|a, b| b.total_cmp(a));
        let got = diag_l2_snumbers(&w, k).unwrap();
        prop_assert_eq!(got, w.get(k - 1).copied().unwrap_or(0.0));
    }

    #[test]
    fn diagonal_rho_additivity(
        a in prop::collection::vec(0.0f64..4.0, 1..40),
        shift in prop::collection::vec(0.0f64..4.0, 1..40),
        n in 1usize..20,
        k in 1usize..20,
    ) {
        // A and B diagonal in the same basis; s_m(A + B) is the m-th largest sum
        let len = a.len().min(shift.len());
        let sorted = |v: &[f64]| {
            let mut v = v.to_vec();
            v.sort_by(|x, y| y.total_cmp(x));
            v
        };
        let sum: Vec<f64> = (0..len).map(|i| a[i] + shift[i]).collect();
        let (sa, sb, ss) = (sorted(&a[..len]), sorted(&shift[..len]), sorted(&sum));
        let lhs = diag_l2_snumbers(&ss, n + k - 1).unwrap();
        let rhs = rho_additive_bound(
            diag_l2_snumbers(&sa, n).unwrap(),
            diag_l2_snumbers(&sb, k).unwrap(),
            Rational::from(1),
        );
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn tail_nonincreasing(spec in compact_spec(), n in 0u32..30) {
        let now = tail_e(&spec, n, TailMethod::ClosedForm).unwrap().upper_bound();
        let next = tail_e(&spec, n + 1, TailMethod::ClosedForm).unwrap().upper_bound();
        prop_assert!(next <= now);
        prop_assert!(now > 0.0 && now.is_finite());
    }

    #[test]
    fn block_norm_is_homogeneous(spec in compact_spec(), t in -4.0f64..4.0, seed in prop::collection::vec(-1.0f64..1.0, 16)) {
        let levels: Vec<Vec<f64>> = (0..4u32)
            .map(|j| (0..spec.block_size(j).unwrap() as usize).map(|i| seed[(i + j as usize) % 16]).collect())
            .collect();
        let x = BlockVector::new(&spec, levels).unwrap();
        let base = block_norm(&x, spec.p1, spec.q1, spec.delta);
        let scaled = block_norm(&x.scale(t), spec.p1, spec.q1, spec.delta);
        prop_assert!((scaled - t.abs() * base).abs() <= 1e-9 * base.max(1.0));
    }

    #[test]
    fn fit_recovers_power_laws(a in 0.1f64..4.0, c in 0.01f64..100.0) {
        let pts: Vec<(u64, f64)> = (2..12).map(|i| (1u64 << i, c * ((1u64 << i) as f64).powf(-a))).collect();
        let fit = fit_slope(&pts, 2).unwrap();
        prop_assert!((fit.slope + a).abs() < 1e-9);
    }

    #[test]
    fn g12_round_trips(x in prop::num::f64::NORMAL) {
        let back: f64 = g12(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-11 * x.abs());
    }

    #[test]
    fn predicate_counts_nest(d in 1u32..=3, shape in 0usize..3, j in 0u32..7) {
        let shape = [Shape::UnitCube, Shape::Ball, Shape::AxisGraph { power: 2 }][shape];
        let d = if matches!(shape, Shape::AxisGraph { .. }) { d.max(2) } else { d };
        let dom = PredicateDomain::new(d, shape, 16).unwrap();
        let (now, next) = (dom.count(j).unwrap(), dom.count(j + 1).unwrap());
        prop_assert!(next >= now << d as usize);
    }

    #[test]
    fn chain_counts_nest(d in 1u32..=3, bk in 0i128..=8, j in 0u32..30) {
        let b = int(d as i128) + rat(bk, 4);
        let chain = CubeChain::new(d, b, 40).unwrap();
        prop_assert!(chain.count(j + 1) >= chain.count(j) << d as usize);
    }
}

#[test]
fn bounded_domains_grow_like_the_dimension() {
    for d in 1..=3 {
        for shape in [Shape::UnitCube, Shape::Ball] {
            let dom = DyadicDomain::Predicate(PredicateDomain::new(d, shape, 16).unwrap());
            for j_max in 6..=9 {
                let prof = packing_profile(&dom, j_max).unwrap();
                assert!(
                    prof.b_hat >= d as f64 - 0.15,
                    "{shape:?} d={d} j_max={j_max}: {}",
                    prof.b_hat
                );
            }
        }
    }
}

#[test]
fn gelfand_envelopes_are_consistent() {
    // exact per-block widths below, rho-additive sums above: a true sandwich
    let specs = [
        ("inf", "1", int(2)),
        ("inf", "1", rat(3, 2)),
        ("4", "1", int(2)),
        ("inf", "2", int(1)),
    ];
    for (p1, p2, delta) in specs {
        let two = ExtReal::integer(2);
        let spec = SeqSpec::geometric(
            p1.parse().unwrap(),
            two,
            p2.parse().unwrap(),
            two,
            delta,
            int(1),
        )
        .unwrap();
        let env = build_envelope(&spec, SNumberKind::Gelfand, 4..=10, None).unwrap();
        for &(ku, up) in &env.points_upper {
            for &(kl, lo) in &env.points_lower {
                if ku <= kl {
                    assert!(
                        lo <= up * (1.0 + 1e-12),
                        "{p1} {p2} {delta}: lower {lo} at {kl} > upper {up} at {ku}"
                    );
                }
            }
        }
    }
}

#[test]
fn weyl_slopes_stable_when_levels_double() {
    let tol = 0.15;
    for (label, spec) in weyl_representatives() {
        let short = verify_exponent(&spec, SNumberKind::Weyl, 4..=10, None, tol).unwrap();
        let long = verify_exponent(&spec, SNumberKind::Weyl, 4..=16, None, tol).unwrap();
        assert!(
            (short.upper_slope - long.upper_slope).abs() < tol / 2.0,
            "({label}) upper"
        );
        assert!(
            (short.lower_slope - long.lower_slope).abs() < tol / 2.0,
            "({label}) lower"
        );
    }
}

#[test]
fn hilbert_tables_all_one() {
    let two = ExtReal::integer(2);
    let spec = SeqSpec::geometric(two, two, two, two, int(1), int(1)).unwrap();
    for kind in SNumberKind::ALL {
        assert_eq!(seq_exponent(&spec, kind).exact(), Some(int(1)));
    }
}

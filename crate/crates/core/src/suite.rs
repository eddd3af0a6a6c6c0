//! The acceptance checks, runnable from the CLI and from the test harness.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blockspace::{block_norm, tail_e, BlockVector, SeqSpec, TailMethod};
use crate::domain::{
    packing_profile, CubeChain, DyadicDomain, PredicateDomain, Shape, DEFAULT_MAX_DEPTH,
};
use crate::envelope::{verify_exponent, verify_hilbert};
use crate::error::{Error, Result};
use crate::exponents::{
    finite_measure_exponent_eval, func_exponent, func_exponent_eval, seq_exponent, ExponentResult,
    SNumberKind,
};
use crate::params::{
    func_compact, int, lambda, limiting_exponent, positive_part, rat, seq_compact, theta,
    theta_prime, to_f64, Compactness, EmbeddingParams, ExtReal, Rational,
};
use crate::widths::{gelfand_exact, operator_norm};

pub const DEFAULT_SEED: u64 = 20_240_917;

pub const HILBERT_TOL: f64 = 0.05;
pub const HILBERT_K_MAX: u64 = 4096;
pub const SWEEP_SIZE: usize = 2000;
pub const WEYL_TOL: f64 = 0.15;
pub const GELFAND_TOL: f64 = 0.1;
pub const TAIL_AGREEMENT: f64 = 1e-10;
pub const HEAD_BOUND_SLACK: f64 = 1e-12;
pub const TAIL_SPECS: usize = 50;
pub const HEAD_BOUND_VECTORS: usize = 100;
pub const CUBE_TOL: f64 = 0.15;
pub const CHAIN_TOL: f64 = 0.1;
pub const ENUMERATION_DEPTH: u32 = 6;
pub const THRESHOLD_STEP: (i128, i128) = (1, 1000);

/// `(id, title, runtime budget)`.
pub const CRITERIA: [(u32, &str, Option<Duration>); 10] = [
    (1, "hilbert oracle rate", Some(Duration::from_secs(1))),
    (
        2,
        "exponent table cross-equality",
        Some(Duration::from_secs(5)),
    ),
    (3, "s-number ordering", Some(Duration::from_secs(5))),
    (4, "gelfand formula exactness", None),
    (5, "weyl envelope slopes", Some(Duration::from_secs(60))),
    (6, "gelfand envelope slope", None),
    (7, "tail consistency", None),
    (8, "domain packing", Some(Duration::from_secs(10))),
    (9, "compactness boundary", None),
    (10, "limiting-case honesty", None),
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Option<Duration>,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let budget = match self.budget {
            Some(b) => format!(" budget {:.0}s", b.as_secs_f64()),
            None => String::new(),
        };
        write!(
            f,
            "{} {:>2} {}: {} [{:.3}s{budget}]",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64()
        )
    }
}

pub fn run(id: u32, seed: u64) -> Result<Outcome> {
    let &(_, title, budget) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::invalid(format!("no criterion {id} (expected 1..=10)")))?;
    let start = Instant::now();
    let (pass, detail) = match id {
        1 => hilbert(),
        2 => cross_equality(seed),
        3 => ordering(seed),
        4 => gelfand_widths(),
        5 => weyl_slopes(),
        6 => gelfand_slope(),
        7 => tails(seed),
        8 => packing(),
        9 => compactness(),
        _ => limiting(),
    };
    let elapsed = start.elapsed();
    let in_budget = budget.is_none_or(|b| elapsed <= b);
    let detail = if in_budget {
        detail
    } else {
        format!("{detail}; over budget")
    };
    Ok(Outcome {
        id,
        title,
        pass: pass && in_budget,
        detail,
        elapsed,
        budget,
    })
}

pub fn run_all(seed: u64) -> Vec<Outcome> {
    CRITERIA.iter().map(|c| run(c.0, seed).unwrap()).collect()
}

type Check = (bool, String);

fn e(s: &str) -> ExtReal {
    s.parse().unwrap()
}

fn r(k: i128, den: i128) -> ExtReal {
    ExtReal::from_recip(rat(k, den)).unwrap()
}

fn geometric(p1: ExtReal, p2: ExtReal, delta: Rational, b: Rational) -> SeqSpec {
    let two = ExtReal::integer(2);
    SeqSpec::geometric(p1, two, p2, two, delta, b).unwrap()
}

fn failure(what: impl fmt::Display) -> Check {
    (false, what.to_string())
}

fn hilbert() -> Check {
    let two = ExtReal::integer(2);
    let spec = SeqSpec::geometric(two, two, two, two, int(1), int(1)).unwrap();
    let report = match verify_hilbert(&spec, HILBERT_K_MAX, HILBERT_TOL) {
        Ok(r) => r,
        Err(err) => return failure(err),
    };
    let all_one = report
        .predicted
        .iter()
        .all(|(_, res)| res.exact() == Some(Rational::one()));
    let ok = report.pass && all_one;
    (
        ok,
        format!(
            "slope {:.4} over k in [16, {HILBERT_K_MAX}] (tol {HILBERT_TOL}); tables {}",
            report.fit.slope,
            if all_one { "all exactly 1" } else { "disagree" }
        ),
    )
}

/// A random function-space tuple on a twelfths grid.
fn random_params(rng: &mut ChaCha8Rng) -> (EmbeddingParams, Rational) {
    let ext = |rng: &mut ChaCha8Rng| r(rng.gen_range(0..=24), 12);
    let (p1, q1, p2, q2) = (ext(rng), ext(rng), ext(rng), ext(rng));
    let s2 = rat(rng.gen_range(-6..=6), 6);
    let s1 = s2 + rat(rng.gen_range(-12..=60), 12);
    let d = rng.gen_range(1..=3u32);
    let b = int(d as i128) + rat(rng.gen_range(0..=8), 4);
    (
        EmbeddingParams::new((p1, q1, s1), (p2, q2, s2), d).unwrap(),
        b,
    )
}

fn cross_equality(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = BTreeSet::new();
    let (mut evaluations, mut failures) = (0usize, Vec::new());
    for _ in 0..SWEEP_SIZE {
        let (params, b) = random_params(&mut rng);
        for kind in SNumberKind::ALL {
            evaluations += 2;
            match func_exponent_eval(&params, b, kind) {
                Ok(ev) => {
                    rows.insert((kind, ev.case));
                }
                Err(err) => failures.push(err.to_string()),
            }
            if let Err(err) = finite_measure_exponent_eval(&params, kind) {
                failures.push(err.to_string());
            }
        }
    }
    let detail = format!(
        "{SWEEP_SIZE} tuples, {evaluations} evaluations, {} table rows reached, {} failures",
        rows.len(),
        failures.len()
    );
    match failures.first() {
        None => (true, detail),
        Some(first) => (false, format!("{detail}; first: {first}")),
    }
}

fn ordering(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut violations) = (0usize, Vec::new());
    for _ in 0..SWEEP_SIZE {
        let (params, b) = random_params(&mut rng);
        let beta: Vec<_> = SNumberKind::ALL
            .iter()
            .map(|&k| func_exponent(&params, b, k).ok().and_then(|r| r.exact()))
            .collect();
        // ALL is approximation, gelfand, kolmogorov, weyl
        let (Some(a), Some(c), Some(d), Some(x)) = (beta[0], beta[1], beta[2], beta[3]) else {
            continue;
        };
        checked += 1;
        if !(x >= c && c >= a && d >= a) {
            violations.push(format!("{params:?} b={b}: a={a} c={c} d={d} x={x}"));
        }
    }
    let detail = format!(
        "{checked} all-exact tuples, {} violations",
        violations.len()
    );
    match violations.first() {
        None => (checked > 0, detail),
        Some(first) => (false, format!("{detail}; first: {first}")),
    }
}

fn gelfand_widths() -> Check {
    let spot = gelfand_exact(4, 2, ExtReal::INFINITY, ExtReal::integer(1));
    if spot != Ok(3.0) {
        return failure(format!("c_2(l_inf^4 -> l_1^4) = {spot:?}, expected 3"));
    }
    let grid = [
        ("1", "1"),
        ("2", "1"),
        ("2", "2"),
        ("inf", "1"),
        ("inf", "2"),
        ("inf", "inf"),
    ];
    let mut cases = 0usize;
    for (p1, p2) in grid {
        let (p1, p2) = (e(p1), e(p2));
        for n in 1..=64u64 {
            let norm = operator_norm(n, p1, p2);
            let mut prev = f64::INFINITY;
            for k in 1..=n {
                cases += 1;
                let c = match gelfand_exact(n, k, p1, p2) {
                    Ok(c) => c,
                    Err(err) => return failure(err),
                };
                if c > prev {
                    return failure(format!("not monotone at N={n}, k={k}, p1={p1}, p2={p2}"));
                }
                if k == 1 && (c - norm).abs() > 1e-12 * norm {
                    return failure(format!(
                        "c_1 = {c} but the norm is {norm} at N={n}, p1={p1}, p2={p2}"
                    ));
                }
                if k == n && c != 1.0 {
                    return failure(format!("c_N = {c} at N={n}, p1={p1}, p2={p2}"));
                }
                prev = c;
            }
        }
    }
    (true, format!("spot value 3; {cases} (N, k, p1, p2) cases"))
}

/// One Weyl spec per region of the sequence-space table.
pub fn weyl_representatives() -> Vec<(&'static str, SeqSpec)> {
    vec![
        ("a", geometric(e("1"), e("2"), int(2), int(1))),
        ("b", geometric(e("4"), e("8"), int(1), int(1))),
        ("c", geometric(e("1"), e("4"), int(2), int(1))),
        ("d", geometric(e("3"), e("1"), rat(5, 3), int(2))),
        ("e", geometric(e("4"), e("1"), int(2), int(1))),
        ("f", geometric(e("8"), e("4"), int(1), int(1))),
        ("g", geometric(e("3"), e("9/4"), rat(3, 5), int(2))),
    ]
}

fn weyl_slopes() -> Check {
    let mut parts = Vec::new();
    let mut ok = true;
    for (label, spec) in weyl_representatives() {
        match verify_exponent(&spec, SNumberKind::Weyl, 4..=10, None, WEYL_TOL) {
            Ok(rep) => {
                ok &= rep.pass;
                parts.push(format!(
                    "({label}) {} up {:.3} lo {:.3}{}",
                    rep.predicted,
                    rep.upper_slope,
                    rep.lower_slope,
                    if rep.pass { "" } else { " FAIL" }
                ));
            }
            Err(err) => {
                ok = false;
                parts.push(format!("({label}) {err}"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn gelfand_slope() -> Check {
    let spec = geometric(ExtReal::INFINITY, e("1"), int(2), int(1));
    match verify_exponent(&spec, SNumberKind::Gelfand, 4..=10, None, GELFAND_TOL) {
        Ok(rep) => (
            rep.pass,
            format!(
                "{} up {:.3} lo {:.3} (tol {GELFAND_TOL})",
                rep.predicted, rep.upper_slope, rep.lower_slope
            ),
        ),
        Err(err) => failure(err),
    }
}

fn random_tail_spec(rng: &mut ChaCha8Rng) -> SeqSpec {
    let ext = |rng: &mut ChaCha8Rng| r(rng.gen_range(0..=8), 4);
    let (p1, q1, p2, q2) = (ext(rng), ext(rng), ext(rng), ext(rng));
    let b = [int(1), rat(3, 2), rat(5, 3), int(2)][rng.gen_range(0..4)];
    // keeps the j <= 200 reference sum converged far below the agreement tolerance
    let qr = positive_part(q2.recip() - q1.recip());
    let delta = b * limiting_exponent(p1, p2) + rat(rng.gen_range(2..=8), 4) + qr / int(2);
    SeqSpec::geometric(p1, q1, p2, q2, delta, b).unwrap()
}

fn random_block_vector(rng: &mut ChaCha8Rng, spec: &SeqSpec, levels: u32) -> BlockVector {
    let blocks = (0..levels)
        .map(|j| {
            let m = spec.block_size(j).unwrap() as usize;
            let scale = (-(to_f64(spec.delta) * j as f64)).exp2() * rng.gen_range(0.0..2.0);
            match rng.gen_range(0..4) {
                0 => (0..m).map(|_| scale * rng.gen_range(-1.0..1.0)).collect(),
                1 => {
                    let mut v = vec![0.0; m];
                    v[rng.gen_range(0..m)] = scale;
                    v
                }
                2 => vec![scale; m],
                _ => vec![0.0; m],
            }
        })
        .collect();
    BlockVector::new(spec, blocks).unwrap()
}

fn tails(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7a11);
    let mut worst_gap = 0.0f64;
    let mut worst_ratio = 0.0f64;
    for _ in 0..TAIL_SPECS {
        let spec = random_tail_spec(&mut rng);
        for n in 0..=20 {
            let closed = tail_e(&spec, n, TailMethod::ClosedForm).unwrap();
            let partial = tail_e(&spec, n, TailMethod::PartialSum { upto: 200 }).unwrap();
            let gap = (closed.value - partial.value).abs() / closed.value.max(partial.value);
            worst_gap = worst_gap.max(gap);
            if gap > TAIL_AGREEMENT {
                return failure(format!(
                    "E_{n} closed {} vs partial {} at {spec:?}",
                    closed.value, partial.value
                ));
            }
            let next = tail_e(&spec, n + 1, TailMethod::ClosedForm).unwrap();
            // a sup over floored block sizes can tie between levels
            let strict = spec.qstar().recip() > Rational::zero() || spec.is_exact_geometric();
            let (now, later) = (closed.upper_bound(), next.upper_bound());
            if later > now || (strict && later == now) {
                return failure(format!("E_{} >= E_{n} at {spec:?}", n + 1));
            }
        }
        for _ in 0..HEAD_BOUND_VECTORS {
            let n = rng.gen_range(0..=2u32);
            let x = random_block_vector(&mut rng, &spec, n + 5);
            let lhs = block_norm(
                &x.without_head(n as usize),
                spec.p2,
                spec.q2,
                Rational::zero(),
            );
            let rhs = tail_e(&spec, n, TailMethod::ClosedForm)
                .unwrap()
                .upper_bound()
                * block_norm(&x, spec.p1, spec.q1, spec.delta);
            if lhs > rhs * (1.0 + HEAD_BOUND_SLACK) {
                return failure(format!(
                    "head-removal bound fails: {lhs} > {rhs} at N={n}, {spec:?}"
                ));
            }
            if rhs > 0.0 {
                worst_ratio = worst_ratio.max(lhs / rhs);
            }
        }
    }
    (
        true,
        format!(
            "{TAIL_SPECS} specs: worst relative closed/partial gap {worst_gap:.1e}, E_N decreasing (strictly unless a sup ties across floored blocks), \
             {HEAD_BOUND_VECTORS} vectors each with worst ratio {worst_ratio:.4}"
        ),
    )
}

fn packing() -> Check {
    let mut parts = Vec::new();
    for d in 1..=3 {
        let cube = DyadicDomain::Predicate(
            PredicateDomain::new(d, Shape::UnitCube, DEFAULT_MAX_DEPTH).unwrap(),
        );
        let prof = match packing_profile(&cube, 10) {
            Ok(p) => p,
            Err(err) => return failure(err),
        };
        if (prof.b_hat - d as f64).abs() > CUBE_TOL {
            return failure(format!("unit cube d={d}: b_hat {:.4}", prof.b_hat));
        }
        parts.push(format!("cube d={d} b_hat {:.3}", prof.b_hat));
    }
    let chain = DyadicDomain::Chain(CubeChain::new(2, int(3), 12).unwrap());
    let prof = match packing_profile(&chain, 12) {
        Ok(p) => p,
        Err(err) => return failure(err),
    };
    if (prof.b_hat - 3.0).abs() > CHAIN_TOL || !prof.bj_condition {
        return failure(format!(
            "chain d=2 b=3: b_hat {:.4}, bj_condition {}",
            prof.b_hat, prof.bj_condition
        ));
    }
    parts.push(format!("chain d=2 b=3 b_hat {:.3}", prof.b_hat));
    let oracles = [(1, int(1)), (2, int(3)), (2, rat(3, 2)), (3, int(3))];
    for (d, b) in oracles {
        let chain = CubeChain::new(d, b, ENUMERATION_DEPTH).unwrap();
        for j in 0..=ENUMERATION_DEPTH {
            let brute = match chain.count_by_enumeration(j) {
                Ok(n) => n,
                Err(err) => return failure(err),
            };
            if chain.count(j) != brute.into() {
                return failure(format!(
                    "chain d={d} b={b}: b_{j} closed {} vs enumerated {brute}",
                    chain.count(j)
                ));
            }
        }
    }
    parts.push(format!(
        "{} chains enumerated to j={ENUMERATION_DEPTH}",
        oracles.len()
    ));
    (true, parts.join("; "))
}

fn compactness() -> Check {
    let step = rat(THRESHOLD_STEP.0, THRESHOLD_STEP.1);
    let ps = ["1/2", "1", "2", "4", "inf"];
    let bs = [int(1), rat(3, 2), int(2)];
    let mut checked = 0usize;
    for p1 in ps {
        for p2 in ps {
            let (p1, p2) = (e(p1), e(p2));
            for b in bs {
                let t = b * limiting_exponent(p1, p2);
                let seq = |delta| seq_compact(&geometric(p1, p2, delta, b));
                if seq(t - step) != Compactness::NotCompact
                    || seq(t) != Compactness::NotCompact
                    || seq(t + step) != Compactness::Compact
                {
                    return failure(format!(
                        "sequence flip misplaced at p1={p1}, p2={p2}, b={b}"
                    ));
                }
                let func = |delta: Rational| {
                    let s1 = delta + p1.recip() - p2.recip();
                    let params =
                        EmbeddingParams::new((p1, e("2"), s1), (p2, e("2"), Rational::zero()), 1)
                            .unwrap();
                    func_compact(&params, b).unwrap()
                };
                let at = if t > Rational::zero() {
                    Compactness::Indeterminate
                } else {
                    Compactness::NotCompact
                };
                if func(t - step) != Compactness::NotCompact
                    || func(t) != at
                    || func(t + step) != Compactness::Compact
                {
                    return failure(format!(
                        "function-space flip misplaced at p1={p1}, p2={p2}, b={b}"
                    ));
                }
                checked += 1;
            }
        }
    }
    (
        true,
        format!("{checked} (p1, p2, b) thresholds, step {}", step),
    )
}

/// Tuples sitting exactly on one of the declared case boundaries.
pub fn boundary_tuples() -> Vec<(SNumberKind, SeqSpec)> {
    let half = rat(1, 2);
    let mut out = Vec::new();
    for k1 in 0..=24 {
        for k2 in 0..=24 {
            let (r1, r2) = (rat(k1, 12), rat(k2, 12));
            let (p1, p2) = (r(k1, 12), r(k2, 12));
            let c1 = positive_part(Rational::one() - r1);
            for b in [int(1), rat(3, 2), int(2), int(3)] {
                let mut push = |kind, delta: Rational| {
                    if delta > Rational::zero() {
                        out.push((kind, geometric(p1, p2, delta, b)));
                    }
                };
                let zero = Rational::zero();
                if zero < r1 && r1 < half && half <= r2 {
                    push(SNumberKind::Weyl, b * r2);
                }
                if zero < r1 && r1 < r2 && r2 < half {
                    if let Some(l) = lambda(p1, p2) {
                        push(SNumberKind::Weyl, b * l);
                    }
                }
                if r1 > r2 && r1 > half && r2 < half && !(r1 >= Rational::one() && r2 == zero) {
                    push(SNumberKind::Approximation, b * c1.max(r2));
                }
                if r1 > r2 && r2 >= half && r1 < Rational::one() {
                    if let Some(t) = theta(p1, p2) {
                        push(SNumberKind::Gelfand, b * t * c1);
                    }
                }
                if r1 > half && half > r2 && r1 < Rational::one() {
                    push(SNumberKind::Gelfand, b * c1);
                }
                if r1 > half && half > r2 && r2 > zero {
                    push(SNumberKind::Kolmogorov, b * r2);
                }
                if zero < r2 && r2 < r1 && r1 < half {
                    if let Some(t) = theta_prime(p1, p2) {
                        push(SNumberKind::Kolmogorov, b * t * r2);
                    }
                }
            }
        }
    }
    out
}

fn limiting() -> Check {
    let tuples = boundary_tuples();
    for (kind, spec) in &tuples {
        let seq = seq_exponent(spec, *kind);
        if !matches!(seq, ExponentResult::LimitingCase { .. }) {
            return failure(format!("{kind} at {spec:?} gave {seq}"));
        }
        // the same tuple as a function-space embedding with d = 1
        let s1 = spec.delta + spec.p1.recip() - spec.p2.recip();
        let params = EmbeddingParams::new(
            (spec.p1, spec.q1, s1),
            (spec.p2, spec.q2, Rational::zero()),
            1,
        )
        .unwrap();
        match func_exponent(&params, spec.b, *kind) {
            Ok(ExponentResult::LimitingCase { .. }) => {}
            other => {
                return failure(format!(
                    "{kind} function route at {params:?}, b={}: {other:?}",
                    spec.b
                ))
            }
        }
    }
    (
        !tuples.is_empty(),
        format!(
            "{} boundary tuples, all limiting on both routes",
            tuples.len()
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_generator_covers_every_label() {
        let kinds: BTreeSet<_> = boundary_tuples().iter().map(|(k, _)| *k).collect();
        assert_eq!(kinds.len(), 4);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run(11, DEFAULT_SEED).is_err());
    }
}

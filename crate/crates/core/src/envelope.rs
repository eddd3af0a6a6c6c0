//! Numerical lower and upper envelopes for s-numbers of block embeddings.
//!
//! Lower points come from factoring one block through the full embedding;
//! upper points split the embedding into blocks plus a tail and combine the
//! block estimates with ρ-additivity. All constants are 1, so only slopes in
//! log-log coordinates carry information.

use std::ops::RangeInclusive;

use num_traits::{One, Zero};

use crate::blockspace::{tail_e, truncate, SeqSpec, TailMethod};
use crate::error::{Error, Result};
use crate::exponents::{seq_exponent, seq_exponent_eval, ExponentResult, SNumberKind};
use crate::params::{half, int, lambda, to_f64, ExtReal, Rational};
use crate::widths::{
    diag_l2_snumbers, gelfand_exact, gelfand_kernel, operator_norm, root_index, weyl_bounds,
    weyl_region, weyl_upper_kernel, KRange, WeylRegion,
};

/// Largest `L·b` accepted, so every index up to level `L` fits in a `u64`.
pub const MAX_LOG2_INDEX: i128 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Allocation {
    /// `k_j = [M_j 2^{(L−j)ε}]`, then `max([M_L (j−L)^{−2}], 1)` beyond `L`.
    Full,
    /// `k_j = [M_j^{2/p1} 2^{(L−j)ε}]`, then `max([M_L^{2/p1} (j−L)^{−2}], 1)`.
    Root,
}

/// Index allocation and tail threshold for one parameter case.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plan {
    pub allocation: Allocation,
    /// exponent `t` in the tail target `2^{−Lδ} M_L^t`
    pub t: Rational,
    /// open interval of admissible `ε`
    pub eps_window: (Rational, Rational),
}

impl Plan {
    pub fn default_eps(&self) -> Rational {
        (self.eps_window.0 + self.eps_window.1) / int(2)
    }

    pub fn admits(&self, eps: Rational) -> bool {
        self.eps_window.0 < eps && eps < self.eps_window.1
    }
}

fn check_kind(kind: SNumberKind) -> Result<()> {
    match kind {
        SNumberKind::Weyl | SNumberKind::Gelfand => Ok(()),
        other => Err(Error::invalid(format!(
            "no finite-dimensional envelope data for {other} numbers"
        ))),
    }
}

fn check_gelfand(spec: &SeqSpec) -> Result<()> {
    if spec.p2 > spec.p1 {
        return Err(Error::invalid(
            "Gelfand envelopes use the exact formula, which needs p2 <= p1",
        ));
    }
    Ok(())
}

/// Predicted exponent, rejecting anything without a rate.
fn testable(spec: &SeqSpec, kind: SNumberKind) -> Result<ExponentResult> {
    let predicted = seq_exponent(spec, kind);
    match predicted {
        ExponentResult::NotCompact => Err(Error::NotCompact),
        ExponentResult::Exact { .. } | ExponentResult::Sandwich { .. } => Ok(predicted),
        other => Err(Error::Untestable(other)),
    }
}

/// The allocation scheme used for `spec`.
pub fn plan(spec: &SeqSpec, kind: SNumberKind) -> Result<Plan> {
    check_kind(kind)?;
    testable(spec, kind)?;
    let (r1, r2) = (spec.p1.recip(), spec.p2.recip());
    let b = spec.b;
    let u = spec.delta / b;
    let generic = (Rational::zero(), b);
    if kind == SNumberKind::Gelfand {
        check_gelfand(spec)?;
        return Ok(Plan {
            allocation: Allocation::Full,
            t: r2 - r1,
            eps_window: generic,
        });
    }
    let h = half();
    let plan = match weyl_region(spec.p1, spec.p2) {
        WeylRegion::Low => {
            let t = if r1 >= h && r2 >= h {
                r2 - r1
            } else if r1 <= h && r2 <= r1 {
                Rational::zero()
            } else {
                h - r1
            };
            Plan {
                allocation: Allocation::Full,
                t,
                eps_window: generic,
            }
        }
        WeylRegion::Mid if u < r2 => Plan {
            allocation: Allocation::Root,
            t: r2 - r1,
            eps_window: (int(2) * b * (u + r1 - r2), int(2) * b * r1),
        },
        WeylRegion::Mid => Plan {
            allocation: Allocation::Full,
            t: r2 - h,
            eps_window: generic,
        },
        WeylRegion::High => {
            let lam = lambda(spec.p1, spec.p2).expect("p1 > 2 in this region");
            if u < lam {
                Plan {
                    allocation: Allocation::Root,
                    t: r2 - r1,
                    eps_window: (b * (u + r1 - r2) / lam, int(2) * b * r1),
                }
            } else {
                Plan {
                    allocation: Allocation::Full,
                    t: Rational::zero(),
                    eps_window: generic,
                }
            }
        }
    };
    Ok(plan)
}

// ---------------------------------------------------------------------------
// Lower envelope

fn block_size_u64(spec: &SeqSpec, j: u32) -> Result<u64> {
    spec.block_size(j)
        .ok_or_else(|| Error::Overflow(format!("block size M_{j} exceeds u64")))
}

/// `2^{−jδ} c_k(id: ℓ_{p1}^{M_j} → ℓ_{p2}^{M_j})` for any `1 ≤ k`.
pub fn gelfand_lower_at(spec: &SeqSpec, j: u32, k: u64) -> Result<f64> {
    check_gelfand(spec)?;
    let m = block_size_u64(spec, j)?;
    Ok(spec.inverse_weight(j) * gelfand_exact(m, k, spec.p1, spec.p2)?)
}

/// The witness point of level `j`.
pub fn lower_point(spec: &SeqSpec, kind: SNumberKind, j: u32) -> Result<(u64, f64)> {
    check_kind(kind)?;
    let m = block_size_u64(spec, j)?;
    let w = spec.inverse_weight(j);
    let (p1, p2) = (spec.p1, spec.p2);
    if kind == SNumberKind::Gelfand {
        check_gelfand(spec)?;
        let k = m / 2;
        if k == 0 {
            return Ok((1, w * operator_norm(m, p1, p2)));
        }
        return Ok((k, w * gelfand_exact(m, k, p1, p2)?));
    }
    let k = match weyl_region(p1, p2) {
        WeylRegion::Low => m / 2,
        WeylRegion::Mid if spec.delta < spec.b * p2.recip() => root_index(m, p1),
        WeylRegion::Mid => m / 2,
        WeylRegion::High => m / 4,
    };
    let lower = if k == 0 {
        0.0
    } else {
        weyl_bounds(m, k, p1, p2).lower
    };
    if lower > 0.0 {
        Ok((k, w * lower))
    } else {
        Ok((1, w * operator_norm(m, p1, p2)))
    }
}

/// Witness points over `j_range`, sorted by `k` with duplicates merged and
/// values made nonincreasing (a lower bound at `k` also bounds every `k′ < k`).
pub fn lower_envelope(
    spec: &SeqSpec,
    kind: SNumberKind,
    j_range: RangeInclusive<u32>,
) -> Result<Vec<(u64, f64)>> {
    testable(spec, kind)?;
    let mut points = j_range
        .map(|j| lower_point(spec, kind, j))
        .collect::<Result<Vec<_>>>()?;
    points.sort_by_key(|&(k, _)| k);
    let mut merged: Vec<(u64, f64)> = Vec::with_capacity(points.len());
    for (k, v) in points {
        match merged.last_mut() {
            Some(last) if last.0 == k => last.1 = last.1.max(v),
            _ => merged.push((k, v)),
        }
    }
    for i in (0..merged.len().saturating_sub(1)).rev() {
        merged[i].1 = merged[i].1.max(merged[i + 1].1);
    }
    Ok(merged)
}

// ---------------------------------------------------------------------------
// Upper envelope

#[derive(Clone, Debug, PartialEq)]
pub struct UpperPoint {
    pub l: u32,
    pub n: u32,
    /// `Σ_{j ≤ N} k_j − N`: the tail takes index 1 and each further summand
    /// costs one index.
    pub k: u64,
    pub value: f64,
    pub tail: f64,
    pub eps: Rational,
    pub allocation: Allocation,
    /// `(k_j, bound on s_{k_j}(id_j))` for `j = 0..=N`.
    pub levels: Vec<(u64, f64)>,
}

fn per_level_upper(spec: &SeqSpec, kind: SNumberKind, m: f64, k: f64) -> f64 {
    let (p1, p2) = (spec.p1, spec.p2);
    match kind {
        SNumberKind::Gelfand => gelfand_kernel(m, k, p1, p2),
        _ => weyl_upper_kernel(m, k, KRange::float(m, k, p1), p1, p2),
    }
}

/// `log2 c` in the tail target `E_N ≤ c 2^{−Lδ} M_L^t`.
pub const TAIL_SLACK_LOG2: f64 = -3.0;

/// Smallest `N > L` (capped at `8L`; `N = 0` allowed for `L = 0`) with
/// `E_N ≤ c 2^{−Lδ} M_L^t`.
pub fn choose_n(spec: &SeqSpec, l: u32, t: Rational) -> Result<(u32, f64)> {
    let target_log2 = -(to_f64(spec.delta) * l as f64) + to_f64(t) * spec.block_size_log2(l);
    let cap = 8 * l;
    let mut n = if l == 0 { 0 } else { l + 1 };
    loop {
        let tail = tail_e(spec, n, TailMethod::ClosedForm)?.upper_bound();
        if tail <= (target_log2 + TAIL_SLACK_LOG2).exp2() || n >= cap {
            return Ok((n, tail));
        }
        n += 1;
    }
}

pub fn upper_envelope(
    spec: &SeqSpec,
    kind: SNumberKind,
    l: u32,
    eps: Rational,
) -> Result<UpperPoint> {
    let plan = plan(spec, kind)?;
    if !plan.admits(eps) {
        return Err(Error::invalid(format!(
            "eps = {eps} outside the admissible window ({}, {})",
            plan.eps_window.0, plan.eps_window.1
        )));
    }
    if spec.b * int(l as i128) > int(MAX_LOG2_INDEX) {
        return Err(Error::invalid(format!(
            "L*b = {} exceeds {MAX_LOG2_INDEX}",
            spec.b * int(l as i128)
        )));
    }
    let (n, tail) = choose_n(spec, l, plan.t)?;
    let rho = to_f64(spec.rho());
    let e = to_f64(eps);
    let root_exp = 2.0 * spec.p1.recip_f64();
    let base = |m: f64| match plan.allocation {
        Allocation::Full => m,
        Allocation::Root => m.powf(root_exp),
    };
    let m_l = spec.block_size_f64(l);

    let mut levels = Vec::with_capacity(n as usize + 1);
    let mut index_sum: f64 = 0.0;
    let mut acc = tail.powf(rho);
    for j in 0..=n {
        let m = spec.block_size_f64(j);
        let kj = if j <= l {
            (base(m) * (e * (l - j) as f64).exp2()).floor()
        } else {
            let i = (j - l) as f64;
            (base(m_l) / (i * i)).floor().max(1.0)
        }
        .max(1.0)
        // s_{M+1} vanishes on a rank-M block
        .min(m.floor() + 1.0);
        let bound = spec.inverse_weight(j) * per_level_upper(spec, kind, m, kj);
        acc += bound.powf(rho);
        index_sum += kj;
        levels.push((kj as u64, bound));
    }
    let k = index_sum - n as f64;
    if k >= 2f64.powi(63) {
        return Err(Error::Overflow(format!(
            "global index for L = {l} exceeds u64"
        )));
    }
    Ok(UpperPoint {
        l,
        n,
        k: k as u64,
        value: acc.powf(1.0 / rho),
        tail,
        eps,
        allocation: plan.allocation,
        levels,
    })
}

// ---------------------------------------------------------------------------
// Fitting and verification

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub k_range: (u64, u64),
    /// RMS residual in `log2` coordinates.
    pub residual: f64,
    pub points: usize,
}

pub const MIN_FIT_POINTS: usize = 5;

/// Least-squares line through `(log2 k, log2 value)` for `k ≥ max(k_min, 2)`.
pub fn fit_slope(points: &[(u64, f64)], k_min: u64) -> Result<SlopeFit> {
    let k_min = k_min.max(2);
    let usable: Vec<(u64, f64, f64)> = points
        .iter()
        .filter(|&&(k, v)| k >= k_min && v > 0.0 && v.is_finite())
        .map(|&(k, v)| (k, (k as f64).log2(), v.log2()))
        .collect();
    if usable.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewPoints {
            needed: MIN_FIT_POINTS,
            got: usable.len(),
        });
    }
    let n = usable.len() as f64;
    let mx = usable.iter().map(|p| p.1).sum::<f64>() / n;
    let my = usable.iter().map(|p| p.2).sum::<f64>() / n;
    let sxx: f64 = usable.iter().map(|p| (p.1 - mx).powi(2)).sum();
    let sxy: f64 = usable.iter().map(|p| (p.1 - mx) * (p.2 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("all fit points share one k"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (usable
        .iter()
        .map(|p| (p.2 - intercept - slope * p.1).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let kmin = usable.iter().map(|p| p.0).min().unwrap();
    let kmax = usable.iter().map(|p| p.0).max().unwrap();
    Ok(SlopeFit {
        slope,
        intercept,
        k_range: (kmin, kmax),
        residual,
        points: usable.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Copy)]
pub enum EnvelopeMode {
    OrderLevel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Envelope {
    pub kind: SNumberKind,
    pub points_lower: Vec<(u64, f64)>,
    pub points_upper: Vec<(u64, f64)>,
    pub rho: Rational,
    pub mode: EnvelopeMode,
    pub upper_details: Vec<UpperPoint>,
}

impl Envelope {
    /// Rows `(k, lower, upper)` over the union of both point sets.
    pub fn rows(&self) -> Vec<(u64, Option<f64>, Option<f64>)> {
        let mut ks: Vec<u64> = self
            .points_lower
            .iter()
            .chain(&self.points_upper)
            .map(|p| p.0)
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks.into_iter()
            .map(|k| {
                let find = |pts: &[(u64, f64)]| pts.iter().find(|p| p.0 == k).map(|p| p.1);
                (k, find(&self.points_lower), find(&self.points_upper))
            })
            .collect()
    }
}

/// Upper points sorted by `k`, duplicates reduced to the smaller bound and
/// made nonincreasing (a bound at `k` also bounds every `k′ > k`).
fn tidy_upper(mut pts: Vec<(u64, f64)>) -> Vec<(u64, f64)> {
    pts.sort_by_key(|p| p.0);
    let mut merged: Vec<(u64, f64)> = Vec::with_capacity(pts.len());
    for (k, v) in pts {
        match merged.last_mut() {
            Some(last) if last.0 == k => last.1 = last.1.min(v),
            _ => merged.push((k, v)),
        }
    }
    for i in 1..merged.len() {
        merged[i].1 = merged[i].1.min(merged[i - 1].1);
    }
    merged
}

pub fn build_envelope(
    spec: &SeqSpec,
    kind: SNumberKind,
    l_range: RangeInclusive<u32>,
    eps: Option<Rational>,
) -> Result<Envelope> {
    let plan = plan(spec, kind)?;
    let eps = eps.unwrap_or_else(|| plan.default_eps());
    let upper_details = l_range
        .clone()
        .map(|l| upper_envelope(spec, kind, l, eps))
        .collect::<Result<Vec<_>>>()?;
    let points_upper = tidy_upper(upper_details.iter().map(|u| (u.k, u.value)).collect());
    let points_lower = lower_envelope(spec, kind, l_range)?;
    Ok(Envelope {
        kind,
        points_lower,
        points_upper,
        rho: spec.rho(),
        mode: EnvelopeMode::OrderLevel,
        upper_details,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub predicted: ExponentResult,
    pub case: &'static str,
    pub upper_slope: f64,
    pub lower_slope: f64,
    pub upper_fit: SlopeFit,
    pub lower_fit: SlopeFit,
    pub tol: f64,
    pub pass: bool,
    pub envelope: Envelope,
}

/// The acceptance rule comparing fitted slopes with the predicted rates.
pub fn slopes_pass(
    predicted: &ExponentResult,
    upper_slope: f64,
    lower_slope: f64,
    tol: f64,
) -> bool {
    match predicted {
        ExponentResult::Exact { gamma } => {
            let b = to_f64(*gamma);
            (upper_slope + b).abs() <= tol && (lower_slope + b).abs() <= tol
        }
        ExponentResult::Sandwich {
            lower_exp,
            upper_exp,
        } => lower_slope >= -to_f64(*lower_exp) - tol && upper_slope <= -to_f64(*upper_exp) + tol,
        _ => false,
    }
}

pub fn verify_exponent(
    spec: &SeqSpec,
    kind: SNumberKind,
    l_range: RangeInclusive<u32>,
    eps: Option<Rational>,
    tol: f64,
) -> Result<Report> {
    let eval = seq_exponent_eval(spec, kind);
    testable(spec, kind)?;
    let envelope = build_envelope(spec, kind, l_range, eps)?;
    let upper_fit = fit_slope(&envelope.points_upper, 2)?;
    let lower_fit = fit_slope(&envelope.points_lower, 2)?;
    let pass = slopes_pass(&eval.result, upper_fit.slope, lower_fit.slope, tol);
    Ok(Report {
        predicted: eval.result,
        case: eval.case,
        upper_slope: upper_fit.slope,
        lower_slope: lower_fit.slope,
        upper_fit,
        lower_fit,
        tol,
        pass,
        envelope,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HilbertReport {
    /// predicted exponent per kind, in [`SNumberKind::ALL`] order
    pub predicted: Vec<(SNumberKind, ExponentResult)>,
    pub fit: SlopeFit,
    pub points: Vec<(u64, f64)>,
    pub levels: u32,
    pub tol: f64,
    pub pass: bool,
}

pub fn is_hilbert(spec: &SeqSpec) -> bool {
    let two = ExtReal::integer(2);
    [spec.p1, spec.q1, spec.p2, spec.q2]
        .iter()
        .all(|p| *p == two)
}

/// Log-spaced integers in `[lo, hi]`, about `per_octave` per doubling.
pub fn log_spaced(lo: u64, hi: u64, per_octave: u32) -> Vec<u64> {
    let mut out = Vec::new();
    let steps = ((hi as f64 / lo as f64).log2() * per_octave as f64).round() as u32;
    for i in 0..=steps {
        let k = (lo as f64 * (i as f64 / per_octave as f64).exp2()).round() as u64;
        let k = k.clamp(lo, hi);
        if out.last() != Some(&k) {
            out.push(k);
        }
    }
    out
}

/// Exact diagonal spectrum check: all four s-numbers coincide on Hilbert
/// spaces, so every table must predict the fitted slope.
pub fn verify_hilbert(spec: &SeqSpec, k_max: u64, tol: f64) -> Result<HilbertReport> {
    if !is_hilbert(spec) {
        return Err(Error::invalid(
            "the diagonal oracle needs p1 = q1 = p2 = q2 = 2",
        ));
    }
    if !spec.is_compact() {
        return Err(Error::NotCompact);
    }
    let k_min = 16u64;
    if k_max < 2 * k_min {
        return Err(Error::invalid(format!(
            "k_max = {k_max} must be at least {}",
            2 * k_min
        )));
    }
    let mut levels = 12u32;
    loop {
        let model = truncate(spec, levels)?;
        if model.dim >= 2 * k_max {
            break;
        }
        levels += 1;
    }
    let spectrum = truncate(spec, levels)?.spectrum();
    let points = log_spaced(k_min, k_max, 8)
        .into_iter()
        .map(|k| Ok((k, diag_l2_snumbers(&spectrum, k as usize)?)))
        .collect::<Result<Vec<_>>>()?;
    let fit = fit_slope(&points, k_min)?;
    let predicted: Vec<_> = SNumberKind::ALL
        .iter()
        .map(|&k| (k, seq_exponent(spec, k)))
        .collect();
    let beta = predicted[0].1.exact();
    let agree = predicted.iter().all(|(_, r)| r.exact() == beta);
    let pass = agree && beta.is_some_and(|b| (fit.slope + to_f64(b)).abs() <= tol);
    Ok(HilbertReport {
        predicted,
        fit,
        points,
        levels,
        tol,
        pass,
    })
}

/// `ρ`-additivity bound `s_{n+k−1}(A + B) ≤ (s_n(A)^ρ + s_k(B)^ρ)^{1/ρ}`.
pub fn rho_additive_bound(a: f64, b: f64, rho: Rational) -> f64 {
    if rho == Rational::one() {
        return a + b;
    }
    let r = to_f64(rho);
    (a.powf(r) + b.powf(r)).powf(1.0 / r)
}

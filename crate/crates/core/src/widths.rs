//! s-numbers of the identity `ℓ_{p1}^N → ℓ_{p2}^N`.
//!
//! Only the Gelfand formula and the Hilbert diagonal oracle are exact; the
//! Weyl bounds are order-level with every constant set to 1.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::params::{half, lambda, to_f64, ExtReal, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WidthMode {
    Exact,
    OrderLevel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WidthBound {
    pub lower: f64,
    /// `+∞` when no upper estimate applies.
    pub upper: f64,
    pub mode: WidthMode,
}

impl WidthBound {
    const ZERO: WidthBound = WidthBound {
        lower: 0.0,
        upper: 0.0,
        mode: WidthMode::OrderLevel,
    };
}

/// `c_k(id: ℓ_{p1}^N → ℓ_{p2}^N) = (N − k + 1)^{1/p2 − 1/p1}` for `p2 ≤ p1`.
pub fn gelfand_exact(n: u64, k: u64, p1: ExtReal, p2: ExtReal) -> Result<f64> {
    if p2 > p1 {
        return Err(Error::invalid(format!(
            "exact Gelfand numbers need p2 <= p1 (got p1 = {p1}, p2 = {p2})"
        )));
    }
    if k == 0 {
        return Err(Error::invalid("s-number index k starts at 1"));
    }
    if k > n {
        return Ok(0.0);
    }
    Ok(gelfand_kernel(n as f64, k as f64, p1, p2))
}

/// Float form of [`gelfand_exact`] for dimensions beyond `u64`; `k ≥ 1`.
pub(crate) fn gelfand_kernel(n: f64, k: f64, p1: ExtReal, p2: ExtReal) -> f64 {
    if k > n {
        return 0.0;
    }
    let e = to_f64(p2.recip() - p1.recip());
    (n - k + 1.0).powf(e)
}

/// `‖id: ℓ_{p1}^N → ℓ_{p2}^N‖ = s_1`.
pub fn operator_norm(n: u64, p1: ExtReal, p2: ExtReal) -> f64 {
    operator_norm_kernel(n as f64, p1, p2)
}

pub(crate) fn operator_norm_kernel(n: f64, p1: ExtReal, p2: ExtReal) -> f64 {
    if p1 <= p2 {
        1.0
    } else {
        n.powf(to_f64(p2.recip() - p1.recip()))
    }
}

/// Parameter regions of the finite-dimensional Weyl estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum WeylRegion {
    /// `p1 ≤ max(2, p2)`
    Low,
    /// `p2 ≤ 2 < p1`
    Mid,
    /// `2 < p2 < p1`
    High,
}

pub(crate) fn weyl_region(p1: ExtReal, p2: ExtReal) -> WeylRegion {
    let (r1, r2) = (p1.recip(), p2.recip());
    if r1 >= std::cmp::min(half(), r2) {
        WeylRegion::Low
    } else if r2 >= half() {
        WeylRegion::Mid
    } else {
        WeylRegion::High
    }
}

/// The common two-sided estimate in the region `p1 ≤ max(2, p2)`.
fn low_value(n: f64, k: f64, p1: ExtReal, p2: ExtReal) -> f64 {
    let (r1, r2) = (p1.recip(), p2.recip());
    let h = half();
    if r1 >= r2 && r2 >= h {
        k.powf(to_f64(r2 - r1))
    } else if r1 <= h && r2 <= r1 {
        1.0
    } else if r1 >= h && r2 <= h {
        k.powf(to_f64(h - r1))
    } else {
        n.powf(to_f64(r2 - r1))
    }
}

/// Which `k`-ranges a point falls in. Thresholds compared exactly when the
/// caller has integers.
#[derive(Clone, Copy, Debug)]
pub(crate) struct KRange {
    pub within_n: bool,
    pub half_n: bool,
    pub quarter_n: bool,
    /// `k ≤ N^{2/p1}`
    pub below_root: bool,
}

impl KRange {
    fn exact(n: u64, k: u64, p1: ExtReal) -> Self {
        KRange {
            within_n: k <= n,
            half_n: 2 * (k as u128) <= n as u128,
            quarter_n: 4 * (k as u128) <= n as u128,
            below_root: le_rational_power(k, n, p1.recip() * Rational::from_integer(2)),
        }
    }

    pub(crate) fn float(n: f64, k: f64, p1: ExtReal) -> Self {
        KRange {
            within_n: k <= n,
            half_n: 2.0 * k <= n,
            quarter_n: 4.0 * k <= n,
            below_root: k <= n.powf(2.0 * p1.recip_f64()),
        }
    }
}

/// `k ≤ n^{e}` for a rational `e ≥ 0`, decided as `k^c ≤ n^a` with `e = a/c`.
fn le_rational_power(k: u64, n: u64, e: Rational) -> bool {
    let (a, c) = (*e.numer(), *e.denom());
    if a == 0 {
        return k <= 1;
    }
    if a <= 256 && c <= 256 {
        let lhs = BigUint::from(k).pow(c as u32);
        let rhs = BigUint::from(n).pow(a as u32);
        return lhs <= rhs;
    }
    (c as f64) * (k as f64).log2() <= (a as f64) * (n as f64).log2()
}

pub(crate) fn weyl_upper_kernel(n: f64, k: f64, range: KRange, p1: ExtReal, p2: ExtReal) -> f64 {
    if !range.within_n {
        return 0.0;
    }
    let (r1, r2) = (p1.recip(), p2.recip());
    match weyl_region(p1, p2) {
        WeylRegion::Low => low_value(n, k, p1, p2),
        WeylRegion::Mid => {
            if range.below_root {
                n.powf(to_f64(r2 - r1))
            } else {
                n.powf(to_f64(r2)) * k.powf(-0.5)
            }
        }
        WeylRegion::High => {
            if range.below_root {
                n.powf(to_f64(r2 - r1))
            } else {
                let lam = to_f64(lambda(p1, p2).expect("p1 > 2 in this region"));
                (n / k).powf(lam)
            }
        }
    }
}

pub(crate) fn weyl_lower_kernel(n: f64, k: f64, range: KRange, p1: ExtReal, p2: ExtReal) -> f64 {
    if !range.within_n {
        return 0.0;
    }
    let (r1, r2) = (p1.recip(), p2.recip());
    match weyl_region(p1, p2) {
        WeylRegion::Low if range.half_n => low_value(n, k, p1, p2),
        WeylRegion::Low => 0.0,
        WeylRegion::Mid => {
            let a = if range.half_n {
                n.powf(to_f64(r2 - half()))
            } else {
                0.0
            };
            let b = if range.below_root {
                n.powf(to_f64(r2 - r1))
            } else {
                0.0
            };
            a.max(b)
        }
        WeylRegion::High if range.quarter_n => 1.0,
        WeylRegion::High => 0.0,
    }
}

/// Order-level bounds on `x_k(id: ℓ_{p1}^N → ℓ_{p2}^N)`.
pub fn weyl_bounds(n: u64, k: u64, p1: ExtReal, p2: ExtReal) -> WidthBound {
    if k == 0 || k > n {
        return WidthBound::ZERO;
    }
    let range = KRange::exact(n, k, p1);
    let (nf, kf) = (n as f64, k as f64);
    WidthBound {
        lower: weyl_lower_kernel(nf, kf, range, p1, p2),
        upper: weyl_upper_kernel(nf, kf, range, p1, p2),
        mode: WidthMode::OrderLevel,
    }
}

/// On a Hilbert space every s-number of a diagonal operator is its `k`-th
/// largest singular value.
pub fn diag_l2_snumbers(weights: &[f64], k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::invalid("s-number index k starts at 1"));
    }
    check_sorted(weights)?;
    Ok(weights.get(k - 1).copied().unwrap_or(0.0))
}

fn check_sorted(weights: &[f64]) -> Result<()> {
    for (i, w) in weights.iter().enumerate() {
        if w.is_nan() || *w < 0.0 {
            return Err(Error::invalid(format!("weight {i} is negative or NaN")));
        }
        if i > 0 && weights[i - 1] < *w {
            return Err(Error::Unsorted(i));
        }
    }
    Ok(())
}

/// `N^{2/p1}` rounded down, as used for the witness index of the middle regime.
pub fn root_index(n: u64, p1: ExtReal) -> u64 {
    let e = p1.recip() * Rational::from_integer(2);
    let approx = (n as f64).powf(to_f64(e)).floor() as u64;
    // correct float rounding against the exact comparison
    let mut k = approx.max(1);
    while k > 1 && !le_rational_power(k, n, e) {
        k -= 1;
    }
    while le_rational_power(k + 1, n, e) {
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    #[test]
    fn gelfand_examples() {
        assert_eq!(gelfand_exact(4, 2, e("inf"), e("1")).unwrap(), 3.0);
        assert_eq!(gelfand_exact(10, 3, e("7"), e("7")).unwrap(), 1.0);
        assert_eq!(gelfand_exact(4, 4, e("2"), e("1")).unwrap(), 1.0);
        assert_eq!(gelfand_exact(4, 5, e("2"), e("1")).unwrap(), 0.0);
        assert!(gelfand_exact(4, 1, e("1"), e("2")).is_err());
    }

    #[test]
    fn weyl_examples() {
        let w = weyl_bounds(64, 8, e("1"), e("2"));
        assert!((w.upper - 8f64.powf(-0.5)).abs() < 1e-15);
        assert!((w.lower - 8f64.powf(-0.5)).abs() < 1e-15);
        assert_eq!(w.mode, WidthMode::OrderLevel);

        let w = weyl_bounds(64, 100, e("1"), e("2"));
        assert_eq!((w.lower, w.upper), (0.0, 0.0));

        let w = weyl_bounds(4096, 16, e("4"), e("1"));
        assert!((w.lower - 512.0).abs() < 1e-9);
        assert!((w.upper - 512.0).abs() < 1e-9);
    }

    #[test]
    fn weyl_lower_vanishes_outside_stated_range() {
        assert_eq!(weyl_bounds(64, 33, e("1"), e("2")).lower, 0.0);
        assert_eq!(weyl_bounds(64, 17, e("8"), e("4")).lower, 0.0);
        assert_eq!(weyl_bounds(64, 16, e("8"), e("4")).lower, 1.0);
    }

    #[test]
    fn mid_region_upper_regimes_meet_at_root() {
        // N^{2/p1} = 64 for N = 4096, p1 = 4
        let (p1, p2) = (e("4"), e("1"));
        let n = 4096u64;
        let at = weyl_bounds(n, 64, p1, p2).upper;
        let second = (n as f64) * 64f64.powf(-0.5);
        assert!((at - second).abs() < 1e-9 * at);
        let after = weyl_bounds(n, 65, p1, p2).upper;
        assert!((after - (n as f64) * 65f64.powf(-0.5)).abs() < 1e-9);
    }

    #[test]
    fn operator_norm_examples() {
        assert_eq!(operator_norm(9, e("1"), e("2")), 1.0);
        assert_eq!(operator_norm(9, e("inf"), e("1")), 9.0);
        assert_eq!(operator_norm(1, e("inf"), e("1/2")), 1.0);
        assert_eq!(
            operator_norm(9, e("inf"), e("1")),
            gelfand_exact(9, 1, e("inf"), e("1")).unwrap()
        );
    }

    #[test]
    fn diag_examples() {
        let w = [1.0, 0.5, 0.5, 0.25];
        assert_eq!(diag_l2_snumbers(&w, 1).unwrap(), 1.0);
        assert_eq!(diag_l2_snumbers(&w, 4).unwrap(), 0.25);
        assert_eq!(diag_l2_snumbers(&w, 5).unwrap(), 0.0);
        assert_eq!(diag_l2_snumbers(&[0.5, 1.0], 1), Err(Error::Unsorted(1)));
    }

    #[test]
    fn root_index_is_exact() {
        assert_eq!(root_index(4096, e("4")), 64);
        assert_eq!(root_index(4095, e("4")), 63);
        assert_eq!(root_index(1000, e("inf")), 1);
        assert_eq!(root_index(27, e("3")), 9);
        assert_eq!(root_index(26, e("3")), 8);
    }
}

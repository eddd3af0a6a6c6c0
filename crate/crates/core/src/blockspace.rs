//! Weighted block sequence spaces `ℓ_q(β_j ℓ_p^{M_j})` with `β_j = 2^{jδ}`
//! and block sizes `M_j ∼ 2^{jb}`.

use num_bigint::BigUint;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::params::{
    limiting_exponent, positive_part, qstar, seq_compact, to_f64, Compactness, ExtReal, Rational,
};

/// `⌊2^e⌋` for a rational `e ≥ 0`.
pub(crate) fn floor_pow2(e: Rational) -> BigUint {
    let (num, den) = (*e.numer() as u64, *e.denom() as u32);
    let pow2 = BigUint::one() << num;
    if den == 1 {
        pow2
    } else {
        pow2.nth_root(den)
    }
}

/// How the block sizes `M_j` are generated from the growth rate `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockRule {
    /// `M_j = 2^{jb}` when `jb` is an integer, `⌊2^{jb}⌋` otherwise.
    ExactPow2,
    /// `M_j = max(1, ⌊c·2^{jb}⌋)`.
    Scaled(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeqSpec {
    pub p1: ExtReal,
    pub q1: ExtReal,
    pub p2: ExtReal,
    pub q2: ExtReal,
    pub delta: Rational,
    pub b: Rational,
    pub block_rule: BlockRule,
}

impl SeqSpec {
    pub fn new(
        (p1, q1): (ExtReal, ExtReal),
        (p2, q2): (ExtReal, ExtReal),
        delta: Rational,
        b: Rational,
        block_rule: BlockRule,
    ) -> Result<Self> {
        if !b.is_positive() {
            return Err(Error::invalid(format!(
                "block growth b = {b} must be positive"
            )));
        }
        if let BlockRule::Scaled(c) = block_rule {
            if !c.is_positive() {
                return Err(Error::invalid(format!(
                    "block scale c = {c} must be positive"
                )));
            }
        }
        Ok(SeqSpec {
            p1,
            q1,
            p2,
            q2,
            delta,
            b,
            block_rule,
        })
    }

    /// Geometric data with `M_j = 2^{jb}` (floored when `jb` is fractional).
    pub fn geometric(
        p1: ExtReal,
        q1: ExtReal,
        p2: ExtReal,
        q2: ExtReal,
        delta: Rational,
        b: Rational,
    ) -> Result<Self> {
        Self::new((p1, q1), (p2, q2), delta, b, BlockRule::ExactPow2)
    }

    /// `(1/p2 − 1/p1)_+`.
    pub fn limiting_exponent(&self) -> Rational {
        limiting_exponent(self.p1, self.p2)
    }

    /// Decay rate `δ − b(1/p2 − 1/p1)_+` of the terms defining `E_N`.
    pub fn tail_rate(&self) -> Rational {
        self.delta - self.b * self.limiting_exponent()
    }

    /// `ρ = min(1, p2, q2)`: the target space is a ρ-Banach space.
    pub fn rho(&self) -> Rational {
        let r = std::cmp::max(
            Rational::one(),
            std::cmp::max(self.p2.recip(), self.q2.recip()),
        );
        r.recip()
    }

    pub fn qstar(&self) -> ExtReal {
        qstar(self.q1, self.q2)
    }

    pub fn is_compact(&self) -> bool {
        seq_compact(self) == Compactness::Compact
    }

    /// True when every `M_j` is exactly `2^{jb}`.
    pub fn is_exact_geometric(&self) -> bool {
        self.block_rule == BlockRule::ExactPow2 && self.b.is_integer()
    }

    /// Exact block size `M_j` as an arbitrary-precision integer.
    pub fn block_size_big(&self, j: u32) -> BigUint {
        let jb = self.b * Rational::from_integer(j as i128);
        let (num, den) = (*jb.numer() as u64, *jb.denom() as u32);
        let pow2 = BigUint::one() << num;
        match self.block_rule {
            BlockRule::ExactPow2 => floor_pow2(jb),
            BlockRule::Scaled(c) => {
                // floor(c · 2^{A/C}) = floor(floor(c^C · 2^A)^{1/C})
                let cu = BigUint::from(*c.numer() as u128);
                let cv = BigUint::from(*c.denom() as u128);
                let inner = cu.pow(den) * pow2 / cv.pow(den);
                let m = if den == 1 { inner } else { inner.nth_root(den) };
                std::cmp::max(m, BigUint::one())
            }
        }
    }

    /// `M_j` when it fits in a `u64`.
    pub fn block_size(&self, j: u32) -> Option<u64> {
        self.block_size_big(j).to_u64()
    }

    pub fn block_size_f64(&self, j: u32) -> f64 {
        self.block_size_big(j).to_f64().unwrap_or(f64::INFINITY)
    }

    /// `log2 M_j`.
    pub fn block_size_log2(&self, j: u32) -> f64 {
        if self.is_exact_geometric() {
            return to_f64(self.b) * j as f64;
        }
        let m = self.block_size_big(j);
        let bits = m.bits();
        if bits <= 1000 {
            m.to_f64().unwrap().log2()
        } else {
            let shift = bits - 64;
            (&m >> shift).to_f64().unwrap().log2() + shift as f64
        }
    }

    /// `2^{−jδ}`, the inverse weight of level `j`.
    pub fn inverse_weight(&self, j: u32) -> f64 {
        (-(to_f64(self.delta) * j as f64)).exp2()
    }
}

/// A finitely supported element of a block sequence space; `levels[j]` holds
/// the `M_j` entries of block `j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockVector {
    levels: Vec<Vec<f64>>,
}

impl BlockVector {
    /// Checks that level `j` has exactly `M_j` entries.
    pub fn new(spec: &SeqSpec, levels: Vec<Vec<f64>>) -> Result<Self> {
        for (j, block) in levels.iter().enumerate() {
            let expected = spec
                .block_size(j as u32)
                .ok_or_else(|| Error::Overflow(format!("block size M_{j} exceeds u64")))?;
            if block.len() as u64 != expected {
                return Err(Error::invalid(format!(
                    "level {j} has {} entries, expected M_{j} = {expected}",
                    block.len()
                )));
            }
        }
        Ok(BlockVector { levels })
    }

    /// Blocks of arbitrary sizes, for norms that do not refer to a spec.
    pub fn from_levels(levels: Vec<Vec<f64>>) -> Self {
        BlockVector { levels }
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    /// `(id − Σ_{j ≤ n} id_j) x`: zero out levels `0..=n`.
    pub fn without_head(&self, n: usize) -> BlockVector {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(j, block)| {
                if j <= n {
                    vec![0.0; block.len()]
                } else {
                    block.clone()
                }
            })
            .collect();
        BlockVector { levels }
    }

    pub fn add(&self, other: &BlockVector) -> BlockVector {
        assert_eq!(self.levels.len(), other.levels.len());
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        BlockVector { levels }
    }

    pub fn scale(&self, t: f64) -> BlockVector {
        let levels = self
            .levels
            .iter()
            .map(|a| a.iter().map(|x| t * x).collect())
            .collect();
        BlockVector { levels }
    }

    /// Concatenation of all blocks.
    pub fn flatten(&self) -> Vec<f64> {
        self.levels.iter().flatten().copied().collect()
    }
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `ℓ_p` quasi-norm of a finite vector (max-modification at `p = ∞`).
pub fn lp_norm(values: &[f64], p: ExtReal) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    }
    let scale = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let pf = p.to_f64();
    let s = compensated_sum(values.iter().map(|x| (x.abs() / scale).powf(pf)));
    scale * s.powf(1.0 / pf)
}

/// `‖x | ℓ_q(2^{jδ} ℓ_p^{M_j})‖`.
pub fn block_norm(x: &BlockVector, p: ExtReal, q: ExtReal, delta: Rational) -> f64 {
    let d = to_f64(delta);
    let weighted: Vec<f64> = x
        .levels
        .iter()
        .enumerate()
        .map(|(j, block)| (d * j as f64).exp2() * lp_norm(block, p))
        .collect();
    lp_norm(&weighted, q)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailMethod {
    ClosedForm,
    /// Sum the terms `j = N+1..=upto` explicitly.
    PartialSum {
        upto: u32,
    },
}

/// A value of `E_N` together with a bound on the part that was not summed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailEstimate {
    pub value: f64,
    /// `ℓ_{q*}` quasi-norm bound on the omitted terms (zero when exact).
    pub omitted: f64,
    qstar_recip: f64,
}

impl TailEstimate {
    /// Certified upper bound on `E_N`.
    pub fn upper_bound(&self) -> f64 {
        if self.omitted == 0.0 {
            return self.value;
        }
        if self.qstar_recip == 0.0 {
            self.value.max(self.omitted)
        } else {
            let qs = 1.0 / self.qstar_recip;
            (self.value.powf(qs) + self.omitted.powf(qs)).powf(self.qstar_recip)
        }
    }
}

fn tail_term(spec: &SeqSpec, j: u32, e: f64) -> f64 {
    let log2 = -(to_f64(spec.delta) * j as f64) + e * spec.block_size_log2(j);
    log2.exp2()
}

/// Geometric bound on `(Σ_{j > from} (C·2^{−ja})^{q*})^{1/q*}` (or the sup).
fn geometric_tail(constant: f64, rate: f64, from: u32, qstar_recip: f64) -> f64 {
    let first = constant * (-(rate * (from as f64 + 1.0))).exp2();
    if qstar_recip == 0.0 {
        first
    } else {
        let qs = 1.0 / qstar_recip;
        first * (1.0 - (-(rate * qs)).exp2()).powf(-qstar_recip)
    }
}

/// `E_N = ‖{2^{−jδ} M_j^{(1/p2−1/p1)_+}}_{j>N} | ℓ_{q*}‖`.
pub fn tail_e(spec: &SeqSpec, n: u32, method: TailMethod) -> Result<TailEstimate> {
    if !spec.is_compact() {
        return Err(Error::NotCompact);
    }
    let e_rat = spec.limiting_exponent();
    let e = to_f64(e_rat);
    let rate = to_f64(spec.tail_rate());
    let qr = to_f64(spec.qstar().recip());
    // M_j <= max(1, c)·2^{jb} for both block rules
    let growth_const = match spec.block_rule {
        BlockRule::ExactPow2 => 1.0,
        BlockRule::Scaled(c) => to_f64(c).max(1.0),
    }
    .powf(e);

    match method {
        TailMethod::ClosedForm if spec.is_exact_geometric() || e_rat.is_zero() => {
            Ok(TailEstimate {
                value: geometric_tail(1.0, rate, n, qr),
                omitted: 0.0,
                qstar_recip: qr,
            })
        }
        TailMethod::ClosedForm => {
            // sum until the geometric remainder is below double precision
            let needed = (60.0 / rate).ceil() as u32 + 1;
            let upto = n + needed.max(1);
            let partial = partial_tail(spec, n, upto, e, qr);
            Ok(TailEstimate {
                value: partial,
                omitted: geometric_tail(growth_const, rate, upto, qr),
                qstar_recip: qr,
            })
        }
        TailMethod::PartialSum { upto } => {
            let upto = upto.max(n);
            Ok(TailEstimate {
                value: partial_tail(spec, n, upto, e, qr),
                omitted: geometric_tail(growth_const, rate, upto, qr),
                qstar_recip: qr,
            })
        }
    }
}

fn partial_tail(spec: &SeqSpec, n: u32, upto: u32, e: f64, qstar_recip: f64) -> f64 {
    let terms = (n + 1..=upto).map(|j| tail_term(spec, j, e));
    if qstar_recip == 0.0 {
        terms.fold(0.0, f64::max)
    } else {
        let qs = 1.0 / qstar_recip;
        compensated_sum(terms.map(|t| t.powf(qs))).powf(qstar_recip)
    }
}

/// One level of a truncated diagonal model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagonalLevel {
    pub j: u32,
    pub size: u64,
    /// `2^{−jδ}`
    pub weight: f64,
}

/// The finite section `Σ_{j ≤ J} id_j`, viewed as a diagonal operator with
/// entry `2^{−jδ}` repeated `M_j` times.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalModel {
    pub levels: Vec<DiagonalLevel>,
    pub dim: u64,
}

impl DiagonalModel {
    /// All diagonal entries, sorted nonincreasing.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .levels
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.weight, l.size as usize))
            .collect();
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }
}

pub fn truncate(spec: &SeqSpec, levels: u32) -> Result<DiagonalModel> {
    let mut out = Vec::with_capacity(levels as usize + 1);
    let mut dim: u64 = 0;
    for j in 0..=levels {
        let size = spec
            .block_size(j)
            .ok_or_else(|| Error::Overflow(format!("block size M_{j} exceeds u64")))?;
        dim = dim
            .checked_add(size)
            .ok_or_else(|| Error::Overflow("total dimension exceeds u64".into()))?;
        out.push(DiagonalLevel {
            j,
            size,
            weight: spec.inverse_weight(j),
        });
    }
    Ok(DiagonalModel { levels: out, dim })
}

/// `M_j^{(1/p2 − 1/p1)_+}` bound on the block embedding norm, used when
/// checking the tail bound numerically.
pub fn block_embedding_norm(spec: &SeqSpec, j: u32) -> f64 {
    let e = to_f64(positive_part(spec.p2.recip() - spec.p1.recip()));
    (e * spec.block_size_log2(j)).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{int, rat};

    fn e(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    fn geo(p1: &str, q1: &str, p2: &str, q2: &str, delta: Rational, b: Rational) -> SeqSpec {
        SeqSpec::geometric(e(p1), e(q1), e(p2), e(q2), delta, b).unwrap()
    }

    #[test]
    fn block_sizes() {
        let s = geo("2", "2", "2", "2", int(1), int(1));
        assert_eq!(
            (0..5).map(|j| s.block_size(j).unwrap()).collect::<Vec<_>>(),
            [1, 2, 4, 8, 16]
        );
        let s = geo("2", "2", "2", "2", int(1), rat(1, 2));
        // floor(2^{j/2}) except at even j
        assert_eq!(
            (0..7).map(|j| s.block_size(j).unwrap()).collect::<Vec<_>>(),
            [1, 1, 2, 2, 4, 5, 8]
        );
        let s = SeqSpec::new(
            (e("2"), e("2")),
            (e("2"), e("2")),
            int(1),
            int(2),
            BlockRule::Scaled(rat(3, 2)),
        )
        .unwrap();
        assert_eq!(
            (0..4).map(|j| s.block_size(j).unwrap()).collect::<Vec<_>>(),
            [1, 6, 24, 96]
        );
        let s = SeqSpec::new(
            (e("2"), e("2")),
            (e("2"), e("2")),
            int(1),
            int(1),
            BlockRule::Scaled(rat(1, 3)),
        )
        .unwrap();
        assert_eq!(
            (0..4).map(|j| s.block_size(j).unwrap()).collect::<Vec<_>>(),
            [1, 1, 1, 2]
        );
        let big = geo("2", "2", "2", "2", int(1), int(3));
        assert_eq!(big.block_size(30), None);
        assert_eq!(big.block_size_log2(30), 90.0);
    }

    #[test]
    fn rejects_bad_growth() {
        assert!(SeqSpec::geometric(e("2"), e("2"), e("2"), e("2"), int(1), int(0)).is_err());
    }

    #[test]
    fn rho_is_min_of_one_p2_q2() {
        assert_eq!(geo("2", "2", "1/2", "3", int(1), int(1)).rho(), rat(1, 2));
        assert_eq!(geo("2", "2", "4", "inf", int(1), int(1)).rho(), int(1));
        assert_eq!(geo("2", "2", "4", "1/3", int(1), int(1)).rho(), rat(1, 3));
    }

    #[test]
    fn block_norm_examples() {
        let x = BlockVector::from_levels(vec![vec![3.0, 4.0]]);
        assert!((block_norm(&x, e("2"), e("1"), rat(7, 3)) - 5.0).abs() < 1e-14);

        let x = BlockVector::from_levels(vec![vec![1.0], vec![1.0, 0.0]]);
        assert!((block_norm(&x, e("inf"), e("inf"), int(1)) - 2.0).abs() < 1e-14);

        let x = BlockVector::from_levels(vec![vec![1.0], vec![1.0, 1.0]]);
        assert!((block_norm(&x, e("1"), e("2"), int(1)) - 17f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn block_vector_checks_sizes() {
        let s = geo("2", "2", "2", "2", int(1), int(1));
        assert!(BlockVector::new(&s, vec![vec![1.0], vec![1.0, 2.0]]).is_ok());
        assert!(BlockVector::new(&s, vec![vec![1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn tail_examples() {
        let s = geo("1", "1", "2", "inf", int(1), int(1));
        let t = tail_e(&s, 3, TailMethod::ClosedForm).unwrap();
        assert!((t.value - 0.0625).abs() < 1e-15);

        // q1 = 2, q2 = 1: q* = 2
        let s = geo("1", "2", "2", "1", int(1), int(1));
        let t = tail_e(&s, 0, TailMethod::ClosedForm).unwrap();
        let oracle: f64 = (1..60).map(|j| 4f64.powi(-j)).sum::<f64>().sqrt();
        assert!((t.value - oracle).abs() < 1e-15);
        assert!((t.value - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tail_rejects_non_compact() {
        let s = geo("2", "2", "1", "2", rat(1, 2), int(1));
        assert_eq!(
            tail_e(&s, 0, TailMethod::ClosedForm),
            Err(Error::NotCompact)
        );
    }

    #[test]
    fn tail_non_geometric_rule_brackets_truth() {
        // b = 1/2 is not integral, so the closed form sums the true terms
        let s = geo("2", "1", "1", "1/2", int(1), rat(1, 2));
        let t = tail_e(&s, 2, TailMethod::ClosedForm).unwrap();
        let long = tail_e(&s, 2, TailMethod::PartialSum { upto: 400 }).unwrap();
        assert!((t.value - long.value).abs() <= 1e-12 * long.value);
        assert!(t.upper_bound() >= long.value);
        let short = tail_e(&s, 2, TailMethod::PartialSum { upto: 6 }).unwrap();
        assert!(short.value < long.value);
        assert!(short.upper_bound() >= long.value);
    }

    #[test]
    fn truncate_examples() {
        let s = geo("2", "2", "2", "2", int(1), int(1));
        let m = truncate(&s, 2).unwrap();
        assert_eq!(m.dim, 7);
        let got: Vec<(u32, u64, f64)> = m.levels.iter().map(|l| (l.j, l.size, l.weight)).collect();
        assert_eq!(got, [(0, 1, 1.0), (1, 2, 0.5), (2, 4, 0.25)]);

        let s = geo("2", "2", "2", "2", int(1), int(2));
        let m = truncate(&s, 1).unwrap();
        assert_eq!(m.dim, 5);
        assert_eq!(m.levels[1].size, 4);
    }

    #[test]
    fn truncated_spectrum_is_dyadic_staircase() {
        let s = geo("2", "2", "2", "2", int(1), int(1));
        let spec = truncate(&s, 9).unwrap().spectrum();
        assert_eq!(spec.len(), (1 << 10) - 1);
        for (i, v) in spec.iter().enumerate() {
            let k = i as u64 + 1;
            let floor_log2 = 63 - k.leading_zeros();
            assert_eq!(*v, (-(floor_log2 as f64)).exp2(), "k = {k}");
        }
    }
}

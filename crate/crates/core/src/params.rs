//! Exact parameter arithmetic.
//!
//! Integrability exponents `p, q ∈ (0, ∞]` are stored through their
//! reciprocals so that `∞` is the ordinary rational `0` and every case
//! boundary used by the exponent tables is an exact rational comparison.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::blockspace::SeqSpec;
use crate::error::{Error, Result};

/// Exact rational used for every parameter and derived quantity.
pub type Rational = Ratio<i128>;

/// Largest numerator or denominator accepted from text input.
const PARSE_LIMIT: i128 = 1_000_000_000_000;

pub fn rat(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

pub fn int(n: i128) -> Rational {
    Rational::from_integer(n)
}

/// `(x)_+ = max(x, 0)`.
pub fn positive_part(x: Rational) -> Rational {
    if x.is_negative() {
        Rational::zero()
    } else {
        x
    }
}

pub fn to_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.25` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let err = |reason: &str| Error::Parse {
        input: s.to_string(),
        reason: reason.to_string(),
    };
    if t.is_empty() {
        return Err(err("empty value"));
    }
    let parse_int = |x: &str| -> Result<i128> {
        let v: i128 = x.trim().parse().map_err(|_| err("not a number"))?;
        if v.abs() > PARSE_LIMIT {
            return Err(err("component too large"));
        }
        Ok(v)
    };
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_int(n)?;
        let d = parse_int(d)?;
        if d == 0 {
            return Err(err("zero denominator"));
        }
        return Ok(rat(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 12 {
            return Err(err("malformed decimal"));
        }
        let negative = whole.trim_start().starts_with('-');
        let whole_val = if whole.trim().is_empty() || whole.trim() == "-" {
            0
        } else {
            parse_int(whole)?
        };
        let scale = 10i128.pow(frac.len() as u32);
        let frac_val: i128 = frac.parse().map_err(|_| err("malformed decimal"))?;
        let magnitude = whole_val.abs() * scale + frac_val;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(rat(num, scale));
    }
    Ok(int(parse_int(t)?))
}

/// A parameter in `(0, ∞]`, held as its exact reciprocal.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExtReal {
    recip: Rational,
}

impl ExtReal {
    pub const INFINITY: ExtReal = ExtReal {
        recip: Ratio::new_raw(0, 1),
    };

    /// Builds the parameter whose reciprocal is `recip` (`0` gives `∞`).
    pub fn from_recip(recip: Rational) -> Result<Self> {
        if recip.is_negative() {
            return Err(Error::invalid(format!(
                "reciprocal {recip} must be nonnegative"
            )));
        }
        Ok(ExtReal { recip })
    }

    pub fn new(value: Rational) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::invalid(format!("{value} is not in (0, inf]")));
        }
        Ok(ExtReal {
            recip: value.recip(),
        })
    }

    pub fn integer(n: i128) -> Self {
        assert!(n > 0, "ExtReal::integer needs a positive value");
        ExtReal { recip: rat(1, n) }
    }

    pub fn ratio(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        Self::new(rat(num, den))
    }

    pub fn recip(&self) -> Rational {
        self.recip
    }

    pub fn is_infinite(&self) -> bool {
        self.recip.is_zero()
    }

    /// The finite value, or `None` for `∞`.
    pub fn value(&self) -> Option<Rational> {
        (!self.is_infinite()).then(|| self.recip.recip())
    }

    pub fn to_f64(&self) -> f64 {
        match self.value() {
            Some(v) => to_f64(v),
            None => f64::INFINITY,
        }
    }

    pub fn recip_f64(&self) -> f64 {
        to_f64(self.recip)
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        other.recip.cmp(&self.recip)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => f.write_str("inf"),
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtReal({self})")
    }
}

impl FromStr for ExtReal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "infinity" | "∞" => Ok(ExtReal::INFINITY),
            t => ExtReal::new(parse_rational(t)?).map_err(|e| Error::Parse {
                input: s.to_string(),
                reason: e.to_string(),
            }),
        }
    }
}

/// `q*` with `1/q* = (1/q2 − 1/q1)_+`.
pub fn qstar(q1: ExtReal, q2: ExtReal) -> ExtReal {
    ExtReal {
        recip: positive_part(q2.recip - q1.recip),
    }
}

/// Conjugate exponent with `1/p′ = (1 − 1/p)_+`, so every `p ≤ 1` maps to `∞`.
pub fn conjugate(p: ExtReal) -> ExtReal {
    ExtReal {
        recip: positive_part(Rational::one() - p.recip),
    }
}

/// `(1/p2 − 1/p1)_+`, the block-size exponent in the compactness criterion.
pub fn limiting_exponent(p1: ExtReal, p2: ExtReal) -> Rational {
    positive_part(p2.recip - p1.recip)
}

/// The seven-tuple describing `A^{s1}_{p1,q1}(Ω) ↪ A^{s2}_{p2,q2}(Ω)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingParams {
    pub p1: ExtReal,
    pub q1: ExtReal,
    pub s1: Rational,
    pub p2: ExtReal,
    pub q2: ExtReal,
    pub s2: Rational,
    pub d: u32,
}

impl EmbeddingParams {
    pub fn new(
        (p1, q1, s1): (ExtReal, ExtReal, Rational),
        (p2, q2, s2): (ExtReal, ExtReal, Rational),
        d: u32,
    ) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension d must be at least 1"));
        }
        Ok(EmbeddingParams {
            p1,
            q1,
            s1,
            p2,
            q2,
            s2,
            d,
        })
    }

    pub fn dim(&self) -> Rational {
        int(self.d as i128)
    }

    /// `δ = s1 − s2 − d(1/p1 − 1/p2)`.
    pub fn delta(&self) -> Rational {
        self.s1 - self.s2 - self.dim() * (self.p1.recip - self.p2.recip)
    }

    pub fn smoothness_gap(&self) -> Rational {
        self.s1 - self.s2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivedParams {
    pub delta: Rational,
    pub pstar: ExtReal,
    pub qstar: ExtReal,
    pub p1conj: ExtReal,
    /// `p` with `1/p = 1/min(p1′, p2)`.
    pub p_aux: ExtReal,
    /// Defined only for `p1 > 2`.
    pub lambda: Option<Rational>,
    /// Defined only for `p1 < 2`.
    pub theta: Option<Rational>,
    /// Defined only for `p2 > 2`.
    pub theta_prime: Option<Rational>,
    pub sigma_p1: Rational,
    pub sigma_p1q1: Rational,
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// `λ = (1/p2 − 1/p1)/(1 − 2/p1)` for `p1 > 2`.
pub fn lambda(p1: ExtReal, p2: ExtReal) -> Option<Rational> {
    let r1 = p1.recip;
    (r1 < half()).then(|| (p2.recip - r1) / (Rational::one() - int(2) * r1))
}

/// `θ = (1/p1 − 1/p2)/(1/p1 − 1/2)` for `p1 < 2`.
pub fn theta(p1: ExtReal, p2: ExtReal) -> Option<Rational> {
    let r1 = p1.recip;
    (r1 > half()).then(|| (r1 - p2.recip) / (r1 - half()))
}

/// `θ′ = (1/p1 − 1/p2)/(1/2 − 1/p2)` for `p2 > 2`.
pub fn theta_prime(p1: ExtReal, p2: ExtReal) -> Option<Rational> {
    let r2 = p2.recip;
    (r2 < half()).then(|| (p1.recip - r2) / (half() - r2))
}

/// `1/p = 1/min(p1′, p2)`.
pub fn aux_exponent(p1: ExtReal, p2: ExtReal) -> ExtReal {
    std::cmp::min(conjugate(p1), p2)
}

pub fn derive(params: &EmbeddingParams, b: Rational) -> Result<DerivedParams> {
    if b < params.dim() {
        return Err(Error::PackingBelowDimension {
            b: b.to_string(),
            d: params.d,
        });
    }
    let (p1, p2) = (params.p1, params.p2);
    let d = params.dim();
    Ok(DerivedParams {
        delta: params.delta(),
        pstar: ExtReal {
            recip: limiting_exponent(p1, p2),
        },
        qstar: qstar(params.q1, params.q2),
        p1conj: conjugate(p1),
        p_aux: aux_exponent(p1, p2),
        lambda: lambda(p1, p2),
        theta: theta(p1, p2),
        theta_prime: theta_prime(p1, p2),
        sigma_p1: d * positive_part(p1.recip - Rational::one()),
        sigma_p1q1: d * positive_part(std::cmp::max(p1.recip, params.q1.recip) - Rational::one()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scale {
    B,
    F,
}

/// Which of the three branches defining `B̄^s_{p,q}(Ω)` / `F̄^s_{p,q}(Ω)` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `s > σ_p` (or `σ_{p,q}`): the space of distributions supported in `Ω̄`.
    Tilde,
    /// `s = 0`, `1 < p < ∞`, `1 ≤ q ≤ ∞`: restrictions of `A^0_{p,q}`.
    PlainZero,
    /// `s < 0`, `p < ∞`: restrictions of `A^s_{p,q}`.
    PlainNegative,
    Uncovered,
}

pub fn regime_classify(
    p: ExtReal,
    q: ExtReal,
    s: Rational,
    d: u32,
    scale: Scale,
) -> Result<Regime> {
    if scale == Scale::F && p.is_infinite() {
        return Err(Error::invalid("F-spaces require p < inf"));
    }
    let dim = int(d as i128);
    let one = Rational::one();
    let sigma = match scale {
        Scale::B => dim * positive_part(p.recip - one),
        Scale::F => dim * positive_part(std::cmp::max(p.recip, q.recip) - one),
    };
    let regime = if s > sigma {
        Regime::Tilde
    } else if s.is_zero() && p.recip < one && !p.is_infinite() && q.recip <= one {
        Regime::PlainZero
    } else if s.is_negative() && !p.is_infinite() {
        Regime::PlainNegative
    } else {
        Regime::Uncovered
    };
    Ok(regime)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Compactness {
    Compact,
    NotCompact,
    /// The compactness criterion leaves the borderline case open.
    Indeterminate,
}

impl fmt::Display for Compactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Compactness::Compact => "compact",
            Compactness::NotCompact => "not-compact",
            Compactness::Indeterminate => "indeterminate",
        })
    }
}

/// Compactness of `ℓ_{q1}(2^{jδ}ℓ_{p1}^{M_j}) → ℓ_{q2}(ℓ_{p2}^{M_j})` with
/// `M_j ∼ 2^{jb}`: compact iff `δ > b(1/p2 − 1/p1)_+`.
pub fn seq_compact(spec: &SeqSpec) -> Compactness {
    if spec.delta > spec.b * limiting_exponent(spec.p1, spec.p2) {
        Compactness::Compact
    } else {
        Compactness::NotCompact
    }
}

/// Compactness of the function-space embedding on a domain with box-packing
/// constant `b`.
pub fn func_compact(params: &EmbeddingParams, b: Rational) -> Result<Compactness> {
    let derived = derive(params, b)?;
    let threshold = b * derived.pstar.recip();
    let delta = derived.delta;
    let status = if delta > threshold {
        Compactness::Compact
    } else if derived.pstar.is_infinite() || delta < threshold {
        Compactness::NotCompact
    } else {
        Compactness::Indeterminate
    };
    Ok(status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blockspace::SeqSpec;

    fn e(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    fn params(p1: &str, p2: &str, s1: Rational, s2: Rational, d: u32) -> EmbeddingParams {
        EmbeddingParams::new((e(p1), e("2"), s1), (e(p2), e("2"), s2), d).unwrap()
    }

    #[test]
    fn parses_rationals_and_infinity() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-4").unwrap(), int(-4));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(e("inf").is_infinite());
        assert_eq!(e("1/2").recip(), int(2));
        assert!("0".parse::<ExtReal>().is_err());
        assert!("-2".parse::<ExtReal>().is_err());
    }

    #[test]
    fn ordering_follows_values() {
        assert!(e("1") < e("2"));
        assert!(e("2") < e("inf"));
        assert!(e("1/2") < e("1"));
        assert_eq!(e("4/2"), e("2"));
    }

    #[test]
    fn derive_examples() {
        let d = derive(&params("1", "2", int(3), int(1), 1), int(1)).unwrap();
        assert_eq!(d.delta, rat(3, 2));

        let d = derive(&params("2", "2", int(0), int(0), 1), int(1)).unwrap();
        assert_eq!(d.delta, int(0));
        assert!(d.pstar.is_infinite());

        let d = derive(&params("8", "4", int(0), int(0), 1), int(1)).unwrap();
        assert_eq!(d.lambda, Some(rat(1, 6)));
        assert_eq!(d.theta, None);
        assert_eq!(
            d.theta_prime,
            Some((rat(1, 8) - rat(1, 4)) / (rat(1, 2) - rat(1, 4)))
        );
    }

    #[test]
    fn derive_marks_vanishing_denominators_undefined() {
        let d = derive(&params("2", "2", int(1), int(0), 1), int(1)).unwrap();
        assert_eq!(d.lambda, None);
        assert_eq!(d.theta, None);
        assert_eq!(d.theta_prime, None);
    }

    #[test]
    fn derive_rejects_b_below_d() {
        let err = derive(&params("2", "2", int(1), int(0), 3), int(2)).unwrap_err();
        assert!(matches!(err, Error::PackingBelowDimension { d: 3, .. }));
    }

    #[test]
    fn qstar_examples() {
        assert!(qstar(e("1"), e("2")).is_infinite());
        assert_eq!(qstar(e("4"), e("2")), e("4"));
        assert_eq!(qstar(e("inf"), e("3")), e("3"));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate(e("2")), e("2"));
        assert_eq!(conjugate(e("4")), e("4/3"));
        assert!(conjugate(e("1/2")).is_infinite());
        assert!(conjugate(e("1")).is_infinite());
        assert_eq!(conjugate(e("inf")), e("1"));
    }

    #[test]
    fn regime_examples() {
        assert_eq!(
            regime_classify(e("1/2"), e("1"), int(2), 1, Scale::B).unwrap(),
            Regime::Tilde
        );
        assert_eq!(
            regime_classify(e("2"), e("2"), int(0), 3, Scale::B).unwrap(),
            Regime::PlainZero
        );
        assert_eq!(
            regime_classify(e("2"), e("2"), int(-1), 2, Scale::B).unwrap(),
            Regime::PlainNegative
        );
        // 0 < s <= sigma_p matches none of the branches
        assert_eq!(
            regime_classify(e("1/2"), e("1"), rat(1, 2), 1, Scale::B).unwrap(),
            Regime::Uncovered
        );
        // F uses sigma_{p,q}: p = 2, q = 1/2 gives sigma = 1
        assert_eq!(
            regime_classify(e("2"), e("1/2"), rat(1, 2), 1, Scale::F).unwrap(),
            Regime::Uncovered
        );
        assert_eq!(
            regime_classify(e("2"), e("1/2"), rat(1, 2), 1, Scale::B).unwrap(),
            Regime::Tilde
        );
        assert!(regime_classify(e("inf"), e("1"), int(1), 1, Scale::F).is_err());
        // p = inf with s < 0 is not a listed B-branch
        assert_eq!(
            regime_classify(e("inf"), e("1"), int(-1), 1, Scale::B).unwrap(),
            Regime::Uncovered
        );
    }

    #[test]
    fn seq_compact_examples() {
        let spec = |p1: &str, p2: &str, delta: Rational, b: Rational| {
            SeqSpec::geometric(e(p1), e("2"), e(p2), e("2"), delta, b).unwrap()
        };
        assert_eq!(
            seq_compact(&spec("2", "1", rat(3, 5), int(1))),
            Compactness::Compact
        );
        assert_eq!(
            seq_compact(&spec("2", "1", rat(1, 2), int(1))),
            Compactness::NotCompact
        );
        assert_eq!(
            seq_compact(&spec("1", "2", rat(1, 1000), int(5))),
            Compactness::Compact
        );
    }

    #[test]
    fn func_compact_examples() {
        // delta = b/p* exactly
        let p = params("inf", "1", int(1), int(0), 1);
        assert_eq!(p.delta(), int(2));
        assert_eq!(
            func_compact(&p, int(2)).unwrap(),
            Compactness::Indeterminate
        );

        let p = params("inf", "1", int(3), int(0), 1);
        assert_eq!(p.delta(), int(4));
        assert_eq!(func_compact(&p, int(2)).unwrap(), Compactness::Compact);

        let p = params("1", "2", int(2), int(0), 1);
        assert_eq!(func_compact(&p, int(1)).unwrap(), Compactness::Compact);

        let p = params("2", "1", int(1), int(0), 1);
        assert_eq!(p.delta(), rat(3, 2));
        assert_eq!(func_compact(&p, int(4)).unwrap(), Compactness::NotCompact);

        // 1/p* = 0 and delta = 0 is not compact
        let p = params("2", "2", int(0), int(0), 1);
        assert_eq!(func_compact(&p, int(1)).unwrap(), Compactness::NotCompact);
    }
}

//! Asymptotic exponents of s-numbers.
//!
//! The sequence-space tables take `(p1, p2, δ, b)` and return β with
//! `s_k ∼ k^{−β}`. The function-space tables are evaluated twice: once by
//! substituting `δ(params)` into the sequence tables and once from the γ
//! formulas written in terms of `s1 − s2`, `d` and `b`. Any disagreement is
//! reported as [`Error::TableMismatch`].

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::blockspace::SeqSpec;
use crate::error::{Error, Result};
use crate::params::{
    conjugate, func_compact, half, int, lambda, theta, theta_prime, Compactness, EmbeddingParams,
    ExtReal, Rational,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SNumberKind {
    Approximation,
    Gelfand,
    Kolmogorov,
    Weyl,
}

impl SNumberKind {
    pub const ALL: [SNumberKind; 4] = [
        SNumberKind::Approximation,
        SNumberKind::Gelfand,
        SNumberKind::Kolmogorov,
        SNumberKind::Weyl,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SNumberKind::Approximation => "approximation",
            SNumberKind::Gelfand => "gelfand",
            SNumberKind::Kolmogorov => "kolmogorov",
            SNumberKind::Weyl => "weyl",
        }
    }
}

impl fmt::Display for SNumberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SNumberKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "approximation" | "approx" | "a" => Ok(SNumberKind::Approximation),
            "gelfand" | "c" => Ok(SNumberKind::Gelfand),
            "kolmogorov" | "d" => Ok(SNumberKind::Kolmogorov),
            "weyl" | "x" => Ok(SNumberKind::Weyl),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected approximation, gelfand, kolmogorov or weyl".into(),
            }),
        }
    }
}

/// The exact threshold that was hit when a table refuses to pick a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// `δ = b/p*` with `1/p* > 0`: compactness itself is undecided.
    Compactness,
    BOverP2,
    BOverP,
    BLambda,
    BThetaOverP1Conj,
    BOverP1Conj,
    BThetaPrimeOverP2,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Compactness => "delta=b/p*",
            Boundary::BOverP2 => "delta=b/p2",
            Boundary::BOverP => "delta=b/p",
            Boundary::BLambda => "delta=b*lambda",
            Boundary::BThetaOverP1Conj => "delta=b*theta/p1'",
            Boundary::BOverP1Conj => "delta=b/p1'",
            Boundary::BThetaPrimeOverP2 => "delta=b*theta'/p2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExponentResult {
    Exact {
        gamma: Rational,
    },
    /// `c·k^{−lower_exp} ≤ s_k ≤ C·k^{−upper_exp}` with `upper_exp ≤ lower_exp`.
    Sandwich {
        lower_exp: Rational,
        upper_exp: Rational,
    },
    LimitingCase {
        boundary: Boundary,
    },
    NotCompact,
    NotCovered {
        reason: String,
    },
}

impl ExponentResult {
    fn not_covered(reason: &str) -> Self {
        ExponentResult::NotCovered {
            reason: reason.to_string(),
        }
    }

    fn limiting(boundary: Boundary) -> Self {
        ExponentResult::LimitingCase { boundary }
    }

    pub fn status(&self) -> &'static str {
        match self {
            ExponentResult::Exact { .. } => "exact",
            ExponentResult::Sandwich { .. } => "sandwich",
            ExponentResult::LimitingCase { .. } => "limiting",
            ExponentResult::NotCompact => "not-compact",
            ExponentResult::NotCovered { .. } => "not-covered",
        }
    }

    /// `(lower_exp, upper_exp)`; both equal γ for an exact result.
    pub fn rates(&self) -> Option<(Rational, Rational)> {
        match self {
            ExponentResult::Exact { gamma } => Some((*gamma, *gamma)),
            ExponentResult::Sandwich {
                lower_exp,
                upper_exp,
            } => Some((*lower_exp, *upper_exp)),
            _ => None,
        }
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            ExponentResult::Exact { gamma } => Some(*gamma),
            _ => None,
        }
    }

    pub fn is_testable(&self) -> bool {
        self.rates().is_some()
    }
}

impl fmt::Display for ExponentResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentResult::Exact { gamma } => write!(f, "exact {gamma}"),
            ExponentResult::Sandwich {
                lower_exp,
                upper_exp,
            } => write!(f, "sandwich lower {lower_exp} upper {upper_exp}"),
            ExponentResult::LimitingCase { boundary } => write!(f, "limiting {boundary}"),
            ExponentResult::NotCompact => f.write_str("not-compact"),
            ExponentResult::NotCovered { reason } => write!(f, "not-covered ({reason})"),
        }
    }
}

/// A table lookup together with the row that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub case: &'static str,
    pub result: ExponentResult,
}

impl Evaluation {
    fn new(case: &'static str, result: ExponentResult) -> Self {
        Evaluation { case, result }
    }
}

fn exact(case: &'static str, gamma: Rational) -> Evaluation {
    Evaluation::new(case, ExponentResult::Exact { gamma })
}

/// Builds the β-table input for a function-space embedding.
pub fn seq_spec_for(params: &EmbeddingParams, b: Rational) -> Result<SeqSpec> {
    SeqSpec::geometric(
        params.p1,
        params.q1,
        params.p2,
        params.q2,
        params.delta(),
        b,
    )
}

// ---------------------------------------------------------------------------
// Sequence-space tables, written on reciprocals r1 = 1/p1, r2 = 1/p2 and
// u = δ/b.

struct Recips {
    r1: Rational,
    r2: Rational,
    u: Rational,
}

fn recips(spec: &SeqSpec) -> Option<Recips> {
    if !spec.is_compact() {
        return None;
    }
    Some(Recips {
        r1: spec.p1.recip(),
        r2: spec.p2.recip(),
        u: spec.delta / spec.b,
    })
}

fn not_compact() -> Evaluation {
    Evaluation::new("compactness", ExponentResult::NotCompact)
}

pub fn weyl_seq(spec: &SeqSpec) -> Evaluation {
    let Some(Recips { r1, r2, u }) = recips(spec) else {
        return not_compact();
    };
    let h = half();
    if r1 >= h && r2 >= h {
        return exact("weyl-a", u + r1 - r2);
    }
    if r1 <= h && r2 <= r1 {
        return exact("weyl-b", u);
    }
    if r1 >= h && r2 <= h {
        return exact("weyl-c", u + r1 - h);
    }
    if r2 >= h {
        // p2 <= 2 < p1
        return match u.cmp(&r2) {
            std::cmp::Ordering::Less if r1.is_zero() => Evaluation::new(
                "weyl-d",
                ExponentResult::not_covered("p1 = inf in the multiplicative row"),
            ),
            std::cmp::Ordering::Less => exact("weyl-d", (u + r1 - r2) / (int(2) * r1)),
            std::cmp::Ordering::Equal => {
                Evaluation::new("weyl-d/e", ExponentResult::limiting(Boundary::BOverP2))
            }
            std::cmp::Ordering::Greater => exact("weyl-e", u + h - r2),
        };
    }
    // 2 < p2 < p1
    let lam = (r2 - r1) / (Rational::one() - int(2) * r1);
    match u.cmp(&lam) {
        std::cmp::Ordering::Greater => exact("weyl-f", u),
        std::cmp::Ordering::Equal => {
            Evaluation::new("weyl-f/g", ExponentResult::limiting(Boundary::BLambda))
        }
        std::cmp::Ordering::Less if r1.is_zero() => Evaluation::new(
            "weyl-g",
            ExponentResult::not_covered("p1 = inf in the multiplicative row"),
        ),
        std::cmp::Ordering::Less => Evaluation::new(
            "weyl-g",
            ExponentResult::Sandwich {
                lower_exp: u,
                upper_exp: (u + r1 - r2) / (int(2) * r1),
            },
        ),
    }
}

pub fn approx_seq(spec: &SeqSpec) -> Evaluation {
    let Some(Recips { r1, r2, u }) = recips(spec) else {
        return not_compact();
    };
    let h = half();
    let one = Rational::one();
    if (r1 >= r2 && r2 >= h) || (r1 <= h && r2 <= r1) {
        return exact("approx-1", u);
    }
    if r2 >= r1 {
        return exact("approx-4", u + r1 - r2);
    }
    // only 0 < p1 < 2 < p2 <= inf is left
    if r1 >= one && r2.is_zero() {
        return exact("approx-5", u + h - r2);
    }
    let rp = std::cmp::max(conjugate(spec.p1).recip(), r2);
    match u.cmp(&rp) {
        std::cmp::Ordering::Greater => exact("approx-3", u + h - rp),
        std::cmp::Ordering::Equal => {
            Evaluation::new("approx-2/3", ExponentResult::limiting(Boundary::BOverP))
        }
        std::cmp::Ordering::Less if r2.is_positive() || r1 < one => {
            exact("approx-2", u / (int(2) * rp))
        }
        std::cmp::Ordering::Less => Evaluation::new(
            "approx-2",
            ExponentResult::not_covered("no row for p1 <= 1, p2 = inf, delta < b/p"),
        ),
    }
}

pub fn gelfand_seq(spec: &SeqSpec) -> Evaluation {
    let Some(Recips { r1, r2, u }) = recips(spec) else {
        return not_compact();
    };
    let h = half();
    let one = Rational::one();
    if r1 <= h && r2 < r1 {
        return exact("gelfand-1", u);
    }
    if r2 >= r1 {
        return exact("gelfand-2", u + r1 - r2);
    }
    let c1 = conjugate(spec.p1).recip();
    if r2 >= h {
        // p1 < p2 <= 2
        let th = (r1 - r2) / (r1 - h);
        return match u.cmp(&(th * c1)) {
            std::cmp::Ordering::Greater => exact("gelfand-2", u + r1 - r2),
            std::cmp::Ordering::Equal => Evaluation::new(
                "gelfand-2/3",
                ExponentResult::limiting(Boundary::BThetaOverP1Conj),
            ),
            std::cmp::Ordering::Less if r1 < one => exact("gelfand-3", u / (int(2) * c1)),
            std::cmp::Ordering::Less => {
                Evaluation::new("gelfand-3", ExponentResult::not_covered("row needs 1 < p1"))
            }
        };
    }
    // p1 < 2 < p2
    match u.cmp(&c1) {
        std::cmp::Ordering::Greater => exact("gelfand-4", u + r1 - h),
        std::cmp::Ordering::Equal => Evaluation::new(
            "gelfand-3/4",
            ExponentResult::limiting(Boundary::BOverP1Conj),
        ),
        std::cmp::Ordering::Less => exact("gelfand-3", u / (int(2) * c1)),
    }
}

pub fn kolmogorov_seq(spec: &SeqSpec) -> Evaluation {
    let Some(Recips { r1, r2, u }) = recips(spec) else {
        return not_compact();
    };
    let h = half();
    if r1 >= r2 && r2 >= h {
        return exact("kolmogorov-1", u);
    }
    if r2 >= r1 {
        return exact("kolmogorov-4", u + r1 - r2);
    }
    if r1 > h {
        // p1 < 2 < p2
        return match u.cmp(&r2) {
            std::cmp::Ordering::Greater => exact("kolmogorov-2", u + h - r2),
            std::cmp::Ordering::Equal => Evaluation::new(
                "kolmogorov-2/3",
                ExponentResult::limiting(Boundary::BOverP2),
            ),
            std::cmp::Ordering::Less => exact("kolmogorov-3", u / (int(2) * r2)),
        };
    }
    if r1 < h {
        // 2 < p1 < p2
        let thp = (r1 - r2) / (h - r2);
        return match u.cmp(&(thp * r2)) {
            std::cmp::Ordering::Greater => exact("kolmogorov-4", u + r1 - r2),
            std::cmp::Ordering::Equal => Evaluation::new(
                "kolmogorov-3/4",
                ExponentResult::limiting(Boundary::BThetaPrimeOverP2),
            ),
            std::cmp::Ordering::Less => exact("kolmogorov-3", u / (int(2) * r2)),
        };
    }
    Evaluation::new(
        "kolmogorov",
        ExponentResult::not_covered("no row for p1 = 2 < p2"),
    )
}

pub fn seq_exponent_eval(spec: &SeqSpec, kind: SNumberKind) -> Evaluation {
    match kind {
        SNumberKind::Approximation => approx_seq(spec),
        SNumberKind::Gelfand => gelfand_seq(spec),
        SNumberKind::Kolmogorov => kolmogorov_seq(spec),
        SNumberKind::Weyl => weyl_seq(spec),
    }
}

pub fn seq_exponent(spec: &SeqSpec, kind: SNumberKind) -> ExponentResult {
    seq_exponent_eval(spec, kind).result
}

pub fn weyl_seq_exponent(spec: &SeqSpec) -> ExponentResult {
    weyl_seq(spec).result
}

pub fn approx_seq_exponent(spec: &SeqSpec) -> ExponentResult {
    approx_seq(spec).result
}

pub fn gelfand_seq_exponent(spec: &SeqSpec) -> ExponentResult {
    gelfand_seq(spec).result
}

pub fn kolmogorov_seq_exponent(spec: &SeqSpec) -> ExponentResult {
    kolmogorov_seq(spec).result
}

// ---------------------------------------------------------------------------
// Function-space γ tables, written on the original parameters.

/// Parameters of a γ table in the form the function-space statements use.
struct Gamma {
    s: Rational,
    d: Rational,
    b: Rational,
    p1: ExtReal,
    p2: ExtReal,
    /// `δ = s1 − s2 − d(1/p1 − 1/p2)`
    delta: Rational,
}

impl Gamma {
    fn new(params: &EmbeddingParams, b: Rational) -> Self {
        Gamma {
            s: params.smoothness_gap(),
            d: params.dim(),
            b,
            p1: params.p1,
            p2: params.p2,
            delta: params.delta(),
        }
    }

    fn gap(&self) -> Rational {
        self.p1.recip() - self.p2.recip()
    }

    /// `(s1−s2)/b + ((b−d)/b)(1/p1 − 1/p2)`
    fn g_plus(&self) -> Rational {
        self.s / self.b + (self.b - self.d) / self.b * self.gap()
    }

    /// `(s1−s2)/b − (d/b)(1/p1 − 1/p2)`
    fn g_minus(&self) -> Rational {
        self.s / self.b - self.d / self.b * self.gap()
    }

    /// `(s1−s2)/b + (b·shift − d(1/p1 − 1/p2))/b`
    fn g_shift(&self, shift: Rational) -> Rational {
        self.s / self.b + (self.b * shift - self.d * self.gap()) / self.b
    }

    /// Compares `δ/b` against `x`.
    fn cmp_delta(&self, x: Rational) -> std::cmp::Ordering {
        (self.delta / self.b).cmp(&x)
    }
}

fn two() -> ExtReal {
    ExtReal::integer(2)
}

fn one_ext() -> ExtReal {
    ExtReal::integer(1)
}

/// `(q/2)·x` for a parameter `q`; `None` when `q = ∞`.
fn times_half(q: ExtReal, x: Rational) -> Option<Rational> {
    q.value().map(|v| v * x / int(2))
}

fn scaled(case: &'static str, q: ExtReal, x: Rational) -> Evaluation {
    match times_half(q, x) {
        Some(gamma) => exact(case, gamma),
        None => Evaluation::new(case, ExponentResult::not_covered("infinite multiplier")),
    }
}

fn limiting(case: &'static str, boundary: Boundary) -> Evaluation {
    Evaluation::new(case, ExponentResult::limiting(boundary))
}

fn weyl_gamma(g: &Gamma) -> Evaluation {
    let (p1, p2, two) = (g.p1, g.p2, two());
    if p1 <= two && p2 <= two {
        return exact("weyl-a", g.g_plus());
    }
    if p2 <= two && two < p1 {
        let r2 = p2.recip();
        return match g.cmp_delta(r2) {
            std::cmp::Ordering::Less => scaled("weyl-d", p1, g.g_plus()),
            std::cmp::Ordering::Greater => exact("weyl-e", g.g_shift(half() - r2)),
            std::cmp::Ordering::Equal => limiting("weyl-d/e", Boundary::BOverP2),
        };
    }
    if p1 <= two && two <= p2 {
        return exact("weyl-c", g.g_shift(p1.recip() - half()));
    }
    if two <= p1 && p1 <= p2 {
        return exact("weyl-b", g.g_minus());
    }
    // 2 < p2 < p1
    let lam = lambda(p1, p2).expect("p1 > 2 here");
    match g.delta.cmp(&(g.b * lam)) {
        std::cmp::Ordering::Greater => exact("weyl-f", g.g_minus()),
        std::cmp::Ordering::Equal => limiting("weyl-f/g", Boundary::BLambda),
        std::cmp::Ordering::Less => match times_half(p1, g.g_plus()) {
            Some(upper_exp) => Evaluation::new(
                "weyl-g",
                ExponentResult::Sandwich {
                    lower_exp: g.g_minus(),
                    upper_exp,
                },
            ),
            None => Evaluation::new("weyl-g", ExponentResult::not_covered("infinite multiplier")),
        },
    }
}

fn approx_gamma(g: &Gamma) -> Evaluation {
    let (p1, p2, two) = (g.p1, g.p2, two());
    if (p1 <= p2 && p2 <= two) || (two <= p1 && p1 <= p2) {
        return exact("approx-1", g.g_minus());
    }
    if p2 <= p1 {
        return exact("approx-4", g.g_plus());
    }
    if p1 <= one_ext() && p2.is_infinite() {
        return exact("approx-5", g.g_shift(half() - p2.recip()));
    }
    if p1 < two && two < p2 {
        let p = std::cmp::min(conjugate(p1), p2);
        let rp = p.recip();
        return match g.cmp_delta(rp) {
            std::cmp::Ordering::Greater => exact("approx-3", g.g_shift(half() - rp)),
            std::cmp::Ordering::Equal => limiting("approx-2/3", Boundary::BOverP),
            std::cmp::Ordering::Less if !p2.is_infinite() || one_ext() < p1 => {
                scaled("approx-2", p, g.g_minus())
            }
            std::cmp::Ordering::Less => Evaluation::new(
                "approx-2",
                ExponentResult::not_covered("no row for p1 <= 1, p2 = inf, delta < b/p"),
            ),
        };
    }
    Evaluation::new("approx", ExponentResult::not_covered("no matching row"))
}

fn gelfand_gamma(g: &Gamma) -> Evaluation {
    let (p1, p2, two) = (g.p1, g.p2, two());
    if two <= p1 && p1 < p2 {
        return exact("gelfand-1", g.g_minus());
    }
    if p2 <= p1 {
        return exact("gelfand-2", g.g_plus());
    }
    let p1c = conjugate(p1);
    if p2 <= two {
        // p1 < p2 <= 2
        let th = theta(p1, p2).expect("p1 < 2 here");
        return match g.cmp_delta(th * p1c.recip()) {
            std::cmp::Ordering::Greater => exact("gelfand-2", g.g_plus()),
            std::cmp::Ordering::Equal => limiting("gelfand-2/3", Boundary::BThetaOverP1Conj),
            std::cmp::Ordering::Less if one_ext() < p1 => scaled("gelfand-3", p1c, g.g_minus()),
            std::cmp::Ordering::Less => {
                Evaluation::new("gelfand-3", ExponentResult::not_covered("row needs 1 < p1"))
            }
        };
    }
    if p1 < two && two < p2 {
        return match g.cmp_delta(p1c.recip()) {
            std::cmp::Ordering::Greater => exact("gelfand-4", g.g_shift(p1.recip() - half())),
            std::cmp::Ordering::Equal => limiting("gelfand-3/4", Boundary::BOverP1Conj),
            std::cmp::Ordering::Less if one_ext() < p1 => scaled("gelfand-3", p1c, g.g_minus()),
            std::cmp::Ordering::Less => {
                Evaluation::new("gelfand-3", ExponentResult::not_covered("row needs 1 < p1"))
            }
        };
    }
    Evaluation::new("gelfand", ExponentResult::not_covered("no matching row"))
}

fn kolmogorov_gamma(g: &Gamma) -> Evaluation {
    let (p1, p2, two) = (g.p1, g.p2, two());
    if p1 <= p2 && p2 <= two {
        return exact("kolmogorov-1", g.g_minus());
    }
    if p2 <= p1 {
        return exact("kolmogorov-4", g.g_plus());
    }
    if p1 < two && two < p2 {
        let r2 = p2.recip();
        return match g.cmp_delta(r2) {
            std::cmp::Ordering::Greater => exact("kolmogorov-2", g.g_shift(half() - r2)),
            std::cmp::Ordering::Equal => limiting("kolmogorov-2/3", Boundary::BOverP2),
            std::cmp::Ordering::Less => scaled("kolmogorov-3", p2, g.g_minus()),
        };
    }
    if two < p1 && p1 <= p2 {
        let thp = theta_prime(p1, p2).expect("p2 > 2 here");
        return match g.cmp_delta(thp * p2.recip()) {
            std::cmp::Ordering::Greater => exact("kolmogorov-4", g.g_plus()),
            std::cmp::Ordering::Equal => limiting("kolmogorov-3/4", Boundary::BThetaPrimeOverP2),
            std::cmp::Ordering::Less => scaled("kolmogorov-3", p2, g.g_minus()),
        };
    }
    Evaluation::new(
        "kolmogorov",
        ExponentResult::not_covered("no row for p1 = 2 < p2"),
    )
}

fn gamma_table(g: &Gamma, kind: SNumberKind) -> Evaluation {
    match kind {
        SNumberKind::Approximation => approx_gamma(g),
        SNumberKind::Gelfand => gelfand_gamma(g),
        SNumberKind::Kolmogorov => kolmogorov_gamma(g),
        SNumberKind::Weyl => weyl_gamma(g),
    }
}

/// γ computed only from the function-space formulas (no compactness check).
pub fn func_gamma_direct(params: &EmbeddingParams, b: Rational, kind: SNumberKind) -> Evaluation {
    gamma_table(&Gamma::new(params, b), kind)
}

fn compactness_gate(params: &EmbeddingParams, b: Rational) -> Result<Option<Evaluation>> {
    Ok(match func_compact(params, b)? {
        Compactness::Compact => None,
        Compactness::NotCompact => Some(not_compact()),
        Compactness::Indeterminate => Some(limiting("compactness", Boundary::Compactness)),
    })
}

fn cross_check(
    context: String,
    via_seq: Evaluation,
    direct: &ExponentResult,
) -> Result<Evaluation> {
    if &via_seq.result == direct {
        Ok(via_seq)
    } else {
        Err(Error::TableMismatch {
            context,
            beta: via_seq.result.to_string(),
            gamma: direct.to_string(),
        })
    }
}

pub fn func_exponent_eval(
    params: &EmbeddingParams,
    b: Rational,
    kind: SNumberKind,
) -> Result<Evaluation> {
    if let Some(gate) = compactness_gate(params, b)? {
        return Ok(gate);
    }
    let spec = seq_spec_for(params, b)?;
    let via_seq = seq_exponent_eval(&spec, kind);
    let direct = func_gamma_direct(params, b, kind);
    cross_check(
        format!("{kind} at {params:?}, b = {b}"),
        via_seq,
        &direct.result,
    )
}

pub fn func_exponent(
    params: &EmbeddingParams,
    b: Rational,
    kind: SNumberKind,
) -> Result<ExponentResult> {
    func_exponent_eval(params, b, kind).map(|e| e.result)
}

// ---------------------------------------------------------------------------
// Finite-measure simplification (b = d).

struct FiniteMeasure {
    /// `(s1 − s2)/d`
    sd: Rational,
    r1: Rational,
    r2: Rational,
    p1: ExtReal,
    p2: ExtReal,
    /// `δ/d` with `δ = s1 − s2 − d(1/p1 − 1/p2)`
    ud: Rational,
}

fn finite_weyl(f: &FiniteMeasure) -> ExponentResult {
    let (p1, p2, two) = (f.p1, f.p2, two());
    let ex = |gamma| ExponentResult::Exact { gamma };
    if p1 <= two && p2 <= two {
        ex(f.sd)
    } else if p2 <= two && two < p1 {
        match f.ud.cmp(&f.r2) {
            std::cmp::Ordering::Less => times_half(p1, f.sd)
                .map(ex)
                .unwrap_or_else(|| ExponentResult::not_covered("infinite multiplier")),
            std::cmp::Ordering::Greater => ex(f.sd + half() - f.r1),
            std::cmp::Ordering::Equal => ExponentResult::limiting(Boundary::BOverP2),
        }
    } else if p1 <= two && two <= p2 {
        ex(f.sd - half() + f.r2)
    } else if two <= p1 && p1 <= p2 {
        ex(f.sd - f.r1 + f.r2)
    } else {
        let lam = lambda(p1, p2).expect("p1 > 2 here");
        match f.ud.cmp(&lam) {
            std::cmp::Ordering::Greater => ex(f.sd - f.r1 + f.r2),
            std::cmp::Ordering::Equal => ExponentResult::limiting(Boundary::BLambda),
            std::cmp::Ordering::Less => match times_half(p1, f.sd) {
                Some(upper_exp) => ExponentResult::Sandwich {
                    lower_exp: f.sd - f.r1 + f.r2,
                    upper_exp,
                },
                None => ExponentResult::not_covered("infinite multiplier"),
            },
        }
    }
}

fn finite_approx(f: &FiniteMeasure) -> ExponentResult {
    let (p1, p2, two) = (f.p1, f.p2, two());
    let ex = |gamma| ExponentResult::Exact { gamma };
    if (p1 <= p2 && p2 <= two) || (two <= p1 && p1 <= p2) {
        return ex(f.sd - f.r1 + f.r2);
    }
    if p2 <= p1 {
        return ex(f.sd);
    }
    if p1 <= one_ext() && p2.is_infinite() {
        return ex(f.sd + half() - f.r1);
    }
    let p = std::cmp::min(conjugate(p1), p2);
    match f.ud.cmp(&p.recip()) {
        std::cmp::Ordering::Greater => ex(f.sd + half() - p.recip() - f.r1 + f.r2),
        std::cmp::Ordering::Equal => ExponentResult::limiting(Boundary::BOverP),
        std::cmp::Ordering::Less => times_half(p, f.sd - f.r1 + f.r2)
            .map(ex)
            .unwrap_or_else(|| ExponentResult::not_covered("infinite multiplier")),
    }
}

fn finite_gelfand(f: &FiniteMeasure) -> ExponentResult {
    let (p1, p2, two) = (f.p1, f.p2, two());
    let ex = |gamma| ExponentResult::Exact { gamma };
    if two <= p1 && p1 < p2 {
        return ex(f.sd - f.r1 + f.r2);
    }
    if p2 <= p1 {
        return ex(f.sd);
    }
    let p1c = conjugate(p1);
    let lower_row = || {
        times_half(p1c, f.sd - f.r1 + f.r2)
            .map(ex)
            .unwrap_or_else(|| ExponentResult::not_covered("row needs 1 < p1"))
    };
    if p2 <= two {
        let th = theta(p1, p2).expect("p1 < 2 here");
        return match f.ud.cmp(&(th * p1c.recip())) {
            std::cmp::Ordering::Greater => ex(f.sd),
            std::cmp::Ordering::Equal => ExponentResult::limiting(Boundary::BThetaOverP1Conj),
            std::cmp::Ordering::Less => lower_row(),
        };
    }
    match f.ud.cmp(&p1c.recip()) {
        std::cmp::Ordering::Greater => ex(f.sd - half() + f.r2),
        std::cmp::Ordering::Equal => ExponentResult::limiting(Boundary::BOverP1Conj),
        std::cmp::Ordering::Less => lower_row(),
    }
}

fn finite_kolmogorov(f: &FiniteMeasure) -> ExponentResult {
    let (p1, p2, two) = (f.p1, f.p2, two());
    let ex = |gamma| ExponentResult::Exact { gamma };
    if p1 <= p2 && p2 <= two {
        return ex(f.sd - f.r1 + f.r2);
    }
    if p2 <= p1 {
        return ex(f.sd);
    }
    let lower_row = || {
        times_half(p2, f.sd - f.r1 + f.r2)
            .map(ex)
            .unwrap_or_else(|| ExponentResult::not_covered("infinite multiplier"))
    };
    if p1 < two {
        return match f.ud.cmp(&f.r2) {
            std::cmp::Ordering::Greater => ex(f.sd + half() - f.r1),
            std::cmp::Ordering::Equal => ExponentResult::limiting(Boundary::BOverP2),
            std::cmp::Ordering::Less => lower_row(),
        };
    }
    if two < p1 {
        let thp = theta_prime(p1, p2).expect("p2 > 2 here");
        return match f.ud.cmp(&(thp * f.r2)) {
            std::cmp::Ordering::Greater => ex(f.sd),
            std::cmp::Ordering::Equal => ExponentResult::limiting(Boundary::BThetaPrimeOverP2),
            std::cmp::Ordering::Less => lower_row(),
        };
    }
    ExponentResult::not_covered("no row for p1 = 2 < p2")
}

/// γ from the finite-measure formulas alone.
pub fn finite_measure_direct(params: &EmbeddingParams, kind: SNumberKind) -> ExponentResult {
    let d = params.dim();
    let f = FiniteMeasure {
        sd: params.smoothness_gap() / d,
        r1: params.p1.recip(),
        r2: params.p2.recip(),
        p1: params.p1,
        p2: params.p2,
        ud: params.delta() / d,
    };
    match kind {
        SNumberKind::Approximation => finite_approx(&f),
        SNumberKind::Gelfand => finite_gelfand(&f),
        SNumberKind::Kolmogorov => finite_kolmogorov(&f),
        SNumberKind::Weyl => finite_weyl(&f),
    }
}

/// Domains of finite measure have `b = d`.
pub fn finite_measure_exponent_eval(
    params: &EmbeddingParams,
    kind: SNumberKind,
) -> Result<Evaluation> {
    let b = params.dim();
    let general = func_exponent_eval(params, b, kind)?;
    if matches!(
        general.result,
        ExponentResult::NotCompact
            | ExponentResult::LimitingCase {
                boundary: Boundary::Compactness
            }
    ) {
        return Ok(general);
    }
    let direct = finite_measure_direct(params, kind);
    cross_check(
        format!("{kind} (finite measure) at {params:?}"),
        general,
        &direct,
    )
}

pub fn finite_measure_exponent(
    params: &EmbeddingParams,
    kind: SNumberKind,
) -> Result<ExponentResult> {
    finite_measure_exponent_eval(params, kind).map(|e| e.result)
}

/// Hypothesis of the finite-measure statement: `s1 − s2 − d(1/p1 − 1/p2)_+ > 0`.
pub fn finite_measure_hypothesis(params: &EmbeddingParams) -> bool {
    let gap = params.p1.recip() - params.p2.recip();
    let truncated = if gap.is_negative() {
        Rational::zero()
    } else {
        gap
    };
    (params.smoothness_gap() - params.dim() * truncated).is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::rat;

    fn e(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    fn spec(p1: &str, p2: &str, delta: Rational, b: Rational) -> SeqSpec {
        SeqSpec::geometric(e(p1), e("2"), e(p2), e("2"), delta, b).unwrap()
    }

    fn fparams(p1: &str, p2: &str, s: Rational, d: u32) -> EmbeddingParams {
        EmbeddingParams::new((e(p1), e("2"), s), (e(p2), e("2"), int(0)), d).unwrap()
    }

    fn ex(g: Rational) -> ExponentResult {
        ExponentResult::Exact { gamma: g }
    }

    #[test]
    fn weyl_examples() {
        assert_eq!(
            weyl_seq_exponent(&spec("1", "2", int(2), int(1))),
            ex(rat(5, 2))
        );
        assert_eq!(
            weyl_seq_exponent(&spec("2", "2", int(1), int(1))),
            ex(int(1))
        );
        assert_eq!(
            weyl_seq_exponent(&spec("8", "4", rat(3, 20), int(1))),
            ExponentResult::Sandwich {
                lower_exp: rat(3, 20),
                upper_exp: rat(1, 10)
            }
        );
    }

    #[test]
    fn weyl_limiting_and_not_compact() {
        // p2 <= 2 < p1, delta = b/p2
        assert_eq!(
            weyl_seq_exponent(&spec("4", "1", int(1), int(1))),
            ExponentResult::LimitingCase {
                boundary: Boundary::BOverP2
            }
        );
        // 2 < p2 < p1, delta = b*lambda = 1/6
        assert_eq!(
            weyl_seq_exponent(&spec("8", "4", rat(1, 6), int(1))),
            ExponentResult::LimitingCase {
                boundary: Boundary::BLambda
            }
        );
        assert_eq!(
            weyl_seq_exponent(&spec("8", "4", rat(1, 8), int(1))),
            ExponentResult::NotCompact
        );
    }

    #[test]
    fn approx_examples() {
        assert_eq!(
            approx_seq_exponent(&spec("4", "2", int(1), int(1))),
            ex(rat(3, 4))
        );
        assert_eq!(
            approx_seq_exponent(&spec("2", "2", int(2), int(1))),
            ex(int(2))
        );
        assert_eq!(
            approx_seq_exponent(&spec("3/2", "inf", rat(1, 2), int(1))),
            ex(rat(2, 3))
        );
        assert_eq!(
            approx_seq_exponent(&spec("3/2", "inf", rat(1, 3), int(1))),
            ExponentResult::LimitingCase {
                boundary: Boundary::BOverP
            }
        );
        // p/2 * delta/b with p = 3
        assert_eq!(
            approx_seq_exponent(&spec("3/2", "inf", rat(1, 4), int(1))),
            ex(rat(3, 8))
        );
    }

    #[test]
    fn gelfand_examples() {
        assert_eq!(
            gelfand_seq_exponent(&spec("4", "8", int(1), int(1))),
            ex(int(1))
        );
        assert_eq!(
            gelfand_seq_exponent(&spec("inf", "1", int(2), int(1))),
            ex(int(1))
        );
        assert_eq!(
            gelfand_seq_exponent(&spec("3/2", "2", rat(1, 6), int(1))),
            ex(rat(1, 4))
        );
        assert_eq!(
            gelfand_seq_exponent(&spec("3/2", "2", rat(1, 3), int(1))),
            ExponentResult::LimitingCase {
                boundary: Boundary::BThetaOverP1Conj
            }
        );
    }

    #[test]
    fn kolmogorov_examples() {
        assert_eq!(
            kolmogorov_seq_exponent(&spec("1", "2", int(1), int(1))),
            ex(int(1))
        );
        assert_eq!(
            kolmogorov_seq_exponent(&spec("1", "4", int(2), int(1))),
            ex(rat(9, 4))
        );
        assert_eq!(
            kolmogorov_seq_exponent(&spec("4", "8", rat(1, 30), int(1))),
            ex(rat(2, 15))
        );
        assert!(matches!(
            kolmogorov_seq_exponent(&spec("2", "4", int(1), int(1))),
            ExponentResult::NotCovered { .. }
        ));
    }

    #[test]
    fn func_examples() {
        let p = fparams("2", "2", int(2), 1);
        assert_eq!(
            func_exponent(&p, int(2), SNumberKind::Weyl).unwrap(),
            ex(int(1))
        );

        let p = fparams("4", "2", int(1), 1);
        assert_eq!(
            func_exponent(&p, int(1), SNumberKind::Approximation).unwrap(),
            ex(int(1))
        );

        let p = fparams("inf", "1", int(3), 1);
        assert_eq!(p.delta(), int(4));
        assert_eq!(
            func_exponent(&p, int(1), SNumberKind::Gelfand).unwrap(),
            ex(int(3))
        );
    }

    #[test]
    fn func_compactness_boundary_is_limiting() {
        let p = fparams("inf", "1", int(1), 1);
        assert_eq!(
            func_exponent(&p, int(2), SNumberKind::Weyl).unwrap(),
            ExponentResult::LimitingCase {
                boundary: Boundary::Compactness
            }
        );
    }

    #[test]
    fn finite_measure_examples() {
        let p = fparams("1", "1", int(2), 2);
        assert_eq!(
            finite_measure_exponent(&p, SNumberKind::Weyl).unwrap(),
            ex(int(1))
        );
        let p = fparams("2", "1", int(3), 1);
        assert_eq!(
            finite_measure_exponent(&p, SNumberKind::Kolmogorov).unwrap(),
            ex(int(3))
        );
        let p = fparams("1", "inf", int(4), 2);
        assert_eq!(
            finite_measure_exponent(&p, SNumberKind::Approximation).unwrap(),
            ex(rat(3, 2))
        );
    }

    #[test]
    fn finite_measure_hypothesis_matches_compactness() {
        for (p1, p2, s) in [
            ("1", "2", rat(1, 2)),
            ("2", "1", rat(1, 2)),
            ("2", "1", int(0)),
        ] {
            let p = fparams(p1, p2, s, 1);
            let compact = func_compact(&p, int(1)).unwrap() == Compactness::Compact;
            assert_eq!(finite_measure_hypothesis(&p), compact, "{p1} {p2} {s}");
        }
    }

    #[test]
    fn kinds_parse() {
        for k in SNumberKind::ALL {
            assert_eq!(k.name().parse::<SNumberKind>().unwrap(), k);
        }
        assert!("entropy".parse::<SNumberKind>().is_err());
    }
}

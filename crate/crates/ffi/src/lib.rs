//! C interface to the `snumbers` library.
//!
//! Every function returns an [`SnStatus`]; on failure a message is available
//! from [`sn_last_error_message`] until the next call on the same thread.
//! Handles are created by `*_new` and must be released with the matching
//! `*_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use snumbers::blockspace::{tail_e, SeqSpec, TailMethod};
use snumbers::envelope::verify_exponent;
use snumbers::exponents::{
    finite_measure_exponent, func_exponent, seq_exponent, Boundary, ExponentResult, SNumberKind,
};
use snumbers::params::{
    func_compact, rat, seq_compact, Compactness, EmbeddingParams, ExtReal, Rational,
};
use snumbers::widths::gelfand_exact;
use snumbers::Error;

/// `num/den` with `den > 0`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnRational {
    pub num: i64,
    pub den: i64,
}

/// `num/den`; `den == 0` (with `num > 0`) stands for infinity.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnExtReal {
    pub num: i64,
    pub den: i64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotCompact = 3,
    Untestable = 4,
    TableMismatch = 5,
    Overflow = 6,
    Failed = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnKind {
    Approximation = 0,
    Gelfand = 1,
    Kolmogorov = 2,
    Weyl = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnExponentStatus {
    Exact = 0,
    Sandwich = 1,
    Limiting = 2,
    NotCompact = 3,
    NotCovered = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnBoundary {
    None = 0,
    Compactness = 1,
    BOverP2 = 2,
    BOverP = 3,
    BLambda = 4,
    BThetaOverP1Conj = 5,
    BOverP1Conj = 6,
    BThetaPrimeOverP2 = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SnCompactness {
    Compact = 0,
    NotCompact = 1,
    Indeterminate = 2,
}

/// `lower` and `upper` are the exponents bounding `s_k` from below and
/// above (equal for exact results, `0/1` when there is no rate).
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SnExponent {
    pub status: SnExponentStatus,
    pub lower: SnRational,
    pub upper: SnRational,
    pub boundary: SnBoundary,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnVerifyReport {
    pub pass: bool,
    pub upper_slope: f64,
    pub lower_slope: f64,
}

/// Opaque sequence-space embedding.
pub struct SnSeqSpec(SeqSpec);

/// Opaque function-space embedding.
pub struct SnEmbedding(EmbeddingParams);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Fail(SnStatus, String);

impl From<Error> for Fail {
    fn from(err: Error) -> Self {
        let status = match &err {
            Error::NotCompact => SnStatus::NotCompact,
            Error::Untestable(_) | Error::TooFewPoints { .. } => SnStatus::Untestable,
            Error::TableMismatch { .. } => SnStatus::TableMismatch,
            Error::Overflow(_) => SnStatus::Overflow,
            Error::InvalidParameter(_)
            | Error::Parse { .. }
            | Error::PackingBelowDimension { .. } => SnStatus::InvalidArgument,
            _ => SnStatus::Failed,
        };
        Fail(status, err.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SnStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SnStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SnStatus::Panic
        }
    }
}

fn null(name: &str) -> Fail {
    Fail(SnStatus::NullPointer, format!("{name} is null"))
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(p: *mut T, name: &str, value: T) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(value);
    Ok(())
}

fn invalid(msg: String) -> Fail {
    Fail(SnStatus::InvalidArgument, msg)
}

fn rational(x: SnRational) -> Result<Rational, Fail> {
    if x.den == 0 {
        return Err(invalid(format!(
            "rational {}/0 has zero denominator",
            x.num
        )));
    }
    Ok(rat(x.num as i128, x.den as i128))
}

fn ext_real(x: SnExtReal) -> Result<ExtReal, Fail> {
    if x.den == 0 {
        if x.num > 0 {
            return Ok(ExtReal::INFINITY);
        }
        return Err(invalid(format!(
            "extended real {}/0 is not +infinity",
            x.num
        )));
    }
    Ok(ExtReal::new(rat(x.num as i128, x.den as i128))?)
}

fn to_c(x: Rational) -> Result<SnRational, Fail> {
    let (num, den) = (i64::try_from(*x.numer()), i64::try_from(*x.denom()));
    match (num, den) {
        (Ok(num), Ok(den)) => Ok(SnRational { num, den }),
        _ => Err(Fail(
            SnStatus::Overflow,
            format!("{x} does not fit in 64-bit integers"),
        )),
    }
}

fn kind(k: SnKind) -> SNumberKind {
    match k {
        SnKind::Approximation => SNumberKind::Approximation,
        SnKind::Gelfand => SNumberKind::Gelfand,
        SnKind::Kolmogorov => SNumberKind::Kolmogorov,
        SnKind::Weyl => SNumberKind::Weyl,
    }
}

fn boundary(b: Boundary) -> SnBoundary {
    match b {
        Boundary::Compactness => SnBoundary::Compactness,
        Boundary::BOverP2 => SnBoundary::BOverP2,
        Boundary::BOverP => SnBoundary::BOverP,
        Boundary::BLambda => SnBoundary::BLambda,
        Boundary::BThetaOverP1Conj => SnBoundary::BThetaOverP1Conj,
        Boundary::BOverP1Conj => SnBoundary::BOverP1Conj,
        Boundary::BThetaPrimeOverP2 => SnBoundary::BThetaPrimeOverP2,
    }
}

fn exponent(r: &ExponentResult) -> Result<SnExponent, Fail> {
    let zero = SnRational { num: 0, den: 1 };
    let mut out = SnExponent {
        status: SnExponentStatus::NotCovered,
        lower: zero,
        upper: zero,
        boundary: SnBoundary::None,
    };
    match r {
        ExponentResult::Exact { gamma } => {
            out.status = SnExponentStatus::Exact;
            out.lower = to_c(*gamma)?;
            out.upper = out.lower;
        }
        ExponentResult::Sandwich {
            lower_exp,
            upper_exp,
        } => {
            out.status = SnExponentStatus::Sandwich;
            out.lower = to_c(*lower_exp)?;
            out.upper = to_c(*upper_exp)?;
        }
        ExponentResult::LimitingCase { boundary: b } => {
            out.status = SnExponentStatus::Limiting;
            out.boundary = boundary(*b);
        }
        ExponentResult::NotCompact => out.status = SnExponentStatus::NotCompact,
        ExponentResult::NotCovered { .. } => {}
    }
    Ok(out)
}

fn compactness(c: Compactness) -> SnCompactness {
    match c {
        Compactness::Compact => SnCompactness::Compact,
        Compactness::NotCompact => SnCompactness::NotCompact,
        Compactness::Indeterminate => SnCompactness::Indeterminate,
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or null.
#[no_mangle]
pub extern "C" fn sn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Sequence-space embedding with `M_j = 2^{jb}` (floored for fractional `jb`).
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sn_seq_spec_new(
    p1: SnExtReal,
    q1: SnExtReal,
    p2: SnExtReal,
    q2: SnExtReal,
    delta: SnRational,
    b: SnRational,
    out: *mut *mut SnSeqSpec,
) -> SnStatus {
    guard(|| {
        let spec = SeqSpec::geometric(
            ext_real(p1)?,
            ext_real(q1)?,
            ext_real(p2)?,
            ext_real(q2)?,
            rational(delta)?,
            rational(b)?,
        )?;
        write(out, "out", Box::into_raw(Box::new(SnSeqSpec(spec))))
    })
}

/// # Safety
/// `spec` must come from [`sn_seq_spec_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sn_seq_spec_free(spec: *mut SnSeqSpec) {
    if !spec.is_null() {
        drop(Box::from_raw(spec));
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sn_embedding_new(
    p1: SnExtReal,
    q1: SnExtReal,
    s1: SnRational,
    p2: SnExtReal,
    q2: SnExtReal,
    s2: SnRational,
    d: u32,
    out: *mut *mut SnEmbedding,
) -> SnStatus {
    guard(|| {
        let params = EmbeddingParams::new(
            (ext_real(p1)?, ext_real(q1)?, rational(s1)?),
            (ext_real(p2)?, ext_real(q2)?, rational(s2)?),
            d,
        )?;
        write(out, "out", Box::into_raw(Box::new(SnEmbedding(params))))
    })
}

/// # Safety
/// `emb` must come from [`sn_embedding_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sn_embedding_free(emb: *mut SnEmbedding) {
    if !emb.is_null() {
        drop(Box::from_raw(emb));
    }
}

/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sn_seq_exponent(
    spec: *const SnSeqSpec,
    k: SnKind,
    out: *mut SnExponent,
) -> SnStatus {
    guard(|| {
        let spec = deref(spec, "spec")?;
        write(out, "out", exponent(&seq_exponent(&spec.0, kind(k)))?)
    })
}

/// # Safety
/// `emb` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sn_func_exponent(
    emb: *const SnEmbedding,
    b: SnRational,
    k: SnKind,
    out: *mut SnExponent,
) -> SnStatus {
    guard(|| {
        let emb = deref(emb, "emb")?;
        write(
            out,
            "out",
            exponent(&func_exponent(&emb.0, rational(b)?, kind(k))?)?,
        )
    })
}

/// Exponent on a domain of finite measure (`b = d`).
///
/// # Safety
/// `emb` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sn_finite_measure_exponent(
    emb: *const SnEmbedding,
    k: SnKind,
    out: *mut SnExponent,
) -> SnStatus {
    guard(|| {
        let emb = deref(emb, "emb")?;
        write(
            out,
            "out",
            exponent(&finite_measure_exponent(&emb.0, kind(k))?)?,
        )
    })
}

/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sn_seq_compact(
    spec: *const SnSeqSpec,
    out: *mut SnCompactness,
) -> SnStatus {
    guard(|| {
        let spec = deref(spec, "spec")?;
        write(out, "out", compactness(seq_compact(&spec.0)))
    })
}

/// # Safety
/// `emb` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sn_func_compact(
    emb: *const SnEmbedding,
    b: SnRational,
    out: *mut SnCompactness,
) -> SnStatus {
    guard(|| {
        let emb = deref(emb, "emb")?;
        write(out, "out", compactness(func_compact(&emb.0, rational(b)?)?))
    })
}

/// `c_k(id: ℓ_{p1}^n → ℓ_{p2}^n)` for `p2 ≤ p1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sn_gelfand_exact(
    n: u64,
    k: u64,
    p1: SnExtReal,
    p2: SnExtReal,
    out: *mut f64,
) -> SnStatus {
    guard(|| {
        write(
            out,
            "out",
            gelfand_exact(n, k, ext_real(p1)?, ext_real(p2)?)?,
        )
    })
}

/// Certified upper bound on the tail `E_n`.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sn_tail_e(spec: *const SnSeqSpec, n: u32, out: *mut f64) -> SnStatus {
    guard(|| {
        let spec = deref(spec, "spec")?;
        write(
            out,
            "out",
            tail_e(&spec.0, n, TailMethod::ClosedForm)?.upper_bound(),
        )
    })
}

/// Envelope slope check over levels `l_min..=l_max` with the default allocation.
///
/// # Safety
/// `spec` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sn_verify_exponent(
    spec: *const SnSeqSpec,
    k: SnKind,
    l_min: u32,
    l_max: u32,
    tol: f64,
    out: *mut SnVerifyReport,
) -> SnStatus {
    guard(|| {
        let spec = deref(spec, "spec")?;
        if l_min > l_max {
            return Err(invalid(format!("l_min {l_min} exceeds l_max {l_max}")));
        }
        let rep = verify_exponent(&spec.0, kind(k), l_min..=l_max, None, tol)?;
        write(
            out,
            "out",
            SnVerifyReport {
                pass: rep.pass,
                upper_slope: rep.upper_slope,
                lower_slope: rep.lower_slope,
            },
        )
    })
}

/// Parses `"3/2"`, `"0.25"` or `"inf"` into an extended real.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sn_parse_ext_real(text: *const c_char, out: *mut SnExtReal) -> SnStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| invalid("text is not UTF-8".into()))?;
        let x: ExtReal = s.parse()?;
        let value = match x.value() {
            Some(v) => {
                let r = to_c(v)?;
                SnExtReal {
                    num: r.num,
                    den: r.den,
                }
            }
            None => SnExtReal { num: 1, den: 0 },
        };
        write(out, "out", value)
    })
}

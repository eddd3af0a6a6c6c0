use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use snumbers_ffi::*;

const INF: SnExtReal = SnExtReal { num: 1, den: 0 };

fn ext(num: i64, den: i64) -> SnExtReal {
    SnExtReal { num, den }
}

fn rat(num: i64, den: i64) -> SnRational {
    SnRational { num, den }
}

fn seq(p1: SnExtReal, p2: SnExtReal, delta: SnRational, b: SnRational) -> *mut SnSeqSpec {
    let two = ext(2, 1);
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { sn_seq_spec_new(p1, two, p2, two, delta, b, &mut h) },
        SnStatus::Ok
    );
    h
}

fn last_error() -> String {
    let p = sn_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn weyl_exponent_through_handles() {
    let h = seq(ext(1, 1), ext(2, 1), rat(2, 1), rat(1, 1));
    let mut out = unsafe { std::mem::zeroed::<SnExponent>() };
    assert_eq!(
        unsafe { sn_seq_exponent(h, SnKind::Weyl, &mut out) },
        SnStatus::Ok
    );
    assert_eq!(out.status, SnExponentStatus::Exact);
    assert_eq!(out.lower, rat(5, 2));
    assert_eq!(out.upper, rat(5, 2));
    unsafe { sn_seq_spec_free(h) };
}

#[test]
fn sandwich_and_limiting() {
    let h = seq(ext(3, 1), ext(9, 4), rat(3, 5), rat(2, 1));
    let mut out = unsafe { std::mem::zeroed::<SnExponent>() };
    unsafe { sn_seq_exponent(h, SnKind::Weyl, &mut out) };
    assert_eq!(out.status, SnExponentStatus::Sandwich);
    assert_eq!((out.lower, out.upper), (rat(3, 10), rat(17, 60)));
    unsafe { sn_seq_spec_free(h) };

    let h = seq(ext(4, 1), ext(2, 1), rat(1, 2), rat(1, 1));
    unsafe { sn_seq_exponent(h, SnKind::Weyl, &mut out) };
    assert_eq!(out.status, SnExponentStatus::Limiting);
    assert_eq!(out.boundary, SnBoundary::BOverP2);
    unsafe { sn_seq_spec_free(h) };
}

#[test]
fn function_space_calls() {
    let mut emb = ptr::null_mut();
    let st = unsafe {
        sn_embedding_new(
            INF,
            ext(2, 1),
            rat(1, 1),
            ext(1, 1),
            ext(2, 1),
            rat(0, 1),
            1,
            &mut emb,
        )
    };
    assert_eq!(st, SnStatus::Ok);
    let mut c = SnCompactness::Compact;
    assert_eq!(
        unsafe { sn_func_compact(emb, rat(2, 1), &mut c) },
        SnStatus::Ok
    );
    assert_eq!(c, SnCompactness::Indeterminate);

    let mut out = unsafe { std::mem::zeroed::<SnExponent>() };
    assert_eq!(
        unsafe { sn_func_exponent(emb, rat(1, 1), SnKind::Gelfand, &mut out) },
        SnStatus::Ok
    );
    assert_eq!(out.status, SnExponentStatus::Exact);
    assert_eq!(
        unsafe { sn_finite_measure_exponent(emb, SnKind::Weyl, &mut out) },
        SnStatus::Ok
    );

    // b below the dimension
    let st = unsafe { sn_func_exponent(emb, rat(1, 2), SnKind::Weyl, &mut out) };
    assert_eq!(st, SnStatus::InvalidArgument);
    assert!(last_error().contains("smaller than the dimension"));
    unsafe { sn_embedding_free(emb) };
}

#[test]
fn compactness_and_tail() {
    let h = seq(ext(1, 1), ext(2, 1), rat(0, 1), rat(1, 1));
    let mut c = SnCompactness::Compact;
    unsafe { sn_seq_compact(h, &mut c) };
    assert_eq!(c, SnCompactness::NotCompact);
    let mut v = 0.0;
    assert_eq!(unsafe { sn_tail_e(h, 0, &mut v) }, SnStatus::NotCompact);
    unsafe { sn_seq_spec_free(h) };

    let h = seq(ext(2, 1), ext(2, 1), rat(1, 1), rat(1, 1));
    assert_eq!(unsafe { sn_tail_e(h, 0, &mut v) }, SnStatus::Ok);
    // q1 = q2 gives q* = inf, so E_0 = sup_{j >= 1} 2^{-j}
    assert_eq!(v, 0.5);
    unsafe { sn_seq_spec_free(h) };
}

#[test]
fn gelfand_values() {
    let mut v = 0.0;
    assert_eq!(
        unsafe { sn_gelfand_exact(4, 2, INF, ext(1, 1), &mut v) },
        SnStatus::Ok
    );
    assert_eq!(v, 3.0);
    assert_eq!(
        unsafe { sn_gelfand_exact(4, 2, ext(1, 1), INF, &mut v) },
        SnStatus::InvalidArgument
    );
}

#[test]
fn verify_report() {
    let h = seq(INF, ext(1, 1), rat(2, 1), rat(1, 1));
    let mut rep = SnVerifyReport {
        pass: false,
        upper_slope: 0.0,
        lower_slope: 0.0,
    };
    assert_eq!(
        unsafe { sn_verify_exponent(h, SnKind::Gelfand, 4, 10, 0.1, &mut rep) },
        SnStatus::Ok
    );
    assert!(rep.pass);
    assert!((rep.lower_slope + 1.0).abs() < 0.1);
    assert_eq!(
        unsafe { sn_verify_exponent(h, SnKind::Gelfand, 10, 4, 0.1, &mut rep) },
        SnStatus::InvalidArgument
    );
    unsafe { sn_seq_spec_free(h) };
}

#[test]
fn argument_errors() {
    let mut h = ptr::null_mut();
    let two = ext(2, 1);
    let st = unsafe { sn_seq_spec_new(two, two, two, two, rat(1, 0), rat(1, 1), &mut h) };
    assert_eq!(st, SnStatus::InvalidArgument);
    let st = unsafe { sn_seq_spec_new(ext(-1, 0), two, two, two, rat(1, 1), rat(1, 1), &mut h) };
    assert_eq!(st, SnStatus::InvalidArgument);
    let st = unsafe { sn_seq_spec_new(two, two, two, two, rat(1, 1), rat(1, 1), ptr::null_mut()) };
    assert_eq!(st, SnStatus::NullPointer);
    let mut out = unsafe { std::mem::zeroed::<SnExponent>() };
    assert_eq!(
        unsafe { sn_seq_exponent(ptr::null(), SnKind::Weyl, &mut out) },
        SnStatus::NullPointer
    );
    unsafe { sn_seq_spec_free(ptr::null_mut()) };

    // success clears the message
    let mut v = 0.0;
    unsafe { sn_gelfand_exact(4, 2, INF, ext(1, 1), &mut v) };
    assert!(sn_last_error_message().is_null());
}

#[test]
fn parse_and_version() {
    let mut x = ext(0, 1);
    let s = CString::new("3/2").unwrap();
    assert_eq!(
        unsafe { sn_parse_ext_real(s.as_ptr(), &mut x) },
        SnStatus::Ok
    );
    assert_eq!(x, ext(3, 2));
    let s = CString::new("inf").unwrap();
    unsafe { sn_parse_ext_real(s.as_ptr(), &mut x) };
    assert_eq!(x, INF);
    let s = CString::new("-1").unwrap();
    assert_eq!(
        unsafe { sn_parse_ext_real(s.as_ptr(), &mut x) },
        SnStatus::InvalidArgument
    );
    let v = unsafe { CStr::from_ptr(sn_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/snumbers.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "sn_seq_spec_new",
        "sn_func_exponent",
        "sn_last_error_message",
        "SN_STATUS_OK",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let tmp = tempfile::tempdir().unwrap();
    let src = tmp.path().join("probe.c");
    std::fs::write(
        &src,
        "#include \"snumbers.h\"\nint main(void) { SnExtReal p = {1, 0}; (void)p; return SN_STATUS_OK; }\n",
    )
    .unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status();
    match status {
        Ok(s) => assert!(s.success(), "header does not compile"),
        Err(e) => eprintln!("no C compiler available ({e}); header syntax not checked"),
    }
}

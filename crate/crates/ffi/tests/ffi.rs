use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::ptr;

use mirrorlab_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    ml_string_free(s);
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ml_last_error()).to_str().unwrap().to_owned() }
}

unsafe fn rotation(alpha: &str, beta: &str, c: &str) -> *mut MlDoubleRotation {
    let mut h = ptr::null_mut();
    assert_eq!(ml_rotation_new(cs(alpha).as_ptr(), cs(beta).as_ptr(), cs(c).as_ptr(), &mut h), MlStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn apply_and_encode_round_trip() {
    unsafe {
        let h = rotation("1/3", "1/5", "1/2");
        let mut out = ptr::null_mut();
        assert_eq!(ml_rotation_apply(h, cs("1/4").as_ptr(), &mut out), MlStatus::Ok);
        assert_eq!(take(out), "7/12");
        assert_eq!(ml_rotation_apply(h, cs("1/2").as_ptr(), &mut out), MlStatus::Ok);
        assert_eq!(take(out), "7/10");

        // 0 -> 1/3 -> 2/3 -> 13/15 -> 1/15
        let mut word = [9u8; 4];
        assert_eq!(ml_rotation_encode(h, cs("0").as_ptr(), 4, word.as_mut_ptr()), MlStatus::Ok);
        assert_eq!(word, [0, 0, 1, 1]);
        ml_rotation_free(h);
    }
}

#[test]
fn billiard_constructor_matches_section_map() {
    unsafe {
        let mut h = ptr::null_mut();
        let st = ml_rotation_from_billiard(cs("1/4").as_ptr(), cs("1/10").as_ptr(), cs("2/7").as_ptr(), &mut h);
        assert_eq!(st, MlStatus::Ok);
        let (mut a, mut b, mut c) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(ml_rotation_params(h, &mut a, &mut b, &mut c), MlStatus::Ok);
        assert_eq!((take(a), take(b), take(c)), ("1/7".into(), "2/7".into(), "1/5".into()));
        ml_rotation_free(h);
    }
}

#[test]
fn sturmian_language_counts() {
    unsafe {
        let h = rotation("5/23", "5/23", "18/23");
        let mut lang = ptr::null_mut();
        assert_eq!(ml_language_build(h, 12, &mut lang), MlStatus::Ok);
        let mut n_max = 0usize;
        assert_eq!(ml_language_n_max(lang, &mut n_max), MlStatus::Ok);
        assert_eq!(n_max, 12);
        for n in 0..=12 {
            let mut p = 0usize;
            assert_eq!(ml_language_complexity(lang, n, &mut p), MlStatus::Ok);
            assert_eq!(p, n + 1);
        }
        let mut r = 99i64;
        assert_eq!(ml_language_cassaigne_residual(lang, 3, &mut r), MlStatus::Ok);
        assert_eq!(r, 0);

        let mut p = 0usize;
        assert_eq!(ml_language_complexity(lang, 13, &mut p), MlStatus::OutOfRange);
        assert!(last_error().contains("n_max"));
        assert_eq!(ml_language_cassaigne_residual(lang, 11, &mut r), MlStatus::OutOfRange);
        ml_language_free(lang);
        ml_rotation_free(h);
    }
}

#[test]
fn classify_quarter_reports_doubling_times() {
    unsafe {
        let (mut class, mut e, mut f) = (MlClass::Undecided, 0i64, 0i64);
        let st = ml_classify_quarter(cs("37/997").as_ptr(), cs("1026/1009").as_ptr(), 202, &mut class, &mut e, &mut f);
        assert_eq!(st, MlStatus::Ok);
        assert_eq!(class, MlClass::A2);
        assert!((e == 26) ^ (f == 26));
        assert!(e == -1 || f == -1);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut h = ptr::null_mut();
        assert_eq!(ml_rotation_new(cs("0.3").as_ptr(), cs("1/5").as_ptr(), cs("1/2").as_ptr(), &mut h), MlStatus::Parse);
        assert!(last_error().contains("alpha"));
        assert!(h.is_null());
        assert_eq!(ml_rotation_new(cs("1/3").as_ptr(), cs("1/5").as_ptr(), cs("3/2").as_ptr(), &mut h), MlStatus::InvalidArgument);
        assert_eq!(ml_rotation_new(ptr::null(), cs("1/5").as_ptr(), cs("1/2").as_ptr(), &mut h), MlStatus::NullPointer);
        assert_eq!(ml_rotation_new(cs("1/3").as_ptr(), cs("1/5").as_ptr(), cs("1/2").as_ptr(), ptr::null_mut()), MlStatus::NullPointer);

        let h = rotation("1/3", "1/5", "1/2");
        let mut out = ptr::null_mut();
        assert_eq!(ml_rotation_apply(h, cs("1").as_ptr(), &mut out), MlStatus::InvalidArgument);
        assert_eq!(ml_rotation_apply(ptr::null(), cs("0").as_ptr(), &mut out), MlStatus::NullPointer);
        assert_eq!(ml_rotation_encode(h, cs("0").as_ptr(), 3, ptr::null_mut()), MlStatus::NullPointer);
        assert_eq!(ml_rotation_encode(h, cs("0").as_ptr(), 0, ptr::null_mut()), MlStatus::Ok);
        assert_eq!(last_error(), "");
        ml_rotation_free(h);

        // freeing null is a no-op
        ml_rotation_free(ptr::null_mut());
        ml_language_free(ptr::null_mut());
        ml_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(ml_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_api() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/mirrorlab.h");
    let header = std::fs::read_to_string(path).unwrap();
    for name in [
        "ml_last_error", "ml_version", "ml_string_free", "ml_rotation_new", "ml_rotation_from_billiard",
        "ml_rotation_free", "ml_rotation_params", "ml_rotation_apply", "ml_rotation_encode",
        "ml_language_build", "ml_language_free", "ml_language_n_max", "ml_language_complexity",
        "ml_language_cassaigne_residual", "ml_classify_quarter", "typedef struct MlDoubleRotation MlDoubleRotation",
        "ML_STATUS_OK = 0", "ML_CLASS_A2",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/mirrorlab.h");
    let Ok(status) = std::process::Command::new("cc").args(["-fsyntax-only", "-x", "c", "-std=c99", "-Wall", path]).status()
    else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(status.success());
}

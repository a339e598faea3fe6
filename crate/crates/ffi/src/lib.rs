//! C ABI over the mirrorlab engine.
//!
//! Numbers cross the boundary as exact strings ("13/40", or "(c0,c1,c2)" for
//! elements of Q(γ)). Maps and languages are opaque handles created by
//! `ml_*_new`/`ml_*_build` and released by the matching `ml_*_free`. Every
//! fallible call returns an `MlStatus`; on failure `ml_last_error` gives a
//! message for the calling thread. Strings returned through out-parameters
//! are owned by the caller and released with `ml_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mirrorlab::billiard::{from_billiard_params, DirectionSlope, Table};
use mirrorlab::classify::{classify_map, quarter_map, ClassKind};
use mirrorlab::language::{build_language, cassaigne_residual, LanguageLevels};
use mirrorlab::{DoubleRotation, Scalar};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlStatus {
    Ok = 0,
    NullPointer = 1,
    /// A number string did not parse.
    Parse = 2,
    /// Parameters outside the domain of the operation.
    InvalidArgument = 3,
    /// A level index beyond what the handle holds.
    OutOfRange = 4,
    /// An internal panic was caught at the boundary.
    Internal = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MlClass {
    A1 = 0,
    A2 = 1,
    A3 = 2,
    Exceptional = 3,
    Undecided = 4,
}

/// Opaque double rotation.
pub struct MlDoubleRotation(DoubleRotation);

/// Opaque language L(0..=n_max) of a double rotation.
pub struct MlLanguage(LanguageLevels);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

type Res<T> = Result<T, (MlStatus, String)>;

fn guard(f: impl FnOnce() -> Res<()>) -> MlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MlStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            MlStatus::Internal
        }
    }
}

unsafe fn scalar(p: *const c_char, what: &str) -> Res<Scalar> {
    if p.is_null() {
        return Err((MlStatus::NullPointer, format!("{what} is null")));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (MlStatus::Parse, format!("{what} is not UTF-8")))?;
    s.parse().map_err(|e| (MlStatus::Parse, format!("{what}: {e}")))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Res<&'a mut T> {
    p.as_mut().ok_or_else(|| (MlStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle<'a, T>(p: *const T) -> Res<&'a T> {
    p.as_ref().ok_or_else(|| (MlStatus::NullPointer, "handle is null".into()))
}

fn invalid(e: impl std::fmt::Display) -> (MlStatus, String) {
    (MlStatus::InvalidArgument, e.to_string())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message describing the last failed call on this thread ("" after a
/// success). Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ml_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version string (static).
#[no_mangle]
pub extern "C" fn ml_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ml_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// T(y) = y + alpha on [0, c), y + beta on [c, 1), mod 1.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_rotation_new(
    alpha: *const c_char,
    beta: *const c_char,
    c: *const c_char,
    out: *mut *mut MlDoubleRotation,
) -> MlStatus {
    guard(|| {
        let slot = self::out(out, "out")?;
        let t = DoubleRotation::new(scalar(alpha, "alpha")?, scalar(beta, "beta")?, scalar(c, "c")?)
            .map_err(invalid)?;
        *slot = Box::into_raw(Box::new(MlDoubleRotation(t)));
        Ok(())
    })
}

/// Section return map of the table with mirror at x = a, height b, slope t.
///
/// # Safety
/// As for `ml_rotation_new`.
#[no_mangle]
pub unsafe extern "C" fn ml_rotation_from_billiard(
    a: *const c_char,
    b: *const c_char,
    t: *const c_char,
    out: *mut *mut MlDoubleRotation,
) -> MlStatus {
    guard(|| {
        let slot = self::out(out, "out")?;
        let table = Table::new(scalar(a, "a")?, scalar(b, "b")?).map_err(invalid)?;
        let map = from_billiard_params(&table, &DirectionSlope::new(scalar(t, "t")?)).map_err(invalid)?;
        *slot = Box::into_raw(Box::new(MlDoubleRotation(map)));
        Ok(())
    })
}

/// # Safety
/// `h` must come from `ml_rotation_new`/`ml_rotation_from_billiard` and not
/// have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ml_rotation_free(h: *mut MlDoubleRotation) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Writes the parameters as newly allocated strings.
///
/// # Safety
/// `h` must be a live handle; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ml_rotation_params(
    h: *const MlDoubleRotation,
    alpha: *mut *mut c_char,
    beta: *mut *mut c_char,
    c: *mut *mut c_char,
) -> MlStatus {
    guard(|| {
        let t = &handle(h)?.0;
        let (a, b, cc) = (out(alpha, "alpha")?, out(beta, "beta")?, out(c, "c")?);
        *a = owned_string(t.alpha.to_string());
        *b = owned_string(t.beta.to_string());
        *cc = owned_string(t.c.to_string());
        Ok(())
    })
}

/// T(y) as a newly allocated string; y must lie in [0, 1).
///
/// # Safety
/// `h` must be a live handle, `y` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_rotation_apply(
    h: *const MlDoubleRotation,
    y: *const c_char,
    out: *mut *mut c_char,
) -> MlStatus {
    guard(|| {
        let t = &handle(h)?.0;
        let y = scalar(y, "y")?;
        if !y.in_unit() {
            return Err(invalid(format!("y = {y} is outside [0,1)")));
        }
        *self::out(out, "out")? = owned_string(t.apply(&y).to_string());
        Ok(())
    })
}

/// The first `n` letters (0 or 1) of the coding of y, written to `word`.
///
/// # Safety
/// `word` must have room for `n` bytes.
#[no_mangle]
pub unsafe extern "C" fn ml_rotation_encode(
    h: *const MlDoubleRotation,
    y: *const c_char,
    n: usize,
    word: *mut u8,
) -> MlStatus {
    guard(|| {
        let t = &handle(h)?.0;
        let y = scalar(y, "y")?;
        if !y.in_unit() {
            return Err(invalid(format!("y = {y} is outside [0,1)")));
        }
        if n > 0 && word.is_null() {
            return Err((MlStatus::NullPointer, "word is null".into()));
        }
        for (k, letter) in t.encode(&y, n).into_iter().enumerate() {
            *word.add(k) = letter;
        }
        Ok(())
    })
}

/// Builds L(0..=n_max) of the coded map.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_language_build(
    h: *const MlDoubleRotation,
    n_max: usize,
    out: *mut *mut MlLanguage,
) -> MlStatus {
    guard(|| {
        let t = &handle(h)?.0;
        let slot = self::out(out, "out")?;
        *slot = Box::into_raw(Box::new(MlLanguage(build_language(t, n_max))));
        Ok(())
    })
}

/// # Safety
/// `h` must come from `ml_language_build` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ml_language_free(h: *mut MlLanguage) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_language_n_max(h: *const MlLanguage, out: *mut usize) -> MlStatus {
    guard(|| {
        *self::out(out, "out")? = handle(h)?.0.n_max();
        Ok(())
    })
}

/// p(n), the number of words of length n.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_language_complexity(
    h: *const MlLanguage,
    n: usize,
    out: *mut usize,
) -> MlStatus {
    guard(|| {
        let l = &handle(h)?.0;
        if n > l.n_max() {
            return Err((MlStatus::OutOfRange, format!("n = {n} exceeds n_max = {}", l.n_max())));
        }
        *self::out(out, "out")? = l.p(n);
        Ok(())
    })
}

/// [s(n+1) − s(n)] minus the bispecial / non-prolongable sum; needs
/// n + 2 <= n_max.
///
/// # Safety
/// `h` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ml_language_cassaigne_residual(
    h: *const MlLanguage,
    n: usize,
    out: *mut i64,
) -> MlStatus {
    guard(|| {
        let l = &handle(h)?.0;
        let r = cassaigne_residual(l, n).map_err(|e| (MlStatus::OutOfRange, e.to_string()))?;
        *self::out(out, "out")? = r;
        Ok(())
    })
}

/// Class of the direction t at a = 1/4 with mirror height b. Doubling times
/// are written as -1 when the chain does not double.
///
/// # Safety
/// Strings NUL-terminated; out-pointers writable.
#[no_mangle]
pub unsafe extern "C" fn ml_classify_quarter(
    b: *const c_char,
    t: *const c_char,
    cap: usize,
    class: *mut MlClass,
    n0_e: *mut i64,
    n0_f: *mut i64,
) -> MlStatus {
    guard(|| {
        let (class, n0_e, n0_f) = (out(class, "class")?, out(n0_e, "n0_e")?, out(n0_f, "n0_f")?);
        let map = quarter_map(&scalar(b, "b")?, &DirectionSlope::new(scalar(t, "t")?)).map_err(invalid)?;
        let c = classify_map(&map, cap);
        *class = match c.kind {
            ClassKind::A1 => MlClass::A1,
            ClassKind::A2 => MlClass::A2,
            ClassKind::A3 => MlClass::A3,
            ClassKind::Exceptional => MlClass::Exceptional,
            ClassKind::Undecided => MlClass::Undecided,
        };
        let idx = |v: Option<usize>| v.map_or(-1, |v| v as i64);
        *n0_e = idx(c.n0_e());
        *n0_f = idx(c.n0_f());
        Ok(())
    })
}

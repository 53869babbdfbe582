//! C interface to `ffbias`.
//!
//! Curves and local tables are opaque handles. Every fallible call returns an
//! [`FfbStatus`]; the message of the last failure on the calling thread is
//! available from [`ffb_last_error`]. Panics are caught at the boundary and
//! reported as `FFB_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ffbias::bias::{bias_series_from_table, BiasKind};
use ffbias::curve::{check_nonconstant, parse_curve, CountConfig, CurveSpec, LocalTable};
use ffbias::drh::drh_check_from_table;
use ffbias::lfunc::{default_trunc, l_polynomial_from_table};
use ffbias::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FfbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Unsupported = 4,
    /// an internal consistency check failed (Hasse, functional equation, ...)
    Consistency = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// A parsed, non-constant elliptic curve over `F_q(T)`.
pub struct FfbCurve(CurveSpec);

/// Local data of one curve, extended by degree on demand.
pub struct FfbTable(LocalTable);

/// Summary of an `L`-polynomial.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FfbLPolyInfo {
    pub degree: usize,
    pub epsilon: i32,
    pub rank: u32,
    pub trunc: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(FfbStatus, String);

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FfbStatus {
    match ffbias::cli::exit_code(e) {
        2 => FfbStatus::Parse,
        4 => FfbStatus::Consistency,
        _ => FfbStatus::Unsupported,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FfbStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FfbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            FfbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| p.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            set_error(msg);
            FfbStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(FfbStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn table_arg<'a>(t: *mut FfbTable) -> Result<&'a mut LocalTable, Failure> {
    t.as_mut().map(|t| &mut t.0).ok_or_else(|| null("table"))
}

unsafe fn out_slice<'a>(buf: *mut f64, len: usize, need: usize) -> Result<&'a mut [f64], Failure> {
    if buf.is_null() {
        return Err(null("output buffer"));
    }
    if len < need {
        return Err(Failure(FfbStatus::BufferTooSmall, format!("buffer holds {len} values, {need} needed")));
    }
    Ok(std::slice::from_raw_parts_mut(buf, need))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ffb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn ffb_status_name(status: FfbStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FfbStatus::Ok => c"ok",
        FfbStatus::NullPointer => c"null pointer",
        FfbStatus::InvalidUtf8 => c"invalid utf-8",
        FfbStatus::Parse => c"parse error",
        FfbStatus::Unsupported => c"unsupported input",
        FfbStatus::Consistency => c"internal consistency failure",
        FfbStatus::BufferTooSmall => c"buffer too small",
        FfbStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Parse a curve file (`q = 5` / `a = [a1, a2, a3, a4, a6]` lines) and reject
/// constant `j`. On success `*out` owns a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ffb_curve_parse(text: *const c_char, out: *mut *mut FfbCurve) -> FfbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let c = parse_curve(str_arg(text, "text")?)?;
        check_nonconstant(&c)?;
        *out = Box::into_raw(Box::new(FfbCurve(c)));
        Ok(())
    })
}

/// # Safety
/// `curve` must come from [`ffb_curve_parse`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ffb_curve_free(curve: *mut FfbCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Field size `q` of the constant field, or 0 for a null handle.
///
/// # Safety
/// `curve` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ffb_curve_q(curve: *const FfbCurve) -> u64 {
    curve.as_ref().map_or(0, |c| c.0.field().q())
}

/// New local table for `curve`. `seed` only steers the random points used
/// while counting; results do not depend on it.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ffb_table_new(curve: *const FfbCurve, seed: u64, out: *mut *mut FfbTable) -> FfbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let c = curve.as_ref().ok_or_else(|| null("curve"))?;
        let cfg = CountConfig { seed, ..CountConfig::default() };
        *out = Box::into_raw(Box::new(FfbTable(LocalTable::new(&c.0, cfg)?)));
        Ok(())
    })
}

/// # Safety
/// `table` must come from [`ffb_table_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ffb_table_free(table: *mut FfbTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Compute local data for all places of degree `<= d_max`.
///
/// # Safety
/// `table` must be a live handle not used concurrently.
#[no_mangle]
pub unsafe extern "C" fn ffb_table_extend(table: *mut FfbTable, d_max: usize) -> FfbStatus {
    guard(|| Ok(table_arg(table)?.extend_to(d_max)?))
}

/// Exact `L`-polynomial of `Sym^n` (`n` is 1 or 2). `trunc = 0` picks the
/// default truncation. Coefficients are not returned here; see
/// [`ffb_lpoly_json`].
///
/// # Safety
/// `table` must be a live handle and `info` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ffb_lpoly_info(
    table: *mut FfbTable,
    n: u32,
    trunc: usize,
    include_infinite: bool,
    info: *mut FfbLPolyInfo,
) -> FfbStatus {
    guard(|| {
        let t = table_arg(table)?;
        let info = info.as_mut().ok_or_else(|| null("info"))?;
        let trunc = if trunc == 0 { default_trunc(t.special(), n, include_infinite) } else { trunc };
        let l = l_polynomial_from_table(t, n, trunc, include_infinite)?;
        *info = FfbLPolyInfo { degree: l.degree, epsilon: l.epsilon, rank: l.rank, trunc: l.trunc };
        Ok(())
    })
}

/// The `L`-polynomial as a JSON object with decimal-string coefficients.
/// Release the string with [`ffb_string_free`].
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ffb_lpoly_json(
    table: *mut FfbTable,
    n: u32,
    trunc: usize,
    include_infinite: bool,
    out: *mut *mut c_char,
) -> FfbStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let t = table_arg(table)?;
        let trunc = if trunc == 0 { default_trunc(t.special(), n, include_infinite) } else { trunc };
        let l = l_polynomial_from_table(t, n, trunc, include_infinite)?;
        let s = CString::new(l.to_json(None).to_string()).expect("json has no NUL");
        *out = s.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ffb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Cumulative bias series of `kind` (`a_weighted`, `mertens_II`, ...) for
/// degrees `1..=d_max`, written to `values[0..d_max]`. The fitted predicted
/// slope goes to `predicted_slope` when it is not null.
///
/// # Safety
/// `table` must be a live handle, `kind` a NUL-terminated string and
/// `values` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ffb_bias_series(
    table: *mut FfbTable,
    kind: *const c_char,
    d_max: usize,
    include_infinite: bool,
    values: *mut f64,
    len: usize,
    predicted_slope: *mut f64,
) -> FfbStatus {
    guard(|| {
        let t = table_arg(table)?;
        let kind: BiasKind = str_arg(kind, "kind")?.parse()?;
        let out = out_slice(values, len, d_max)?;
        let s = bias_series_from_table(t, kind, d_max, include_infinite)?;
        out.copy_from_slice(&s.values);
        if let Some(p) = predicted_slope.as_mut() {
            *p = s.predicted_slope;
        }
        Ok(())
    })
}

/// Ratios of the rescaled partial Euler product to its predicted limit for
/// degrees `1..=d_max`, written to `ratios[0..d_max]`. The centre order and
/// the limit go to `m` and `rhs` when those are not null.
///
/// # Safety
/// `table` must be a live handle and `ratios` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn ffb_drh_ratios(
    table: *mut FfbTable,
    d_max: usize,
    include_infinite: bool,
    ratios: *mut f64,
    len: usize,
    m: *mut u32,
    rhs: *mut f64,
) -> FfbStatus {
    guard(|| {
        let t = table_arg(table)?;
        let out = out_slice(ratios, len, d_max)?;
        let r = drh_check_from_table(t, d_max, include_infinite, None)?;
        out.copy_from_slice(&r.ratio);
        if let Some(m) = m.as_mut() {
            *m = r.m;
        }
        if let Some(rhs) = rhs.as_mut() {
            *rhs = r.rhs;
        }
        Ok(())
    })
}

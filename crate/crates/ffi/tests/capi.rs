use std::ffi::{CStr, CString};
use std::ptr;

use ffbias_ffi::*;

const LEGENDRE5: &str = "q = 5\na = [0, 4*T+4, 0, T, 0]\n";

fn last_error() -> String {
    unsafe { CStr::from_ptr(ffb_last_error()) }.to_str().unwrap().to_owned()
}

fn curve(text: &str) -> (FfbStatus, *mut FfbCurve) {
    let text = CString::new(text).unwrap();
    let mut c = ptr::null_mut();
    let st = unsafe { ffb_curve_parse(text.as_ptr(), &mut c) };
    (st, c)
}

fn table(text: &str) -> *mut FfbTable {
    let (st, c) = curve(text);
    assert_eq!(st, FfbStatus::Ok);
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { ffb_table_new(c, 7, &mut t) }, FfbStatus::Ok);
    unsafe { ffb_curve_free(c) };
    t
}

#[test]
fn legendre_lpoly_is_one() {
    let t = table(LEGENDRE5);
    let mut info = FfbLPolyInfo::default();
    assert_eq!(unsafe { ffb_lpoly_info(t, 1, 8, true, &mut info) }, FfbStatus::Ok);
    assert_eq!(info, FfbLPolyInfo { degree: 0, epsilon: 1, rank: 0, trunc: 8 });
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ffb_lpoly_json(t, 1, 8, true, &mut s) }, FfbStatus::Ok);
    let json = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ffb_string_free(s) };
    assert!(json.contains("\"coeffs\":[\"1\"]"), "{json}");
    unsafe { ffb_table_free(t) };
}

#[test]
fn series_and_ratios() {
    let t = table(LEGENDRE5);
    let mut v = [0.0; 4];
    let kind = CString::new("a_weighted").unwrap();
    let mut pred = f64::NAN;
    assert_eq!(unsafe { ffb_bias_series(t, kind.as_ptr(), 4, true, v.as_mut_ptr(), 4, &mut pred) }, FfbStatus::Ok);
    // degree one: traces -2, 2, -2 at good places, +1 twice, 0 at infinity
    assert!((v[0] - (-2.0 / 5.0 + 2.0 / 5.0)).abs() < 1e-12, "{v:?}");
    assert_eq!(pred, 0.5);

    let mut small = [0.0; 2];
    assert_eq!(
        unsafe { ffb_bias_series(t, kind.as_ptr(), 4, true, small.as_mut_ptr(), 2, ptr::null_mut()) },
        FfbStatus::BufferTooSmall
    );
    let bad = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { ffb_bias_series(t, bad.as_ptr(), 4, true, v.as_mut_ptr(), 4, ptr::null_mut()) },
        FfbStatus::Parse
    );
    assert!(last_error().contains("nope"));

    let mut r = [0.0; 3];
    let (mut m, mut rhs) = (9u32, 0.0);
    assert_eq!(unsafe { ffb_drh_ratios(t, 3, true, r.as_mut_ptr(), 3, &mut m, &mut rhs) }, FfbStatus::Ok);
    assert_eq!(m, 0);
    assert!((rhs - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    assert!(r.iter().all(|x| x.is_finite() && *x > 0.0));
    unsafe { ffb_table_free(t) };
}

#[test]
fn errors_are_reported() {
    assert_eq!(curve("q = 5\na = [0, 0, 0, T, ").0, FfbStatus::Parse);
    assert!(!last_error().is_empty());
    let (st, c) = curve("q = 5\na = [0, 0, 0, 1, 1]");
    assert_eq!(st, FfbStatus::Unsupported);
    assert!(c.is_null());
    assert_eq!(curve("q = 5\na = [0, 0, 0, T, 1]").0, FfbStatus::Ok);
    assert_eq!(last_error(), "");

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ffb_curve_parse(ptr::null(), &mut out) }, FfbStatus::NullPointer);
    assert_eq!(unsafe { ffb_table_extend(ptr::null_mut(), 2) }, FfbStatus::NullPointer);
    assert_eq!(unsafe { ffb_curve_q(ptr::null()) }, 0);
    let name = unsafe { CStr::from_ptr(ffb_status_name(FfbStatus::BufferTooSmall)) };
    assert_eq!(name.to_str().unwrap(), "buffer too small");
    unsafe {
        ffb_curve_free(ptr::null_mut());
        ffb_table_free(ptr::null_mut());
        ffb_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_interface() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ffbias.h")).unwrap();
    for name in [
        "ffb_curve_parse",
        "ffb_curve_free",
        "ffb_table_new",
        "ffb_table_extend",
        "ffb_lpoly_info",
        "ffb_lpoly_json",
        "ffb_bias_series",
        "ffb_drh_ratios",
        "ffb_last_error",
        "typedef struct FfbCurve FfbCurve",
        "FFB_STATUS_OK",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

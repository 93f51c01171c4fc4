//! C ABI for the weilss library.
//!
//! Conventions: every fallible call returns a [`WeilssStatus`]; results come
//! back through out-pointers. Strings returned through `char **` are
//! allocated by this library and must be released with
//! [`weilss_string_free`]. A human-readable message for the most recent
//! failure on the current thread is available from [`weilss_last_error`].
//! Field handles are opaque and freed with [`weilss_field_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use weilss::characters::minus_one_power_condition;
use weilss::finite_field::{make_field, FieldCtx};
use weilss::weil::is_supersingular;
use weilss::zeta::{
    l_polynomial_with_cap, CurveFamily, CurveInstance, LPolynomial, DEFAULT_POINTS_CAP,
};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeilssStatus {
    /// Success.
    Ok = 0,
    /// A pointer argument was null or a scalar argument malformed.
    InvalidArgument = 1,
    /// Parameters describe no valid object (bad prime, bad family, ...).
    BadParameters = 2,
    /// The computation exceeds the configured size caps.
    TooLarge = 3,
    /// Internal error; details via weilss_last_error.
    Internal = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(CString::new(msg).unwrap_or_default());
    });
}

fn status_of(err: &weilss::Error) -> WeilssStatus {
    match err {
        weilss::Error::FieldTooLarge { .. } => WeilssStatus::TooLarge,
        weilss::Error::NotPrime(_)
        | weilss::Error::BadParameters(_)
        | weilss::Error::UnsupportedFamily(_)
        | weilss::Error::NotCoprime(_, _)
        | weilss::Error::BadCharOrder { .. } => WeilssStatus::BadParameters,
        _ => WeilssStatus::Internal,
    }
}

/// Run a fallible body, translating panics and errors into status codes.
fn guarded<F: FnOnce() -> Result<WeilssStatus, weilss::Error>>(body: F) -> WeilssStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            WeilssStatus::Internal
        }
    }
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn weilss_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Release a string allocated by this library.
///
/// # Safety
/// `s` must have been returned through a `char **` out-parameter of this
/// library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn weilss_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn emit_string(out: *mut *mut c_char, value: String) -> WeilssStatus {
    match CString::new(value) {
        Ok(cstr) => {
            unsafe { *out = cstr.into_raw() };
            WeilssStatus::Ok
        }
        Err(_) => WeilssStatus::Internal,
    }
}

/// Opaque handle to an F_{p^k} arithmetic context.
pub struct WeilssField {
    ctx: FieldCtx,
}

/// Build the context for F_{p^k} (default size cap 2^24 elements).
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn weilss_field_new(
    p: u64,
    k: u32,
    out: *mut *mut WeilssField,
) -> WeilssStatus {
    if out.is_null() || k == 0 {
        return WeilssStatus::InvalidArgument;
    }
    guarded(|| {
        let ctx = make_field(p, k)?;
        unsafe { *out = Box::into_raw(Box::new(WeilssField { ctx })) };
        Ok(WeilssStatus::Ok)
    })
}

/// Release a field handle.
///
/// # Safety
/// `field` must come from [`weilss_field_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn weilss_field_free(field: *mut WeilssField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Number of elements p^k of the field.
///
/// # Safety
/// `field` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn weilss_field_order(field: *const WeilssField) -> u64 {
    unsafe { &*field }.ctx.order()
}

/// Discrete logarithm of the element with the given index with respect to
/// the context generator. Fails on the zero element.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn weilss_field_dlog(
    field: *const WeilssField,
    elem_index: u64,
    out: *mut u64,
) -> WeilssStatus {
    if field.is_null() || out.is_null() {
        return WeilssStatus::InvalidArgument;
    }
    let ctx = &unsafe { &*field }.ctx;
    if elem_index >= ctx.order() {
        return WeilssStatus::InvalidArgument;
    }
    guarded(|| {
        let value = ctx.dlog(&ctx.elem_from_index(elem_index))?;
        unsafe { *out = value };
        Ok(WeilssStatus::Ok)
    })
}

/// Absolute trace (to the prime field) of the element with the given index.
///
/// # Safety
/// `field` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn weilss_field_trace(
    field: *const WeilssField,
    elem_index: u64,
    out: *mut u64,
) -> WeilssStatus {
    if field.is_null() || out.is_null() {
        return WeilssStatus::InvalidArgument;
    }
    let ctx = &unsafe { &*field }.ctx;
    if elem_index >= ctx.order() {
        return WeilssStatus::InvalidArgument;
    }
    unsafe { *out = ctx.trace(&ctx.elem_from_index(elem_index)) };
    WeilssStatus::Ok
}

/// Does some power of q hit -1 mod n? On success `*out_holds` is 1 or 0 and
/// `*out_witness` the minimal exponent s (0 when the condition fails).
///
/// # Safety
/// `out_holds` and `out_witness` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn weilss_minus_one_power(
    q: u64,
    n: u64,
    out_holds: *mut i32,
    out_witness: *mut u64,
) -> WeilssStatus {
    if out_holds.is_null() || out_witness.is_null() || q < 2 || n == 0 {
        return WeilssStatus::InvalidArgument;
    }
    guarded(|| {
        let (holds, witness) = minus_one_power_condition(q, n)?;
        unsafe {
            *out_holds = holds as i32;
            *out_witness = witness.unwrap_or(0);
        }
        Ok(WeilssStatus::Ok)
    })
}

/// Supersingularity verdict for an explicit L-polynomial with coefficients
/// a_0..a_2g (a_0 = 1) over F_q, as a JSON document.
///
/// # Safety
/// `coeffs` must point to `len` readable values and `out_json` must be valid.
#[no_mangle]
pub unsafe extern "C" fn weilss_sstest_json(
    coeffs: *const i64,
    len: usize,
    q: u64,
    out_json: *mut *mut c_char,
) -> WeilssStatus {
    if coeffs.is_null() || out_json.is_null() || len == 0 || len % 2 == 0 {
        return WeilssStatus::InvalidArgument;
    }
    let raw = unsafe { std::slice::from_raw_parts(coeffs, len) };
    if raw[0] != 1 {
        return WeilssStatus::BadParameters;
    }
    guarded(|| {
        let lpoly = LPolynomial::new(raw.iter().map(|&c| c.into()).collect(), q);
        let verdict = is_supersingular(&lpoly)?;
        Ok(emit_string(
            out_json,
            serde_json::to_string(&verdict).unwrap(),
        ))
    })
}

fn parse_instance(
    family: &str,
    p: u64,
    r: u32,
    n: u64,
    qas: u64,
    a: u64,
    b: u64,
) -> Result<CurveInstance, weilss::Error> {
    let family = match family {
        "artin-schreier" => CurveFamily::ArtinSchreier {
            qas: if qas == 0 { p } else { qas },
            n,
        },
        "fermat" => CurveFamily::FermatCurve { n },
        "three-point" => CurveFamily::ThreePointCover { n, a, b },
        other => return Err(weilss::Error::UnsupportedFamily(other.into())),
    };
    CurveInstance::new(family, p, r)
}

/// Criterion-side prediction for a curve family instance, as JSON. `family`
/// is "artin-schreier", "fermat" or "three-point"; `qas`, `a`, `b` are only
/// read for the families that use them (pass 0 otherwise).
///
/// # Safety
/// `family` must be a NUL-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn weilss_predict_json(
    family: *const c_char,
    p: u64,
    r: u32,
    n: u64,
    qas: u64,
    a: u64,
    b: u64,
    out_json: *mut *mut c_char,
) -> WeilssStatus {
    if family.is_null() || out_json.is_null() {
        return WeilssStatus::InvalidArgument;
    }
    let family = match unsafe { CStr::from_ptr(family) }.to_str() {
        Ok(s) => s.to_string(),
        Err(_) => return WeilssStatus::InvalidArgument,
    };
    guarded(|| {
        let curve = parse_instance(&family, p, r, n, qas, a, b)?;
        let prediction = weilss::families::predict(&curve)?;
        let doc = serde_json::json!({
            "family": curve.family,
            "p": curve.p,
            "r": curve.r,
            "genus": curve.genus(),
            "prediction": prediction,
        });
        Ok(emit_string(out_json, doc.to_string()))
    })
}

/// Point counts, L-polynomial and verdict for a curve instance, as JSON.
/// `cap_points` of 0 selects the default cap on q^genus.
///
/// # Safety
/// `family` must be a NUL-terminated string and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn weilss_zeta_json(
    family: *const c_char,
    p: u64,
    r: u32,
    n: u64,
    qas: u64,
    a: u64,
    b: u64,
    cap_points: u64,
    out_json: *mut *mut c_char,
) -> WeilssStatus {
    if family.is_null() || out_json.is_null() {
        return WeilssStatus::InvalidArgument;
    }
    let family = match unsafe { CStr::from_ptr(family) }.to_str() {
        Ok(s) => s.to_string(),
        Err(_) => return WeilssStatus::InvalidArgument,
    };
    let cap = if cap_points == 0 {
        DEFAULT_POINTS_CAP
    } else {
        cap_points
    };
    guarded(|| {
        let curve = parse_instance(&family, p, r, n, qas, a, b)?;
        let lpoly = l_polynomial_with_cap(&curve, cap)?;
        let verdict = is_supersingular(&lpoly)?;
        let counts: Vec<u64> = (1..=curve.genus() as u32)
            .map(|k| {
                let c = lpoly.expected_count(k);
                u64::try_from(c).expect("counts fit u64")
            })
            .collect();
        let doc = serde_json::json!({
            "family": curve.family,
            "p": curve.p,
            "r": curve.r,
            "q": curve.q(),
            "genus": curve.genus(),
            "counts": counts,
            "l_polynomial": lpoly.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "verdict": verdict,
        });
        Ok(emit_string(out_json, doc.to_string()))
    })
}

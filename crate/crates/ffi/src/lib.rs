//! C interface to `prelie-core`.
//!
//! Series and fields cross the boundary as opaque handles. Every fallible
//! call returns a [`PrelieStatus`] and writes its result through an out
//! pointer; the message of the most recent failure on the calling thread is
//! available from [`prelie_last_error`]. Strings returned by the library are
//! owned by the caller and released with [`prelie_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use prelie_core::io::{self, FieldDoc, JetDoc, MuDoc, PowerSeriesDoc};
use prelie_core::vectorfields::{self, parse_point, PolyVectorField};
use prelie_core::{group, quotients, series, Error, TreeSeries};

/// Result codes shared by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrelieStatus {
    Ok = 0,
    NullPointer = 1,
    /// Malformed text, JSON, tree code or UTF-8.
    InvalidInput = 2,
    NotInvertible = 3,
    /// A field has a term of degree below two.
    Valuation = 4,
    InsufficientOrder = 5,
    OrderTooLarge = 6,
    /// Orders or dimensions of two operands differ.
    Mismatch = 7,
    /// A panic was caught at the boundary.
    Internal = 8,
}

/// Truncated series over rooted trees.
pub struct PrelieSeries(TreeSeries);

/// Polynomial vector field with a degree cap.
pub struct PrelieField(PolyVectorField);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PrelieStatus {
    match e {
        Error::NotInvertible => PrelieStatus::NotInvertible,
        Error::Valuation { .. } => PrelieStatus::Valuation,
        Error::InsufficientOrder { .. } => PrelieStatus::InsufficientOrder,
        Error::OrderTooLarge { .. } | Error::ZeroOrder => PrelieStatus::OrderTooLarge,
        Error::OrderMismatch { .. } | Error::DimensionMismatch { .. } => PrelieStatus::Mismatch,
        _ => PrelieStatus::InvalidInput,
    }
}

/// Runs `f`, storing its value in `out` and translating errors and panics.
fn guard<T>(out: *mut T, f: impl FnOnce() -> Result<T, (PrelieStatus, String)>) -> PrelieStatus {
    if out.is_null() {
        set_error("output pointer is null".into());
        return PrelieStatus::NullPointer;
    }
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(v)) => {
            // SAFETY: checked non-null; the caller provides writable storage.
            unsafe { out.write(v) };
            PrelieStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error".into());
            PrelieStatus::Internal
        }
    }
}

fn core<T>(r: prelie_core::Result<T>) -> Result<T, (PrelieStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (PrelieStatus, String) {
    (PrelieStatus::NullPointer, format!("{what} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PrelieStatus, String)> {
    // SAFETY: the caller passes a handle obtained from this library or null.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, (PrelieStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and NUL-terminated per the C contract.
    unsafe { CStr::from_ptr(p) }.to_str().map_err(|e| {
        (
            PrelieStatus::InvalidInput,
            format!("{what} is not UTF-8: {e}"),
        )
    })
}

fn owned(s: String) -> Result<*mut c_char, (PrelieStatus, String)> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| (PrelieStatus::Internal, "interior NUL in output".into()))
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn prelie_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn prelie_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// `exp*` truncated at `order` nodes.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_exp(
    order: usize,
    out: *mut *mut PrelieSeries,
) -> PrelieStatus {
    guard(out, || {
        Ok(boxed(PrelieSeries(core(series::exp_star(order))?)))
    })
}

/// `log*` truncated at `order` nodes.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_log(
    order: usize,
    out: *mut *mut PrelieSeries,
) -> PrelieStatus {
    guard(out, || {
        Ok(boxed(PrelieSeries(core(group::log_star(order))?)))
    })
}

/// Reads a series document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_from_json(
    json: *const c_char,
    out: *mut *mut PrelieSeries,
) -> PrelieStatus {
    guard(out, || {
        let s = unsafe { text(json, "json") }?;
        Ok(boxed(PrelieSeries(core(io::series_from_json(s))?)))
    })
}

/// Writes a series document.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_to_json(
    s: *const PrelieSeries,
    out: *mut *mut c_char,
) -> PrelieStatus {
    guard(out, || {
        owned(io::series_to_json(&unsafe { borrow(s, "series") }?.0))
    })
}

/// Truncation order of a series, or 0 for null.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_order(s: *const PrelieSeries) -> usize {
    unsafe { s.as_ref() }.map_or(0, |s| s.0.order())
}

/// Group product `a × b`.
///
/// # Safety
/// `a` and `b` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_compose(
    a: *const PrelieSeries,
    b: *const PrelieSeries,
    out: *mut *mut PrelieSeries,
) -> PrelieStatus {
    guard(out, || {
        let (a, b) = unsafe { (borrow(a, "a")?, borrow(b, "b")?) };
        Ok(boxed(PrelieSeries(core(group::compose(&a.0, &b.0))?)))
    })
}

/// Group inverse.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_invert(
    s: *const PrelieSeries,
    out: *mut *mut PrelieSeries,
) -> PrelieStatus {
    guard(out, || {
        let s = unsafe { borrow(s, "series") }?;
        Ok(boxed(PrelieSeries(core(group::invert(&s.0))?)))
    })
}

/// Image on linear trees, as a power-series document.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_phi_json(
    s: *const PrelieSeries,
    out: *mut *mut c_char,
) -> PrelieStatus {
    guard(out, || {
        let s = unsafe { borrow(s, "series") }?;
        owned(io::to_json(&PowerSeriesDoc::from_series(&quotients::phi(
            &s.0,
        ))))
    })
}

/// Image on corollas, as a `(lambda, f)` document.
///
/// # Safety
/// `s` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_psi_json(
    s: *const PrelieSeries,
    out: *mut *mut c_char,
) -> PrelieStatus {
    guard(out, || {
        let s = unsafe { borrow(s, "series") }?;
        owned(io::to_json(&MuDoc::from_image(&quotients::psi(&s.0))))
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn prelie_series_free(s: *mut PrelieSeries) {
    if !s.is_null() {
        // SAFETY: produced by `Box::into_raw`.
        drop(unsafe { Box::from_raw(s) });
    }
}

/// Parses `;`-separated components in `dim` variables, truncated at `degree`.
///
/// # Safety
/// `components` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_field_parse(
    components: *const c_char,
    dim: usize,
    degree: usize,
    out: *mut *mut PrelieField,
) -> PrelieStatus {
    guard(out, || {
        let s = unsafe { text(components, "components") }?;
        Ok(boxed(PrelieField(core(PolyVectorField::parse(
            s, dim, degree,
        ))?)))
    })
}

/// Reads a field document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_field_from_json(
    json: *const c_char,
    out: *mut *mut PrelieField,
) -> PrelieStatus {
    guard(out, || {
        let s = unsafe { text(json, "json") }?;
        let doc: FieldDoc = core(io::from_json(s))?;
        Ok(boxed(PrelieField(core(doc.to_field())?)))
    })
}

/// Writes a field document.
///
/// # Safety
/// `f` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_field_to_json(
    f: *const PrelieField,
    out: *mut *mut c_char,
) -> PrelieStatus {
    guard(out, || {
        let f = unsafe { borrow(f, "field") }?;
        owned(io::to_json(&FieldDoc::from_field(&f.0)))
    })
}

/// Acts on a field by a series: `Σ_t s_t F_t` over elementary differentials.
///
/// # Safety
/// `s` and `f` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_field_apply_series(
    s: *const PrelieSeries,
    f: *const PrelieField,
    out: *mut *mut PrelieField,
) -> PrelieStatus {
    guard(out, || {
        let (s, f) = unsafe { (borrow(s, "series")?, borrow(f, "field")?) };
        Ok(boxed(PrelieField(core(vectorfields::apply_series(
            &s.0, &f.0,
        ))?)))
    })
}

/// Field whose time-one displacement is `g`, up to `degree`.
///
/// # Safety
/// `g` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_field_recover(
    g: *const PrelieField,
    degree: usize,
    out: *mut *mut PrelieField,
) -> PrelieStatus {
    guard(out, || {
        let g = unsafe { borrow(g, "field") }?;
        Ok(boxed(PrelieField(core(vectorfields::recover_field(
            &g.0, degree,
        ))?)))
    })
}

/// Taylor jet of the flow through `point` (comma-separated rationals), as a
/// jet document with `terms` coefficients.
///
/// # Safety
/// `f` must be a live handle, `point` a NUL-terminated string, and `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn prelie_field_flow_json(
    f: *const PrelieField,
    point: *const c_char,
    terms: usize,
    out: *mut *mut c_char,
) -> PrelieStatus {
    guard(out, || {
        let f = unsafe { borrow(f, "field") }?;
        let p = unsafe { text(point, "point") }?;
        let g0 = core(parse_point(p, f.0.dim()))?;
        let jet = core(vectorfields::flow_taylor(&f.0, &g0, terms))?;
        owned(io::to_json(&JetDoc::from_jet(&jet)))
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn prelie_field_free(f: *mut PrelieField) {
    if !f.is_null() {
        // SAFETY: produced by `Box::into_raw`.
        drop(unsafe { Box::from_raw(f) });
    }
}

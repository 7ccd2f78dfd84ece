//! C ABI for the `k0silting` engine.
//!
//! Conventions:
//! * handles are opaque pointers created by `*_load_json` and released by
//!   the matching `*_free`; a complex or silting handle must not outlive the
//!   algebra handle it was created from;
//! * every fallible call returns a `k0s_status`; on failure
//!   `k0s_last_error_message` holds a thread-local description valid until
//!   the next failing call on the same thread;
//! * strings returned through `char **` are NUL-terminated UTF-8 allocated
//!   by this library and must be released with `k0s_string_free`.
//!
//! The matching C header lives at `include/k0silting.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use k0silting::cli;
use k0silting::error::Error;
use k0silting::homotopycat::{hom_space, Complex};
use k0silting::pathalgebra::{Algebra, Presentation, DEFAULT_PATH_BOUND};
use k0silting::session::SessionConfig;
use k0silting::silting::SiltingCollection;

/// Status codes of the C ABI.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum K0sStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    Precondition = 3,
    /// The operation ran, and a mathematical assertion failed; the output
    /// JSON is still produced.
    VerificationFailed = 4,
    Internal = 5,
}

pub struct K0sAlgebra {
    algebra: Arc<Algebra>,
}

pub struct K0sComplex {
    complex: Complex,
}

pub struct K0sSilting {
    collection: SiltingCollection,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let cleaned: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(cleaned).expect("no interior NUL");
    });
}

fn status_of(err: &Error) -> K0sStatus {
    match err {
        Error::Parse(_) | Error::Io(_) => K0sStatus::ParseError,
        Error::Precondition(_) | Error::CertificateFailed { .. } => K0sStatus::Precondition,
        _ => K0sStatus::InvalidArgument,
    }
}

/// Most recent error message on this thread; empty string when none.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn k0s_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be a pointer previously returned through a `char **` output of
/// this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn k0s_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, K0sStatus> {
    if ptr.is_null() {
        set_error(&format!("{what}: null pointer"));
        return Err(K0sStatus::InvalidArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{what}: invalid UTF-8"));
        K0sStatus::InvalidArgument
    })
}

fn write_out<T>(out: *mut *mut T, value: T) -> K0sStatus {
    if out.is_null() {
        set_error("output pointer is null");
        return K0sStatus::InvalidArgument;
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    K0sStatus::Ok
}

fn write_string(out: *mut *mut c_char, s: String) -> K0sStatus {
    if out.is_null() {
        set_error("output pointer is null");
        return K0sStatus::InvalidArgument;
    }
    let cleaned: String = s.chars().filter(|&c| c != '\0').collect();
    let cs = CString::new(cleaned).expect("no interior NUL");
    unsafe { *out = cs.into_raw() };
    K0sStatus::Ok
}

fn guarded<F: FnOnce() -> K0sStatus>(f: F) -> K0sStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            K0sStatus::Internal
        }
    }
}

/// Loads an algebra presentation from JSON over the given field
/// (`"Q"` or `"Fp:<prime>"`; null means `Q`).
///
/// # Safety
/// `json` (and `field` when non-null) must be NUL-terminated strings; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn k0s_algebra_load_json(
    json: *const c_char,
    field: *const c_char,
    out: *mut *mut K0sAlgebra,
) -> K0sStatus {
    guarded(|| {
        let json = match read_str(json, "algebra json") {
            Ok(s) => s,
            Err(e) => return e,
        };
        let field = if field.is_null() {
            k0silting::exactmath::Field::Q
        } else {
            let spec = match read_str(field, "field") {
                Ok(s) => s,
                Err(e) => return e,
            };
            match SessionConfig::parse_field(spec) {
                Ok(f) => f,
                Err(e) => {
                    set_error(&e.to_string());
                    return K0sStatus::ParseError;
                }
            }
        };
        let pres: Presentation = match serde_json::from_str(json) {
            Ok(p) => p,
            Err(e) => {
                set_error(&e.to_string());
                return K0sStatus::ParseError;
            }
        };
        match Algebra::load(&pres, field, DEFAULT_PATH_BOUND) {
            Ok(a) => write_out(
                out,
                K0sAlgebra {
                    algebra: Arc::new(a),
                },
            ),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `a` must come from `k0s_algebra_load_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn k0s_algebra_free(a: *mut K0sAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// `dim Hom_Λ(P_i, P_j)` for vertex names `i`, `j`.
///
/// # Safety
/// Pointer arguments as in the other calls.
#[no_mangle]
pub unsafe extern "C" fn k0s_algebra_hom_dimension(
    a: *const K0sAlgebra,
    vertex_i: *const c_char,
    vertex_j: *const c_char,
    out: *mut usize,
) -> K0sStatus {
    guarded(|| {
        let Some(a) = a.as_ref() else {
            set_error("algebra handle is null");
            return K0sStatus::InvalidArgument;
        };
        if out.is_null() {
            set_error("output pointer is null");
            return K0sStatus::InvalidArgument;
        }
        let vi = match read_str(vertex_i, "vertex") {
            Ok(s) => s,
            Err(e) => return e,
        };
        let vj = match read_str(vertex_j, "vertex") {
            Ok(s) => s,
            Err(e) => return e,
        };
        let (i, j) = match (a.algebra.vertex_id(vi), a.algebra.vertex_id(vj)) {
            (Ok(i), Ok(j)) => (i, j),
            (Err(e), _) | (_, Err(e)) => {
                set_error(&e.to_string());
                return K0sStatus::InvalidArgument;
            }
        };
        *out = a.algebra.hom_dimension(i, j);
        K0sStatus::Ok
    })
}

/// # Safety
/// `a` must be a live algebra handle; `json` a NUL-terminated string; `out`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn k0s_complex_load_json(
    a: *const K0sAlgebra,
    json: *const c_char,
    out: *mut *mut K0sComplex,
) -> K0sStatus {
    guarded(|| {
        let Some(a) = a.as_ref() else {
            set_error("algebra handle is null");
            return K0sStatus::InvalidArgument;
        };
        let json = match read_str(json, "complex json") {
            Ok(s) => s,
            Err(e) => return e,
        };
        let value: serde_json::Value = match serde_json::from_str(json) {
            Ok(v) => v,
            Err(e) => {
                set_error(&e.to_string());
                return K0sStatus::ParseError;
            }
        };
        match Complex::from_json(a.algebra.clone(), &value) {
            Ok(c) => write_out(out, K0sComplex { complex: c }),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `c` must come from `k0s_complex_load_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn k0s_complex_free(c: *mut K0sComplex) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Serializes a complex back to its JSON encoding.
///
/// # Safety
/// `c` must be a live complex handle; `out` valid.
#[no_mangle]
pub unsafe extern "C" fn k0s_complex_to_json(
    c: *const K0sComplex,
    out: *mut *mut c_char,
) -> K0sStatus {
    guarded(|| {
        let Some(c) = c.as_ref() else {
            set_error("complex handle is null");
            return K0sStatus::InvalidArgument;
        };
        write_string(out, c.complex.to_json().to_string())
    })
}

/// `dim Hom_{K^b}(X, Σ^shift Y)`.
///
/// # Safety
/// `x`, `y` must be live complex handles over the same algebra handle.
#[no_mangle]
pub unsafe extern "C" fn k0s_hom_dimension(
    x: *const K0sComplex,
    y: *const K0sComplex,
    shift: i64,
    out: *mut usize,
) -> K0sStatus {
    guarded(|| {
        let (Some(x), Some(y)) = (x.as_ref(), y.as_ref()) else {
            set_error("complex handle is null");
            return K0sStatus::InvalidArgument;
        };
        if out.is_null() {
            set_error("output pointer is null");
            return K0sStatus::InvalidArgument;
        }
        if !Arc::ptr_eq(x.complex.algebra(), y.complex.algebra()) {
            set_error("complexes live over different algebra handles");
            return K0sStatus::InvalidArgument;
        }
        *out = hom_space(&x.complex, &y.complex.shift(shift)).dimension;
        K0sStatus::Ok
    })
}

/// # Safety
/// `a` must be a live algebra handle; `json` a NUL-terminated string; `out`
/// valid.
#[no_mangle]
pub unsafe extern "C" fn k0s_silting_load_json(
    a: *const K0sAlgebra,
    json: *const c_char,
    out: *mut *mut K0sSilting,
) -> K0sStatus {
    guarded(|| {
        let Some(a) = a.as_ref() else {
            set_error("algebra handle is null");
            return K0sStatus::InvalidArgument;
        };
        let json = match read_str(json, "silting json") {
            Ok(s) => s,
            Err(e) => return e,
        };
        let value: serde_json::Value = match serde_json::from_str(json) {
            Ok(v) => v,
            Err(e) => {
                set_error(&e.to_string());
                return K0sStatus::ParseError;
            }
        };
        match SiltingCollection::from_json(a.algebra.clone(), &value) {
            Ok(c) => write_out(out, K0sSilting { collection: c }),
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// # Safety
/// `s` must come from `k0s_silting_load_json` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn k0s_silting_free(s: *mut K0sSilting) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Filtration stages and gamma vector of `x` (or the normalized class when
/// `with_class` is nonzero), as a JSON detail object.  Returns
/// `VerificationFailed` when the object admits no filtration within the
/// bound; the JSON then carries the error description.
///
/// # Safety
/// Handles must be live and share the algebra handle; `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn k0s_gamma_json(
    silting: *const K0sSilting,
    x: *const K0sComplex,
    with_class: bool,
    seed: u64,
    out_json: *mut *mut c_char,
) -> K0sStatus {
    guarded(|| {
        let (Some(s), Some(x)) = (silting.as_ref(), x.as_ref()) else {
            set_error("handle is null");
            return K0sStatus::InvalidArgument;
        };
        let session = SessionConfig {
            seed,
            ..Default::default()
        };
        // The collection handle stays immutable; verification flags are
        // recomputed on a private copy.
        let mut collection = s.collection.clone();
        match cli::gamma_op(&mut collection, &x.complex, with_class, &session) {
            Ok(outcome) => {
                let status = if outcome.passed {
                    K0sStatus::Ok
                } else {
                    K0sStatus::VerificationFailed
                };
                let rc = write_string(out_json, outcome.details.to_string());
                if rc != K0sStatus::Ok {
                    return rc;
                }
                status
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

/// Runs a named verification suite (the same names as the CLI: "presilting",
/// "silting-cert", "theorem-a", "jordan-holder", "horseshoe", "fd-closure",
/// "cluster-n", "example-4-3").  `complex` may be null except for
/// "example-4-3"; `samples == 0` and `d == 0` select the defaults.  Returns
/// `Ok` when every assertion passed, `VerificationFailed` when the suite ran
/// but an assertion failed (JSON written in both cases).
///
/// # Safety
/// Handles must be live and share the algebra handle; `which` a
/// NUL-terminated string; `out_json` valid.
#[no_mangle]
pub unsafe extern "C" fn k0s_verify_json(
    algebra: *const K0sAlgebra,
    silting: *const K0sSilting,
    which: *const c_char,
    complex: *const K0sComplex,
    seed: u64,
    samples: usize,
    d: u32,
    out_json: *mut *mut c_char,
) -> K0sStatus {
    guarded(|| {
        let (Some(a), Some(s)) = (algebra.as_ref(), silting.as_ref()) else {
            set_error("handle is null");
            return K0sStatus::InvalidArgument;
        };
        let which = match read_str(which, "verification name") {
            Ok(w) => w,
            Err(e) => return e,
        };
        let session = SessionConfig {
            seed,
            ..Default::default()
        };
        let mut collection = s.collection.clone();
        let complex_ref = complex.as_ref().map(|c| &c.complex);
        let samples = if samples == 0 { None } else { Some(samples) };
        let d = if d == 0 { None } else { Some(d) };
        match cli::verify_op(
            which,
            &a.algebra,
            &mut collection,
            complex_ref,
            &session,
            samples,
            d,
        ) {
            Ok(outcome) => {
                let status = if outcome.passed {
                    K0sStatus::Ok
                } else {
                    K0sStatus::VerificationFailed
                };
                let rc = write_string(out_json, outcome.details.to_string());
                if rc != K0sStatus::Ok {
                    return rc;
                }
                status
            }
            Err(e) => {
                set_error(&e.to_string());
                status_of(&e)
            }
        }
    })
}

//! C interface to strata-kit.
//!
//! Algebras are opaque handles created from spec text and released with
//! [`sk_algebra_free`]. Points and vectors cross the boundary as
//! comma-separated rational strings in the spec file's basis order (`"1,-2/3,0"`).
//! Every fallible call returns an [`SkStatus`]; on failure a message is kept
//! per thread and read with [`sk_last_error_message`]. Strings returned
//! through `char **` outputs are owned by the caller and released with
//! [`sk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use strata_kit::algebra::{DualPoint, GradedLieAlgebra, Vector};
use strata_kit::group::bch;
use strata_kit::rational::{format_rational_list, parse_rational_list};
use strata_kit::spec_format::load_algebra;
use strata_kit::strata::{classify, enumerate_strata, jump_indices, orbit_dimension, SamplingConfig};
use strata_kit::Error;

/// Status codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    DimensionMismatch = 5,
    UnknownSignature = 6,
    Other = 7,
    Panic = 8,
}

/// Opaque algebra handle.
pub struct SkAlgebra {
    alg: GradedLieAlgebra,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> SkStatus {
    match e {
        Error::Parse(_) => SkStatus::Parse,
        Error::Validation(_) => SkStatus::Validation,
        Error::DimensionMismatch { .. } => SkStatus::DimensionMismatch,
        Error::UnknownSignature(_) => SkStatus::UnknownSignature,
        _ => SkStatus::Other,
    }
}

struct Fail(SkStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SkStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            SkStatus::Panic
        }
    }
}

/// # Safety
/// `p` is null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(SkStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SkStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

/// # Safety
/// `h` is null or a handle from [`sk_algebra_from_spec`].
unsafe fn handle<'a>(h: *const SkAlgebra) -> Result<&'a GradedLieAlgebra, Fail> {
    h.as_ref()
        .map(|h| &h.alg)
        .ok_or_else(|| Fail(SkStatus::NullPointer, "algebra handle is null".into()))
}

fn internal(alg: &GradedLieAlgebra, text: &str) -> Result<Vec<strata_kit::Q>, Fail> {
    Ok(alg.coords_from_user(&parse_rational_list(text)?)?)
}

/// # Safety
/// `out` is null or writable.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(SkStatus::NullPointer, "output pointer is null".into()));
    }
    let c = CString::new(s).map_err(|_| Fail(SkStatus::Other, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next call on this thread.
#[no_mangle]
pub extern "C" fn sk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` is null or was returned through a `char **` output of this library
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses and validates an algebra spec (TOML text).
///
/// # Safety
/// `spec` is a NUL-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn sk_algebra_from_spec(spec: *const c_char, out: *mut *mut SkAlgebra) -> SkStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(SkStatus::NullPointer, "output pointer is null".into()));
        }
        let alg = load_algebra(read_str(spec, "spec")?)?;
        *out = Box::into_raw(Box::new(SkAlgebra { alg }));
        Ok(())
    })
}

/// Releases an algebra handle. Null is ignored.
///
/// # Safety
/// `h` is null or a live handle from [`sk_algebra_from_spec`].
#[no_mangle]
pub unsafe extern "C" fn sk_algebra_free(h: *mut SkAlgebra) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Dimension of the algebra, or 0 for a null handle.
///
/// # Safety
/// `h` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_algebra_dim(h: *const SkAlgebra) -> usize {
    h.as_ref().map_or(0, |h| h.alg.dim())
}

/// Sum of the weights, or 0 for a null handle.
///
/// # Safety
/// `h` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sk_homogeneous_dimension(h: *const SkAlgebra) -> u32 {
    h.as_ref().map_or(0, |h| h.alg.homogeneous_dimension())
}

/// `log(exp(a) exp(b))` as a rational list.
///
/// # Safety
/// `h` is a live handle, `a` and `b` NUL-terminated strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_bch(
    h: *const SkAlgebra,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> SkStatus {
    guard(|| {
        let alg = handle(h)?;
        let x = internal(alg, read_str(a, "a")?)?;
        let y = internal(alg, read_str(b, "b")?)?;
        let p = bch(alg, &Vector(x), &Vector(y))?;
        put_string(out, format_rational_list(&alg.coords_to_user(&p.0)))
    })
}

/// Jump-index signature of a dual point, e.g. `"(∅,∅,{2,3})"` (UTF-8).
///
/// # Safety
/// `h` is a live handle, `xi` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_jump_indices(h: *const SkAlgebra, xi: *const c_char, out: *mut *mut c_char) -> SkStatus {
    guard(|| {
        let alg = handle(h)?;
        let p = DualPoint(internal(alg, read_str(xi, "xi")?)?);
        put_string(out, jump_indices(alg, &p)?.to_string())
    })
}

/// Dimension of the coadjoint orbit through `xi`.
///
/// # Safety
/// `h` is a live handle, `xi` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sk_orbit_dimension(h: *const SkAlgebra, xi: *const c_char, out: *mut usize) -> SkStatus {
    guard(|| {
        let alg = handle(h)?;
        let p = DualPoint(internal(alg, read_str(xi, "xi")?)?);
        let d = orbit_dimension(alg, &p)?;
        if out.is_null() {
            return Err(Fail(SkStatus::NullPointer, "output pointer is null".into()));
        }
        *out = d;
        Ok(())
    })
}

/// Classifies `xi` against a table enumerated from `samples` seeded points.
/// `stratum_out` receives the 1-based stratum, or 0 at the origin;
/// `signature_out`, if not null, receives the signature string.
///
/// # Safety
/// `h` is a live handle, `xi` a NUL-terminated string, `stratum_out`
/// writable, `signature_out` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sk_classify(
    h: *const SkAlgebra,
    xi: *const c_char,
    samples: usize,
    seed: u64,
    stratum_out: *mut usize,
    signature_out: *mut *mut c_char,
) -> SkStatus {
    guard(|| {
        let alg = handle(h)?;
        let p = DualPoint(internal(alg, read_str(xi, "xi")?)?);
        if stratum_out.is_null() {
            return Err(Fail(SkStatus::NullPointer, "output pointer is null".into()));
        }
        let table = enumerate_strata(alg, &SamplingConfig { samples, seed, height: 10 });
        let c = classify(alg, &p, &table)?;
        *stratum_out = c.stratum.unwrap_or(0);
        if !signature_out.is_null() {
            put_string(signature_out, c.signature.to_string())?;
        }
        Ok(())
    })
}

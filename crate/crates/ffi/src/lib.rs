//! C ABI over `fgrigid`.
//!
//! Every function returns an [`FgStatus`]. On failure the message is kept per
//! thread and can be read with [`fg_last_error`]. Strings handed out by the
//! library must be released with [`fg_string_free`]; handles with their own
//! `*_free` function. Rationals cross the boundary as strings such as `"-2/3"`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fgrigid::connection::{newton, FormalConnection};
use fgrigid::exact::{fmt_rational, parse_rational, Scalar};
use fgrigid::lie::RepKind;
use fgrigid::oper::{canonicalize, oper_slope, OperForm};
use fgrigid::suite::{parse_type_label, run_job, VerificationJob};
use fgrigid::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Unsupported = 4,
    Precision = 5,
    NotAnOper = 6,
    Invalid = 7,
    Panic = 8,
}

/// A formal connection.
pub struct FgConnection(FormalConnection);

/// A connection in canonical oper form.
pub struct FgOper(OperForm);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(FgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = status_of(&e);
        Failure(code, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(FgStatus::Parse, e.to_string())
    }
}

fn status_of(e: &Error) -> FgStatus {
    match e {
        Error::Parse(_) => FgStatus::Parse,
        Error::UnsupportedAlgebra(..) | Error::UnsupportedRepresentation(_) | Error::UnsupportedConnection(_) => {
            FgStatus::Unsupported
        }
        Error::InsufficientPrecision(_) => FgStatus::Precision,
        Error::NotAnOper(_) => FgStatus::NotAnOper,
        Error::Subcheck { source, .. } => status_of(source),
        _ => FgStatus::Invalid,
    }
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FgStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            FgStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(FgStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Failure(FgStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| Failure(FgStatus::NullPointer, format!("{what} is null")))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(Failure(FgStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(FgStatus::Invalid, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn fg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn fg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a connection from its JSON form.
///
/// # Safety
/// `json` must be a NUL terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_connection_from_json(json: *const c_char, out: *mut *mut FgConnection) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let conn: FormalConnection = serde_json::from_str(read_str(json, "json")?)?;
        *out = Box::into_raw(Box::new(FgConnection(conn)));
        Ok(())
    })
}

/// The Frenkel-Gross connection for a type label such as `"G2"`. A null
/// `rep` selects the smallest faithful representation.
///
/// # Safety
/// String arguments must be NUL terminated (or null where allowed) and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fg_connection_frenkel_gross(
    type_label: *const c_char,
    rep: *const c_char,
    lambda: *const c_char,
    out: *mut *mut FgConnection,
) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let (t, rank) = parse_type_label(read_str(type_label, "type_label")?)?;
        let kind = if rep.is_null() {
            RepKind::smallest(t)
        } else {
            read_str(rep, "rep")?.parse::<RepKind>()?
        };
        let lambda = parse_rational(read_str(lambda, "lambda")?)?;
        let conn = FormalConnection::frenkel_gross_for(t, rank, kind, &Scalar::Rat(lambda))?;
        *out = Box::into_raw(Box::new(FgConnection(conn)));
        Ok(())
    })
}

/// # Safety
/// `conn` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_connection_free(conn: *mut FgConnection) {
    if !conn.is_null() {
        drop(Box::from_raw(conn));
    }
}

/// # Safety
/// `conn` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_connection_to_json(conn: *const FgConnection, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let conn = deref(conn, "conn")?;
        write_string(out, serde_json::to_string(&conn.0)?)
    })
}

/// Change of coordinate `s = 1/t` on a global connection.
///
/// # Safety
/// `conn` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_connection_at_infinity(conn: *const FgConnection, out: *mut *mut FgConnection) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let inf = deref(conn, "conn")?.0.change_to_infinity()?;
        *out = Box::into_raw(Box::new(FgConnection(inf)));
        Ok(())
    })
}

/// Slope of the connection as a rational string.
///
/// # Safety
/// `conn` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_connection_slope(conn: *const FgConnection, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let s = newton::slope(&deref(conn, "conn")?.0)?;
        write_string(out, fmt_rational(&s))
    })
}

/// Newton polygon and irregular exponents as JSON.
///
/// # Safety
/// `conn` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_connection_exponents(conn: *const FgConnection, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let ex = newton::irregular_exponents(&deref(conn, "conn")?.0)?;
        write_string(out, serde_json::to_string(&ex)?)
    })
}

/// Gauge transforms the connection into canonical oper form.
///
/// # Safety
/// `conn` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_canonicalize(conn: *const FgConnection, out: *mut *mut FgOper) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let oper = canonicalize(&deref(conn, "conn")?.0)?;
        *out = Box::into_raw(Box::new(FgOper(oper)));
        Ok(())
    })
}

/// # Safety
/// `oper` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fg_oper_free(oper: *mut FgOper) {
    if !oper.is_null() {
        drop(Box::from_raw(oper));
    }
}

/// # Safety
/// `oper` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_oper_to_json(oper: *const FgOper, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        check_out(out)?;
        write_string(out, serde_json::to_string(&deref(oper, "oper")?.0)?)
    })
}

/// Slope read off the canonical form, as a rational string.
///
/// # Safety
/// `oper` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_oper_slope(oper: *const FgOper, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let s = oper_slope(&deref(oper, "oper")?.0)?;
        write_string(out, fmt_rational(&s))
    })
}

/// Runs one verification job given as JSON, e.g.
/// `{"claim":"oper_route","params":{"type":"A1","lambda":"-2/3"}}`, and
/// writes the report JSON. A failing check still returns `Ok`; inspect the
/// report's `pass` and `error` fields.
///
/// # Safety
/// `job` must be a NUL terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fg_verify_json(job: *const c_char, out: *mut *mut c_char) -> FgStatus {
    guard(|| {
        check_out(out)?;
        let job: VerificationJob = serde_json::from_str(read_str(job, "job")?)?;
        let report = run_job(&job);
        write_string(out, serde_json::to_string(&report)?)
    })
}

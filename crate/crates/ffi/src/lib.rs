//! C ABI over `freelab`.
//!
//! Objects cross the boundary as opaque handles created by `*_new` and
//! released by the matching `*_free`. Every fallible call returns an
//! [`FlStatus`]; on failure a message is kept per thread and can be read with
//! [`fl_last_error`]. Strings handed out by the library must be released with
//! [`fl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use freelab::commands::run_args;
use freelab::rmt::RngStream;
use freelab::scdist::{sc_cdf, sc_moment, sc_quantile, sc_sample, SemicircleLaw};
use freelab::Error;
use rand::RngCore;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    Resource = 4,
    Numeric = 5,
    Unsupported = 6,
    Io = 7,
    Panic = 8,
}

impl From<&Error> for FlStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => FlStatus::Domain,
            Error::Resource(_) => FlStatus::Resource,
            Error::Numeric(_) => FlStatus::Numeric,
            Error::Unsupported(_) => FlStatus::Unsupported,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: FlStatus, msg: impl Into<String>) -> FlStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> FlStatus {
    fail(FlStatus::from(&e), e.to_string())
}

fn guarded(f: impl FnOnce() -> FlStatus) -> FlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(FlStatus::Panic, "internal panic"),
    }
}

/// Message of the last failure on this thread, or NULL. Valid until the next
/// failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn fl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn fl_status_str(status: FlStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FlStatus::Ok => c"ok",
        FlStatus::NullPointer => c"null pointer argument",
        FlStatus::InvalidUtf8 => c"invalid UTF-8 argument",
        FlStatus::Domain => c"domain error",
        FlStatus::Resource => c"resource guard exceeded",
        FlStatus::Numeric => c"numeric failure",
        FlStatus::Unsupported => c"unsupported",
        FlStatus::Io => c"I/O failure",
        FlStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn fl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Seeded random stream (ChaCha8, one independent stream per index).
pub struct FlRng(RngStream);

/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn fl_rng_new(seed: u64, stream: u64, out: *mut *mut FlRng) -> FlStatus {
    if out.is_null() {
        return fail(FlStatus::NullPointer, "out is NULL");
    }
    *out = Box::into_raw(Box::new(FlRng(RngStream::new(seed, stream))));
    FlStatus::Ok
}

/// # Safety
/// `rng` must be NULL or a live handle from [`fl_rng_new`].
#[no_mangle]
pub unsafe extern "C" fn fl_rng_free(rng: *mut FlRng) {
    if !rng.is_null() {
        drop(Box::from_raw(rng));
    }
}

/// # Safety
/// `rng` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fl_rng_next_u64(rng: *mut FlRng, out: *mut u64) -> FlStatus {
    let (Some(rng), false) = (rng.as_mut(), out.is_null()) else {
        return fail(FlStatus::NullPointer, "rng or out is NULL");
    };
    *out = rng.0.next_u64();
    FlStatus::Ok
}

/// Semicircle law with a center and radius.
pub struct FlSemicircle(SemicircleLaw);

/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fl_semicircle_new(center: f64, radius: f64, out: *mut *mut FlSemicircle) -> FlStatus {
    if out.is_null() {
        return fail(FlStatus::NullPointer, "out is NULL");
    }
    match SemicircleLaw::new(center, radius) {
        Ok(law) => {
            *out = Box::into_raw(Box::new(FlSemicircle(law)));
            FlStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// # Safety
/// `law` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn fl_semicircle_free(law: *mut FlSemicircle) {
    if !law.is_null() {
        drop(Box::from_raw(law));
    }
}

/// m-th moment in closed form.
///
/// # Safety
/// `law` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fl_semicircle_moment(law: *const FlSemicircle, m: u32, out: *mut f64) -> FlStatus {
    let (Some(law), false) = (law.as_ref(), out.is_null()) else {
        return fail(FlStatus::NullPointer, "law or out is NULL");
    };
    *out = sc_moment(&law.0, m);
    FlStatus::Ok
}

/// # Safety
/// `law` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fl_semicircle_cdf(law: *const FlSemicircle, t: f64, out: *mut f64) -> FlStatus {
    let (Some(law), false) = (law.as_ref(), out.is_null()) else {
        return fail(FlStatus::NullPointer, "law or out is NULL");
    };
    *out = sc_cdf(&law.0, t);
    FlStatus::Ok
}

/// # Safety
/// `law` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn fl_semicircle_quantile(law: *const FlSemicircle, s: f64, out: *mut f64) -> FlStatus {
    let (Some(law), false) = (law.as_ref(), out.is_null()) else {
        return fail(FlStatus::NullPointer, "law or out is NULL");
    };
    match sc_quantile(&law.0, s) {
        Ok(v) => {
            *out = v;
            FlStatus::Ok
        }
        Err(e) => from_error(e),
    }
}

/// Fills `buf[0..len]` with draws from the law.
///
/// # Safety
/// `law` and `rng` must be live handles; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn fl_semicircle_sample(
    law: *const FlSemicircle,
    rng: *mut FlRng,
    buf: *mut f64,
    len: usize,
) -> FlStatus {
    let (Some(law), Some(rng)) = (law.as_ref(), rng.as_mut()) else {
        return fail(FlStatus::NullPointer, "law or rng is NULL");
    };
    if len == 0 {
        return FlStatus::Ok;
    }
    if buf.is_null() {
        return fail(FlStatus::NullPointer, "buf is NULL");
    }
    let draws = sc_sample(&law.0, &mut rng.0, len);
    std::slice::from_raw_parts_mut(buf, len).copy_from_slice(&draws);
    FlStatus::Ok
}

/// Runs a command line (without the program name), e.g.
/// `{"rmt", "--n", "4", "--seed", "7"}`. The process-style exit code always
/// goes to `exit_code`. On `FL_STATUS_OK` the rendered report (JSON or CSV)
/// goes to `out`, which the caller frees with [`fl_string_free`]; a report
/// whose checks fail still returns `FL_STATUS_OK` with exit code 1. When no
/// report is produced the status names the failure and the message is in
/// [`fl_last_error`].
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; `exit_code` and `out`
/// must be valid.
#[no_mangle]
pub unsafe extern "C" fn fl_run(
    argv: *const *const c_char,
    argc: usize,
    exit_code: *mut i32,
    out: *mut *mut c_char,
) -> FlStatus {
    if exit_code.is_null() || out.is_null() || (argv.is_null() && argc > 0) {
        return fail(FlStatus::NullPointer, "argv, exit_code or out is NULL");
    }
    *out = ptr::null_mut();
    let mut args = Vec::with_capacity(argc);
    for i in 0..argc {
        let p = *argv.add(i);
        if p.is_null() {
            return fail(FlStatus::NullPointer, format!("argv[{i}] is NULL"));
        }
        match CStr::from_ptr(p).to_str() {
            Ok(s) => args.push(s.to_owned()),
            Err(_) => return fail(FlStatus::InvalidUtf8, format!("argv[{i}] is not UTF-8")),
        }
    }
    guarded(|| {
        let run = run_args(args);
        *exit_code = run.code;
        if run.is_report {
            *out = CString::new(run.text).expect("reports contain no NUL").into_raw();
            return FlStatus::Ok;
        }
        let status = match run.code {
            0 => FlStatus::Ok,
            1 => FlStatus::Numeric,
            2 => FlStatus::Domain,
            _ if run.text.contains("cannot write") => FlStatus::Io,
            _ => FlStatus::Resource,
        };
        if status == FlStatus::Ok {
            // --help / --version
            *out = CString::new(run.text).expect("help text contains no NUL").into_raw();
            return status;
        }
        fail(status, run.text)
    })
}

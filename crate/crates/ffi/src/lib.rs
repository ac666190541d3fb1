//! C interface: parse a scenario, run it, and read the report back as text,
//! JSON or CSV.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Every fallible call returns a [`GiStatus`];
//! on failure [`gi_last_error`] describes what went wrong on this thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gauge_integrals::cli::{self, exit, Format, RunMode, RunReport, Scenario};

/// Status codes. The first five equal the command-line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GiStatus {
    Ok = 0,
    /// Malformed scenario text or option value.
    Usage = 2,
    Convergence = 3,
    CheckFailed = 4,
    Io = 5,
    /// A null pointer or invalid UTF-8 where a string was expected.
    InvalidArgument = 64,
    /// The library panicked; the handle involved should be freed and not reused.
    Internal = 65,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GiFormat {
    Text = 0,
    Json = 1,
    Csv = 2,
}

/// A parsed scenario.
pub struct GiScenario {
    inner: Scenario,
}

/// The report of one scenario run.
pub struct GiReport {
    inner: RunReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: GiStatus, msg: impl Into<String>) -> GiStatus {
    set_error(msg);
    status
}

fn guarded(body: impl FnOnce() -> GiStatus) -> GiStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(GiStatus::Internal, format!("internal error: {msg}"))
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, GiStatus> {
    if p.is_null() {
        return Err(fail(GiStatus::InvalidArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(GiStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn scenario_mut<'a>(s: *mut GiScenario) -> Result<&'a mut Scenario, GiStatus> {
    s.as_mut()
        .map(|s| &mut s.inner)
        .ok_or_else(|| fail(GiStatus::InvalidArgument, "scenario is null"))
}

/// Parses scenario text into `*out`. On failure `*out` is set to null.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_scenario_parse(text: *const c_char, out: *mut *mut GiScenario) -> GiStatus {
    guarded(|| {
        if out.is_null() {
            return fail(GiStatus::InvalidArgument, "out is null");
        }
        *out = ptr::null_mut();
        let text = match str_arg(text, "text") {
            Ok(t) => t,
            Err(s) => return s,
        };
        match cli::parse_scenario(text) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(GiScenario { inner }));
                GiStatus::Ok
            }
            Err(e) => fail(GiStatus::Usage, e.to_string()),
        }
    })
}

/// # Safety
/// `s` must be null or a handle from [`gi_scenario_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gi_scenario_free(s: *mut GiScenario) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Overrides the tolerance; it must be positive and finite.
///
/// # Safety
/// `s` must be a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn gi_scenario_set_tol(s: *mut GiScenario, tol: f64) -> GiStatus {
    guarded(|| match scenario_mut(s) {
        Err(e) => e,
        Ok(_) if !(tol > 0.0 && tol.is_finite()) => fail(GiStatus::Usage, "tol must be positive"),
        Ok(sc) => {
            sc.tol = tol;
            GiStatus::Ok
        }
    })
}

/// Overrides the division depth; it must be at least 1.
///
/// # Safety
/// `s` must be a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn gi_scenario_set_depth(s: *mut GiScenario, depth: u32) -> GiStatus {
    guarded(|| match scenario_mut(s) {
        Err(e) => e,
        Ok(_) if depth < 1 => fail(GiStatus::Usage, "depth must be at least 1"),
        Ok(sc) => {
            sc.depth = depth;
            GiStatus::Ok
        }
    })
}

/// # Safety
/// `s` must be a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn gi_scenario_set_seed(s: *mut GiScenario, seed: u64) -> GiStatus {
    guarded(|| match scenario_mut(s) {
        Err(e) => e,
        Ok(sc) => {
            sc.seed = seed;
            GiStatus::Ok
        }
    })
}

/// Replaces the modes with a comma-separated list such as `"dm_ext,dm_piece"`.
///
/// # Safety
/// `s` must be a live scenario handle and `modes` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn gi_scenario_set_modes(s: *mut GiScenario, modes: *const c_char) -> GiStatus {
    guarded(|| {
        let list = match str_arg(modes, "modes") {
            Ok(t) => t,
            Err(e) => return e,
        };
        let sc = match scenario_mut(s) {
            Ok(sc) => sc,
            Err(e) => return e,
        };
        let mut parsed = Vec::new();
        for m in list.split(',') {
            match RunMode::parse(m.trim()) {
                Some(mode) if !parsed.contains(&mode) => parsed.push(mode),
                Some(_) => {}
                None => return fail(GiStatus::Usage, format!("unknown mode `{}`", m.trim())),
            }
        }
        sc.modes = parsed;
        GiStatus::Ok
    })
}

/// Runs the scenario. A report is produced even when checks fail or
/// integrals do not converge; read the outcome with [`gi_report_exit_code`].
///
/// # Safety
/// `s` must be a live scenario handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_run(s: *const GiScenario, out: *mut *mut GiReport) -> GiStatus {
    guarded(|| {
        if out.is_null() {
            return fail(GiStatus::InvalidArgument, "out is null");
        }
        *out = ptr::null_mut();
        let Some(sc) = s.as_ref() else {
            return fail(GiStatus::InvalidArgument, "scenario is null");
        };
        let inner = cli::run(&sc.inner);
        *out = Box::into_raw(Box::new(GiReport { inner }));
        GiStatus::Ok
    })
}

/// The exit code the command-line tool would return for this report, or
/// -1 for a null handle.
///
/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn gi_report_exit_code(r: *const GiReport) -> i32 {
    match r.as_ref() {
        Some(r) => r.inner.exit_code(),
        None => -1,
    }
}

/// Renders the report into a new string at `*out`, released with
/// [`gi_string_free`].
///
/// # Safety
/// `r` must be a live report handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_report_render(r: *const GiReport, format: GiFormat, out: *mut *mut c_char) -> GiStatus {
    guarded(|| {
        if out.is_null() {
            return fail(GiStatus::InvalidArgument, "out is null");
        }
        *out = ptr::null_mut();
        let Some(r) = r.as_ref() else {
            return fail(GiStatus::InvalidArgument, "report is null");
        };
        let format = match format {
            GiFormat::Text => Format::Text,
            GiFormat::Json => Format::Json,
            GiFormat::Csv => Format::Csv,
        };
        match CString::new(cli::render(&r.inner, format)) {
            Ok(c) => {
                *out = c.into_raw();
                GiStatus::Ok
            }
            Err(_) => fail(GiStatus::Internal, "report contains a NUL byte"),
        }
    })
}

/// Shorthand for [`gi_report_render`] with [`GiFormat::Json`].
///
/// # Safety
/// As for [`gi_report_render`].
#[no_mangle]
pub unsafe extern "C" fn gi_report_json(r: *const GiReport, out: *mut *mut c_char) -> GiStatus {
    gi_report_render(r, GiFormat::Json, out)
}

/// # Safety
/// `r` must be null or a handle from [`gi_run`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gi_report_free(r: *mut GiReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn gi_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Exit code constants, checked against the status enum at compile time.
const _: () = {
    assert!(GiStatus::Ok as i32 == exit::OK);
    assert!(GiStatus::Usage as i32 == exit::USAGE);
    assert!(GiStatus::Convergence as i32 == exit::CONVERGENCE);
    assert!(GiStatus::CheckFailed as i32 == exit::CHECK_FAILED);
    assert!(GiStatus::Io as i32 == exit::IO);
};

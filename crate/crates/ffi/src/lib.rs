//! C interface: parse or load a scenario, run it, read the report back as
//! JSON or text. Handles are opaque and owned by the caller, who releases
//! them with the matching `*_free` function. Strings returned by
//! `adicomp_report_json` and `adicomp_report_text` are released with
//! `adicomp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use adicomp::cli::{self, gallery, report::RunReport, scenario::Scenario, RunOptions};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdicompStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// The run finished but at least one task failed with an error; the
    /// report is still produced.
    RunError = 4,
    UnknownGallery = 5,
    Panic = 6,
}

/// A parsed scenario.
pub struct AdicompScenario {
    scenario: Scenario,
    gallery: Option<String>,
}

/// A finished run.
pub struct AdicompReport {
    report: RunReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(s));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> AdicompStatus) -> AdicompStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            AdicompStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, AdicompStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(AdicompStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        AdicompStatus::InvalidUtf8
    })
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Parses scenario text. On success `*out` receives a new handle.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adicomp_scenario_parse(text: *const c_char, out: *mut *mut AdicompScenario) -> AdicompStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return AdicompStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match cli::parse_scenario(text) {
            Ok(scenario) => {
                *out = Box::into_raw(Box::new(AdicompScenario {
                    scenario,
                    gallery: None,
                }));
                AdicompStatus::Ok
            }
            Err(d) => {
                set_error(d.to_string());
                AdicompStatus::ParseError
            }
        }
    })
}

/// Loads a shipped scenario by name.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn adicomp_gallery_load(name: *const c_char, out: *mut *mut AdicompScenario) -> AdicompStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return AdicompStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let Some(text) = gallery::get(name) else {
            set_error(format!("no gallery scenario `{name}`"));
            return AdicompStatus::UnknownGallery;
        };
        match cli::parse_scenario(text) {
            Ok(scenario) => {
                *out = Box::into_raw(Box::new(AdicompScenario {
                    scenario,
                    gallery: Some(name.to_string()),
                }));
                AdicompStatus::Ok
            }
            Err(d) => {
                set_error(d.to_string());
                AdicompStatus::ParseError
            }
        }
    })
}

/// Runs a scenario. `depth` of 0 keeps each task's own depth. `*out`
/// receives the report also when the status is `RunError`.
///
/// # Safety
/// `scenario` must come from this library and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn adicomp_run(
    scenario: *const AdicompScenario,
    depth: u32,
    strict: bool,
    out: *mut *mut AdicompReport,
) -> AdicompStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            set_error("null argument");
            return AdicompStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let s = &*scenario;
        let opts = RunOptions {
            depth: (depth > 0).then_some(depth as usize),
            strict,
            timings: false,
            gallery: s.gallery.clone(),
        };
        let report = cli::run(&s.scenario, &opts);
        let status = if let Some(t) = report.tasks.iter().find(|t| t.error.is_some()) {
            set_error(format!("task {}: {}", t.index, t.error.as_deref().unwrap_or_default()));
            AdicompStatus::RunError
        } else {
            AdicompStatus::Ok
        };
        *out = Box::into_raw(Box::new(AdicompReport { report }));
        status
    })
}

/// The report as JSON, or null on a null handle.
///
/// # Safety
/// `report` must come from `adicomp_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn adicomp_report_json(report: *const AdicompReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    to_c((*report).report.to_json())
}

/// The report as aligned text, or null on a null handle.
///
/// # Safety
/// `report` must come from `adicomp_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn adicomp_report_text(report: *const AdicompReport) -> *mut c_char {
    if report.is_null() {
        return ptr::null_mut();
    }
    to_c((*report).report.to_text())
}

/// 1 if any theorem check flagged a discrepancy, 0 if not, -1 on null.
///
/// # Safety
/// `report` must come from `adicomp_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn adicomp_report_has_discrepancy(report: *const AdicompReport) -> i32 {
    if report.is_null() {
        return -1;
    }
    (*report).report.discrepancy as i32
}

/// Number of task results in the report; 0 on null.
///
/// # Safety
/// `report` must come from `adicomp_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn adicomp_report_task_count(report: *const AdicompReport) -> usize {
    if report.is_null() {
        return 0;
    }
    (*report).report.tasks.len()
}

/// The exit code the command-line tool would use: 0, 1 or 2. -1 on null.
///
/// # Safety
/// `report` must come from `adicomp_run` or be null.
#[no_mangle]
pub unsafe extern "C" fn adicomp_report_exit_code(report: *const AdicompReport, strict: bool) -> i32 {
    if report.is_null() {
        return -1;
    }
    cli::exit_code(&(*report).report, strict)
}

/// # Safety
/// `s` must come from this library or be null; it must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn adicomp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `scenario` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn adicomp_scenario_free(scenario: *mut AdicompScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// # Safety
/// `report` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn adicomp_report_free(report: *mut AdicompReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn adicomp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn adicomp_version() -> *const c_char {
    static VERSION: &[u8] = concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes();
    VERSION.as_ptr() as *const c_char
}

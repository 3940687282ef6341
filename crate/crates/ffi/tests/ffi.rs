use std::ffi::{CStr, CString};
use std::ptr;

use adicomp_ffi::*;

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_string();
    adicomp_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = adicomp_last_error_message();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_str().unwrap().to_string()
}

#[test]
fn gallery_round_trip() {
    unsafe {
        let name = CString::new("basechange-gap").unwrap();
        let mut sc = ptr::null_mut();
        assert_eq!(adicomp_gallery_load(name.as_ptr(), &mut sc), AdicompStatus::Ok);
        let mut rep = ptr::null_mut();
        assert_eq!(adicomp_run(sc, 0, false, &mut rep), AdicompStatus::Ok);
        assert_eq!(adicomp_report_task_count(rep), 1);
        assert_eq!(adicomp_report_has_discrepancy(rep), 1);
        let json = take(adicomp_report_json(rep));
        assert!(json.contains("\"discrepancy\": true"));
        assert!(json.contains("\"gallery\": \"basechange-gap\""));
        let text = take(adicomp_report_text(rep));
        assert!(text.contains("DISCREPANCY"));
        assert_eq!(adicomp_report_exit_code(rep, true), 2);
        adicomp_report_free(rep);
        adicomp_scenario_free(sc);
    }
}

#[test]
fn parse_error_carries_position() {
    unsafe {
        let text = CString::new("ring R = ZZ\ntask frobnicate R").unwrap();
        let mut sc = ptr::null_mut();
        assert_eq!(
            adicomp_scenario_parse(text.as_ptr(), &mut sc),
            AdicompStatus::ParseError
        );
        assert!(sc.is_null());
        let msg = last_error();
        assert!(msg.contains("line 2, column 6"), "{msg}");
        assert!(msg.contains("frobnicate"));
    }
}

#[test]
fn run_error_still_reports() {
    unsafe {
        let text = CString::new(
            "ring R = poly(QQ, [x])\nring S = poly(QQ, [x, y])\nmap f = ringmap(R -> S)\nideal I = (x) in R\nideal J = (y) in S\ntask base_change f I J",
        )
        .unwrap();
        let mut sc = ptr::null_mut();
        assert_eq!(adicomp_scenario_parse(text.as_ptr(), &mut sc), AdicompStatus::Ok);
        let mut rep = ptr::null_mut();
        assert_eq!(adicomp_run(sc, 3, false, &mut rep), AdicompStatus::RunError);
        assert!(last_error().contains("radical"));
        assert_eq!(adicomp_report_exit_code(rep, false), 1);
        let json = take(adicomp_report_json(rep));
        assert!(json.contains("\"error\""));
        adicomp_report_free(rep);
        adicomp_scenario_free(sc);
    }
}

#[test]
fn null_and_bad_input() {
    unsafe {
        let mut sc = ptr::null_mut();
        assert_eq!(adicomp_scenario_parse(ptr::null(), &mut sc), AdicompStatus::NullPointer);
        let bad = [0xffu8, 0xfe, 0];
        assert_eq!(
            adicomp_scenario_parse(bad.as_ptr() as *const _, &mut sc),
            AdicompStatus::InvalidUtf8
        );
        let name = CString::new("nope").unwrap();
        assert_eq!(
            adicomp_gallery_load(name.as_ptr(), &mut sc),
            AdicompStatus::UnknownGallery
        );
        let mut rep = ptr::null_mut();
        assert_eq!(adicomp_run(ptr::null(), 0, false, &mut rep), AdicompStatus::NullPointer);
        assert!(adicomp_report_json(ptr::null()).is_null());
        assert_eq!(adicomp_report_has_discrepancy(ptr::null()), -1);
        assert_eq!(adicomp_report_task_count(ptr::null()), 0);
        adicomp_string_free(ptr::null_mut());
        adicomp_scenario_free(ptr::null_mut());
        adicomp_report_free(ptr::null_mut());
        let v = CStr::from_ptr(adicomp_version()).to_str().unwrap();
        assert_eq!(v, env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/adicomp.h")).unwrap();
    for f in [
        "adicomp_scenario_parse",
        "adicomp_gallery_load",
        "adicomp_run",
        "adicomp_report_json",
        "adicomp_report_text",
        "adicomp_report_has_discrepancy",
        "adicomp_report_task_count",
        "adicomp_report_exit_code",
        "adicomp_string_free",
        "adicomp_scenario_free",
        "adicomp_report_free",
        "adicomp_last_error_message",
        "adicomp_version",
        "ADICOMP_STATUS_PANIC",
    ] {
        assert!(header.contains(f), "{f} missing from header");
    }
}

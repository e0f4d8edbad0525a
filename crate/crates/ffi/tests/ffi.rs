use std::ffi::{c_char, CStr, CString};
use std::ptr;

use fgrigid_ffi::*;
use serde_json::Value;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    fg_string_free(s);
    out
}

fn last_error() -> String {
    let p = fg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

unsafe fn fg(label: &str, lambda: &str) -> *mut FgConnection {
    let mut conn = ptr::null_mut();
    let st = fg_connection_frenkel_gross(c(label).as_ptr(), ptr::null(), c(lambda).as_ptr(), &mut conn);
    assert_eq!(st, FgStatus::Ok, "{}", last_error());
    conn
}

#[test]
fn slopes_at_infinity() {
    for (label, h) in [("A1", 2), ("A2", 3), ("B2", 4), ("G2", 6)] {
        unsafe {
            let conn = fg(label, "2/3");
            let mut inf = ptr::null_mut();
            assert_eq!(fg_connection_at_infinity(conn, &mut inf), FgStatus::Ok);
            let mut s = ptr::null_mut();
            assert_eq!(fg_connection_slope(inf, &mut s), FgStatus::Ok);
            assert_eq!(take(s), format!("1/{h}"));

            let mut oper = ptr::null_mut();
            assert_eq!(fg_canonicalize(inf, &mut oper), FgStatus::Ok, "{}", last_error());
            let mut s = ptr::null_mut();
            assert_eq!(fg_oper_slope(oper, &mut s), FgStatus::Ok);
            assert_eq!(take(s), format!("1/{h}"));

            let mut ex = ptr::null_mut();
            assert_eq!(fg_connection_exponents(inf, &mut ex), FgStatus::Ok);
            let v: Value = serde_json::from_str(&take(ex)).unwrap();
            assert!(v.get("polygon").is_some());

            fg_oper_free(oper);
            fg_connection_free(inf);
            fg_connection_free(conn);
        }
    }
}

#[test]
fn json_round_trip() {
    unsafe {
        let conn = fg("C2", "-1/2");
        let mut s = ptr::null_mut();
        assert_eq!(fg_connection_to_json(conn, &mut s), FgStatus::Ok);
        let json = take(s);
        let mut back = ptr::null_mut();
        assert_eq!(fg_connection_from_json(c(&json).as_ptr(), &mut back), FgStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(fg_connection_to_json(back, &mut s), FgStatus::Ok);
        assert_eq!(take(s), json);
        fg_connection_free(back);
        fg_connection_free(conn);
    }
}

#[test]
fn canonical_form_serializes() {
    unsafe {
        let conn = fg("A1", "3");
        let mut inf = ptr::null_mut();
        assert_eq!(fg_connection_at_infinity(conn, &mut inf), FgStatus::Ok);
        let mut oper = ptr::null_mut();
        assert_eq!(fg_canonicalize(inf, &mut oper), FgStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(fg_oper_to_json(oper, &mut s), FgStatus::Ok);
        let v: Value = serde_json::from_str(&take(s)).unwrap();
        assert!(v.is_object());
        fg_oper_free(oper);
        fg_connection_free(inf);
        fg_connection_free(conn);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut conn = ptr::null_mut();
        let st = fg_connection_frenkel_gross(c("E8").as_ptr(), ptr::null(), c("1").as_ptr(), &mut conn);
        assert_eq!(st, FgStatus::Unsupported);
        assert!(last_error().contains("E"));
        assert!(conn.is_null());

        let st = fg_connection_frenkel_gross(c("A2").as_ptr(), ptr::null(), c("1/x").as_ptr(), &mut conn);
        assert_eq!(st, FgStatus::Parse);

        let st = fg_connection_frenkel_gross(ptr::null(), ptr::null(), c("1").as_ptr(), &mut conn);
        assert_eq!(st, FgStatus::NullPointer);

        let bad = [0xffu8, 0];
        let st = fg_connection_frenkel_gross(bad.as_ptr().cast(), ptr::null(), c("1").as_ptr(), &mut conn);
        assert_eq!(st, FgStatus::InvalidUtf8);

        assert_eq!(fg_connection_from_json(c("{").as_ptr(), &mut conn), FgStatus::Parse);

        let conn = fg("A1", "1");
        assert_eq!(fg_connection_slope(conn, ptr::null_mut()), FgStatus::NullPointer);
        let mut s = ptr::null_mut();
        assert_eq!(fg_connection_slope(conn, &mut s), FgStatus::Ok);
        fg_string_free(s);
        assert!(fg_last_error().is_null());
        fg_connection_free(conn);

        fg_connection_free(ptr::null_mut());
        fg_oper_free(ptr::null_mut());
        fg_string_free(ptr::null_mut());
    }
}

#[test]
fn zero_lambda_is_rejected() {
    unsafe {
        let mut conn = ptr::null_mut();
        let st = fg_connection_frenkel_gross(c("A1").as_ptr(), ptr::null(), c("0").as_ptr(), &mut conn);
        assert_eq!(st, FgStatus::Invalid);
    }
}

#[test]
fn verify_jobs() {
    unsafe {
        let mut out = ptr::null_mut();
        let job = r#"{"claim":"oper_route","params":{"type":"A1","lambda":"-2/3"}}"#;
        assert_eq!(fg_verify_json(c(job).as_ptr(), &mut out), FgStatus::Ok, "{}", last_error());
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["pass"], Value::Bool(true));
        assert_eq!(v["claim"], "oper_route");

        let job = r#"{"claim":"sl2_weyl_freeness","params":{"highest_weight":5}}"#;
        assert_eq!(fg_verify_json(c(job).as_ptr(), &mut out), FgStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["pass"], Value::Bool(true));

        // a job that cannot run still yields a report
        let job = r#"{"claim":"fg_local_structure","params":{"type":"E8","lambda":"1"}}"#;
        assert_eq!(fg_verify_json(c(job).as_ptr(), &mut out), FgStatus::Ok);
        let v: Value = serde_json::from_str(&take(out)).unwrap();
        assert!(v["error"].is_string());

        let job = r#"{"claim":"no_such_claim"}"#;
        assert_eq!(fg_verify_json(c(job).as_ptr(), &mut out), FgStatus::Parse);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(fg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/fgrigid.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct FgConnection FgConnection;"));
}

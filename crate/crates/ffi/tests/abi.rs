use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use attenuata_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    att_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let mut s = ptr::null_mut();
    assert_eq!(att_last_error(&mut s), AttStatus::Ok);
    take(s)
}

#[test]
fn field_round_trip() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(att_field_new(8, &mut f), AttStatus::Ok);
        assert_eq!(att_field_order(f), 8);
        let mut r = 0u32;
        for a in 1..8 {
            assert_eq!(att_field_op(f, AttFieldOp::Inv, a, 0, &mut r), AttStatus::Ok);
            let inv = r;
            assert_eq!(att_field_op(f, AttFieldOp::Mul, a, inv, &mut r), AttStatus::Ok);
            assert_eq!(r, 1);
            // Frobenius of order 3 on GF(8)
            assert_eq!(att_field_op(f, AttFieldOp::Frobenius, a, 3, &mut r), AttStatus::Ok);
            assert_eq!(r, a);
        }
        assert_eq!(att_field_op(f, AttFieldOp::Add, 5, 5, &mut r), AttStatus::Ok);
        assert_eq!(r, 0);
        assert_eq!(att_field_op(f, AttFieldOp::Inv, 0, 0, &mut r), AttStatus::InvalidArgument);
        assert_eq!(att_field_op(f, AttFieldOp::Add, 9, 0, &mut r), AttStatus::FieldMismatch);
        att_field_free(f);
    }
}

#[test]
fn bad_field_order_sets_last_error() {
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(att_field_new(6, &mut f), AttStatus::NotPrimePower);
        assert!(f.is_null());
        assert!(last_error().contains('6'));
        assert_eq!(att_field_new(2, ptr::null_mut()), AttStatus::NullPointer);
        assert_eq!(att_field_order(ptr::null()), 0);
    }
}

#[test]
fn scheme_vertices_and_classes() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(att_scheme_new(2, 4, 1, 2, &mut s), AttStatus::Ok);
        let n = att_scheme_vertex_count(s);
        assert_eq!(n, 140);
        let mut counts = std::collections::BTreeMap::new();
        let (mut i, mut jmi) = (0u32, 0u32);
        for v in 0..n {
            assert_eq!(att_scheme_classify(s, 0, v, &mut i, &mut jmi), AttStatus::Ok);
            *counts.entry((i, jmi)).or_insert(0u32) += 1;
        }
        let expected: Vec<((u32, u32), u32)> = vec![((0, 0), 1), ((0, 1), 3), ((1, 0), 36), ((1, 1), 36), ((2, 0), 64)];
        assert_eq!(counts.into_iter().collect::<Vec<_>>(), expected);

        let mut text = ptr::null_mut();
        assert_eq!(att_scheme_vertex(s, 0, &mut text), AttStatus::Ok);
        assert!(!take(text).is_empty());
        assert_eq!(att_scheme_vertex(s, n, &mut text), AttStatus::OutOfRange);
        assert_eq!(att_scheme_classify(s, 0, n, &mut i, &mut jmi), AttStatus::OutOfRange);
        att_scheme_free(s);
        att_scheme_free(ptr::null_mut());
    }
}

#[test]
fn counting_functions() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(att_valency(2, 4, 1, 2, 2, 0, &mut s), AttStatus::Ok);
        assert_eq!(take(s), "64");
        assert_eq!(att_valency(2, 4, 1, 2, 3, 0, &mut s), AttStatus::InadmissibleClass);
        assert_eq!(att_gaussian_binomial(4, 2, 2, &mut s), AttStatus::Ok);
        assert_eq!(take(s), "35");
        assert_eq!(att_gaussian_binomial(60, 30, 7, &mut s), AttStatus::Ok);
        assert!(take(s).len() > 19);
        assert_eq!(att_gaussian_binomial(4, 2, 1, &mut s), AttStatus::InvalidArgument);
    }
}

#[test]
fn run_check_returns_json_report() {
    unsafe {
        let cmd = CString::new("check-all").unwrap();
        let mut json = ptr::null_mut();
        let mut code = -1;
        assert_eq!(att_run_check(cmd.as_ptr(), 2, 4, 1, 2, 0, &mut json, &mut code), AttStatus::Ok);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        assert_eq!(v["status"], "pass");
        assert!(v["checks"].as_array().unwrap().len() >= 10);

        let cmd = CString::new("verify-scheme").unwrap();
        assert_eq!(att_run_check(cmd.as_ptr(), 2, 4, 1, 2, 1000, &mut json, &mut code), AttStatus::Ok);
        assert_eq!(code, 3);
        att_string_free(json);

        assert_eq!(att_run_check(cmd.as_ptr(), 6, 4, 1, 2, 0, &mut json, &mut code), AttStatus::InvalidArgument);
        assert_eq!(code, 2);
        assert!(json.is_null());
        assert!(last_error().contains("prime power"));

        let cmd = CString::new("no-such-command").unwrap();
        assert_eq!(att_run_check(cmd.as_ptr(), 2, 4, 1, 2, 0, &mut json, &mut code), AttStatus::InvalidArgument);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(att_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/attenuata.h")
}

#[test]
fn header_declares_every_entry_point() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "att_version",
        "att_last_error",
        "att_string_free",
        "att_field_new",
        "att_field_free",
        "att_field_order",
        "att_field_op",
        "att_scheme_new",
        "att_scheme_free",
        "att_scheme_vertex_count",
        "att_scheme_vertex",
        "att_scheme_classify",
        "att_valency",
        "att_gaussian_binomial",
        "att_run_check",
        "typedef struct AttField AttField",
        "typedef struct AttScheme AttScheme",
        "AttStatus_Panic = 99",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = which_cc() else { return };
    let dir = std::env::temp_dir().join(format!("attenuata-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        r#"#include "attenuata.h"
int demo(void) {
    AttField *f = 0;
    uint32_t r = 0;
    if (att_field_new(4, &f) != AttStatus_Ok) return 1;
    att_field_op(f, AttFieldOp_Mul, 2, 3, &r);
    att_field_free(f);
    char *json = 0;
    int32_t code = 0;
    att_run_check("valencies", 2, 4, 1, 2, 0, &json, &code);
    att_string_free(json);
    return (int)r;
}
"#,
    )
    .unwrap();
    let inc = header().parent().unwrap().to_path_buf();
    let out = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&inc)
        .arg(&src)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}

use std::ffi::{c_char, CStr};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use lpadic_ffi::*;

fn text(x: *const LpadicNumber) -> String {
    let mut needed = 0usize;
    let st = unsafe { lpadic_number_to_string(x, ptr::null_mut(), 0, &mut needed) };
    assert_eq!(st, LpadicStatus::BufferTooSmall);
    let mut buf = vec![0 as c_char; needed];
    let st = unsafe { lpadic_number_to_string(x, buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
    assert_eq!(st, LpadicStatus::Ok);
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned()
}

fn last_error() -> String {
    let mut buf = vec![0 as c_char; 256];
    unsafe { lpadic_last_error(buf.as_mut_ptr(), buf.len(), ptr::null_mut()) };
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_str().unwrap().to_owned()
}

#[test]
fn log_six_mod_125() {
    unsafe {
        let mut six = ptr::null_mut();
        assert_eq!(lpadic_number_from_int(5, 6, 3, &mut six), LpadicStatus::Ok);
        let mut l = ptr::null_mut();
        assert_eq!(lpadic_number_log(six, &mut l), LpadicStatus::Ok);
        let (mut v, mut z) = (0i64, false);
        assert_eq!(lpadic_number_valuation(l, &mut v, &mut z), LpadicStatus::Ok);
        assert!(!z);
        assert_eq!(v, 1);
        // 55 = 11 * 5
        assert_eq!(text(l), "11*5^1 + O(5^3)");
        lpadic_number_free(l);
        lpadic_number_free(six);
    }
}

#[test]
fn arithmetic_and_errors() {
    unsafe {
        let (mut a, mut b, mut c) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
        assert_eq!(lpadic_number_from_rational(5, 1, 3, 6, &mut a), LpadicStatus::Ok);
        assert_eq!(lpadic_number_from_int(5, 3, 6, &mut b), LpadicStatus::Ok);
        assert_eq!(lpadic_number_mul(a, b, &mut c), LpadicStatus::Ok);
        assert_eq!(text(c), "1 + O(5^6)");
        lpadic_number_free(c);

        let mut zero = ptr::null_mut();
        assert_eq!(lpadic_number_from_int(5, 0, 6, &mut zero), LpadicStatus::Ok);
        assert_eq!(lpadic_number_div(a, zero, &mut c), LpadicStatus::DivisionByZero);
        assert!(!last_error().is_empty());

        let mut five = ptr::null_mut();
        assert_eq!(lpadic_number_from_int(5, 5, 6, &mut five), LpadicStatus::Ok);
        assert_eq!(lpadic_number_log(five, &mut c), LpadicStatus::NotAUnit);

        let mut seven = ptr::null_mut();
        assert_eq!(lpadic_number_from_int(7, 1, 6, &mut seven), LpadicStatus::Ok);
        assert_eq!(lpadic_number_add(a, seven, &mut c), LpadicStatus::PrimeMismatch);

        assert_eq!(lpadic_number_from_int(4, 1, 6, &mut c), LpadicStatus::InvalidArgument);
        assert_eq!(lpadic_number_from_int(5, 1, 6, ptr::null_mut()), LpadicStatus::NullPointer);
        assert_eq!(lpadic_number_add(ptr::null(), b, &mut c), LpadicStatus::NullPointer);

        for x in [a, b, zero, five, seven] {
            lpadic_number_free(x);
        }
        lpadic_number_free(ptr::null_mut());
    }
}

#[test]
fn special_value_and_teichmuller() {
    unsafe {
        let mut v = ptr::null_mut();
        assert_eq!(lpadic_kl_special_omega(5, 2, 2, 6, &mut v), LpadicStatus::Ok);
        let mut third = ptr::null_mut();
        assert_eq!(lpadic_number_from_rational(5, 1, 3, 6, &mut third), LpadicStatus::Ok);
        assert_eq!(text(v), text(third));
        assert_eq!(lpadic_kl_special_omega(5, 1, 2, 6, &mut v), LpadicStatus::MathError);

        let mut two = ptr::null_mut();
        let mut t = ptr::null_mut();
        assert_eq!(lpadic_number_from_int(5, 2, 2, &mut two), LpadicStatus::Ok);
        assert_eq!(lpadic_number_teichmuller(two, &mut t), LpadicStatus::Ok);
        assert_eq!(text(t), "7 + O(5^2)");
        let mut prec = 0;
        assert_eq!(lpadic_number_precision(t, &mut prec), LpadicStatus::Ok);
        assert_eq!(prec, 2);
        for x in [v, third, two, t] {
            lpadic_number_free(x);
        }
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(lpadic_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compiles and runs a C program against the generated header and the
/// static library, when a C compiler is available.
#[test]
fn c_program_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header = manifest.join("include/lpadic.h");
    assert!(header.exists(), "header not generated");
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; header presence checked only");
        return;
    }
    // test binary lives in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("liblpadic_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built at {}; skipping link", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("lpadic-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "lpadic.h"
int main(void) {
    LpadicNumber *six = NULL, *l = NULL;
    if (lpadic_number_from_int(5, 6, 3, &six) != LPADIC_STATUS_OK) return 1;
    if (lpadic_number_log(six, &l) != LPADIC_STATUS_OK) return 2;
    char buf[64];
    if (lpadic_number_to_string(l, buf, sizeof buf, NULL) != LPADIC_STATUS_OK) return 3;
    lpadic_number_free(l);
    lpadic_number_free(six);
    puts(buf);
    return strcmp(buf, "11*5^1 + O(5^3)") == 0 ? 0 : 4;
}
"#,
    )
    .unwrap();
    let bin = dir.join("main");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program failed: {:?}", out);
    std::fs::remove_dir_all(&dir).ok();
}

use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use mplkit_ffi::*;

fn parse(s: &str) -> *mut MplIndex {
    let c = CString::new(s).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { mpl_index_parse(c.as_ptr(), &mut h) }, MplStatus::Ok);
    h
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { mpl_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(mpl_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

#[test]
fn index_round_trip_and_duals() {
    let k = parse("1,1,2");
    assert_eq!(unsafe { mpl_index_weight(k) }, 4);
    assert_eq!(unsafe { mpl_index_depth(k) }, 3);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { mpl_index_dagger(k, &mut d) }, MplStatus::Ok);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mpl_index_to_string(d, &mut s) }, MplStatus::Ok);
    assert_eq!(take(s), "4");
    let two_one = parse("2,1");
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { mpl_index_vee(two_one, &mut v) }, MplStatus::Ok);
    assert_eq!(unsafe { mpl_index_to_string(v, &mut s) }, MplStatus::Ok);
    assert_eq!(take(s), "1,2");
    unsafe {
        mpl_index_free(k);
        mpl_index_free(d);
        mpl_index_free(two_one);
        mpl_index_free(v);
    }
}

#[test]
fn zeta_two() {
    let k = parse("2");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mpl_mzv(k, 25, &mut s) }, MplStatus::Ok);
    assert_eq!(take(s), "1.6449340668482264364724152");
    unsafe { mpl_index_free(k) };
}

#[test]
fn error_codes() {
    let bad = CString::new("2,0").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { mpl_index_parse(bad.as_ptr(), &mut h) }, MplStatus::Parse);
    assert!(h.is_null());
    assert!(!last_error().is_empty());

    let k = parse("2,1");
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { mpl_mzv(k, 20, &mut s) }, MplStatus::InvalidArgument);
    assert!(last_error().contains("admissible"), "{}", last_error());
    let mut r = 0u64;
    assert_eq!(
        unsafe { mpl_fmzv_star_series(k, 2, 1, &mut r) },
        MplStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { mpl_fmzv_star_series(ptr::null(), 5, 1, &mut r) },
        MplStatus::NullPointer
    );
    assert_eq!(unsafe { mpl_index_weight(ptr::null()) }, 0);
    unsafe {
        mpl_index_free(k);
        mpl_string_free(ptr::null_mut());
    }
}

#[test]
fn finite_star_series_duality() {
    // Σ ζ*(k,{1}^n) p^n ≡ -Σ ζ*(k^∨,{1}^n) p^n mod p^M
    let k = parse("2,1");
    let kv = parse("1,2");
    let (p, m) = (13u64, 3u32);
    let (mut a, mut b) = (0u64, 0u64);
    assert_eq!(unsafe { mpl_fmzv_star_series(k, p, m, &mut a) }, MplStatus::Ok);
    assert_eq!(unsafe { mpl_fmzv_star_series(kv, p, m, &mut b) }, MplStatus::Ok);
    let modulus = p.pow(m);
    assert_eq!((a + b) % modulus, 0);
    unsafe {
        mpl_index_free(k);
        mpl_index_free(kv);
    }
}

#[test]
fn run_suite_through_c_abi() {
    let suite = CString::new("mzv-duality").unwrap();
    let cfg = CString::new("digits = 25\nmax_weight = 4\n").unwrap();
    let mut out = ptr::null_mut();
    let mut failures = usize::MAX;
    assert_eq!(
        unsafe { mpl_run_suite(suite.as_ptr(), cfg.as_ptr(), &mut out, &mut failures) },
        MplStatus::Ok
    );
    let text = take(out);
    assert_eq!(failures, 0);
    assert_eq!(text.lines().count(), 7);
    let unknown = CString::new("nope").unwrap();
    assert_eq!(
        unsafe { mpl_run_suite(unknown.as_ptr(), ptr::null(), &mut out, &mut failures) },
        MplStatus::Config
    );
    let bad_cfg = CString::new("p_min = 2").unwrap();
    assert_eq!(
        unsafe { mpl_run_suite(suite.as_ptr(), bad_cfg.as_ptr(), &mut out, &mut failures) },
        MplStatus::Config
    );
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/mplkit.h")).unwrap();
    for f in [
        "mpl_last_error",
        "mpl_string_free",
        "mpl_index_parse",
        "mpl_index_free",
        "mpl_index_dagger",
        "mpl_index_vee",
        "mpl_mzv",
        "mpl_fmzv_star_series",
        "mpl_run_suite",
        "typedef struct MplIndex MplIndex",
        "MPL_STATUS_DOMAIN = 5",
    ] {
        assert!(header.contains(f), "header lacks {f}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libmplkit_ffi.a");
    if Command::new("cc").arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping: no C compiler or static library at {}", lib.display());
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("mplkit_smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "{:?}", out);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dagger 4"));
    assert!(text.contains("mzv 1.08232323371113819152"));
    assert!(text.contains("error parse error"));
}

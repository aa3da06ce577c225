use std::f64::consts::PI;
use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use casimir_ffi::*;

fn parse(spec: &str) -> *mut CmModel {
    let s = CString::new(spec).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { cm_model_parse(s.as_ptr(), &mut m) }, CmStatus::Ok);
    assert!(!m.is_null());
    m
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cm_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn perfect_conductor_integral_and_energy() {
    let m = parse("pc");
    let (mut v, mut e) = (0.0, 0.0);
    let st = unsafe {
        cm_i_imag(
            m,
            CmPolarization::Tm,
            f64::INFINITY,
            f64::INFINITY,
            1e-10,
            &mut v,
            &mut e,
        )
    };
    assert_eq!(st, CmStatus::Ok);
    assert!((v - PI.powi(4) / 180.0).abs() < 1e-10);
    let mut out = CmEnergy::default();
    assert_eq!(
        unsafe { cm_casimir_energy(m, 1e-6, 1e-10, &mut out) },
        CmStatus::Ok
    );
    let u = -PI * PI * 1.054_571_817e-34 * 299_792_458.0 / (720.0 * 1e-18);
    assert!((out.energy / u - 1.0).abs() < 1e-9);
    assert!((out.pressure * 1e-6 / (3.0 * out.energy) - 1.0).abs() < 1e-12);
    unsafe { cm_model_free(m) };
}

#[test]
fn errors_map_to_status_codes() {
    let bad = CString::new("gold").unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { cm_model_parse(bad.as_ptr(), &mut m) },
        CmStatus::Parse
    );
    assert!(m.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(
        unsafe { cm_model_parse(ptr::null(), &mut m) },
        CmStatus::NullPointer
    );

    let lorentz = parse("lorentz:kappa0=3,omega0=1");
    let mut out = CmEnergy::default();
    assert_eq!(
        unsafe { cm_casimir_energy(lorentz, 1e-6, 1e-8, &mut out) },
        CmStatus::UnsupportedModel
    );
    let mut v = 0.0;
    let pc = parse("pc");
    assert_eq!(
        unsafe {
            cm_i_imag(
                pc,
                CmPolarization::Te,
                1.0,
                1.0,
                2.0,
                &mut v,
                ptr::null_mut(),
            )
        },
        CmStatus::InvalidArgument
    );
    assert_eq!(
        unsafe {
            cm_i_imag(
                ptr::null(),
                CmPolarization::Te,
                1.0,
                1.0,
                1e-8,
                &mut v,
                ptr::null_mut(),
            )
        },
        CmStatus::NullPointer
    );
    unsafe {
        cm_model_free(lorentz);
        cm_model_free(pc);
        cm_model_free(ptr::null_mut());
    }
    let s = unsafe { CStr::from_ptr(cm_status_str(CmStatus::Domain)) };
    assert_eq!(s.to_str().unwrap(), "domain error");
}

#[test]
fn pole_scan_handle() {
    let m = parse("plasma:xi=30");
    let mut scan = ptr::null_mut();
    assert_eq!(
        unsafe { cm_pole_scan(m, CmPolarization::Tm, 50.0, 60.0, &mut scan) },
        CmStatus::Ok
    );
    let n = unsafe { cm_pole_scan_len(scan) };
    assert!(n > 0);
    for i in 0..n {
        let mut w = 0.0;
        assert_eq!(unsafe { cm_pole_scan_get(scan, i, &mut w) }, CmStatus::Ok);
        assert!(w > 0.0 && w < 60.0);
    }
    let mut w = 0.0;
    assert_eq!(
        unsafe { cm_pole_scan_get(scan, n, &mut w) },
        CmStatus::OutOfRange
    );
    let (mut b1, mut b2) = (0.0, 0.0);
    assert_eq!(
        unsafe { cm_branch_points(m, 50.0, &mut b1, &mut b2) },
        CmStatus::Ok
    );
    assert!(b1 <= b2);
    unsafe {
        cm_pole_scan_free(scan);
        cm_model_free(m);
    }
}

#[test]
fn plasmon_series_matches_quadrature() {
    let (mut s, mut q) = (0.0, 0.0);
    assert_eq!(
        unsafe { cm_plasmon_energy(3.0, 1e15, 1e-6, 30, &mut s, &mut q) },
        CmStatus::Ok
    );
    assert!((s / q - 1.0).abs() < 1e-8);
    assert_eq!(
        unsafe { cm_plasmon_energy(3.0, -1.0, 1e-6, 30, &mut s, &mut q) },
        CmStatus::InvalidArgument
    );
}

/// Directory holding `libcasimir_ffi.a` for the running test profile.
fn staticlib_dir() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let deps = exe.parent()?.to_path_buf();
    let up = deps.parent()?.to_path_buf();
    [deps, up]
        .into_iter()
        .find(|d| d.join("libcasimir_ffi.a").exists())
}

#[test]
fn c_program_links_against_header() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = root.join("include/casimir.h");
    assert!(header.exists(), "header not generated");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"#include <math.h>
#include <stdio.h>
#include "casimir.h"
int main(void) {
    CmModel *m = NULL;
    if (cm_model_parse("pc", &m) != CM_STATUS_OK) return 1;
    double v = 0.0;
    if (cm_i_imag(m, CM_POLARIZATION_TE, INFINITY, INFINITY, 1e-10, &v, NULL) != CM_STATUS_OK) return 2;
    cm_model_free(m);
    if (cm_model_parse("nonsense", &m) != CM_STATUS_PARSE) return 3;
    printf("%.12f\n", v);
    return 0;
}
"#,
    )
    .unwrap();
    let lib = staticlib_dir().expect("libcasimir_ffi.a next to the test binary");
    let exe = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(root.join("include"))
        .arg(lib.join("libcasimir_ffi.a"))
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .expect("cc available");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let v: f64 = String::from_utf8(out.stdout)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((v - PI.powi(4) / 180.0).abs() < 1e-11);
}

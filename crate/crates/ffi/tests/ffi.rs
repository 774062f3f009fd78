// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

use std::ffi::{c_void, CStr};
use std::path::Path;
use std::process::Command;
use std::ptr;

use pilotwave_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as std::ffi::c_char; 256];
    pw_last_error_message(buf.as_mut_ptr(), buf.len());
    unsafe { CStr::from_ptr(buf.as_ptr()) }.to_string_lossy().into_owned()
}

#[test]
fn classify_and_amplitudes() {
    let mut c = PwOracleClass::Constant;
    assert_eq!(pw_classify(2, &mut c), PwStatus::Ok);
    assert_eq!(c, PwOracleClass::Balanced);
    assert_eq!(pw_classify(7, &mut c), PwStatus::InvalidArgument);
    assert!(last_error().contains('7'));
    assert_eq!(pw_classify(0, ptr::null_mut()), PwStatus::NullPointer);

    // Balanced f leaves the data qubit in |1⟩, so only indices 2 and 3 are populated.
    let (mut re, mut im) = ([0.0; 4], [0.0; 4]);
    assert_eq!(pw_deutsch_amplitudes(1, re.as_mut_ptr(), im.as_mut_ptr()), PwStatus::Ok);
    let p: Vec<f64> = (0..4).map(|k| re[k] * re[k] + im[k] * im[k]).collect();
    assert!(p[0] + p[1] < 1e-20);
    assert!((p[2] + p[3] - 1.0).abs() < 1e-12);
}

#[test]
fn spin_run_round_trip() {
    let mut setup = ptr::null_mut();
    assert_eq!(pw_spin_setup_new(3, 1e-3, PwScheme::Rk4, &mut setup), PwStatus::Ok);
    let mut run = ptr::null_mut();
    assert_eq!(pw_spin_run(setup, 0.01, &mut run), PwStatus::Ok);
    let mut v = PwOracleClass::Balanced;
    assert_eq!(pw_spin_run_verdict(run, &mut v), PwStatus::Ok);
    assert_eq!(v, PwOracleClass::Constant);
    let mut n = 0;
    assert_eq!(pw_spin_run_len(run, &mut n), PwStatus::Ok);
    assert!(n > 10);
    let (mut t, mut y) = (vec![0.0; n], vec![0.0; n]);
    assert_eq!(pw_spin_run_samples(run, t.as_mut_ptr(), y.as_mut_ptr(), n - 1), PwStatus::BufferTooSmall);
    assert_eq!(pw_spin_run_samples(run, t.as_mut_ptr(), y.as_mut_ptr(), n), PwStatus::Ok);
    assert_eq!(y[0], 0.01);
    assert!(t.windows(2).all(|w| w[1] > w[0]));
    pw_spin_run_free(run);
    pw_spin_setup_free(setup);
    pw_spin_setup_free(ptr::null_mut());
    assert_eq!(pw_spin_setup_new(0, -1.0, PwScheme::Euler, &mut setup), PwStatus::InvalidArgument);
}

#[test]
fn well_wave_queries() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (re, im) = ([h, 0.0, h, 0.0], [0.0; 4]);
    let mut w = ptr::null_mut();
    assert_eq!(pw_well_wave_new(re.as_ptr(), im.as_ptr(), 1.0, &mut w), PwStatus::Ok);
    let (mut pr, mut pi, mut rho) = (0.0, 0.0, 0.0);
    assert_eq!(pw_well_wave_psi(w, 0.3, 0.5, &mut pr, &mut pi), PwStatus::Ok);
    assert_eq!(pw_well_wave_density(w, 0.3, 0.5, &mut rho), PwStatus::Ok);
    assert!((rho - (pr * pr + pi * pi)).abs() < 1e-14);
    // Real coefficients carry no phase gradient.
    let (mut vx, mut vy) = (1.0, 1.0);
    assert_eq!(pw_well_wave_velocity(w, 0.3, 0.5, &mut vx, &mut vy), PwStatus::Ok);
    assert!(vx.abs() < 1e-6 && vy.abs() < 1e-6);
    assert_eq!(pw_well_wave_density(w, 1.5, 0.5, &mut rho), PwStatus::OutOfBox);
    assert_eq!(pw_well_wave_velocity(w, 0.3, 0.0, &mut vx, &mut vy), PwStatus::Node);

    let mut tr = ptr::null_mut();
    assert_eq!(pw_well_integrate_free(w, 0.2, 0.3, 0.5, 1e-3, PwScheme::Rk4, &mut tr), PwStatus::Ok);
    let mut st = PwTrajectoryStatus::AbortedNode;
    assert_eq!(pw_trajectory_status(tr, &mut st), PwStatus::Ok);
    assert_eq!(st, PwTrajectoryStatus::Complete);
    let mut n = 0;
    pw_trajectory_len(tr, &mut n);
    let (mut t, mut x, mut y) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    assert_eq!(pw_trajectory_samples(tr, t.as_mut_ptr(), x.as_mut_ptr(), y.as_mut_ptr(), n), PwStatus::Ok);
    assert!((t[n - 1] - 0.2).abs() < 1e-9);
    assert!(y.iter().all(|&v| (v - 0.5).abs() < 1e-9));
    pw_trajectory_free(tr);
    pw_well_wave_free(w);

    let bad = [1.0, 1.0, 0.0, 0.0];
    assert_eq!(pw_well_wave_new(bad.as_ptr(), im.as_ptr(), 1.0, &mut w), PwStatus::NotNormalized);
}

#[test]
fn well_deutsch_call() {
    let (mut st, mut c) = (PwTrajectoryStatus::AbortedNode, PwOracleClass::Constant);
    assert_eq!(pw_well_deutsch(2, 0.35, 0.55, 0.0, &mut st, &mut c), PwStatus::Ok);
    assert_eq!(st, PwTrajectoryStatus::Complete);
    assert_eq!(c, PwOracleClass::Balanced);
}

extern "C" fn uniform(x: f64, user: *mut c_void) -> f64 {
    unsafe { *(user as *mut usize) += 1 };
    x.clamp(0.0, 1.0)
}

#[test]
fn ks_with_callback() {
    let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
    let mut calls = 0usize;
    let mut d = 1.0;
    let user = &mut calls as *mut usize as *mut c_void;
    assert_eq!(pw_ks_statistic(xs.as_ptr(), xs.len(), Some(uniform), user, &mut d), PwStatus::Ok);
    assert!((d - 0.005).abs() < 1e-12);
    assert!(calls >= 100);
    assert_eq!(pw_ks_statistic(xs.as_ptr(), 0, Some(uniform), user, &mut d), PwStatus::InvalidArgument);
    assert_eq!(pw_ks_statistic(xs.as_ptr(), 3, None, user, &mut d), PwStatus::NullPointer);
}

#[test]
fn integrals_and_constants() {
    let n = pw_standard_integral_count();
    for i in 0..n {
        let (mut a, mut b) = (0.0, 0.0);
        assert_eq!(pw_standard_integral(i, &mut a, &mut b), PwStatus::Ok);
        assert!((a - b).abs() < 1e-12, "{i}");
    }
    let (mut a, mut b) = (0.0, 0.0);
    assert_eq!(pw_standard_integral(n, &mut a, &mut b), PwStatus::InvalidArgument);
    let (mut ua, mut ub, mut uc) = (0.0, 0.0, 0.0);
    assert_eq!(pw_oracle_potential_constants(&mut ua, &mut ub, &mut uc), PwStatus::Ok);
    assert!(ua.is_finite() && ub.is_finite() && uc.is_finite());
}

#[test]
fn errors_are_thread_local() {
    let mut c = PwOracleClass::Constant;
    assert_eq!(pw_classify(9, &mut c), PwStatus::InvalidArgument);
    let other = std::thread::spawn(|| pw_last_error_message(ptr::null_mut(), 0)).join().unwrap();
    assert_eq!(other, 0);
    assert!(pw_last_error_message(ptr::null_mut(), 0) > 0);
    let mut tiny = [1 as std::ffi::c_char; 4];
    let full = pw_last_error_message(tiny.as_mut_ptr(), tiny.len());
    assert!(full > 3);
    assert_eq!(tiny[3], 0);
}

#[test]
fn version_is_cargo_version() {
    let v = unsafe { CStr::from_ptr(pw_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_entry_point_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/pilotwave.h")).unwrap();
    let src = std::fs::read_to_string(dir.join("src/lib.rs")).unwrap();
    let exported: Vec<&str> = src
        .lines()
        .filter_map(|l| l.strip_prefix("pub extern \"C\" fn "))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exported.len() > 20);
    for f in &exported {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    let Ok(cc) = which_cc() else { return };
    let probe = std::env::temp_dir().join(format!("pilotwave_h_{}.c", std::process::id()));
    std::fs::write(&probe, "#include \"pilotwave.h\"\nint main(void) { return PW_STATUS_OK; }\n").unwrap();
    let o = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&probe)
        .output()
        .unwrap();
    let _ = std::fs::remove_file(&probe);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "clang", "gcc"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}

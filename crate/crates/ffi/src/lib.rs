// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! C interface to the pilotwave simulator.
//!
//! Objects are opaque handles created by `*_new` and released by `*_free`.
//! Every call returns a [`PwStatus`]; on failure the message is available
//! from [`pw_last_error_message`] on the same thread.
//!
//! Pointer arguments must be null or valid for the documented length.
//! Null is always detected and reported as `NullPointer`.

// The entry points are called from C, where `unsafe` has no meaning.
#![allow(clippy::not_unsafe_ptr_arg_deref)]

use std::cell::RefCell;
use std::ffi::{c_char, c_void, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use pilotwave::ensemble::ks_statistic;
use pilotwave::gates::{classify, deutsch_evolution, deutsch_input, OracleClass, OracleId, C64};
use pilotwave::ode::Scheme;
use pilotwave::spin::{SpinDeutschRun, SpinDeutschSetup, SpinParams};
use pilotwave::well::deutsch::{run_deutsch_well, WellDeutschParams, WellDeutschSetup};
use pilotwave::well::matrix_elements::{standard_integrals, UCoefficients};
use pilotwave::well::{integrate_trajectory, ConfigPoint, GateSchedule, Trajectory2D, TrajectoryStatus, WellWaveFunction};
use pilotwave::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotNormalized = 3,
    /// The point lies where |ψ|² is below the node floor.
    Node = 4,
    OutOfBox = 5,
    Numerical = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PwOracleClass {
    Constant = 0,
    Balanced = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PwScheme {
    Euler = 0,
    Rk4 = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PwTrajectoryStatus {
    Complete = 0,
    AbortedNode = 1,
    AbortedBoundary = 2,
}

/// Spin-model Deutsch setup for one oracle.
pub struct PwSpinSetup(SpinDeutschSetup);
/// One spin-model corpuscle run.
pub struct PwSpinRun(SpinDeutschRun);
/// A two-qubit wave in the infinite well.
pub struct PwWellWave(WellWaveFunction);
/// A sampled (t, x, y) trajectory.
pub struct PwTrajectory(Trajectory2D);

/// CDF callback for [`pw_ks_statistic`].
pub type PwCdf = Option<extern "C" fn(x: f64, user: *mut c_void) -> f64>;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PwStatus {
    match e {
        Error::NotNormalized { .. } => PwStatus::NotNormalized,
        Error::Node { .. } => PwStatus::Node,
        Error::OutOfBox { .. } => PwStatus::OutOfBox,
        Error::QuadratureDidNotConverge { .. } | Error::EnvelopeViolation { .. } | Error::SamplerExhausted(_) => {
            PwStatus::Numerical
        }
        _ => PwStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error message.
fn guard(f: impl FnOnce() -> Result<(), PwStatusError>) -> PwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PwStatus::Ok,
        Ok(Err(e)) => {
            set_error(e.1);
            e.0
        }
        Err(_) => {
            set_error("internal panic".into());
            PwStatus::Panic
        }
    }
}

struct PwStatusError(PwStatus, String);

impl From<Error> for PwStatusError {
    fn from(e: Error) -> Self {
        PwStatusError(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> PwStatusError {
    PwStatusError(PwStatus::NullPointer, format!("{what} is null"))
}

fn bad(msg: String) -> PwStatusError {
    PwStatusError(PwStatus::InvalidArgument, msg)
}

fn oracle(index: u32) -> Result<OracleId, PwStatusError> {
    OracleId::from_index(index as usize).ok_or_else(|| bad(format!("oracle index {index} is not in 0..=3")))
}

fn scheme(s: PwScheme) -> Scheme {
    match s {
        PwScheme::Euler => Scheme::Euler,
        PwScheme::Rk4 => Scheme::Rk4,
    }
}

fn class(c: OracleClass) -> PwOracleClass {
    match c {
        OracleClass::Constant => PwOracleClass::Constant,
        OracleClass::Balanced => PwOracleClass::Balanced,
    }
}

fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, PwStatusError> {
    // SAFETY: the caller passes either null or a valid, writable pointer.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, PwStatusError> {
    // SAFETY: the caller passes either null or a live handle from this library.
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

fn boxed<T>(value: T, dst: *mut *mut T) -> Result<(), PwStatusError> {
    *out(dst, "output handle")? = Box::into_raw(Box::new(value));
    Ok(())
}

fn release<T>(p: *mut T) {
    if !p.is_null() {
        // SAFETY: p came from Box::into_raw in this library and is freed once.
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Copies the last error of this thread into `buf` (NUL terminated, truncated
/// to `len`) and returns the full message length excluding the NUL; 0 if none.
#[no_mangle]
pub extern "C" fn pw_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            // SAFETY: buf has room for len bytes per the contract.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast(), buf, n);
                *buf.add(n) = 0;
            }
        }
        bytes.len()
    })
}

/// Static NUL-terminated version string.
#[no_mangle]
pub extern "C" fn pw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Oracle index i ∈ 0..=3 selects f_i.
#[no_mangle]
pub extern "C" fn pw_classify(oracle_index: u32, out_class: *mut PwOracleClass) -> PwStatus {
    guard(|| {
        *out(out_class, "out_class")? = class(classify(oracle(oracle_index)?));
        Ok(())
    })
}

/// Amplitudes of the abstract Deutsch output state D(f)|01⟩, basis index 2·d + a.
#[no_mangle]
pub extern "C" fn pw_deutsch_amplitudes(oracle_index: u32, out_re: *mut f64, out_im: *mut f64) -> PwStatus {
    guard(|| {
        if out_re.is_null() || out_im.is_null() {
            return Err(null("amplitude buffer"));
        }
        let s = deutsch_input().apply(&deutsch_evolution(oracle(oracle_index)?))?;
        for (k, a) in s.amps().iter().enumerate() {
            // SAFETY: both buffers hold 4 doubles per the contract.
            unsafe {
                *out_re.add(k) = a.re;
                *out_im.add(k) = a.im;
            }
        }
        Ok(())
    })
}

/// Spin-model setup with default parameters except the step and scheme.
#[no_mangle]
pub extern "C" fn pw_spin_setup_new(oracle_index: u32, dt: f64, scheme_: PwScheme, out_setup: *mut *mut PwSpinSetup) -> PwStatus {
    guard(|| {
        let params = SpinParams { dt, scheme: scheme(scheme_), ..SpinParams::default() };
        boxed(PwSpinSetup(SpinDeutschSetup::new(oracle(oracle_index)?, params)?), out_setup)
    })
}

#[no_mangle]
pub extern "C" fn pw_spin_setup_free(setup: *mut PwSpinSetup) {
    release(setup);
}

/// Time at which the pointer coupling switches on.
#[no_mangle]
pub extern "C" fn pw_spin_setup_measurement_start(setup: *const PwSpinSetup, out_t: *mut f64) -> PwStatus {
    guard(|| {
        *out(out_t, "out_t")? = get(setup, "setup")?.0.measurement_start();
        Ok(())
    })
}

/// Runs one corpuscle starting at pointer position y0.
#[no_mangle]
pub extern "C" fn pw_spin_run(setup: *const PwSpinSetup, y0: f64, out_run: *mut *mut PwSpinRun) -> PwStatus {
    guard(|| boxed(PwSpinRun(get(setup, "setup")?.0.run(y0)?), out_run))
}

#[no_mangle]
pub extern "C" fn pw_spin_run_free(run: *mut PwSpinRun) {
    release(run);
}

#[no_mangle]
pub extern "C" fn pw_spin_run_verdict(run: *const PwSpinRun, out_class: *mut PwOracleClass) -> PwStatus {
    guard(|| {
        *out(out_class, "out_class")? = class(get(run, "run")?.0.verdict);
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn pw_spin_run_len(run: *const PwSpinRun, out_len: *mut usize) -> PwStatus {
    guard(|| {
        *out(out_len, "out_len")? = get(run, "run")?.0.trajectory.samples().len();
        Ok(())
    })
}

/// Copies the (t, y) samples; both buffers must hold `len` doubles.
#[no_mangle]
pub extern "C" fn pw_spin_run_samples(run: *const PwSpinRun, t: *mut f64, y: *mut f64, len: usize) -> PwStatus {
    guard(|| {
        let s = get(run, "run")?.0.trajectory.samples();
        if t.is_null() || y.is_null() {
            return Err(null("sample buffer"));
        }
        if len < s.len() {
            return Err(PwStatusError(PwStatus::BufferTooSmall, format!("need {} samples, got {len}", s.len())));
        }
        for (k, &(tk, yk)) in s.iter().enumerate() {
            // SAFETY: both buffers hold at least len ≥ s.len() doubles.
            unsafe {
                *t.add(k) = tk;
                *y.add(k) = yk;
            }
        }
        Ok(())
    })
}

/// Wave with coefficients (re[k], im[k]), k = 2·d + a, normalized to 1e-10.
#[no_mangle]
pub extern "C" fn pw_well_wave_new(re: *const f64, im: *const f64, mass: f64, out_wave: *mut *mut PwWellWave) -> PwStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(null("coefficient buffer"));
        }
        // SAFETY: both buffers hold 4 doubles per the contract.
        let c: [C64; 4] = std::array::from_fn(|k| unsafe { C64::new(*re.add(k), *im.add(k)) });
        boxed(PwWellWave(WellWaveFunction::new(c, mass)?), out_wave)
    })
}

#[no_mangle]
pub extern "C" fn pw_well_wave_free(wave: *mut PwWellWave) {
    release(wave);
}

#[no_mangle]
pub extern "C" fn pw_well_wave_psi(wave: *const PwWellWave, x: f64, y: f64, out_re: *mut f64, out_im: *mut f64) -> PwStatus {
    guard(|| {
        let psi = get(wave, "wave")?.0.psi_at(ConfigPoint::new(x, y)?);
        *out(out_re, "out_re")? = psi.re;
        *out(out_im, "out_im")? = psi.im;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn pw_well_wave_density(wave: *const PwWellWave, x: f64, y: f64, out_rho: *mut f64) -> PwStatus {
    guard(|| {
        *out(out_rho, "out_rho")? = get(wave, "wave")?.0.density(ConfigPoint::new(x, y)?);
        Ok(())
    })
}

/// Guidance velocity ∇S/m.
#[no_mangle]
pub extern "C" fn pw_well_wave_velocity(wave: *const PwWellWave, x: f64, y: f64, out_vx: *mut f64, out_vy: *mut f64) -> PwStatus {
    guard(|| {
        let (vx, vy) = get(wave, "wave")?.0.guidance_velocity(ConfigPoint::new(x, y)?)?;
        *out(out_vx, "out_vx")? = vx;
        *out(out_vy, "out_vy")? = vy;
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn pw_well_wave_quantum_potential(wave: *const PwWellWave, x: f64, y: f64, out_q: *mut f64) -> PwStatus {
    guard(|| {
        *out(out_q, "out_q")? = get(wave, "wave")?.0.quantum_potential(ConfigPoint::new(x, y)?)?;
        Ok(())
    })
}

/// Free evolution of `wave` for `duration`, following the corpuscle from (x0, y0).
#[no_mangle]
pub extern "C" fn pw_well_integrate_free(
    wave: *const PwWellWave,
    duration: f64,
    x0: f64,
    y0: f64,
    dt: f64,
    scheme_: PwScheme,
    out_traj: *mut *mut PwTrajectory,
) -> PwStatus {
    guard(|| {
        let w = &get(wave, "wave")?.0;
        let tr = integrate_trajectory(w, &GateSchedule::free(duration)?, ConfigPoint::new(x0, y0)?, dt, scheme(scheme_))?;
        boxed(PwTrajectory(tr), out_traj)
    })
}

/// Well-model Deutsch run with default parameters for one corpuscle at (x0, y0)
/// and pointer z0; writes the trajectory status and, if complete, the verdict.
#[no_mangle]
pub extern "C" fn pw_well_deutsch(
    oracle_index: u32,
    x0: f64,
    y0: f64,
    z0: f64,
    out_status: *mut PwTrajectoryStatus,
    out_class: *mut PwOracleClass,
) -> PwStatus {
    guard(|| {
        let setup = WellDeutschSetup::new(oracle(oracle_index)?, WellDeutschParams::default())?;
        let run = run_deutsch_well(&setup, ConfigPoint::new(x0, y0)?, z0)?;
        *out(out_status, "out_status")? = traj_status(run.status);
        if let Some(v) = run.verdict {
            *out(out_class, "out_class")? = class(v);
        }
        Ok(())
    })
}

fn traj_status(s: TrajectoryStatus) -> PwTrajectoryStatus {
    match s {
        TrajectoryStatus::Complete => PwTrajectoryStatus::Complete,
        TrajectoryStatus::AbortedNode => PwTrajectoryStatus::AbortedNode,
        TrajectoryStatus::AbortedBoundary => PwTrajectoryStatus::AbortedBoundary,
    }
}

#[no_mangle]
pub extern "C" fn pw_trajectory_free(traj: *mut PwTrajectory) {
    release(traj);
}

#[no_mangle]
pub extern "C" fn pw_trajectory_status(traj: *const PwTrajectory, out_status: *mut PwTrajectoryStatus) -> PwStatus {
    guard(|| {
        *out(out_status, "out_status")? = traj_status(get(traj, "trajectory")?.0.status());
        Ok(())
    })
}

#[no_mangle]
pub extern "C" fn pw_trajectory_len(traj: *const PwTrajectory, out_len: *mut usize) -> PwStatus {
    guard(|| {
        *out(out_len, "out_len")? = get(traj, "trajectory")?.0.samples().len();
        Ok(())
    })
}

/// Copies the (t, x, y) samples; each buffer must hold `len` doubles.
#[no_mangle]
pub extern "C" fn pw_trajectory_samples(traj: *const PwTrajectory, t: *mut f64, x: *mut f64, y: *mut f64, len: usize) -> PwStatus {
    guard(|| {
        let s = get(traj, "trajectory")?.0.samples();
        if t.is_null() || x.is_null() || y.is_null() {
            return Err(null("sample buffer"));
        }
        if len < s.len() {
            return Err(PwStatusError(PwStatus::BufferTooSmall, format!("need {} samples, got {len}", s.len())));
        }
        for (k, &(tk, xk, yk)) in s.iter().enumerate() {
            // SAFETY: each buffer holds at least len ≥ s.len() doubles.
            unsafe {
                *t.add(k) = tk;
                *x.add(k) = xk;
                *y.add(k) = yk;
            }
        }
        Ok(())
    })
}

/// One-sample KS statistic of `n` samples against `cdf(x, user)`.
#[no_mangle]
pub extern "C" fn pw_ks_statistic(samples: *const f64, n: usize, cdf: PwCdf, user: *mut c_void, out_ks: *mut f64) -> PwStatus {
    guard(|| {
        let cdf = cdf.ok_or_else(|| null("cdf"))?;
        if samples.is_null() || n == 0 {
            return Err(bad("need at least one sample".into()));
        }
        // SAFETY: samples holds n doubles per the contract.
        let xs = unsafe { std::slice::from_raw_parts(samples, n) };
        *out(out_ks, "out_ks")? = ks_statistic(xs, |x| cdf(x, user));
        Ok(())
    })
}

/// Number of tabulated standard integrals.
#[no_mangle]
pub extern "C" fn pw_standard_integral_count() -> usize {
    8
}

/// Quadrature value and closed form of standard integral `index`.
#[no_mangle]
pub extern "C" fn pw_standard_integral(index: usize, out_computed: *mut f64, out_closed_form: *mut f64) -> PwStatus {
    guard(|| {
        let table = standard_integrals()?;
        let s = table.get(index).ok_or_else(|| bad(format!("index {index} out of range")))?;
        *out(out_computed, "out_computed")? = s.computed;
        *out(out_closed_form, "out_closed_form")? = s.closed_form;
        Ok(())
    })
}

/// Oracle-potential constants A, B, C solved from quadrature matrix elements.
#[no_mangle]
pub extern "C" fn pw_oracle_potential_constants(out_a: *mut f64, out_b: *mut f64, out_c: *mut f64) -> PwStatus {
    guard(|| {
        let u = UCoefficients::solve()?;
        *out(out_a, "out_a")? = u.a;
        *out(out_b, "out_b")? = u.b;
        *out(out_c, "out_c")? = u.c;
        Ok(())
    })
}

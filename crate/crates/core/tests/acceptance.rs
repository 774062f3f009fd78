// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria. Every criterion runs and prints one PASS/FAIL line;
//! the process exits nonzero if any failed.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::time::Instant;

use num_complex::Complex64 as C64;
use pilotwave::ensemble::{
    born_frequencies, deutsch_spin_ensemble, deutsch_well_ensemble, spin_equivariance, well_equivariance,
    EnsembleResult, EnsembleSpec,
};
use pilotwave::gates::{
    classify, deutsch_evolution, deutsch_input, hadamard, hadamard_generator, oracle_gate, oracle_generator,
    CMatrix, OracleClass, OracleId, StateVector,
};
use pilotwave::ode::Scheme;
use pilotwave::pointer::PointerState;
use pilotwave::spin::{SpinDeutschSetup, SpinParams, SpinPilotWave};
use pilotwave::well::deutsch::{WellDeutschParams, WellDeutschSetup};
use pilotwave::well::matrix_elements::{
    perturbation_matrix_elements, standard_integrals, PotentialKind, UCoefficients,
};
use pilotwave::well::{
    eigenenergy, integrate_on_timeline, minus_density, omega, plus_density, CoeffMethod, CoefficientTimeline,
    ConfigPoint, GateSchedule, TrajectoryStatus, WellWaveFunction, DEFAULT_DELTA,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: &str, name: &str, pass: bool, detail: &str) {
    println!("criterion {id} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn single_core<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

fn max_dev(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

fn mat_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// exp(−iGt) by scaling and squaring of a truncated Taylor series.
fn taylor_exp(g: &CMatrix, t: f64) -> CMatrix {
    let n = g.nrows();
    let a = g * C64::new(0.0, -t);
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let a = a / C64::new(2f64.powi(squarings), 0.0);
    let mut term = CMatrix::identity(n, n);
    let mut sum = CMatrix::identity(n, n);
    for k in 1..30 {
        term = &term * &a / C64::new(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn summarize_classes(res: &EnsembleResult, f: OracleId) -> (usize, usize, usize) {
    let want = classify(f).to_string();
    let done: Vec<_> = res.records.iter().filter(|r| r.status.is_complete()).collect();
    let right = done.iter().filter(|r| r.outcome.as_deref() == Some(want.as_str())).count();
    (done.len(), right, res.records.len() - done.len())
}

fn c1_deutsch_correctness_both_models() {
    let n = 1000;
    let params = SpinParams::default();
    let (spin_ok, spin_secs, spin_detail) = single_core(|| {
        let start = Instant::now();
        let mut ok = true;
        let mut detail = String::new();
        for f in OracleId::ALL {
            let setup = SpinDeutschSetup::new(f, params).unwrap();
            let res = deutsch_spin_ensemble(&EnsembleSpec::equilibrium(n, 11 + f.index() as u64).unwrap(), &setup)
                .unwrap();
            let (done, right, aborted) = summarize_classes(&res, f);
            ok &= done > 0 && right == done;
            detail += &format!("{f} {right}/{done} (aborted {aborted}); ");
        }
        (ok, start.elapsed().as_secs_f64(), detail)
    });
    let spin_pass = spin_ok && spin_secs < 10.0;
    report("1a", "spin Deutsch verdicts", spin_pass, &format!("{spin_detail}{spin_secs:.2} s on one core (limit 10 s)"));

    let wparams = WellDeutschParams::default();
    let (well_ok, well_secs, well_detail) = single_core(|| {
        let start = Instant::now();
        let mut ok = true;
        let mut detail = String::new();
        for f in OracleId::ALL {
            let setup = WellDeutschSetup::new(f, wparams).unwrap();
            let res = deutsch_well_ensemble(&EnsembleSpec::equilibrium(n, 21 + f.index() as u64).unwrap(), &setup)
                .unwrap();
            let (done, right, aborted) = summarize_classes(&res, f);
            ok &= done > 0 && right == done;
            detail += &format!("{f} {right}/{done} (aborted {aborted}); ");
        }
        (ok, start.elapsed().as_secs_f64(), detail)
    });
    let well_pass = well_ok && well_secs < 120.0;
    report(
        "1b",
        "well Deutsch verdicts",
        well_pass,
        &format!("m={} dt={} {well_detail}{well_secs:.2} s on one core (limit 120 s)", wparams.mass, wparams.dt),
    );
}

fn c2_abstract_pipeline() {
    let s = FRAC_1_SQRT_2;
    let constant = [C64::new(s, 0.0), C64::new(-s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let balanced = [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0), C64::new(-s, 0.0)];
    let mut worst_amp: f64 = 0.0;
    let mut worst_off: f64 = 0.0;
    let mut worst_rho: f64 = 0.0;
    for f in OracleId::ALL {
        let out = deutsch_input().apply(&deutsch_evolution(f)).unwrap();
        let (want, off, data) = match classify(f) {
            OracleClass::Constant => (constant, [2, 3], 0),
            OracleClass::Balanced => (balanced, [0, 1], 1),
        };
        let neg: Vec<C64> = want.iter().map(|z| -z).collect();
        worst_amp = worst_amp.max(max_dev(out.amps(), &want).min(max_dev(out.amps(), &neg)));
        worst_off = worst_off.max(off.iter().map(|&i| out.amps()[i].norm()).fold(0.0, f64::max));
        let rho = out.density_matrix().partial_trace_data().unwrap();
        let mut proj = CMatrix::zeros(2, 2);
        proj[(data, data)] = C64::new(1.0, 0.0);
        worst_rho = worst_rho.max(mat_dev(rho.matrix(), &proj));
    }
    let pass = worst_amp < 1e-12 && worst_off < 1e-12 && worst_rho < 1e-12;
    report(
        "2",
        "abstract Deutsch pipeline",
        pass,
        &format!("max |D(f)|01> -/+ expected| = {worst_amp:.2e}; off-branch {worst_off:.2e}; data partial trace {worst_rho:.2e} (limit 1e-12)"),
    );
}

fn c3_generator_fidelity() {
    let hg = hadamard_generator();
    let h_lib = mat_dev(hg.propagator().matrix(), hadamard().matrix());
    let h_ind = mat_dev(&taylor_exp(hg.matrix(), hg.duration()), hadamard().matrix());
    let mut worst = h_lib.max(h_ind);
    let mut detail = format!("H: {:.2e}; ", h_lib.max(h_ind));
    for f in OracleId::ALL {
        let g = oracle_generator(f);
        let d = mat_dev(g.propagator().matrix(), oracle_gate(f).matrix())
            .max(mat_dev(&taylor_exp(g.matrix(), g.duration()), oracle_gate(f).matrix()));
        worst = worst.max(d);
        detail += &format!("U_{f}: {d:.2e}; ");
    }
    report("3", "generator fidelity", worst < 1e-10, &format!("{detail}limit 1e-10"));
}

fn c4_matrix_element_oracle() {
    let pi2 = PI * PI;
    // Closed forms of ∫₀¹ x^k sin²(πx) cos^j(πx).
    let closed = [0.5, 0.25, 0.0, -4.0 / (9.0 * pi2), 0.125, 1.0 / 16.0, 0.0, -52.0 / (225.0 * pi2)];
    let table = standard_integrals().unwrap();
    let integral_err = table
        .iter()
        .zip(closed)
        .map(|(s, c)| (s.computed - c).abs())
        .fold(0.0, f64::max);

    // Normalized-basis elements built from those closed forms, then Cramer's rule.
    let xcos = [-8.0 / (9.0 * pi2), 0.25, -416.0 / (225.0 * pi2)];
    let cos = [0.0, 0.5, 0.0];
    let one = [1.0, 0.0, 1.0];
    let m = [[one[0], cos[0], xcos[0]], [one[1], cos[1], xcos[1]], [one[2], cos[2], xcos[2]]];
    let rhs = [1.0, 0.0, 0.0];
    let det3 = |a: [[f64; 3]; 3]| {
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    };
    let d = det3(m);
    let cramer: Vec<f64> = (0..3)
        .map(|col| {
            let mut a = m;
            for r in 0..3 {
                a[r][col] = rhs[r];
            }
            det3(a) / d
        })
        .collect();
    let reference = [52.0 / 27.0, -225.0 * pi2 / 432.0, 225.0 * pi2 / 216.0];
    let solved = UCoefficients::solve().unwrap();
    let lib = UCoefficients::closed_form();
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let coeff_err = (0..3)
        .map(|i| {
            let s = [solved.a, solved.b, solved.c][i];
            let l = [lib.a, lib.b, lib.c][i];
            rel(cramer[i], reference[i]).max(rel(s, reference[i])).max(rel(l, reference[i]))
        })
        .fold(0.0, f64::max);

    let u = perturbation_matrix_elements(PotentialKind::Uxy(lib)).unwrap();
    let mut target = CMatrix::zeros(4, 4);
    target[(0, 0)] = C64::new(-1.0, 0.0);
    target[(0, 1)] = C64::new(1.0, 0.0);
    target[(1, 0)] = C64::new(1.0, 0.0);
    target[(1, 1)] = C64::new(-1.0, 0.0);
    let u_err = mat_dev(&u, &target);
    let dv_err = mat_dev(
        &perturbation_matrix_elements(PotentialKind::DeltaV).unwrap(),
        pilotwave::gates::pauli_x().matrix(),
    );
    let pass = integral_err < 1e-8 && coeff_err < 1e-10 && u_err < 1e-8 && dv_err < 1e-8;
    report(
        "4",
        "standard integrals and oracle potential",
        pass,
        &format!(
            "integrals {integral_err:.2e} (limit 1e-8); A,B,C relative {coeff_err:.2e} (limit 1e-10); U(x,y) vs blockdiag(X-I,0) {u_err:.2e}, dV vs X {dv_err:.2e} (limit 1e-8)"
        ),
    );
}

fn c5a_spin_equivariance() {
    let n = 10_000;
    let params = SpinParams::default();
    let data = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
    let aux = StateVector::from_real(&[0.6, 0.8]).unwrap();
    let wave = SpinPilotWave::new(&data.tensor(&aux).unwrap(), PointerState::new(0.0, params.width).unwrap(), 1.0)
        .unwrap();
    let mut worst: f64 = 0.0;
    let mut abort: f64 = 0.0;
    let mut detail = String::new();
    for t in [0.05, 0.25, params.measurement_time] {
        let res = spin_equivariance(&EnsembleSpec::equilibrium(n, 5).unwrap(), &wave, t, params.dt, Scheme::Euler)
            .unwrap();
        let ks = res.ks_of("y").unwrap();
        worst = worst.max(ks);
        abort = abort.max(res.abort_rate());
        detail += &format!("t={t}: KS {ks:.4}; ");
    }
    report(
        "5a",
        "spin measurement equivariance",
        worst < 0.03 && abort < 0.01,
        &format!("{detail}abort rate {abort:.4} (limits KS 0.03, aborts 1%)"),
    );
}

fn c5b_well_oracle_equivariance() {
    let n = 10_000;
    let w = WellWaveFunction::from_state(&StateVector::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap(), 10.0).unwrap();
    let tl = CoefficientTimeline::build(&w, &GateSchedule::oracle(OracleId::F2).unwrap(), 0.01, CoeffMethod::Euler)
        .unwrap();
    let res = well_equivariance(&EnsembleSpec::equilibrium(n, 7).unwrap(), &tl, Scheme::Euler, DEFAULT_DELTA).unwrap();
    let ks = res.ks_of("x").unwrap();
    let pass = ks < 0.05 && res.abort_rate() < 0.01;
    report(
        "5b",
        "well oracle(f2) equivariance, m=10, dt=0.01",
        pass,
        &format!("KS x {ks:.4} (limit 0.05); abort rate {:.4} (limit 0.01)", res.abort_rate()),
    );
}

fn c6_born_frequencies() {
    let n = 10_000;
    let params = SpinParams::default();
    let data = StateVector::from_real(&[0.3f64.sqrt(), 0.7f64.sqrt()]).unwrap();
    let aux = StateVector::basis(2, 0).unwrap();
    let wave = SpinPilotWave::new(&data.tensor(&aux).unwrap(), PointerState::new(0.0, params.width).unwrap(), 1.0)
        .unwrap();
    let res = born_frequencies(
        &EnsembleSpec::equilibrium(n, 3).unwrap(),
        &wave,
        params.measurement_time,
        params.dt,
        Scheme::Euler,
    )
    .unwrap();
    let plus = res.frequency_of("+g").unwrap();
    let minus = res.frequency_of("-g").unwrap();
    let tol = 0.014;
    let pass = (plus - 0.3).abs() <= tol && (minus - 0.7).abs() <= tol && res.abort_rate() == 0.0;
    report(
        "6",
        "Born frequencies",
        pass,
        &format!("|1>_d (-g region) {minus:.4}, expected 0.7 +/- {tol}; |0>_d (+g region) {plus:.4}, expected 0.3 +/- {tol}"),
    );
}

fn oracle_family_runs(f: OracleId) -> Vec<pilotwave::well::Trajectory2D> {
    let w = WellWaveFunction::from_state(&StateVector::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap(), 10.0).unwrap();
    let tl = CoefficientTimeline::build(&w, &GateSchedule::oracle(f).unwrap(), 0.01, CoeffMethod::Euler).unwrap();
    (2..=8)
        .map(|k| {
            let x0 = k as f64 / 10.0;
            integrate_on_timeline(&tl, ConfigPoint::new(x0, x0).unwrap(), Scheme::Euler, DEFAULT_DELTA).unwrap()
        })
        .collect()
}

/// Mean spacing of successive local maxima of x(t), each refined by a parabola.
fn period_of(samples: &[(f64, f64, f64)]) -> Option<f64> {
    let peaks: Vec<f64> = samples
        .windows(3)
        .filter(|w| w[1].1 > w[0].1 && w[1].1 >= w[2].1)
        .map(|w| {
            let (a, b, c) = (w[0].1, w[1].1, w[2].1);
            let h = w[1].0 - w[0].0;
            w[1].0 + 0.5 * h * (a - c) / (a - 2.0 * b + c)
        })
        .collect();
    (peaks.len() >= 2).then(|| (peaks[peaks.len() - 1] - peaks[0]) / (peaks.len() - 1) as f64)
}

fn c7a_density_figures() {
    // x-marginals of |+>|-> and |->|-> on the 512-point export grid.
    let s = FRAC_1_SQRT_2;
    let plus = WellWaveFunction::new([s, 0.0, s, 0.0].map(|v| C64::new(v, 0.0)), 1.0).unwrap();
    let minus = WellWaveFunction::new([s, 0.0, -s, 0.0].map(|v| C64::new(v, 0.0)), 1.0).unwrap();
    let mut density_err: f64 = 0.0;
    let (mut peak_p, mut peak_m) = ((0.0, 0.0), (0.0, 0.0));
    for i in 0..512 {
        let x = i as f64 / 511.0;
        let p = ((PI * x).sin() + (2.0 * PI * x).sin()).powi(2);
        let m = ((PI * x).sin() - (2.0 * PI * x).sin()).powi(2);
        density_err = density_err
            .max((plus.x_marginal(x) - p).abs())
            .max((minus.x_marginal(x) - m).abs())
            .max((plus_density(x) - p).abs())
            .max((minus_density(x) - m).abs());
        if p > peak_p.1 {
            peak_p = (x, p);
        }
        if m > peak_m.1 {
            peak_m = (x, m);
        }
    }
    // Stationary point of (sin πx + sin 2πx)²: 4cos²πx + cos πx − 2 = 0.
    let x_peak = ((33f64.sqrt() - 1.0) / 8.0).acos() / PI;
    let grid = 1.0 / 511.0;
    let pass = density_err < 1e-14 && (peak_p.0 - x_peak).abs() <= grid && (peak_m.0 - (1.0 - x_peak)).abs() <= grid;
    report(
        "7a",
        "marginal densities",
        pass,
        &format!(
            "max deviation from closed form {density_err:.1e} (limit 1e-14); peaks at {:.4}/{:.4}, analytic {x_peak:.4}/{:.4}",
            peak_p.0,
            peak_m.0,
            1.0 - x_peak
        ),
    );
}

fn c7b_oracle_trajectories() {
    let runs = oracle_family_runs(OracleId::F2);
    let stasis = runs.iter().map(|t| t.max_y_excursion()).fold(0.0, f64::max);
    let complete = runs.iter().all(|t| t.status() == TrajectoryStatus::Complete);
    let monotone = runs.iter().all(|t| t.samples().windows(2).all(|w| w[1].1 >= w[0].1));
    // Balanced: weight moves toward the |-> peak on the right.
    let min_drift = runs.iter().map(|t| t.last().x - t.initial().x).fold(f64::INFINITY, f64::min);
    // Constant f0: nothing moves.
    let still = oracle_family_runs(OracleId::F0)
        .iter()
        .map(|t| (t.last().x - t.initial().x).abs())
        .fold(0.0, f64::max);
    let pass = complete && stasis < 1e-9 && monotone && min_drift > 0.0 && still < 1e-12;
    report(
        "7b",
        "oracle family y-stasis and x-drift",
        pass,
        &format!(
            "y-stasis {stasis:.1e} (limit 1e-9); f2 x(t) nondecreasing {monotone}, smallest drift {min_drift:.3}; f0 drift {still:.1e}; all complete {complete}"
        ),
    );
}

fn c7c_end_of_oracle_marginal() {
    let w = WellWaveFunction::from_state(&StateVector::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap(), 10.0).unwrap();
    let tl = CoefficientTimeline::build(&w, &GateSchedule::oracle(OracleId::F2).unwrap(), 0.01, CoeffMethod::Euler)
        .unwrap();
    let res = well_equivariance(&EnsembleSpec::equilibrium(10_000, 8).unwrap(), &tl, Scheme::Euler, DEFAULT_DELTA)
        .unwrap();
    let ks = res.ks_of("x").unwrap();
    report(
        "7c",
        "oracle family end-of-oracle x-marginal",
        ks < 0.05,
        &format!("KS vs |-> density {ks:.4} (limit 0.05); abort rate {:.4}", res.abort_rate()),
    );
}

fn c7d_free_oscillation_period() {
    // Free |+>|-> evolution, m = 1, x0 = y0 = 0.3.
    let m = 1.0;
    let expected = 2.0 * PI / (2.0 * omega(m).unwrap().abs());
    let free = WellWaveFunction::new([0.5, -0.5, 0.5, -0.5].map(|v| C64::new(v, 0.0)), m).unwrap();
    let mut detail = String::new();
    let mut pass = true;
    for (scheme, dt) in [(Scheme::Rk4, 1e-3), (Scheme::Euler, 1e-4)] {
        let method = if scheme == Scheme::Rk4 { CoeffMethod::Exact } else { CoeffMethod::Euler };
        let tl = CoefficientTimeline::build(&free, &GateSchedule::free(3.0 * expected).unwrap(), dt, method).unwrap();
        let tr = integrate_on_timeline(&tl, ConfigPoint::new(0.3, 0.3).unwrap(), scheme, DEFAULT_DELTA).unwrap();
        let period = period_of(tr.samples());
        pass &= tr.status() == TrajectoryStatus::Complete
            && period.is_some_and(|p| ((p - expected) / expected).abs() < 0.05);
        detail += &format!(
            "{scheme} dt={dt}: period {}, status {}; ",
            period.map_or("none".to_string(), |p| format!("{p:.4}")),
            tr.status()
        );
    }
    report(
        "7d",
        "free family oscillation period",
        pass,
        &format!("{detail}expected {expected:.4} within 5%"),
    );
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..n).map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Largest spread of v_x over y, taken over several x columns; node points are skipped.
fn vx_spread(w: &WellWaveFunction) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 1..10 {
        let x = i as f64 / 10.0;
        let vs: Vec<f64> = (1..10)
            .filter_map(|j| w.guidance_velocity(ConfigPoint::new(x, j as f64 / 10.0).unwrap()).ok())
            .map(|v| v.0)
            .collect();
        if vs.len() > 1 {
            let lo = vs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            worst = worst.max(hi - lo);
        }
    }
    worst
}

fn vy_spread(w: &WellWaveFunction) -> f64 {
    let c = w.coefficients();
    let swapped = WellWaveFunction::new([c[0], c[2], c[1], c[3]], w.mass()).unwrap();
    vx_spread(&swapped)
}

fn c8_product_state_locality() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut product_worst: f64 = 0.0;
    for _ in 0..100 {
        let a = random_unit(&mut rng, 2);
        let b = random_unit(&mut rng, 2);
        let w = WellWaveFunction::new([a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]], 1.0).unwrap();
        product_worst = product_worst.max(vx_spread(&w)).max(vy_spread(&w));
    }
    let mut entangled_nonlocal = 0;
    for _ in 0..100 {
        let v = random_unit(&mut rng, 4);
        let w = WellWaveFunction::new([v[0], v[1], v[2], v[3]], 1.0).unwrap();
        if vx_spread(&w) > 1e-3 {
            entangled_nonlocal += 1;
        }
    }
    let pass = product_worst < 1e-9 && entangled_nonlocal >= 95;
    report(
        "8",
        "product-state locality",
        pass,
        &format!("product max velocity spread {product_worst:.2e} (limit 1e-9); entangled with spread > 1e-3: {entangled_nonlocal}/100 (need 95)"),
    );
}

/// Coefficients after free evolution for time t: c_k e^{−i(E_d + E_a)t}.
fn free_coeffs(c0: &[C64], m: f64, t: f64) -> [C64; 4] {
    let e = [eigenenergy(1, m).unwrap(), eigenenergy(2, m).unwrap()];
    let mut out = [C64::new(0.0, 0.0); 4];
    for k in 0..4 {
        out[k] = c0[k] * C64::from_polar(1.0, -(e[k / 2] + e[k % 2]) * t);
    }
    out
}

fn c9_hamilton_jacobi_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = 1.0;
    // Near nodes S varies fast enough that larger steps see truncation error.
    let h = 1e-6;
    let mut worst: f64 = 0.0;
    let mut skipped = 0;
    for _ in 0..20 {
        let c0 = random_unit(&mut rng, 4);
        let t = rng.random::<f64>();
        let wave_at = |t: f64| WellWaveFunction::new(free_coeffs(&c0, m, t), m).unwrap();
        let w = wave_at(t);
        let stencil = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
        for i in 0..32 {
            for j in 0..32 {
                let p = ConfigPoint::new((i as f64 + 0.5) / 32.0, (j as f64 + 0.5) / 32.0).unwrap();
                let (Ok((sx, sy)), Ok(q)) = (w.analytic_phase_gradient(p), w.quantum_potential(p)) else {
                    skipped += 1;
                    continue;
                };
                // Phase differences against t, each folded into (−π, π].
                let s0 = w.psi_at(p);
                let dsdt: f64 = stencil
                    .iter()
                    .map(|&(k, wgt)| wgt * (wave_at(t + k * h).psi_at(p) / s0).arg())
                    .sum::<f64>()
                    / (12.0 * h);
                let resid = (-dsdt - (sx * sx + sy * sy) / (2.0 * m) - q).abs();
                worst = worst.max(resid);
            }
        }
    }
    report(
        "9",
        "Hamilton-Jacobi residual",
        worst < 1e-4,
        &format!("max residual {worst:.2e} over 20 states x 32x32 grid (limit 1e-4); node points skipped {skipped}"),
    );
}

fn main() {
    std::panic::set_hook(Box::new(|info| eprintln!("  panic: {info}")));
    let criteria: &[(&str, fn())] = &[
        ("c1_deutsch_correctness_both_models", c1_deutsch_correctness_both_models),
        ("c2_abstract_pipeline", c2_abstract_pipeline),
        ("c3_generator_fidelity", c3_generator_fidelity),
        ("c4_matrix_element_oracle", c4_matrix_element_oracle),
        ("c5a_spin_equivariance", c5a_spin_equivariance),
        ("c5b_well_oracle_equivariance", c5b_well_oracle_equivariance),
        ("c6_born_frequencies", c6_born_frequencies),
        ("c7a_density_figures", c7a_density_figures),
        ("c7b_oracle_trajectories", c7b_oracle_trajectories),
        ("c7c_end_of_oracle_marginal", c7c_end_of_oracle_marginal),
        ("c7d_free_oscillation_period", c7d_free_oscillation_period),
        ("c8_product_state_locality", c8_product_state_locality),
        ("c9_hamilton_jacobi_residual", c9_hamilton_jacobi_residual),
    ];
    let failed: Vec<&str> = criteria
        .iter()
        .filter(|(_, f)| std::panic::catch_unwind(f).is_err())
        .map(|(name, _)| *name)
        .collect();
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}

/* Copyright 2026 The pilotwave Authors
 * SPDX-License-Identifier: Apache-2.0 */

#ifndef PILOTWAVE_H
#define PILOTWAVE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PwStatus {
  PW_STATUS_OK = 0,
  PW_STATUS_NULL_POINTER = 1,
  PW_STATUS_INVALID_ARGUMENT = 2,
  PW_STATUS_NOT_NORMALIZED = 3,
  // The point lies where |ψ|² is below the node floor.
  PW_STATUS_NODE = 4,
  PW_STATUS_OUT_OF_BOX = 5,
  PW_STATUS_NUMERICAL = 6,
  PW_STATUS_BUFFER_TOO_SMALL = 7,
  PW_STATUS_PANIC = 8,
} PwStatus;

typedef enum PwOracleClass {
  PW_ORACLE_CLASS_CONSTANT = 0,
  PW_ORACLE_CLASS_BALANCED = 1,
} PwOracleClass;

typedef enum PwScheme {
  PW_SCHEME_EULER = 0,
  PW_SCHEME_RK4 = 1,
} PwScheme;

typedef enum PwTrajectoryStatus {
  PW_TRAJECTORY_STATUS_COMPLETE = 0,
  PW_TRAJECTORY_STATUS_ABORTED_NODE = 1,
  PW_TRAJECTORY_STATUS_ABORTED_BOUNDARY = 2,
} PwTrajectoryStatus;

// One spin-model corpuscle run.
typedef struct PwSpinRun PwSpinRun;

// Spin-model Deutsch setup for one oracle.
typedef struct PwSpinSetup PwSpinSetup;

// A sampled (t, x, y) trajectory.
typedef struct PwTrajectory PwTrajectory;

// A two-qubit wave in the infinite well.
typedef struct PwWellWave PwWellWave;

// CDF callback for [`pw_ks_statistic`].
typedef double (*PwCdf)(double x, void *user);

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error of this thread into `buf` (NUL terminated, truncated
// to `len`) and returns the full message length excluding the NUL; 0 if none.
uintptr_t pw_last_error_message(char *buf, uintptr_t len);

// Static NUL-terminated version string.
const char *pw_version(void);

// Oracle index i ∈ 0..=3 selects f_i.
enum PwStatus pw_classify(uint32_t oracle_index, enum PwOracleClass *out_class);

// Amplitudes of the abstract Deutsch output state D(f)|01⟩, basis index 2·d + a.
enum PwStatus pw_deutsch_amplitudes(uint32_t oracle_index, double *out_re, double *out_im);

// Spin-model setup with default parameters except the step and scheme.
enum PwStatus pw_spin_setup_new(uint32_t oracle_index,
                                double dt,
                                enum PwScheme scheme_,
                                struct PwSpinSetup **out_setup);

void pw_spin_setup_free(struct PwSpinSetup *setup);

// Time at which the pointer coupling switches on.
enum PwStatus pw_spin_setup_measurement_start(const struct PwSpinSetup *setup, double *out_t);

// Runs one corpuscle starting at pointer position y0.
enum PwStatus pw_spin_run(const struct PwSpinSetup *setup, double y0, struct PwSpinRun **out_run);

void pw_spin_run_free(struct PwSpinRun *run);

enum PwStatus pw_spin_run_verdict(const struct PwSpinRun *run, enum PwOracleClass *out_class);

enum PwStatus pw_spin_run_len(const struct PwSpinRun *run, uintptr_t *out_len);

// Copies the (t, y) samples; both buffers must hold `len` doubles.
enum PwStatus pw_spin_run_samples(const struct PwSpinRun *run, double *t, double *y, uintptr_t len);

// Wave with coefficients (re[k], im[k]), k = 2·d + a, normalized to 1e-10.
enum PwStatus pw_well_wave_new(const double *re,
                               const double *im,
                               double mass,
                               struct PwWellWave **out_wave);

void pw_well_wave_free(struct PwWellWave *wave);

enum PwStatus pw_well_wave_psi(const struct PwWellWave *wave,
                               double x,
                               double y,
                               double *out_re,
                               double *out_im);

enum PwStatus pw_well_wave_density(const struct PwWellWave *wave,
                                   double x,
                                   double y,
                                   double *out_rho);

// Guidance velocity ∇S/m.
enum PwStatus pw_well_wave_velocity(const struct PwWellWave *wave,
                                    double x,
                                    double y,
                                    double *out_vx,
                                    double *out_vy);

enum PwStatus pw_well_wave_quantum_potential(const struct PwWellWave *wave,
                                             double x,
                                             double y,
                                             double *out_q);

// Free evolution of `wave` for `duration`, following the corpuscle from (x0, y0).
enum PwStatus pw_well_integrate_free(const struct PwWellWave *wave,
                                     double duration,
                                     double x0,
                                     double y0,
                                     double dt,
                                     enum PwScheme scheme_,
                                     struct PwTrajectory **out_traj);

// Well-model Deutsch run with default parameters for one corpuscle at (x0, y0)
// and pointer z0; writes the trajectory status and, if complete, the verdict.
enum PwStatus pw_well_deutsch(uint32_t oracle_index,
                              double x0,
                              double y0,
                              double z0,
                              enum PwTrajectoryStatus *out_status,
                              enum PwOracleClass *out_class);

void pw_trajectory_free(struct PwTrajectory *traj);

enum PwStatus pw_trajectory_status(const struct PwTrajectory *traj,
                                   enum PwTrajectoryStatus *out_status);

enum PwStatus pw_trajectory_len(const struct PwTrajectory *traj, uintptr_t *out_len);

// Copies the (t, x, y) samples; each buffer must hold `len` doubles.
enum PwStatus pw_trajectory_samples(const struct PwTrajectory *traj,
                                    double *t,
                                    double *x,
                                    double *y,
                                    uintptr_t len);

// One-sample KS statistic of `n` samples against `cdf(x, user)`.
enum PwStatus pw_ks_statistic(const double *samples,
                              uintptr_t n,
                              PwCdf cdf,
                              void *user,
                              double *out_ks);

// Number of tabulated standard integrals.
uintptr_t pw_standard_integral_count(void);

// Quadrature value and closed form of standard integral `index`.
enum PwStatus pw_standard_integral(uintptr_t index, double *out_computed, double *out_closed_form);

// Oracle-potential constants A, B, C solved from quadrature matrix elements.
enum PwStatus pw_oracle_potential_constants(double *out_a, double *out_b, double *out_c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PILOTWAVE_H */

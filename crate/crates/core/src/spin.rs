// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Bell's toy model: two spin qubits without spatial degrees of freedom
//! plus a one-dimensional measurement pointer y.
//!
//! Component k = 2·d + a carries the data index d and auxiliary index a.
//! Data |0⟩ is the Z = +1 eigenstate, so the measurement Hamiltonian
//! −ig(Z ⊗ I)∂_y moves its packet towards +y at speed g and the data |1⟩
//! packet towards −y.

use crate::error::{Error, Result};
use crate::gates::{
    deutsch_input, hadamard_generator, kron, oracle_generator, OracleClass,
    OracleId, StateVector, UnitaryGate, C64, CMatrix,
};
use crate::ode::{check_step, step_lengths, step_scalar, Scheme};
use crate::pointer::{PacketBranch, PacketMixture, PointerState};

/// Which qubit(s) a gate acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateTarget {
    Data,
    Aux,
    /// A 4×4 gate on both qubits.
    Joint,
}

/// Parameters of a spin-model run. None of them are fixed by the physics;
/// the defaults give packets 10 widths apart at the end of the measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinParams {
    pub coupling: f64,
    pub width: f64,
    pub measurement_time: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub hadamard_time: f64,
    pub oracle_time: f64,
}

impl Default for SpinParams {
    fn default() -> Self {
        let coupling = 1.0;
        let width = 0.05;
        Self {
            coupling,
            width,
            measurement_time: 10.0 * width / coupling,
            dt: 1e-3,
            scheme: Scheme::Euler,
            hadamard_time: 1.0,
            oracle_time: crate::gates::ORACLE_DURATION,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpinPilotWave {
    coeffs: [C64; 4],
    pointers: [PointerState; 4],
    coupling: f64,
}

fn data_sign(k: usize) -> f64 {
    if k < 2 {
        1.0
    } else {
        -1.0
    }
}

impl SpinPilotWave {
    /// ψ_mn(y) = φ(y)·r_mn for a normalized two-qubit state r.
    pub fn new(state: &StateVector, pointer: PointerState, coupling: f64) -> Result<Self> {
        if state.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: state.dim(),
            });
        }
        if !(coupling > 0.0 && coupling.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling must be positive, got {coupling}"
            )));
        }
        let mut coeffs = [C64::new(0.0, 0.0); 4];
        coeffs.copy_from_slice(state.amps());
        Ok(Self {
            coeffs,
            pointers: [pointer; 4],
            coupling,
        })
    }

    /// |0⟩_d|1⟩_a with the pointer packet at `pointer`.
    pub fn deutsch_input(pointer: PointerState, coupling: f64) -> Result<Self> {
        Self::new(&deutsch_input(), pointer, coupling)
    }

    pub fn coefficients(&self) -> &[C64; 4] {
        &self.coeffs
    }

    pub fn pointers(&self) -> &[PointerState; 4] {
        &self.pointers
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// (P(data = 0), P(data = 1)).
    pub fn data_probabilities(&self) -> [f64; 2] {
        [
            self.coeffs[0].norm_sqr() + self.coeffs[1].norm_sqr(),
            self.coeffs[2].norm_sqr() + self.coeffs[3].norm_sqr(),
        ]
    }

    fn lift(gate: &UnitaryGate, target: GateTarget) -> Result<CMatrix> {
        let expected = match target {
            GateTarget::Joint => 4,
            GateTarget::Data | GateTarget::Aux => 2,
        };
        if gate.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: gate.dim(),
            });
        }
        let id = CMatrix::identity(2, 2);
        Ok(match target {
            GateTarget::Joint => gate.matrix().clone(),
            GateTarget::Data => kron(gate.matrix(), &id),
            GateTarget::Aux => kron(&id, gate.matrix()),
        })
    }

    /// Transforms the spin coefficients, leaving every pointer packet in place.
    ///
    /// A gate may only mix two components if they are guided by the same packet;
    /// otherwise the result is no longer of the form coefficient × packet.
    pub fn apply_gate(&self, gate: &UnitaryGate, target: GateTarget) -> Result<Self> {
        let m = Self::lift(gate, target)?;
        for i in 0..4 {
            for j in 0..4 {
                if i != j && m[(i, j)].norm() > 0.0 && self.pointers[i] != self.pointers[j] {
                    return Err(Error::PointerEntangled);
                }
            }
        }
        let mut coeffs = [C64::new(0.0, 0.0); 4];
        for (i, out) in coeffs.iter_mut().enumerate() {
            *out = (0..4).map(|j| m[(i, j)] * self.coeffs[j]).sum();
        }
        Ok(Self {
            coeffs,
            pointers: self.pointers,
            coupling: self.coupling,
        })
    }

    /// Impulse measurement of the data qubit for `duration`: packets move
    /// by ±g·duration, coefficients are unchanged.
    pub fn measure_pointer(&self, duration: f64) -> Result<Self> {
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "measurement duration must be non-negative, got {duration}"
            )));
        }
        let mut pointers = self.pointers;
        for (k, p) in pointers.iter_mut().enumerate() {
            *p = p.shifted(data_sign(k) * self.coupling * duration);
        }
        Ok(Self {
            coeffs: self.coeffs,
            pointers,
            coupling: self.coupling,
        })
    }

    /// Pointer wave after the coupling has been on for a time t, as a packet mixture.
    pub fn mixture(&self) -> PacketMixture {
        let norm = self.norm_sqr();
        let branches = (0..4)
            .map(|k| PacketBranch {
                weight: self.coeffs[k].norm_sqr() / norm,
                packet: self.pointers[k],
                speed: data_sign(k) * self.coupling,
            })
            .collect();
        PacketMixture::new(branches).expect("weights are normalized")
    }

    /// Pointer density ρ(y) a time `t_elapsed` after the coupling was switched on.
    pub fn density(&self, y: f64, t_elapsed: f64) -> f64 {
        self.mixture().density(y, t_elapsed.max(0.0))
    }

    /// dy/dt = j/ρ with j = ψ†·g(t)(Z ⊗ I)·ψ. The coupling g(t) vanishes for
    /// t_elapsed < 0, where the velocity is identically zero.
    pub fn pointer_velocity(&self, y: f64, t_elapsed: f64) -> Result<f64> {
        if t_elapsed < 0.0 {
            return Ok(0.0);
        }
        self.mixture().velocity(y, t_elapsed)
    }

    /// Integrates the pointer position over [0, t_max] of coupled evolution.
    pub fn integrate_pointer(
        &self,
        y0: f64,
        t_max: f64,
        dt: f64,
        scheme: Scheme,
    ) -> Result<PointerTrajectory> {
        check_step(dt)?;
        if !(t_max >= 0.0) {
            return Err(Error::InvalidParameter(format!("t_max must be >= 0, got {t_max}")));
        }
        let mixture = self.mixture();
        let v = |t: f64, y: f64| mixture.velocity(y, t);
        let mut samples = vec![(0.0, y0)];
        let (mut t, mut y) = (0.0, y0);
        for h in step_lengths(t_max, dt) {
            y = step_scalar(scheme, t, y, h, &v)?;
            t += h;
            samples.push((t, y));
        }
        Ok(PointerTrajectory { samples, dt })
    }
}

/// Time-ordered (t, y) samples of the pointer coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct PointerTrajectory {
    samples: Vec<(f64, f64)>,
    dt: f64,
}

impl PointerTrajectory {
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn initial(&self) -> (f64, f64) {
        self.samples[0]
    }

    pub fn last(&self) -> (f64, f64) {
        *self.samples.last().expect("trajectory is never empty")
    }

    pub fn displacement(&self) -> f64 {
        self.last().1 - self.initial().1
    }

    /// Mean slope over the final `span` of time.
    pub fn final_slope(&self, span: f64) -> f64 {
        let (t1, y1) = self.last();
        let (t0, y0) = self
            .samples
            .iter()
            .rev()
            .find(|(t, _)| t1 - t >= span)
            .copied()
            .unwrap_or(self.initial());
        (y1 - y0) / (t1 - t0)
    }
}

/// Result of one pointer trajectory through the whole Deutsch circuit.
#[derive(Clone, Debug)]
pub struct SpinDeutschRun {
    pub trajectory: PointerTrajectory,
    pub verdict: OracleClass,
    /// Time at which the measurement coupling switches on.
    pub measurement_start: f64,
}

struct GateStage {
    generator: CMatrix,
    duration: f64,
}

fn deutsch_stages(f: OracleId, params: &SpinParams) -> Result<Vec<GateStage>> {
    let id = CMatrix::identity(2, 2);
    let hg = hadamard_generator().rescaled(params.hadamard_time)?;
    let both = kron(hg.matrix(), &id) + kron(&id, hg.matrix());
    let data_only = kron(hg.matrix(), &id);
    let oracle = oracle_generator(f).rescaled(params.oracle_time)?;
    Ok(vec![
        GateStage { generator: both, duration: params.hadamard_time },
        GateStage { generator: oracle.matrix().clone(), duration: params.oracle_time },
        GateStage { generator: data_only, duration: params.hadamard_time },
    ])
}

/// Spinor history of one oracle's circuit, shared by every corpuscle.
#[derive(Clone, Debug)]
pub struct SpinDeutschSetup {
    pub oracle: OracleId,
    pub params: SpinParams,
    /// Lengths of the steps taken while the gates act.
    pub gate_steps: Vec<f64>,
    /// Wave just before the coupling is switched on.
    pub pre_measurement: SpinPilotWave,
    /// Wave at the end of the measurement.
    pub post_measurement: SpinPilotWave,
    /// Largest |dy/dt| on a grid of pointer positions while the gates act.
    pub max_gate_velocity: f64,
    /// Largest |Σ|c|² − 1| over all gate steps.
    pub max_norm_defect: f64,
}

impl SpinDeutschSetup {
    pub fn new(f: OracleId, params: SpinParams) -> Result<Self> {
        check_step(params.dt)?;
        let pointer = PointerState::new(0.0, params.width)?;
        let mut wave = SpinPilotWave::deutsch_input(pointer, params.coupling)?;
        let grid: Vec<f64> = (-4..=4).map(|k| f64::from(k) * params.width).collect();
        let mut gate_steps = Vec::new();
        let mut max_gate_velocity: f64 = 0.0;
        let mut max_norm_defect: f64 = 0.0;
        for stage in deutsch_stages(f, &params)? {
            let start_wave = wave.clone();
            let mut elapsed = 0.0;
            for h in step_lengths(stage.duration, params.dt) {
                elapsed += h;
                let u = UnitaryGate::from_matrix_unchecked(crate::gates::exp_minus_i_hermitian(
                    &stage.generator,
                    elapsed,
                ));
                wave = start_wave.apply_gate(&u, GateTarget::Joint)?;
                max_norm_defect = max_norm_defect.max((wave.norm_sqr() - 1.0).abs());
                for &y in &grid {
                    // The coupling is off while gates act.
                    max_gate_velocity = max_gate_velocity.max(wave.pointer_velocity(y, -1.0)?.abs());
                }
                gate_steps.push(h);
            }
        }
        let post = wave.measure_pointer(params.measurement_time)?;
        Ok(Self {
            oracle: f,
            params,
            gate_steps,
            pre_measurement: wave,
            post_measurement: post,
            max_gate_velocity,
            max_norm_defect,
        })
    }

    pub fn measurement_start(&self) -> f64 {
        self.gate_steps.iter().sum()
    }

    /// Gates (pointer at rest), then the coupled evolution; verdict from the sign of the shift.
    pub fn run(&self, y0: f64) -> Result<SpinDeutschRun> {
        let params = &self.params;
        let mut samples = Vec::with_capacity(self.gate_steps.len() + 1);
        samples.push((0.0, y0));
        let (mut t, mut y) = (0.0, y0);
        for &h in &self.gate_steps {
            y += h * self.pre_measurement.pointer_velocity(y, -1.0)?;
            t += h;
            samples.push((t, y));
        }
        let measurement_start = t;
        let pointer_run =
            self.pre_measurement.integrate_pointer(y, params.measurement_time, params.dt, params.scheme)?;
        samples.extend(
            pointer_run.samples().iter().skip(1).map(|&(tm, ym)| (measurement_start + tm, ym)),
        );
        let trajectory = PointerTrajectory { samples, dt: params.dt };
        let verdict = if trajectory.displacement() > 0.0 {
            OracleClass::Constant
        } else {
            OracleClass::Balanced
        };
        Ok(SpinDeutschRun { trajectory, verdict, measurement_start })
    }
}

/// Runs H⊗H, U_f, H⊗I and the pointer measurement on one corpuscle starting at `y0`.
pub fn run_deutsch_spin(f: OracleId, y0: f64, params: &SpinParams) -> Result<SpinDeutschRun> {
    SpinDeutschSetup::new(f, *params)?.run(y0)
}

/// Pre-measurement spinor of the abstract circuit, D(f)·|0⟩|1⟩.
pub fn expected_pre_measurement(f: OracleId) -> StateVector {
    deutsch_input()
        .apply(&crate::gates::deutsch_evolution(f))
        .expect("4-dim")
}

/// Readout without trajectories: the data level that carries all the weight.
pub fn readout_class(f: OracleId) -> OracleClass {
    let pointer = PointerState::new(0.0, 1.0).expect("valid width");
    let probs = SpinPilotWave::new(&expected_pre_measurement(f), pointer, 1.0)
        .expect("valid")
        .data_probabilities();
    if probs[0] > probs[1] {
        OracleClass::Constant
    } else {
        OracleClass::Balanced
    }
}

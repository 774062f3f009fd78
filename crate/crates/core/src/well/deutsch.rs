// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! The complete Deutsch run in the well: gate schedule, then energy readout.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::{deutsch_input, OracleClass, OracleId};
use crate::ode::{check_step, Scheme};
use crate::pointer::PointerState;

use super::measurement::EnergyPointerWave;
use super::schedule::{CoeffMethod, CoefficientTimeline, GateSchedule};
use super::trajectory::{integrate_on_timeline, Trajectory2D, TrajectoryStatus};
use super::{ConfigPoint, WellWaveFunction, DEFAULT_DELTA};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WellDeutschParams {
    pub mass: f64,
    pub dt: f64,
    pub scheme: Scheme,
    /// Coefficient evolution inside gate segments. Euler leaves a residual
    /// wrong-level weight of order 1e-4 that the readout would then sample.
    pub coeffs: CoeffMethod,
    pub delta: f64,
    pub coupling: f64,
    pub pointer_width: f64,
    pub measurement_steps: usize,
}

impl Default for WellDeutschParams {
    fn default() -> Self {
        Self {
            mass: 10.0,
            dt: 0.01,
            scheme: Scheme::Euler,
            coeffs: CoeffMethod::Exact,
            delta: DEFAULT_DELTA,
            coupling: 1.0,
            pointer_width: 0.05,
            measurement_steps: 400,
        }
    }
}

impl WellDeutschParams {
    /// Coupling time after which the two level packets are 10 widths apart.
    pub fn measurement_time(&self) -> f64 {
        10.0 * self.pointer_width / (3.0 * PI * PI * self.coupling)
    }

    /// Pointer shifts below this read as level 1 (constant).
    pub fn verdict_threshold(&self) -> f64 {
        2.5 * self.coupling * PI * PI * self.measurement_time()
    }
}

/// Everything shared by all trajectories of one oracle.
#[derive(Clone, Debug)]
pub struct WellDeutschSetup {
    pub oracle: OracleId,
    pub params: WellDeutschParams,
    pub initial: WellWaveFunction,
    pub timeline: CoefficientTimeline,
    pub readout: EnergyPointerWave,
}

impl WellDeutschSetup {
    pub fn new(oracle: OracleId, params: WellDeutschParams) -> Result<Self> {
        check_step(params.dt)?;
        if params.measurement_steps == 0 {
            return Err(Error::InvalidParameter("measurement_steps must be >= 1".into()));
        }
        let initial = WellWaveFunction::from_state(&deutsch_input(), params.mass)?;
        let schedule = GateSchedule::deutsch(oracle, params.mass)?;
        let timeline = CoefficientTimeline::build(&initial, &schedule, params.dt, params.coeffs)?;
        let pointer = PointerState::new(0.0, params.pointer_width)?;
        let readout = EnergyPointerWave::new(timeline.final_wave(), pointer, params.coupling)?;
        Ok(Self { oracle, params, initial, timeline, readout })
    }
}

#[derive(Clone, Debug)]
pub struct WellDeutschRun {
    pub trajectory: Trajectory2D,
    /// (t, x, z) during the readout, t measured from the start of the coupling.
    pub pointer: Vec<(f64, f64, f64)>,
    pub status: TrajectoryStatus,
    pub verdict: Option<OracleClass>,
}

impl WellDeutschRun {
    pub fn pointer_shift(&self) -> Option<f64> {
        match (self.pointer.first(), self.pointer.last()) {
            (Some(a), Some(b)) if self.status.is_complete() => Some(b.2 - a.2),
            _ => None,
        }
    }
}

/// One corpuscle at (p0, z0) through the gates and the readout.
pub fn run_deutsch_well(setup: &WellDeutschSetup, p0: ConfigPoint, z0: f64) -> Result<WellDeutschRun> {
    let params = &setup.params;
    let trajectory = integrate_on_timeline(&setup.timeline, p0, params.scheme, params.delta)?;
    if !trajectory.status().is_complete() {
        return Ok(WellDeutschRun {
            status: trajectory.status(),
            trajectory,
            pointer: Vec::new(),
            verdict: None,
        });
    }
    let mut p = trajectory.last();
    let mut z = z0;
    let tau = params.measurement_time();
    let h = tau / params.measurement_steps as f64;
    let mut pointer = vec![(0.0, p.x, z)];
    let mut status = TrajectoryStatus::Complete;
    for k in 0..params.measurement_steps {
        let t = k as f64 * h;
        match setup.readout.velocity(p, z, t) {
            Ok((vx, vz)) => {
                let q = ConfigPoint { x: p.x + h * vx, y: p.y };
                if !q.in_box() {
                    status = TrajectoryStatus::AbortedBoundary;
                    break;
                }
                p = q;
                z += h * vz;
                pointer.push((t + h, p.x, z));
            }
            Err(Error::Node { .. }) => {
                status = TrajectoryStatus::AbortedNode;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let verdict = status.is_complete().then(|| {
        if z - z0 < params.verdict_threshold() {
            OracleClass::Constant
        } else {
            OracleClass::Balanced
        }
    });
    Ok(WellDeutschRun { trajectory, pointer, status, verdict })
}

// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::error::{Error, Result};
use crate::ode::Scheme;

use super::schedule::{CoeffMethod, CoefficientTimeline, GateSchedule};
use super::{ConfigPoint, WellWaveFunction, DEFAULT_DELTA};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryStatus {
    Complete,
    AbortedNode,
    AbortedBoundary,
}

impl TrajectoryStatus {
    pub fn is_complete(self) -> bool {
        self == TrajectoryStatus::Complete
    }
}

impl fmt::Display for TrajectoryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrajectoryStatus::Complete => "complete",
            TrajectoryStatus::AbortedNode => "aborted_node",
            TrajectoryStatus::AbortedBoundary => "aborted_boundary",
        })
    }
}

/// Time-ordered (t, x, y) samples; aborted runs keep everything up to the last good step.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory2D {
    samples: Vec<(f64, f64, f64)>,
    dt: f64,
    status: TrajectoryStatus,
}

impl Trajectory2D {
    pub fn samples(&self) -> &[(f64, f64, f64)] {
        &self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn status(&self) -> TrajectoryStatus {
        self.status
    }

    pub fn initial(&self) -> ConfigPoint {
        let (_, x, y) = self.samples[0];
        ConfigPoint { x, y }
    }

    pub fn last(&self) -> ConfigPoint {
        let (_, x, y) = *self.samples.last().expect("never empty");
        ConfigPoint { x, y }
    }

    pub fn final_time(&self) -> f64 {
        self.samples.last().expect("never empty").0
    }

    /// max over samples of |y(t) − y(0)|.
    pub fn max_y_excursion(&self) -> f64 {
        let y0 = self.samples[0].2;
        self.samples.iter().map(|s| (s.2 - y0).abs()).fold(0.0, f64::max)
    }
}

/// Co-evolves coefficients and configuration across a whole schedule.
///
/// Euler positions use exactly the listing's order: coefficients are
/// advanced first and the velocity is taken from the updated wave.
pub fn integrate_trajectory(
    w0: &WellWaveFunction,
    schedule: &GateSchedule,
    p0: ConfigPoint,
    dt: f64,
    scheme: Scheme,
) -> Result<Trajectory2D> {
    let method = match scheme {
        Scheme::Euler => CoeffMethod::Euler,
        Scheme::Rk4 => CoeffMethod::Exact,
    };
    let timeline = CoefficientTimeline::build(w0, schedule, dt, method)?;
    integrate_on_timeline(&timeline, p0, scheme, DEFAULT_DELTA)
}

/// Transports one configuration through a precomputed coefficient history.
pub fn integrate_on_timeline(
    timeline: &CoefficientTimeline,
    p0: ConfigPoint,
    scheme: Scheme,
    delta: f64,
) -> Result<Trajectory2D> {
    if !p0.is_interior() {
        return Err(Error::OutOfBox { x: p0.x, y: p0.y });
    }
    if scheme == Scheme::Rk4 && !timeline.has_midpoints() {
        return Err(Error::InvalidParameter(
            "rk4 positions need exactly evolved coefficients".into(),
        ));
    }
    let mut samples = Vec::with_capacity(timeline.len() + 1);
    samples.push((0.0, p0.x, p0.y));
    let mut p = p0;
    let mut status = TrajectoryStatus::Complete;
    for (k, step) in timeline.steps().iter().enumerate() {
        let t1 = step.t0 + step.h;
        let vel = |w: &WellWaveFunction, floor: f64, q: ConfigPoint, t: f64| {
            if !q.in_box() {
                return Err(Error::OutOfBox { x: q.x, y: q.y });
            }
            w.guidance_velocity_with_floor(q, delta, floor, t)
        };
        let next = match scheme {
            Scheme::Euler => vel(&timeline.wave(k + 1), timeline.floor(k + 1), p, t1).map(|v| {
                ConfigPoint { x: p.x + step.h * v.0, y: p.y + step.h * v.1 }
            }),
            Scheme::Rk4 => {
                let (mid, mid_floor) = timeline.mid_wave(k).expect("checked above");
                let h = step.h;
                let tm = step.t0 + 0.5 * h;
                (|| {
                    let k1 = vel(&timeline.wave(k), timeline.floor(k), p, step.t0)?;
                    let q2 = ConfigPoint { x: p.x + 0.5 * h * k1.0, y: p.y + 0.5 * h * k1.1 };
                    let k2 = vel(&mid, mid_floor, q2, tm)?;
                    let q3 = ConfigPoint { x: p.x + 0.5 * h * k2.0, y: p.y + 0.5 * h * k2.1 };
                    let k3 = vel(&mid, mid_floor, q3, tm)?;
                    let q4 = ConfigPoint { x: p.x + h * k3.0, y: p.y + h * k3.1 };
                    let k4 = vel(&timeline.wave(k + 1), timeline.floor(k + 1), q4, t1)?;
                    Ok(ConfigPoint {
                        x: p.x + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                        y: p.y + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
                    })
                })()
            }
        };
        match next {
            Ok(q) if q.in_box() => {
                p = q;
                samples.push((t1, p.x, p.y));
            }
            Ok(_) | Err(Error::OutOfBox { .. }) => {
                status = TrajectoryStatus::AbortedBoundary;
                break;
            }
            Err(Error::Node { .. }) => {
                status = TrajectoryStatus::AbortedNode;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Trajectory2D { samples, dt: timeline.dt(), status })
}

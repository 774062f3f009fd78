// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Explicit one-step scheme for configuration-space trajectories.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Euler,
    Rk4,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Euler => "euler",
            Scheme::Rk4 => "rk4",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euler" => Ok(Scheme::Euler),
            "rk4" => Ok(Scheme::Rk4),
            other => Err(Error::InvalidParameter(format!("unknown scheme '{other}'"))),
        }
    }
}

pub(crate) fn check_step(dt: f64) -> Result<()> {
    if dt > 0.0 && dt.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")))
    }
}

/// Step lengths covering [0, duration]: full steps of `dt`, final one shortened to land on `duration`.
pub(crate) fn step_lengths(duration: f64, dt: f64) -> Vec<f64> {
    if duration <= 0.0 {
        return Vec::new();
    }
    let full = ((duration / dt) * (1.0 - 1e-12)).floor() as usize;
    let mut steps = vec![dt; full];
    let rest = duration - full as f64 * dt;
    if rest > dt * 1e-9 {
        steps.push(rest);
    } else if let Some(last) = steps.last_mut() {
        *last += rest;
    }
    steps
}

/// Advances a scalar ODE y' = v(t, y) by one step.
pub(crate) fn step_scalar(
    scheme: Scheme,
    t: f64,
    y: f64,
    h: f64,
    v: &impl Fn(f64, f64) -> Result<f64>,
) -> Result<f64> {
    match scheme {
        Scheme::Euler => Ok(y + h * v(t, y)?),
        Scheme::Rk4 => {
            let k1 = v(t, y)?;
            let k2 = v(t + 0.5 * h, y + 0.5 * h * k1)?;
            let k3 = v(t + 0.5 * h, y + 0.5 * h * k2)?;
            let k4 = v(t + h, y + h * k3)?;
            Ok(y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_lengths_cover_duration() {
        let steps = step_lengths(std::f64::consts::FRAC_PI_2, 0.01);
        assert_eq!(steps.len(), 158);
        let total: f64 = steps.iter().sum();
        assert!((total - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert_eq!(step_lengths(1.0, 0.25).len(), 4);
        assert!(step_lengths(0.0, 0.1).is_empty());
    }

    #[test]
    fn rk4_is_fourth_order_on_exponential_decay() {
        let v = |_t: f64, y: f64| Ok(-y);
        let run = |h: f64| {
            let mut y = 1.0;
            let mut t = 0.0;
            for h in step_lengths(1.0, h) {
                y = step_scalar(Scheme::Rk4, t, y, h, &v).unwrap();
                t += h;
            }
            (y - (-1.0f64).exp()).abs()
        };
        let ratio = run(0.1) / run(0.05);
        assert!(ratio > 14.0 && ratio < 18.0, "{ratio}");
    }
}

// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Two qubits encoded in the two lowest levels of a unit infinite square
//! well, one particle coordinate per qubit: x carries the data qubit and
//! y the auxiliary qubit.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::{StateVector, C64};

pub mod deutsch;
pub mod matrix_elements;
pub mod measurement;
pub mod schedule;
pub mod trajectory;

pub use schedule::{CoeffMethod, CoefficientTimeline, GateSchedule, Segment, SegmentKind};
pub use trajectory::{integrate_on_timeline, integrate_trajectory, Trajectory2D, TrajectoryStatus};

/// Density below `NODE_FLOOR_REL · sup ρ` counts as a node.
pub const NODE_FLOOR_REL: f64 = 1e-12;
/// Finite-difference offset for the phase gradient.
pub const DEFAULT_DELTA: f64 = 1e-4;
/// Grid used to estimate sup ρ.
pub const SUP_GRID: usize = 65;

fn check_mass(mass: f64) -> Result<()> {
    if mass > 0.0 && mass.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")))
    }
}

/// E_n = n²π²/(2m) for a unit box with ħ = 1.
pub fn eigenenergy(n: u32, mass: f64) -> Result<f64> {
    check_mass(mass)?;
    if n == 0 {
        return Err(Error::InvalidParameter("level index starts at 1".into()));
    }
    let n = f64::from(n);
    Ok(n * n * PI * PI / (2.0 * mass))
}

/// ω = (E₁ − E₂)/2, so free evolution of one qubit is R_z(2ωt) up to phase.
pub fn omega(mass: f64) -> Result<f64> {
    Ok((eigenenergy(1, mass)? - eigenenergy(2, mass)?) / 2.0)
}

/// A configuration in the closed unit square.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConfigPoint {
    pub x: f64,
    pub y: f64,
}

impl ConfigPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let p = Self { x, y };
        if p.in_box() {
            Ok(p)
        } else {
            Err(Error::OutOfBox { x, y })
        }
    }

    pub fn in_box(&self) -> bool {
        (0.0..=1.0).contains(&self.x) && (0.0..=1.0).contains(&self.y)
    }

    pub fn is_interior(&self) -> bool {
        self.x > 0.0 && self.x < 1.0 && self.y > 0.0 && self.y < 1.0
    }
}

/// sin(nπu) and its first two derivatives for n = 1, 2.
#[derive(Clone, Copy)]
struct Modes {
    s: [f64; 2],
    ds: [f64; 2],
    d2s: [f64; 2],
}

impl Modes {
    fn at(u: f64) -> Self {
        let (s1, c1) = (PI * u).sin_cos();
        let (s2, c2) = (2.0 * PI * u).sin_cos();
        Self {
            s: [s1, s2],
            ds: [PI * c1, 2.0 * PI * c2],
            d2s: [-PI * PI * s1, -4.0 * PI * PI * s2],
        }
    }
}

/// ψ(x, y) = 2 Σ c_{da} sin((d+1)πx) sin((a+1)πy), index 2d + a.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WellWaveFunction {
    coeffs: [C64; 4],
    mass: f64,
}

/// ψ and its analytic derivatives at one point.
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    pub psi: C64,
    pub dx: C64,
    pub dy: C64,
    pub dxx: C64,
    pub dyy: C64,
}

impl WellWaveFunction {
    pub fn new(coeffs: [C64; 4], mass: f64) -> Result<Self> {
        check_mass(mass)?;
        let n: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm_sqr: n });
        }
        Ok(Self { coeffs, mass })
    }

    pub fn from_state(state: &StateVector, mass: f64) -> Result<Self> {
        if state.dim() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, found: state.dim() });
        }
        let mut c = [C64::new(0.0, 0.0); 4];
        c.copy_from_slice(state.amps());
        Self::new(c, mass)
    }

    /// Skips the normalization check; used inside integrators.
    pub(crate) fn from_raw(coeffs: [C64; 4], mass: f64) -> Self {
        Self { coeffs, mass }
    }

    pub fn coefficients(&self) -> &[C64; 4] {
        &self.coeffs
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn state_vector(&self) -> Result<StateVector> {
        StateVector::normalized(self.coeffs.to_vec())
    }

    pub fn psi_at(&self, p: ConfigPoint) -> C64 {
        self.psi_xy(p.x, p.y)
    }

    pub(crate) fn psi_xy(&self, x: f64, y: f64) -> C64 {
        let (s1x, s2x) = ((PI * x).sin(), (2.0 * PI * x).sin());
        let (s1y, s2y) = ((PI * y).sin(), (2.0 * PI * y).sin());
        let c = &self.coeffs;
        2.0 * (c[0] * s1x * s1y + c[1] * s1x * s2y + c[2] * s2x * s1y + c[3] * s2x * s2y)
    }

    pub fn density(&self, p: ConfigPoint) -> f64 {
        self.psi_at(p).norm_sqr()
    }

    pub fn jet(&self, p: ConfigPoint) -> Jet {
        let mx = Modes::at(p.x);
        let my = Modes::at(p.y);
        let mut j = Jet {
            psi: C64::new(0.0, 0.0),
            dx: C64::new(0.0, 0.0),
            dy: C64::new(0.0, 0.0),
            dxx: C64::new(0.0, 0.0),
            dyy: C64::new(0.0, 0.0),
        };
        for d in 0..2 {
            for a in 0..2 {
                let c = 2.0 * self.coeffs[2 * d + a];
                j.psi += c * (mx.s[d] * my.s[a]);
                j.dx += c * (mx.ds[d] * my.s[a]);
                j.dy += c * (mx.s[d] * my.ds[a]);
                j.dxx += c * (mx.d2s[d] * my.s[a]);
                j.dyy += c * (mx.s[d] * my.d2s[a]);
            }
        }
        j
    }

    /// sup ρ over a 65×65 grid of the closed square.
    pub fn sup_density(&self) -> f64 {
        let n = SUP_GRID;
        let table: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let u = i as f64 / (n - 1) as f64;
                [(PI * u).sin(), (2.0 * PI * u).sin()]
            })
            .collect();
        let c = &self.coeffs;
        let mut sup: f64 = 0.0;
        for sx in &table {
            let row = [c[0] * sx[0] + c[2] * sx[1], c[1] * sx[0] + c[3] * sx[1]];
            for sy in &table {
                sup = sup.max((2.0 * (row[0] * sy[0] + row[1] * sy[1])).norm_sqr());
            }
        }
        sup
    }

    pub fn node_floor(&self) -> f64 {
        NODE_FLOOR_REL * self.sup_density()
    }

    fn check_floor(&self, p: ConfigPoint, floor: f64, t: f64) -> Result<()> {
        let rho = self.density(p);
        if rho < floor || rho == 0.0 {
            Err(Error::Node { t, density: rho, floor })
        } else {
            Ok(())
        }
    }

    /// Wrapped central-difference estimate of ∇S.
    pub fn phase_gradient(&self, p: ConfigPoint, delta: f64) -> Result<(f64, f64)> {
        self.phase_gradient_with_floor(p, delta, self.node_floor(), 0.0)
    }

    pub(crate) fn phase_gradient_with_floor(
        &self,
        p: ConfigPoint,
        delta: f64,
        floor: f64,
        t: f64,
    ) -> Result<(f64, f64)> {
        if !p.in_box() {
            return Err(Error::OutOfBox { x: p.x, y: p.y });
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
        }
        self.check_floor(p, floor, t)?;
        let gx = wrapped_central_difference(|u| self.psi_xy(u, p.y), p.x, wall_delta(p.x, delta));
        let gy = wrapped_central_difference(|u| self.psi_xy(p.x, u), p.y, wall_delta(p.y, delta));
        Ok((gx, gy))
    }

    /// ∇S = Im(∇ψ/ψ) from analytic derivatives.
    pub fn analytic_phase_gradient(&self, p: ConfigPoint) -> Result<(f64, f64)> {
        self.check_floor(p, self.node_floor(), 0.0)?;
        let j = self.jet(p);
        Ok(((j.dx / j.psi).im, (j.dy / j.psi).im))
    }

    /// (1/m) ∇S.
    pub fn guidance_velocity(&self, p: ConfigPoint) -> Result<(f64, f64)> {
        let (gx, gy) = self.phase_gradient(p, DEFAULT_DELTA)?;
        Ok((gx / self.mass, gy / self.mass))
    }

    pub(crate) fn guidance_velocity_with_floor(
        &self,
        p: ConfigPoint,
        delta: f64,
        floor: f64,
        t: f64,
    ) -> Result<(f64, f64)> {
        let (gx, gy) = self.phase_gradient_with_floor(p, delta, floor, t)?;
        Ok((gx / self.mass, gy / self.mass))
    }

    /// Q = −(1/2m)∇²R/R = −(1/2m)[Re(∇²ψ/ψ) + |Im(∇ψ/ψ)|²].
    pub fn quantum_potential(&self, p: ConfigPoint) -> Result<f64> {
        self.check_floor(p, self.node_floor(), 0.0)?;
        let j = self.jet(p);
        let lap = ((j.dxx + j.dyy) / j.psi).re;
        let gx = (j.dx / j.psi).im;
        let gy = (j.dy / j.psi).im;
        Ok(-(lap + gx * gx + gy * gy) / (2.0 * self.mass))
    }

    /// Weights of the x-marginal: ρ_x = 2[A sin²(πx) + B sin²(2πx) + C sin(πx)sin(2πx)].
    fn x_marginal_weights(&self) -> (f64, f64, f64) {
        let c = &self.coeffs;
        let a = c[0].norm_sqr() + c[1].norm_sqr();
        let b = c[2].norm_sqr() + c[3].norm_sqr();
        let cross = 2.0 * (c[0].conj() * c[2] + c[1].conj() * c[3]).re;
        (a, b, cross)
    }

    fn y_marginal_weights(&self) -> (f64, f64, f64) {
        let c = &self.coeffs;
        let a = c[0].norm_sqr() + c[2].norm_sqr();
        let b = c[1].norm_sqr() + c[3].norm_sqr();
        let cross = 2.0 * (c[0].conj() * c[1] + c[2].conj() * c[3]).re;
        (a, b, cross)
    }

    /// ∫ρ(x, y) dy.
    pub fn x_marginal(&self, x: f64) -> f64 {
        marginal_density(self.x_marginal_weights(), x)
    }

    pub fn y_marginal(&self, y: f64) -> f64 {
        marginal_density(self.y_marginal_weights(), y)
    }

    pub fn x_marginal_cdf(&self, x: f64) -> f64 {
        marginal_cdf(self.x_marginal_weights(), x)
    }

    pub fn y_marginal_cdf(&self, y: f64) -> f64 {
        marginal_cdf(self.y_marginal_weights(), y)
    }
}

fn marginal_density((a, b, cross): (f64, f64, f64), u: f64) -> f64 {
    let (s1, s2) = ((PI * u).sin(), (2.0 * PI * u).sin());
    2.0 * (a * s1 * s1 + b * s2 * s2 + cross * s1 * s2)
}

fn marginal_cdf((a, b, cross): (f64, f64, f64), u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    let i11 = u - (2.0 * PI * u).sin() / (2.0 * PI);
    let i22 = u - (4.0 * PI * u).sin() / (4.0 * PI);
    let i12 = (PI * u).sin() / PI - (3.0 * PI * u).sin() / (3.0 * PI);
    a * i11 + b * i22 + cross * i12
}

/// Wall rule: halve the distance to the wall if the stencil would cross it.
fn wall_delta(u: f64, delta: f64) -> f64 {
    let mut d = delta;
    if u + 0.5 * d > 1.0 {
        d = 0.5 * (1.0 - u);
    }
    if u - 0.5 * d < 0.0 {
        d = 0.5 * u;
    }
    d
}

/// [arg f(u + δ/2) − arg f(u − δ/2)] / δ with the difference folded into (−π, π].
pub fn wrapped_central_difference(f: impl Fn(f64) -> C64, u: f64, delta: f64) -> f64 {
    let mut d = f(u + 0.5 * delta).arg() - f(u - 0.5 * delta).arg();
    if d > PI {
        d -= 2.0 * PI;
    } else if d <= -PI {
        d += 2.0 * PI;
    }
    d / delta
}

/// Normalized |+⟩ = (ψ₁ + ψ₂)/√2 density in one coordinate.
pub fn plus_density(u: f64) -> f64 {
    let d = (PI * u).sin() + (2.0 * PI * u).sin();
    d * d
}

/// Normalized |−⟩ = (ψ₁ − ψ₂)/√2 density in one coordinate.
pub fn minus_density(u: f64) -> f64 {
    let d = (PI * u).sin() - (2.0 * PI * u).sin();
    d * d
}

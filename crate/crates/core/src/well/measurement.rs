// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Energy readout of the data qubit with H_meas = ia∂²_x∂_z.
//!
//! Each data level n drags its pointer packet along z at speed a·n²π².
//! The auxiliary coordinate is a spectator and the gate Hamiltonians are
//! off while the pointer is coupled.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gates::C64;
use crate::pointer::{PacketBranch, PacketMixture, PointerState};

use super::{ConfigPoint, WellWaveFunction, NODE_FLOOR_REL};

/// Drift speed of the pointer packet attached to level n.
pub fn level_speed(n: usize, coupling: f64) -> f64 {
    let n = n as f64;
    coupling * n * n * PI * PI
}

/// Pointer packets after a measurement of length δt, one per data level.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyMeasurement {
    /// P(data level n) for n = 1, 2.
    pub weights: [f64; 2],
    pub packets: [PointerState; 2],
}

impl EnergyMeasurement {
    pub fn mixture(&self) -> PacketMixture {
        let branches = (0..2)
            .filter(|&n| self.weights[n] > 0.0)
            .map(|n| PacketBranch { weight: self.weights[n], packet: self.packets[n], speed: 0.0 })
            .collect();
        PacketMixture::new(branches).expect("weights are normalized")
    }
}

fn check_coupling(coupling: f64) -> Result<()> {
    if coupling > 0.0 && coupling.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("coupling must be positive, got {coupling}")))
    }
}

/// Shifts the level-n packet by a·δt·n²π².
pub fn measure_energy_pointer(
    w: &WellWaveFunction,
    pointer: PointerState,
    coupling: f64,
    dt: f64,
) -> Result<EnergyMeasurement> {
    check_coupling(coupling)?;
    if !(dt >= 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("measurement time must be >= 0, got {dt}")));
    }
    let c = w.coefficients();
    let norm = w.norm_sqr();
    let weights = [
        (c[0].norm_sqr() + c[1].norm_sqr()) / norm,
        (c[2].norm_sqr() + c[3].norm_sqr()) / norm,
    ];
    let packets = [
        pointer.shifted(level_speed(1, coupling) * dt),
        pointer.shifted(level_speed(2, coupling) * dt),
    ];
    Ok(EnergyMeasurement { weights, packets })
}

/// Joint wave of (x, y, z) while the pointer is coupled.
#[derive(Clone, Debug)]
pub struct EnergyPointerWave {
    wave: WellWaveFunction,
    pointer: PointerState,
    coupling: f64,
    floor: f64,
}

impl EnergyPointerWave {
    pub fn new(wave: WellWaveFunction, pointer: PointerState, coupling: f64) -> Result<Self> {
        check_coupling(coupling)?;
        let floor = NODE_FLOOR_REL * wave.sup_density() * pointer.peak_density();
        Ok(Self { wave, pointer, coupling, floor })
    }

    pub fn pointer(&self) -> PointerState {
        self.pointer
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Branch n contribution and its x, z and xz derivatives.
    fn branches(&self, x: f64, y: f64, z: f64, t: f64) -> [[C64; 4]; 2] {
        let c = self.wave.coefficients();
        let (s1y, s2y) = ((PI * y).sin(), (2.0 * PI * y).sin());
        let w2 = self.pointer.width() * self.pointer.width();
        let mut out = [[C64::new(0.0, 0.0); 4]; 2];
        for (n, b) in out.iter_mut().enumerate() {
            let k = (n + 1) as f64 * PI;
            let aux = 2.0 * (c[2 * n] * s1y + c[2 * n + 1] * s2y);
            let (sx, cx) = (k * x).sin_cos();
            let packet = self.pointer.shifted(level_speed(n + 1, self.coupling) * t);
            let phi = packet.amplitude(z);
            let dphi = -(z - packet.center()) / (2.0 * w2) * phi;
            *b = [aux * (sx * phi), aux * (k * cx * phi), aux * (sx * dphi), aux * (k * cx * dphi)];
        }
        out
    }

    pub fn density(&self, p: ConfigPoint, z: f64, t: f64) -> f64 {
        let b = self.branches(p.x, p.y, z, t);
        (b[0][0] + b[1][0]).norm_sqr()
    }

    /// (dx/dt, dz/dt) = (j_x, j_z)/ρ with j_z = −a Re(ψ*∂²_xψ) and
    /// j_x = −a Re(ψ*∂_x∂_zψ − ∂_zψ*∂_xψ); y does not move.
    pub fn velocity(&self, p: ConfigPoint, z: f64, t: f64) -> Result<(f64, f64)> {
        let b = self.branches(p.x, p.y, z, t);
        let psi = b[0][0] + b[1][0];
        let rho = psi.norm_sqr();
        if rho < self.floor || rho == 0.0 {
            return Err(Error::Node { t, density: rho, floor: self.floor });
        }
        let dx = b[0][1] + b[1][1];
        let dz = b[0][2] + b[1][2];
        let dxz = b[0][3] + b[1][3];
        let d2x = -PI * PI * b[0][0] - 4.0 * PI * PI * b[1][0];
        let a = self.coupling;
        let jz = -a * (psi.conj() * d2x).re;
        let jx = -a * (psi.conj() * dxz - dz.conj() * dx).re;
        Ok((jx / rho, jz / rho))
    }
}

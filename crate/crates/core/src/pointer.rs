// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Gaussian pointer packets and the guidance velocity of a pointer whose
//! wave is a sum of rigidly moving packets.

use std::f64::consts::PI;

use statrs::function::erf::erf;

use crate::error::{Error, Result};

/// Relative density below which the pointer velocity is not evaluated.
pub const POINTER_NODE_FLOOR: f64 = 1e-300;

/// φ(y) = (2πw²)^{-1/4} exp(−(y − c)²/(4w²)); |φ|² is a normal density with σ = w.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointerState {
    center: f64,
    width: f64,
}

impl PointerState {
    pub fn new(center: f64, width: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::InvalidParameter(format!("pointer center {center}")));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "pointer width must be positive, got {width}"
            )));
        }
        Ok(Self { center, width })
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn shifted(&self, dy: f64) -> Self {
        Self {
            center: self.center + dy,
            width: self.width,
        }
    }

    pub fn amplitude(&self, y: f64) -> f64 {
        let d = y - self.center;
        (2.0 * PI * self.width * self.width).powf(-0.25) * (-d * d / (4.0 * self.width * self.width)).exp()
    }

    pub fn density(&self, y: f64) -> f64 {
        self.ln_density(y).exp()
    }

    pub fn ln_density(&self, y: f64) -> f64 {
        let d = (y - self.center) / self.width;
        -0.5 * d * d - self.width.ln() - 0.5 * (2.0 * PI).ln()
    }

    pub fn peak_density(&self) -> f64 {
        1.0 / (self.width * (2.0 * PI).sqrt())
    }

    pub fn cdf(&self, y: f64) -> f64 {
        0.5 * (1.0 + erf((y - self.center) / (self.width * std::f64::consts::SQRT_2)))
    }

    /// [c − 8w, c + 8w].
    pub fn window(&self) -> (f64, f64) {
        (self.center - 8.0 * self.width, self.center + 8.0 * self.width)
    }
}

/// One packet of a pointer wave: weight |c_k|², initial packet and drift speed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PacketBranch {
    pub weight: f64,
    pub packet: PointerState,
    pub speed: f64,
}

/// Pointer wave Σ_k c_k φ_k(y − s_k t) with mutually orthogonal internal
/// labels, so density and current are incoherent sums over branches.
#[derive(Clone, Debug, PartialEq)]
pub struct PacketMixture {
    branches: Vec<PacketBranch>,
}

impl PacketMixture {
    pub fn new(branches: Vec<PacketBranch>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidParameter("mixture needs at least one branch".into()));
        }
        let total: f64 = branches.iter().map(|b| b.weight).sum();
        if branches.iter().any(|b| !(b.weight >= 0.0)) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized { norm_sqr: total });
        }
        Ok(Self { branches })
    }

    pub fn branches(&self) -> &[PacketBranch] {
        &self.branches
    }

    fn ln_terms(&self, y: f64, t: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.branches.iter().filter(|b| b.weight > 0.0).map(move |b| {
            let packet = b.packet.shifted(b.speed * t);
            (b.weight.ln() + packet.ln_density(y), b.speed)
        })
    }

    fn ln_sup_density(&self, t: f64) -> f64 {
        // The largest branch peak is a lower bound on sup ρ that is tight once packets separate.
        self.branches
            .iter()
            .filter(|b| b.weight > 0.0)
            .map(|b| b.weight.ln() + b.packet.shifted(b.speed * t).peak_density().ln())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn density(&self, y: f64, t: f64) -> f64 {
        self.ln_terms(y, t).map(|(l, _)| l.exp()).sum()
    }

    pub fn cdf(&self, y: f64, t: f64) -> f64 {
        self.branches
            .iter()
            .map(|b| b.weight * b.packet.shifted(b.speed * t).cdf(y))
            .sum()
    }

    /// j/ρ at (y, t), evaluated in log space.
    pub fn velocity(&self, y: f64, t: f64) -> Result<f64> {
        let terms: Vec<(f64, f64)> = self.ln_terms(y, t).collect();
        let ln_max = terms.iter().map(|&(l, _)| l).fold(f64::NEG_INFINITY, f64::max);
        let ln_floor = POINTER_NODE_FLOOR.ln() + self.ln_sup_density(t);
        // ln ρ ≤ ln_max + ln(#branches); comparing ln_max keeps the check conservative.
        if !(ln_max >= ln_floor) {
            return Err(Error::Node {
                t,
                density: ln_max.exp(),
                floor: ln_floor.exp(),
            });
        }
        let (mut num, mut den) = (0.0, 0.0);
        for (l, speed) in terms {
            let w = (l - ln_max).exp();
            num += speed * w;
            den += w;
        }
        Ok(num / den)
    }
}

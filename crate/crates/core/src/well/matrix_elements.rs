// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Matrix elements of gate potentials between the two lowest box states.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::gates::{kron, CMatrix, C64};
use crate::quadrature::integrate;

/// Absolute tolerance for every quadrature in this module.
pub const QUAD_TOL: f64 = 1e-12;

/// Multipliers of the oracle potential U(x, y) = (A + B cos πx + C x cos πx)(δV(y) − 1).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl UCoefficients {
    /// A = 52/27, B = −225π²/432, C = 225π²/216.
    pub fn closed_form() -> Self {
        Self {
            a: 52.0 / 27.0,
            b: -225.0 * PI * PI / 432.0,
            c: 225.0 * PI * PI / 216.0,
        }
    }

    /// Solves ⟨ψ_p|A + B cos πx + C x cos πx|ψ_q⟩ = diag(1, 0) with numerically integrated elements.
    pub fn solve() -> Result<Self> {
        let one = perturbation_matrix_elements(PotentialKind::One)?;
        let cos = perturbation_matrix_elements(PotentialKind::CosPiX)?;
        let xcos = perturbation_matrix_elements(PotentialKind::XCosPiX)?;
        let e = |m: &CMatrix, i: usize, j: usize| m[(i, j)].re;
        // Rows: (1,1) element, (1,2) element, (2,2) element.
        let lhs = Matrix3::new(
            e(&one, 0, 0), e(&cos, 0, 0), e(&xcos, 0, 0),
            e(&one, 0, 1), e(&cos, 0, 1), e(&xcos, 0, 1),
            e(&one, 1, 1), e(&cos, 1, 1), e(&xcos, 1, 1),
        );
        let sol = lhs
            .lu()
            .solve(&Vector3::new(1.0, 0.0, 0.0))
            .ok_or_else(|| Error::InvalidParameter("singular matrix-element system".into()))?;
        Ok(Self { a: sol[0], b: sol[1], c: sol[2] })
    }
}

/// Potentials whose matrix elements are tabulated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PotentialKind {
    One,
    X,
    CosPiX,
    XCosPiX,
    /// δV(x) = −(9π²/16)(x − 1/2).
    DeltaV,
    /// The two-coordinate oracle potential; yields a 4×4 matrix.
    Uxy(UCoefficients),
}

/// √2 sin(nπu).
pub fn basis_function(n: usize, u: f64) -> f64 {
    std::f64::consts::SQRT_2 * (n as f64 * PI * u).sin()
}

pub fn delta_v(x: f64) -> f64 {
    -(9.0 * PI * PI / 16.0) * (x - 0.5)
}

fn elements_1d(u: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let mut m = CMatrix::zeros(2, 2);
    for p in 0..2 {
        for q in p..2 {
            let v = integrate(
                |x| basis_function(p + 1, x) * u(x) * basis_function(q + 1, x),
                0.0,
                1.0,
                QUAD_TOL,
            )?;
            m[(p, q)] = C64::new(v, 0.0);
            m[(q, p)] = C64::new(v, 0.0);
        }
    }
    Ok(m)
}

/// ⟨ψ_p|u|ψ_q⟩ (2×2), or ⟨ψ_pψ_m|U|ψ_qψ_n⟩ (4×4, data-major) for `Uxy`.
pub fn perturbation_matrix_elements(kind: PotentialKind) -> Result<CMatrix> {
    match kind {
        PotentialKind::One => elements_1d(|_| 1.0),
        PotentialKind::X => elements_1d(|x| x),
        PotentialKind::CosPiX => elements_1d(|x| (PI * x).cos()),
        PotentialKind::XCosPiX => elements_1d(|x| x * (PI * x).cos()),
        PotentialKind::DeltaV => elements_1d(delta_v),
        PotentialKind::Uxy(k) => {
            // U is a product f(x)·g(y), so its 4×4 elements factor into 1D integrals.
            let fx = elements_1d(|x| k.a + k.b * (PI * x).cos() + k.c * x * (PI * x).cos())?;
            let gy = elements_1d(|y| delta_v(y) - 1.0)?;
            Ok(kron(&fx, &gy))
        }
    }
}

/// One entry of the table of standard integrals over [0, 1].
#[derive(Clone, Debug)]
pub struct StandardIntegral {
    pub label: &'static str,
    pub computed: f64,
    pub closed_form: f64,
}

/// The eight integrals of x^k sin²(πx) cos^j(πx), k ∈ {0, 1}, j ∈ {0, 1, 2, 3}.
pub fn standard_integrals() -> Result<Vec<StandardIntegral>> {
    let pi2 = PI * PI;
    let table: [(&'static str, i32, i32, f64); 8] = [
        ("sin^2", 0, 0, 0.5),
        ("x sin^2", 1, 0, 0.25),
        ("sin^2 cos", 0, 1, 0.0),
        ("x sin^2 cos", 1, 1, -4.0 / (9.0 * pi2)),
        ("sin^2 cos^2", 0, 2, 0.125),
        ("x sin^2 cos^2", 1, 2, 1.0 / 16.0),
        ("sin^2 cos^3", 0, 3, 0.0),
        ("x sin^2 cos^3", 1, 3, -52.0 / (225.0 * pi2)),
    ];
    table
        .iter()
        .map(|&(label, k, j, closed_form)| {
            let computed = integrate(
                |x| x.powi(k) * (PI * x).sin().powi(2) * (PI * x).cos().powi(j),
                0.0,
                1.0,
                QUAD_TOL,
            )?;
            Ok(StandardIntegral { label, computed, closed_form })
        })
        .collect()
}

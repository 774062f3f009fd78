// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact complex linear algebra for one- and two-qubit circuits.
//!
//! Two-qubit objects use the basis order |data⟩⊗|aux⟩, i.e. |00⟩, |01⟩,
//! |10⟩, |11⟩ with the data qubit as the most significant index. Gates
//! keep their global phases: comparisons that should ignore them go through
//! [`UnitaryGate::max_abs_diff_up_to_phase`].

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Tolerance for the normalization and unitarity invariants.
pub const EXACT_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        other => Err(Error::UnsupportedDimension(other)),
    }
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn hermiticity_defect(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Computes exp(-i·G·t) for Hermitian `G` by eigendecomposition.
pub fn exp_minus_i_hermitian(generator: &CMatrix, t: f64) -> CMatrix {
    let n = generator.nrows();
    let eigen = generator.clone().symmetric_eigen();
    let vectors = &eigen.eigenvectors;
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        eigen.eigenvalues.iter().map(|&lambda| (-I * lambda * t).exp()),
    ));
    vectors * phases * vectors.adjoint()
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Ordered complex amplitudes of a one- or two-qubit state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: DVector<C64>,
}

impl StateVector {
    /// Builds a state, rejecting vectors whose squared norm is not 1.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        check_dim(amps.len())?;
        let state = Self {
            amps: DVector::from_vec(amps),
        };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Builds a state after rescaling `amps` to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        check_dim(amps.len())?;
        let v = DVector::from_vec(amps);
        let norm = v.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: norm * norm });
        }
        Ok(Self { amps: v.unscale(norm) })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::new(amps)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        self.amps.as_slice()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Multiplies every amplitude by e^{iα}.
    pub fn with_global_phase(&self, alpha: f64) -> Self {
        Self {
            amps: self.amps.map(|a| a * C64::from_polar(1.0, alpha)),
        }
    }

    pub fn apply(&self, gate: &UnitaryGate) -> Result<Self> {
        if gate.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: gate.dim(),
            });
        }
        Ok(Self {
            amps: &gate.matrix * &self.amps,
        })
    }

    /// Two-qubit product `self ⊗ other` (self is the data qubit).
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let amps: Vec<C64> = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Self::new(amps)
    }

    /// Pure-state density matrix |ψ⟩⟨ψ|.
    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: &self.amps * self.amps.adjoint(),
        }
    }

    /// Largest modulus of the component-wise difference.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Dense 2×2 or 4×4 unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryGate {
    matrix: CMatrix,
}

impl UnitaryGate {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_dim(matrix.nrows())?;
        let gate = Self { matrix };
        let defect = gate.unitarity_defect();
        if defect >= EXACT_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(gate)
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            matrix: CMatrix::identity(dim, dim),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// max |U†U − I|.
    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        max_abs_diff(&(self.matrix.adjoint() * &self.matrix), &CMatrix::identity(n, n))
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Matrix product `self · rhs` (rhs acts first).
    pub fn then_after(&self, rhs: &UnitaryGate) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rhs.dim(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * &rhs.matrix,
        })
    }

    /// `self ⊗ other` for two single-qubit gates.
    pub fn tensor(&self, other: &UnitaryGate) -> Result<Self> {
        if self.dim() != 2 || other.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim().max(other.dim()),
            });
        }
        Ok(Self {
            matrix: kron(&self.matrix, &other.matrix),
        })
    }

    pub fn scaled_by_phase(&self, alpha: f64) -> Self {
        Self {
            matrix: self.matrix.map(|z| z * C64::from_polar(1.0, alpha)),
        }
    }

    pub fn max_abs_diff(&self, other: &UnitaryGate) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    /// Distance after removing the best-fitting global phase between the two gates.
    pub fn max_abs_diff_up_to_phase(&self, other: &UnitaryGate) -> f64 {
        let overlap = (other.matrix.adjoint() * &self.matrix).trace();
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        max_abs_diff(&self.matrix, &other.matrix.map(|z| z * phase))
    }
}

pub fn pauli_x() -> UnitaryGate {
    UnitaryGate::from_matrix_unchecked(CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]))
}

pub fn pauli_y() -> UnitaryGate {
    UnitaryGate::from_matrix_unchecked(CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]))
}

pub fn pauli_z() -> UnitaryGate {
    UnitaryGate::from_matrix_unchecked(CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]))
}

/// (1/√2)[[1, 1], [1, −1]].
pub fn hadamard() -> UnitaryGate {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    UnitaryGate::from_matrix_unchecked(CMatrix::from_row_slice(2, 2, &[h, h, h, -h]))
}

/// R_n(θ) = cos(θ/2)·I − i·sin(θ/2)·(n·σ).
pub fn rotation(axis: [f64; 3], theta: f64) -> Result<UnitaryGate> {
    let norm = axis.iter().map(|c| c * c).sum::<f64>().sqrt();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NonUnitAxis { norm });
    }
    let (s, c) = (theta / 2.0).sin_cos();
    let sigma = pauli_x().matrix * C64::new(axis[0], 0.0)
        + pauli_y().matrix * C64::new(axis[1], 0.0)
        + pauli_z().matrix * C64::new(axis[2], 0.0);
    let matrix = CMatrix::identity(2, 2) * C64::new(c, 0.0) - sigma * (I * s);
    UnitaryGate::new(matrix)
}

pub fn rx(theta: f64) -> UnitaryGate {
    rotation([1.0, 0.0, 0.0], theta).expect("unit axis")
}

pub fn ry(theta: f64) -> UnitaryGate {
    rotation([0.0, 1.0, 0.0], theta).expect("unit axis")
}

pub fn rz(theta: f64) -> UnitaryGate {
    rotation([0.0, 0.0, 1.0], theta).expect("unit axis")
}

/// The four one-bit functions f_i: {0,1} → {0,1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleId {
    F0,
    F1,
    F2,
    F3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OracleClass {
    Constant,
    Balanced,
}

impl fmt::Display for OracleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleClass::Constant => "constant",
            OracleClass::Balanced => "balanced",
        })
    }
}

impl OracleId {
    pub const ALL: [OracleId; 4] = [OracleId::F0, OracleId::F1, OracleId::F2, OracleId::F3];

    /// f(x) for x ∈ {0, 1}.
    pub fn eval(self, x: u8) -> u8 {
        assert!(x < 2, "oracle input must be a bit");
        match self {
            OracleId::F0 => 0,
            OracleId::F1 => x,
            OracleId::F2 => 1 - x,
            OracleId::F3 => 1,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }
}

impl fmt::Display for OracleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.index())
    }
}

impl FromStr for OracleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f0" => Ok(OracleId::F0),
            "f1" => Ok(OracleId::F1),
            "f2" => Ok(OracleId::F2),
            "f3" => Ok(OracleId::F3),
            other => Err(Error::InvalidParameter(format!("unknown oracle '{other}'"))),
        }
    }
}

pub fn classify(f: OracleId) -> OracleClass {
    if f.eval(0) == f.eval(1) {
        OracleClass::Constant
    } else {
        OracleClass::Balanced
    }
}

/// U_f|x, y⟩ = |x, y ⊕ f(x)⟩ as blockdiag(δ_{0,f(0)}I + δ_{1,f(0)}X, δ_{0,f(1)}I + δ_{1,f(1)}X).
pub fn oracle_gate(f: OracleId) -> UnitaryGate {
    let mut m = CMatrix::zeros(4, 4);
    for x in 0..2u8 {
        for y in 0..2u8 {
            let out = y ^ f.eval(x);
            m[(2 * x as usize + out as usize, 2 * x as usize + y as usize)] = ONE;
        }
    }
    UnitaryGate::from_matrix_unchecked(m)
}

/// D = (H ⊗ I)·U_f·(H ⊗ H).
pub fn deutsch_evolution(f: OracleId) -> UnitaryGate {
    let h = hadamard();
    let id = UnitaryGate::identity(2).expect("dim 2");
    let hh = h.tensor(&h).expect("2x2");
    let hi = h.tensor(&id).expect("2x2");
    hi.then_after(&oracle_gate(f))
        .and_then(|g| g.then_after(&hh))
        .expect("4x4 product")
}

/// |0⟩_d|1⟩_a = (0, 1, 0, 0).
pub fn deutsch_input() -> StateVector {
    StateVector::basis(4, 1).expect("valid basis state")
}

/// Hermitian matrix G together with the duration T over which exp(−iGT) acts.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianGenerator {
    matrix: CMatrix,
    duration: f64,
}

impl HermitianGenerator {
    pub fn new(matrix: CMatrix, duration: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_dim(matrix.nrows())?;
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "generator duration must be positive, got {duration}"
            )));
        }
        let defect = hermiticity_defect(&matrix);
        if defect >= EXACT_TOL {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Self { matrix, duration })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// exp(−i·G·t) for an arbitrary elapsed time `t`.
    pub fn propagator_at(&self, t: f64) -> UnitaryGate {
        UnitaryGate::from_matrix_unchecked(exp_minus_i_hermitian(&self.matrix, t))
    }

    /// exp(−i·G·T), the full gate.
    pub fn propagator(&self) -> UnitaryGate {
        self.propagator_at(self.duration)
    }

    /// Same gate over a different duration (G·T held fixed).
    pub fn rescaled(&self, duration: f64) -> Result<Self> {
        let factor = self.duration / duration;
        Self::new(self.matrix.map(|z| z * factor), duration)
    }
}

/// H_Had·T = (π/2)(H − I) with T = 1.
pub fn hadamard_generator() -> HermitianGenerator {
    let m = (hadamard().matrix - CMatrix::identity(2, 2)) * C64::new(FRAC_PI_2, 0.0);
    HermitianGenerator::new(m, 1.0).expect("hermitian")
}

/// Default oracle gate time.
pub const ORACLE_DURATION: f64 = FRAC_PI_2;

/// H_oracle with T = π/2, so that H_oracle·T = blockdiag(δ_{1,f(0)}(π/2)(X − I), δ_{1,f(1)}(π/2)(X − I)).
pub fn oracle_generator(f: OracleId) -> HermitianGenerator {
    let x_minus_i = pauli_x().matrix - CMatrix::identity(2, 2);
    let mut m = CMatrix::zeros(4, 4);
    for x in 0..2usize {
        if f.eval(x as u8) == 1 {
            m.view_mut((2 * x, 2 * x), (2, 2))
                .copy_from(&(&x_minus_i * C64::new(FRAC_PI_2 / ORACLE_DURATION, 0.0)));
        }
    }
    HermitianGenerator::new(m, ORACLE_DURATION).expect("hermitian")
}

/// Hermitian, unit-trace, positive semidefinite 2×2 or 4×4 matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidDensityMatrix("matrix is not square".into()));
        }
        check_dim(matrix.nrows())?;
        let defect = hermiticity_defect(&matrix);
        if defect >= EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - ONE).norm() > EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace is {trace}, not 1")));
        }
        let min_eigenvalue = matrix
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eigenvalue < -EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min_eigenvalue:e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Self::new(CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Reduced state of the data qubit: (ρ_d)_{ij} = Σ_k ρ_{(i,k),(j,k)}.
    pub fn partial_trace_data(&self) -> Result<DensityMatrix> {
        if self.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: self.dim(),
            });
        }
        let reduced = CMatrix::from_fn(2, 2, |i, j| {
            (0..2).map(|k| self.matrix[(2 * i + k, 2 * j + k)]).sum()
        });
        DensityMatrix::new(reduced)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }
}

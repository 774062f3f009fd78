// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension {0}: only 2 and 4 are allowed")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (squared norm {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not unitary (max |U^dag U - I| = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is not Hermitian (max |G - G^dag| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("rotation axis is not a unit vector (norm {norm})")]
    NonUnitAxis { norm: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gate would mix components guided by different pointer packets")]
    PointerEntangled,

    #[error("node encountered at t = {t}: density {density:e} below floor {floor:e}")]
    Node { t: f64, density: f64, floor: f64 },

    #[error("point ({x}, {y}) lies outside the unit box")]
    OutOfBox { x: f64, y: f64 },

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureDidNotConverge { a: f64, b: f64, estimate: f64 },

    #[error("density {value} exceeds the declared envelope bound {bound}")]
    EnvelopeViolation { value: f64, bound: f64 },

    #[error("rejection sampler gave up after {0} proposals")]
    SamplerExhausted(usize),

    #[error("outcome packets overlap: separation {separation} is below {required}")]
    OverlappingPackets { separation: f64, required: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error("config: {0}")]
    Config(String),
}

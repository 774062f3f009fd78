// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Gates in the well as sequences of Hamiltonian segments, and the
//! coefficient history a schedule produces.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gates::{
    exp_minus_i_hermitian, hadamard, kron, oracle_generator, pauli_x, OracleId, UnitaryGate, C64,
    CMatrix,
};
use crate::ode::{check_step, step_lengths};

use super::{eigenenergy, omega, WellWaveFunction, NODE_FLOOR_REL};

/// Hamiltonian acting during one segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    /// Kinetic energy only: diag(E_d + E_a).
    Free,
    /// δV on the data coordinate, matrix elements X ⊗ I.
    PerturbData,
    /// δV on the auxiliary coordinate, matrix elements I ⊗ X.
    PerturbAux,
    /// Oracle potential scaled so the segment implements U_f.
    Oracle(OracleId),
}

impl fmt::Display for SegmentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SegmentKind::Free => f.write_str("free"),
            SegmentKind::PerturbData => f.write_str("xpert_data"),
            SegmentKind::PerturbAux => f.write_str("xpert_aux"),
            SegmentKind::Oracle(o) => write!(f, "oracle({o})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub kind: SegmentKind,
    pub duration: f64,
}

impl Segment {
    pub fn new(kind: SegmentKind, duration: f64) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "segment duration must be positive, got {duration}"
            )));
        }
        Ok(Self { kind, duration })
    }

    /// 4×4 generator G with U = exp(−iG·duration).
    pub fn generator(&self, mass: f64) -> Result<CMatrix> {
        let id = CMatrix::identity(2, 2);
        Ok(match self.kind {
            SegmentKind::Free => {
                let e = [eigenenergy(1, mass)?, eigenenergy(2, mass)?];
                CMatrix::from_diagonal(&nalgebra::DVector::from_fn(4, |k, _| {
                    C64::new(e[k / 2] + e[k % 2], 0.0)
                }))
            }
            SegmentKind::PerturbData => kron(pauli_x().matrix(), &id),
            SegmentKind::PerturbAux => kron(&id, pauli_x().matrix()),
            SegmentKind::Oracle(f) => oracle_generator(f).rescaled(self.duration)?.matrix().clone(),
        })
    }
}

/// Free-evolution time after which each qubit has turned by R_z(π/2) up to sign.
pub fn quarter_turn_time(mass: f64) -> Result<f64> {
    // 2ω·t = −3π/2 is the first time with R_z(2ωt) = ±R_z(π/2) since ω < 0.
    Ok(3.0 * std::f64::consts::PI / (4.0 * omega(mass)?.abs()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateSchedule {
    segments: Vec<Segment>,
}

impl GateSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        for s in &segments {
            Segment::new(s.kind, s.duration)?;
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    pub fn then(mut self, other: GateSchedule) -> Self {
        self.segments.extend(other.segments);
        self
    }

    pub fn free(duration: f64) -> Result<Self> {
        Self::new(vec![Segment::new(SegmentKind::Free, duration)?])
    }

    /// H ⊗ H as free, R_x(π/2) on both qubits, free.
    pub fn hadamard_pair(mass: f64) -> Result<Self> {
        let t = quarter_turn_time(mass)?;
        Self::new(vec![
            Segment::new(SegmentKind::Free, t)?,
            Segment::new(SegmentKind::PerturbData, FRAC_PI_4)?,
            Segment::new(SegmentKind::PerturbAux, FRAC_PI_4)?,
            Segment::new(SegmentKind::Free, t)?,
        ])
    }

    /// H ⊗ I. Free evolution turns both qubits, so the auxiliary qubit gets an
    /// X before each turn; X R_z(θ) X = R_z(−θ) undoes its rotation.
    pub fn hadamard_data(mass: f64) -> Result<Self> {
        let t = quarter_turn_time(mass)?;
        Self::new(vec![
            Segment::new(SegmentKind::Free, t)?,
            Segment::new(SegmentKind::PerturbAux, FRAC_PI_2)?,
            Segment::new(SegmentKind::PerturbData, FRAC_PI_4)?,
            Segment::new(SegmentKind::Free, t)?,
            Segment::new(SegmentKind::PerturbAux, FRAC_PI_2)?,
        ])
    }

    /// A single oracle segment of duration π/2.
    pub fn oracle(f: OracleId) -> Result<Self> {
        Self::new(vec![Segment::new(SegmentKind::Oracle(f), crate::gates::ORACLE_DURATION)?])
    }

    /// U_f built from the f2 potential and X pulses only: f1 = X_d U_f2 X_d, f3 = X_a.
    pub fn synthesized_oracle(f: OracleId) -> Result<Self> {
        let f2 = Segment::new(SegmentKind::Oracle(OracleId::F2), crate::gates::ORACLE_DURATION)?;
        let not_data = Segment::new(SegmentKind::PerturbData, FRAC_PI_2)?;
        let not_aux = Segment::new(SegmentKind::PerturbAux, FRAC_PI_2)?;
        match f {
            OracleId::F0 => Self::oracle(OracleId::F0),
            OracleId::F1 => Self::new(vec![not_data, f2, not_data]),
            OracleId::F2 => Self::new(vec![f2]),
            OracleId::F3 => Self::new(vec![not_aux]),
        }
    }

    /// (H⊗I) U_f (H⊗H) as one schedule.
    pub fn deutsch(f: OracleId, mass: f64) -> Result<Self> {
        Ok(Self::hadamard_pair(mass)?
            .then(Self::synthesized_oracle(f)?)
            .then(Self::hadamard_data(mass)?))
    }

    /// Time-ordered product of exact segment propagators.
    pub fn composed_unitary(&self, mass: f64) -> Result<UnitaryGate> {
        let mut u = CMatrix::identity(4, 4);
        for s in &self.segments {
            u = exp_minus_i_hermitian(&s.generator(mass)?, s.duration) * u;
        }
        Ok(UnitaryGate::from_matrix_unchecked(u))
    }
}

/// Gate a standard schedule is meant to implement, for cross-checks.
pub fn hadamard_pair_target() -> UnitaryGate {
    hadamard().tensor(&hadamard()).expect("2x2 gates")
}

pub fn hadamard_data_target() -> UnitaryGate {
    hadamard().tensor(&UnitaryGate::identity(2).expect("dim 2")).expect("2x2 gates")
}

/// How coefficients are advanced inside non-free segments. Free segments are always exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffMethod {
    /// c ← c − i·dt·G·c, renormalized at the end of each segment.
    #[default]
    Euler,
    Exact,
}

impl fmt::Display for CoeffMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoeffMethod::Euler => "euler",
            CoeffMethod::Exact => "exact",
        })
    }
}

impl FromStr for CoeffMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "euler" => Ok(CoeffMethod::Euler),
            "exact" => Ok(CoeffMethod::Exact),
            other => Err(Error::InvalidParameter(format!("unknown coefficient method '{other}'"))),
        }
    }
}

/// exp(−iGτ) through one eigendecomposition of G.
struct Spectral {
    vecs: CMatrix,
    vals: Vec<f64>,
}

impl Spectral {
    fn new(g: &CMatrix) -> Self {
        let eig = g.clone().symmetric_eigen();
        Self {
            vecs: eig.eigenvectors,
            vals: eig.eigenvalues.iter().copied().collect(),
        }
    }

    fn apply(&self, c: &[C64; 4], tau: f64) -> [C64; 4] {
        let mut proj = [C64::new(0.0, 0.0); 4];
        for (k, p) in proj.iter_mut().enumerate() {
            let mut s = C64::new(0.0, 0.0);
            for (i, ci) in c.iter().enumerate() {
                s += self.vecs[(i, k)].conj() * ci;
            }
            *p = s * C64::from_polar(1.0, -self.vals[k] * tau);
        }
        let mut out = [C64::new(0.0, 0.0); 4];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..4).map(|k| self.vecs[(i, k)] * proj[k]).sum();
        }
        out
    }
}

fn euler_step(g: &CMatrix, c: &[C64; 4], h: f64) -> [C64; 4] {
    let mut out = *c;
    for (i, o) in out.iter_mut().enumerate() {
        let gc: C64 = (0..4).map(|j| g[(i, j)] * c[j]).sum();
        *o -= C64::new(0.0, h) * gc;
    }
    out
}

fn normalize(c: &mut [C64; 4]) {
    let n = c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in c.iter_mut() {
        *z /= n;
    }
}

/// Advances the coefficients by one step of `dt` inside `segment`.
pub fn evolve_coeffs(
    w: &WellWaveFunction,
    segment: &Segment,
    dt: f64,
    method: CoeffMethod,
) -> Result<WellWaveFunction> {
    check_step(dt)?;
    let g = segment.generator(w.mass())?;
    let c = if segment.kind == SegmentKind::Free || method == CoeffMethod::Exact {
        Spectral::new(&g).apply(w.coefficients(), dt)
    } else {
        euler_step(&g, w.coefficients(), dt)
    };
    Ok(WellWaveFunction::from_raw(c, w.mass()))
}

/// One integrator step of the precomputed coefficient history.
#[derive(Clone, Copy, Debug)]
pub struct TimelineStep {
    pub t0: f64,
    pub h: f64,
    pub segment: usize,
}

/// Coefficients at every step boundary of a schedule, shared read-only by all trajectories.
#[derive(Clone, Debug)]
pub struct CoefficientTimeline {
    mass: f64,
    method: CoeffMethod,
    dt: f64,
    steps: Vec<TimelineStep>,
    /// states[k] holds the coefficients at the start of step k; one extra at the end.
    states: Vec<[C64; 4]>,
    floors: Vec<f64>,
    /// Coefficients half-way through each step, available for exact evolution.
    mids: Vec<([C64; 4], f64)>,
    /// Largest |Σ|c|² − 1| reached inside each segment before renormalization.
    segment_drift: Vec<f64>,
}

fn floor_of(c: &[C64; 4], mass: f64) -> f64 {
    NODE_FLOOR_REL * WellWaveFunction::from_raw(*c, mass).sup_density()
}

impl CoefficientTimeline {
    pub fn build(
        w0: &WellWaveFunction,
        schedule: &GateSchedule,
        dt: f64,
        method: CoeffMethod,
    ) -> Result<Self> {
        check_step(dt)?;
        let mass = w0.mass();
        let mut c = *w0.coefficients();
        let mut steps = Vec::new();
        let mut states = vec![c];
        let mut mids = Vec::new();
        let mut segment_drift = Vec::new();
        let mut t = 0.0;
        for (si, seg) in schedule.segments().iter().enumerate() {
            let g = seg.generator(mass)?;
            let exact = seg.kind == SegmentKind::Free || method == CoeffMethod::Exact;
            let spectral = Spectral::new(&g);
            let start = c;
            let mut elapsed = 0.0;
            let mut drift: f64 = 0.0;
            let lengths = step_lengths(seg.duration, dt);
            let last = lengths.len() - 1;
            for (k, h) in lengths.into_iter().enumerate() {
                steps.push(TimelineStep { t0: t, h, segment: si });
                if exact {
                    let mid = spectral.apply(&start, elapsed + 0.5 * h);
                    mids.push((mid, floor_of(&mid, mass)));
                    elapsed += h;
                    c = if k == last {
                        spectral.apply(&start, seg.duration)
                    } else {
                        spectral.apply(&start, elapsed)
                    };
                } else {
                    mids.push(([C64::new(f64::NAN, 0.0); 4], f64::NAN));
                    elapsed += h;
                    c = euler_step(&g, &c, h);
                }
                drift = drift.max((c.iter().map(|z| z.norm_sqr()).sum::<f64>() - 1.0).abs());
                if k == last && !exact {
                    normalize(&mut c);
                }
                states.push(c);
                t += h;
            }
            segment_drift.push(drift);
        }
        let floors = states.iter().map(|s| floor_of(s, mass)).collect();
        Ok(Self {
            mass,
            method,
            dt,
            steps,
            states,
            floors,
            mids,
            segment_drift,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn method(&self) -> CoeffMethod {
        self.method
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> &[TimelineStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn duration(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.t0 + s.h)
    }

    /// Wave at the start of step k (k = len() gives the final wave).
    pub fn wave(&self, k: usize) -> WellWaveFunction {
        WellWaveFunction::from_raw(self.states[k], self.mass)
    }

    pub fn floor(&self, k: usize) -> f64 {
        self.floors[k]
    }

    /// Wave at the midpoint of step k, if the coefficients were evolved exactly.
    pub fn mid_wave(&self, k: usize) -> Option<(WellWaveFunction, f64)> {
        let (c, f) = self.mids[k];
        if f.is_nan() {
            None
        } else {
            Some((WellWaveFunction::from_raw(c, self.mass), f))
        }
    }

    pub fn final_wave(&self) -> WellWaveFunction {
        self.wave(self.steps.len())
    }

    pub fn segment_drift(&self) -> &[f64] {
        &self.segment_drift
    }

    pub fn has_midpoints(&self) -> bool {
        self.mids.iter().all(|(_, f)| !f.is_nan())
    }
}

// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Ensembles of corpuscles: sampling, transport, and the statistics that
//! compare them with |ψ|².
//!
//! Sample i draws from its own ChaCha8 stream (seed, stream = i), so results
//! do not depend on how the work is split across threads.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::OracleClass;
use crate::ode::Scheme;
use crate::pointer::PacketMixture;
use crate::spin::{SpinDeutschSetup, SpinPilotWave};
use crate::well::deutsch::{run_deutsch_well, WellDeutschSetup};
use crate::well::{integrate_on_timeline, CoefficientTimeline, ConfigPoint, TrajectoryStatus, WellWaveFunction};

/// Largest acceptable fraction of aborted trajectories.
pub const MAX_ABORT_RATE: f64 = 0.01;
/// Proposals per sample before the rejection sampler gives up.
pub const MAX_PROPOSALS: usize = 1_000_000;
pub const DEFAULT_BINS: usize = 64;

/// Density over configuration space, evaluated on a point of the sampling box.
pub type DensityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum InitialDensity {
    /// |ψ|² of the model's initial wave.
    Equilibrium,
    /// Any nonnegative density with a uniform bound over the sampling box.
    Custom { density: DensityFn, bound: f64 },
}

impl fmt::Debug for InitialDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialDensity::Equilibrium => f.write_str("Equilibrium"),
            InitialDensity::Custom { bound, .. } => write!(f, "Custom {{ bound: {bound} }}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnsembleSpec {
    pub size: usize,
    pub initial: InitialDensity,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn equilibrium(size: usize, seed: u64) -> Result<Self> {
        Self::new(size, InitialDensity::Equilibrium, seed)
    }

    pub fn new(size: usize, initial: InitialDensity, seed: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter("ensemble size must be >= 1".into()));
        }
        if let InitialDensity::Custom { bound, .. } = &initial {
            if !(*bound > 0.0 && bound.is_finite()) {
                return Err(Error::InvalidParameter(format!("envelope bound must be positive, got {bound}")));
            }
        }
        Ok(Self { size, initial, seed })
    }

    /// Random stream owned by sample `index`.
    pub fn rng_for(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// One point from `density` on the box `domain` by rejection against `bound`.
pub fn rejection_sample(
    rng: &mut impl Rng,
    density: &dyn Fn(&[f64]) -> f64,
    domain: &[(f64, f64)],
    bound: f64,
) -> Result<Vec<f64>> {
    let mut p = vec![0.0; domain.len()];
    for _ in 0..MAX_PROPOSALS {
        for (v, &(lo, hi)) in p.iter_mut().zip(domain) {
            *v = lo + (hi - lo) * rng.random::<f64>();
        }
        let rho = density(&p);
        if !(rho >= 0.0) {
            return Err(Error::InvalidParameter(format!("density {rho} is not a nonnegative number")));
        }
        if rho > bound {
            return Err(Error::EnvelopeViolation { value: rho, bound });
        }
        if rng.random::<f64>() * bound < rho {
            return Ok(p);
        }
    }
    Err(Error::SamplerExhausted(MAX_PROPOSALS))
}

/// N points distributed as `density`, sample i drawn from stream i.
pub fn sample_density(
    spec: &EnsembleSpec,
    density: &(dyn Fn(&[f64]) -> f64 + Sync),
    domain: &[(f64, f64)],
    bound: f64,
) -> Result<Vec<Vec<f64>>> {
    (0..spec.size)
        .into_par_iter()
        .map(|i| rejection_sample(&mut spec.rng_for(i), density, domain, bound))
        .collect()
}

/// Density to sample plus its envelope, resolving `Equilibrium` with the model's own |ψ|².
fn resolve(
    spec: &EnsembleSpec,
    equilibrium: DensityFn,
    equilibrium_bound: f64,
) -> (DensityFn, f64) {
    match &spec.initial {
        InitialDensity::Equilibrium => (equilibrium, equilibrium_bound),
        InitialDensity::Custom { density, bound } => (density.clone(), *bound),
    }
}

/// Sampling box and bound for a well wave: sup|ψ|² ≤ (2Σ|c|)².
pub fn well_envelope(w: &WellWaveFunction) -> f64 {
    let s: f64 = w.coefficients().iter().map(|c| c.norm()).sum();
    (2.0 * s).powi(2)
}

pub fn sample_well(spec: &EnsembleSpec, w: &WellWaveFunction) -> Result<Vec<ConfigPoint>> {
    let wave = *w;
    let eq: DensityFn = Arc::new(move |p: &[f64]| wave.density(ConfigPoint { x: p[0], y: p[1] }));
    let (density, bound) = resolve(spec, eq, well_envelope(w));
    let pts = sample_density(spec, density.as_ref(), &[(0.0, 1.0), (0.0, 1.0)], bound)?;
    Ok(pts.into_iter().map(|p| ConfigPoint { x: p[0], y: p[1] }).collect())
}

/// Window covering ±8 widths around every packet, and a bound on the density there.
pub fn pointer_envelope(m: &PacketMixture, t: f64) -> ((f64, f64), f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut bound = 0.0;
    for b in m.branches() {
        let (a, c) = b.packet.shifted(b.speed * t).window();
        lo = lo.min(a);
        hi = hi.max(c);
        bound += b.weight * b.packet.peak_density();
    }
    ((lo, hi), bound)
}

pub fn sample_pointer(spec: &EnsembleSpec, m: &PacketMixture, t: f64) -> Result<Vec<f64>> {
    let (window, bound) = pointer_envelope(m, t);
    let mixture = m.clone();
    let eq: DensityFn = Arc::new(move |p: &[f64]| mixture.density(p[0], t));
    let (density, bound) = resolve(spec, eq, bound);
    let pts = sample_density(spec, density.as_ref(), &[window], bound)?;
    Ok(pts.into_iter().map(|p| p[0]).collect())
}

/// One-sample Kolmogorov–Smirnov statistic sup|F_N − F|.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut v: Vec<f64> = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// KS critical value at α = 0.01 for large N.
pub fn ks_critical(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<usize>,
    /// Samples outside [lo, hi).
    pub outside: usize,
}

impl Histogram {
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(hi > lo) {
            return Err(Error::InvalidParameter(format!("bad histogram [{lo}, {hi}) with {bins} bins")));
        }
        let mut counts = vec![0; bins];
        let mut outside = 0;
        let width = (hi - lo) / bins as f64;
        for &v in values {
            if v >= lo && v < hi {
                counts[(((v - lo) / width) as usize).min(bins - 1)] += 1;
            } else if v == hi {
                counts[bins - 1] += 1;
            } else {
                outside += 1;
            }
        }
        Ok(Self { lo, hi, counts, outside })
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.counts.len() as f64
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        self.lo + (k as f64 + 0.5) * self.bin_width()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum::<usize>() + self.outside
    }

    /// Counts scaled to a probability density.
    pub fn density(&self) -> Vec<f64> {
        let n = self.total().max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / (n * self.bin_width())).collect()
    }
}

/// Coarse-grained Σ_bins p̂ ln(p̂/q) with q the bin mass of the target CDF.
/// Returns +∞ when a bin holds samples but no target mass.
pub fn relative_entropy(positions: &[f64], cdf: impl Fn(f64) -> f64, lo: f64, hi: f64, bins: usize) -> Result<f64> {
    let h = Histogram::new(positions, lo, hi, bins)?;
    let n = h.total() as f64;
    let mut s = 0.0;
    for (k, &c) in h.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let a = lo + k as f64 * h.bin_width();
        let q = cdf(a + h.bin_width()) - cdf(a);
        if q <= 0.0 {
            return Ok(f64::INFINITY);
        }
        let p = c as f64 / n;
        s += p * (p / q).ln();
    }
    Ok(s)
}

/// Per-sample record of an ensemble run.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleRecord {
    pub id: usize,
    pub x0: Option<f64>,
    pub y0: f64,
    pub x_final: Option<f64>,
    pub y_final: Option<f64>,
    pub status: TrajectoryStatus,
    pub outcome: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleResult {
    pub records: Vec<SampleRecord>,
    /// KS statistic per checked coordinate, e.g. ("x", 0.01).
    pub ks: Vec<(String, f64)>,
    /// (outcome label, observed frequency, expected probability if known).
    pub frequencies: Vec<(String, f64, Option<f64>)>,
    pub histogram: Option<Histogram>,
}

impl EnsembleResult {
    pub fn size(&self) -> usize {
        self.records.len()
    }

    pub fn count(&self, status: TrajectoryStatus) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn abort_rate(&self) -> f64 {
        let bad = self.records.iter().filter(|r| !r.status.is_complete()).count();
        bad as f64 / self.records.len().max(1) as f64
    }

    /// False when more than 1% of trajectories aborted.
    pub fn is_reliable(&self) -> bool {
        self.abort_rate() <= MAX_ABORT_RATE
    }

    pub fn ks_of(&self, label: &str) -> Option<f64> {
        self.ks.iter().find(|(l, _)| l == label).map(|(_, v)| *v)
    }

    pub fn frequency_of(&self, label: &str) -> Option<f64> {
        self.frequencies.iter().find(|(l, _, _)| l == label).map(|(_, v, _)| *v)
    }

    fn completed_finals(&self, pick: impl Fn(&SampleRecord) -> Option<f64>) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.status.is_complete())
            .filter_map(pick)
            .collect()
    }

    pub fn final_x(&self) -> Vec<f64> {
        self.completed_finals(|r| r.x_final)
    }

    pub fn final_y(&self) -> Vec<f64> {
        self.completed_finals(|r| r.y_final)
    }

    /// Summary block printed after the CSV report.
    pub fn summary(&self) -> String {
        let mut s = format!("samples: {}\n", self.size());
        for st in [TrajectoryStatus::Complete, TrajectoryStatus::AbortedNode, TrajectoryStatus::AbortedBoundary] {
            s += &format!("{st}: {}\n", self.count(st));
        }
        s += &format!("abort_rate: {:.6}\n", self.abort_rate());
        for (label, v) in &self.ks {
            s += &format!("ks_{label}: {v:.6} (critical {:.6})\n", ks_critical(self.final_x().len().max(self.final_y().len()).max(1)));
        }
        for (label, f, expected) in &self.frequencies {
            match expected {
                Some(e) => s += &format!("frequency[{label}]: {f:.6} (expected {e:.6})\n"),
                None => s += &format!("frequency[{label}]: {f:.6}\n"),
            }
        }
        if !self.is_reliable() {
            s += "warning: abort rate above 1%, result unreliable\n";
        }
        s
    }
}

/// Frequencies of outcome labels among completed samples, in first-seen label order of `labels`.
fn tally(records: &[SampleRecord], labels: &[(String, Option<f64>)]) -> Vec<(String, f64, Option<f64>)> {
    let done: Vec<&SampleRecord> = records.iter().filter(|r| r.status.is_complete()).collect();
    let n = done.len().max(1) as f64;
    labels
        .iter()
        .map(|(l, e)| {
            let c = done.iter().filter(|r| r.outcome.as_deref() == Some(l.as_str())).count();
            (l.clone(), c as f64 / n, *e)
        })
        .collect()
}

/// Transports an ensemble through a well coefficient history and compares both
/// final marginals with those of the final wave.
pub fn well_equivariance(
    spec: &EnsembleSpec,
    timeline: &CoefficientTimeline,
    scheme: Scheme,
    delta: f64,
) -> Result<EnsembleResult> {
    let starts = sample_well(spec, &timeline.wave(0))?;
    let runs: Vec<_> = starts
        .par_iter()
        .map(|&p0| integrate_on_timeline(timeline, p0, scheme, delta))
        .collect::<Result<_>>()?;
    let records: Vec<SampleRecord> = runs
        .iter()
        .zip(&starts)
        .enumerate()
        .map(|(id, (tr, p0))| {
            let done = tr.status().is_complete();
            let q = tr.last();
            SampleRecord {
                id,
                x0: Some(p0.x),
                y0: p0.y,
                x_final: done.then_some(q.x),
                y_final: done.then_some(q.y),
                status: tr.status(),
                outcome: None,
            }
        })
        .collect();
    let fin = timeline.final_wave();
    let mut result = EnsembleResult { records, ks: Vec::new(), frequencies: Vec::new(), histogram: None };
    let xs = result.final_x();
    let ys = result.final_y();
    result.ks.push(("x".into(), ks_statistic(&xs, |x| fin.x_marginal_cdf(x))));
    result.ks.push(("y".into(), ks_statistic(&ys, |y| fin.y_marginal_cdf(y))));
    result.histogram = Some(Histogram::new(&xs, 0.0, 1.0, DEFAULT_BINS)?);
    Ok(result)
}

/// Pointer positions after `duration` of coupling, compared with |ψ(y, t)|².
pub fn spin_equivariance(
    spec: &EnsembleSpec,
    wave: &SpinPilotWave,
    duration: f64,
    dt: f64,
    scheme: Scheme,
) -> Result<EnsembleResult> {
    let mixture = wave.mixture();
    let starts = sample_pointer(spec, &mixture, 0.0)?;
    let records = transport_pointer(wave, &starts, duration, dt, scheme, |_| None)?;
    let mut result = EnsembleResult { records, ks: Vec::new(), frequencies: Vec::new(), histogram: None };
    let ys = result.final_y();
    result.ks.push(("y".into(), ks_statistic(&ys, |y| mixture.cdf(y, duration))));
    let ((lo, hi), _) = pointer_envelope(&mixture, duration);
    result.histogram = Some(Histogram::new(&ys, lo, hi, DEFAULT_BINS)?);
    Ok(result)
}

fn transport_pointer(
    wave: &SpinPilotWave,
    starts: &[f64],
    duration: f64,
    dt: f64,
    scheme: Scheme,
    outcome: impl Fn(f64) -> Option<String> + Sync,
) -> Result<Vec<SampleRecord>> {
    starts
        .par_iter()
        .enumerate()
        .map(|(id, &y0)| {
            let (status, y_final) = match wave.integrate_pointer(y0, duration, dt, scheme) {
                Ok(tr) => (TrajectoryStatus::Complete, Some(tr.last().1)),
                Err(Error::Node { .. }) => (TrajectoryStatus::AbortedNode, None),
                Err(e) => return Err(e),
            };
            Ok(SampleRecord {
                id,
                x0: None,
                y0,
                x_final: None,
                y_final,
                status,
                outcome: y_final.and_then(&outcome),
            })
        })
        .collect()
}

/// Index of the nearest outcome center, refusing when two centers are closer than 4 widths.
pub fn nearest_outcome(value: f64, centers: &[f64], width: f64) -> Result<usize> {
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            let separation = (a - b).abs();
            if separation < 4.0 * width {
                return Err(Error::OverlappingPackets { separation, required: 4.0 * width });
            }
        }
    }
    Ok(centers
        .iter()
        .enumerate()
        .min_by(|x, y| (x.1 - value).abs().total_cmp(&(y.1 - value).abs()))
        .map(|(i, _)| i)
        .expect("at least one center"))
}

/// Direct pointer measurement of the data qubit; outcomes "+g" and "-g".
pub fn born_frequencies(
    spec: &EnsembleSpec,
    wave: &SpinPilotWave,
    duration: f64,
    dt: f64,
    scheme: Scheme,
) -> Result<EnsembleResult> {
    let g = wave.coupling();
    let y_center = wave.pointers()[0].center();
    let width = wave.pointers()[0].width();
    let centers = [y_center + g * duration, y_center - g * duration];
    nearest_outcome(0.0, &centers, width)?;
    let labels = ["+g", "-g"];
    let mixture = wave.mixture();
    let starts = sample_pointer(spec, &mixture, 0.0)?;
    let records = transport_pointer(wave, &starts, duration, dt, scheme, |y| {
        nearest_outcome(y, &centers, width).ok().map(|i| labels[i].to_string())
    })?;
    let p = wave.data_probabilities();
    let frequencies = tally(&records, &[("+g".into(), Some(p[0])), ("-g".into(), Some(p[1]))]);
    Ok(EnsembleResult { records, ks: Vec::new(), frequencies, histogram: None })
}

fn class_labels() -> [(String, Option<f64>); 2] {
    [(OracleClass::Constant.to_string(), None), (OracleClass::Balanced.to_string(), None)]
}

/// Full spin-model Deutsch circuit for every corpuscle of the ensemble.
pub fn deutsch_spin_ensemble(spec: &EnsembleSpec, setup: &SpinDeutschSetup) -> Result<EnsembleResult> {
    let starts = sample_pointer(spec, &setup.pre_measurement.mixture(), 0.0)?;
    let records = starts
        .par_iter()
        .enumerate()
        .map(|(id, &y0)| {
            let (status, y_final, outcome) = match setup.run(y0) {
                Ok(run) => (TrajectoryStatus::Complete, Some(run.trajectory.last().1), Some(run.verdict.to_string())),
                Err(Error::Node { .. }) => (TrajectoryStatus::AbortedNode, None, None),
                Err(e) => return Err(e),
            };
            Ok(SampleRecord { id, x0: None, y0, x_final: None, y_final, status, outcome })
        })
        .collect::<Result<Vec<_>>>()?;
    let frequencies = tally(&records, &class_labels());
    Ok(EnsembleResult { records, ks: Vec::new(), frequencies, histogram: None })
}

/// Full well-model Deutsch circuit; (x, y) from the initial |ψ|², then z from the
/// pointer packet, both from sample i's stream.
pub fn deutsch_well_ensemble(spec: &EnsembleSpec, setup: &WellDeutschSetup) -> Result<EnsembleResult> {
    let initial = setup.initial;
    let eq: DensityFn = Arc::new(move |p: &[f64]| initial.density(ConfigPoint { x: p[0], y: p[1] }));
    let (density, bound) = resolve(spec, eq, well_envelope(&initial));
    let pointer = setup.readout.pointer();
    let pointer_density = |p: &[f64]| pointer.density(p[0]);
    let records = (0..spec.size)
        .into_par_iter()
        .map(|id| {
            let mut rng = spec.rng_for(id);
            let xy = rejection_sample(&mut rng, density.as_ref(), &[(0.0, 1.0), (0.0, 1.0)], bound)?;
            let z0 = rejection_sample(&mut rng, &pointer_density, &[pointer.window()], pointer.peak_density())?[0];
            let p0 = ConfigPoint { x: xy[0], y: xy[1] };
            let run = run_deutsch_well(setup, p0, z0)?;
            let last = run.trajectory.last();
            let done = run.status.is_complete();
            Ok(SampleRecord {
                id,
                x0: Some(p0.x),
                y0: p0.y,
                x_final: done.then_some(last.x),
                y_final: done.then_some(last.y),
                status: run.status,
                outcome: run.verdict.map(|v| v.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let frequencies = tally(&records, &class_labels());
    Ok(EnsembleResult { records, ks: Vec::new(), frequencies, histogram: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{classify, OracleId, StateVector};
    use crate::pointer::PointerState;
    use crate::spin::SpinParams;
    use crate::well::deutsch::WellDeutschParams;
    use crate::well::{minus_density, plus_density};

    fn sample_1d(n: usize, seed: u64, rho: impl Fn(f64) -> f64 + Sync, bound: f64) -> Vec<f64> {
        let spec = EnsembleSpec::equilibrium(n, seed).unwrap();
        sample_density(&spec, &|p: &[f64]| rho(p[0]), &[(0.0, 1.0)], bound)
            .unwrap()
            .into_iter()
            .map(|p| p[0])
            .collect()
    }

    #[test]
    fn uniform_passes_ks() {
        let n = 10_000;
        let xs = sample_1d(n, 1, |_| 1.0, 1.0);
        assert!(ks_statistic(&xs, |x| x.clamp(0.0, 1.0)) < ks_critical(n));
    }

    #[test]
    fn ks_detects_wrong_density() {
        let xs = sample_1d(5000, 2, |x| 2.0 * x, 2.0);
        assert!(ks_statistic(&xs, |x| x) > 0.2);
    }

    #[test]
    fn figure_histograms() {
        let h = |xs: &[f64]| Histogram::new(xs, 0.0, 1.0, 20).unwrap();
        let plus = h(&sample_1d(20_000, 3, plus_density, 4.0));
        let minus = h(&sample_1d(20_000, 3, minus_density, 4.0));
        let peak = |h: &Histogram| h.bin_center((0..20).max_by_key(|&k| h.counts[k]).unwrap());
        assert!((peak(&plus) - 0.3).abs() <= 0.05, "{}", peak(&plus));
        assert!((peak(&minus) - 0.7).abs() <= 0.05, "{}", peak(&minus));
        // Beyond x = 0.8 the |+> shape is a small lobe: low density, ~1.5% of the mass.
        let d = plus.density();
        let top = d.iter().cloned().fold(0.0, f64::max);
        assert!(d[16..].iter().all(|&v| v < 0.1 * top));
        let tail = plus.counts[16..].iter().sum::<usize>() as f64 / plus.total() as f64;
        assert!((tail - 0.014742).abs() < 3.0 * (0.015f64 / 20_000.0).sqrt(), "{tail}");
        let integral: f64 = d.iter().sum::<f64>() * plus.bin_width();
        assert!((integral - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let spec = EnsembleSpec::equilibrium(500, 42).unwrap();
        let w = WellWaveFunction::from_state(&StateVector::from_real(&[0.5, 0.5, 0.5, 0.5]).unwrap(), 1.0).unwrap();
        let a = sample_well(&spec, &w).unwrap();
        let b = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| sample_well(&spec, &w).unwrap());
        assert_eq!(a, b);
        let c = sample_well(&EnsembleSpec::equilibrium(500, 43).unwrap(), &w).unwrap();
        assert_ne!(a, c);
        // A longer run shares its prefix.
        let long = sample_well(&EnsembleSpec::equilibrium(600, 42).unwrap(), &w).unwrap();
        assert_eq!(&long[..500], &a[..]);
    }

    #[test]
    fn envelope_violation_is_an_error() {
        let spec = EnsembleSpec::equilibrium(3, 0).unwrap();
        let err = sample_density(&spec, &|_: &[f64]| 2.0, &[(0.0, 1.0)], 1.0).unwrap_err();
        assert!(matches!(err, Error::EnvelopeViolation { .. }));
        assert!(EnsembleSpec::equilibrium(0, 0).is_err());
    }

    #[test]
    fn relative_entropy_cases() {
        let n = 100_000;
        let xs = sample_1d(n, 5, plus_density, 4.0);
        let cdf = |x: f64| {
            let w = WellWaveFunction::from_state(
                &StateVector::from_real(&[std::f64::consts::FRAC_1_SQRT_2, 0.0, std::f64::consts::FRAC_1_SQRT_2, 0.0])
                    .unwrap(),
                1.0,
            )
            .unwrap();
            w.x_marginal_cdf(x)
        };
        let d = relative_entropy(&xs, cdf, 0.0, 1.0, DEFAULT_BINS).unwrap();
        assert!((-1e-12..0.02).contains(&d), "{d}");

        let spike = vec![0.5; 1000];
        assert!(relative_entropy(&spike, |x| x, 0.0, 1.0, DEFAULT_BINS).unwrap() > 3.0);

        let uniform = sample_1d(n, 6, |_| 1.0, 1.0);
        assert!(relative_entropy(&uniform, |x| x, 0.0, 1.0, DEFAULT_BINS).unwrap() < 1e-3);

        // Samples where the reference has no weight.
        let e = relative_entropy(&[0.9], |x: f64| (2.0 * x).min(1.0), 0.0, 1.0, 2).unwrap();
        assert!(e.is_infinite());
    }

    #[test]
    fn born_rule_cases() {
        let params = SpinParams::default();
        let spec = EnsembleSpec::equilibrium(10_000, 8).unwrap();
        let run = |p0: f64| {
            let data = StateVector::from_real(&[p0.sqrt(), (1.0 - p0).sqrt()]).unwrap();
            let state = data.tensor(&StateVector::basis(2, 1).unwrap()).unwrap();
            let wave = SpinPilotWave::new(&state, PointerState::new(0.0, params.width).unwrap(), params.coupling).unwrap();
            born_frequencies(&spec, &wave, params.measurement_time, params.dt, Scheme::Euler).unwrap()
        };
        let pure = run(1.0);
        assert_eq!(pure.frequency_of("+g"), Some(1.0));
        assert_eq!(pure.frequency_of("-g"), Some(0.0));
        let half = run(0.5);
        let tol = 3.0 * (0.25f64 / 10_000.0).sqrt();
        assert!((half.frequency_of("+g").unwrap() - 0.5).abs() <= tol);
        assert_eq!(half.count(TrajectoryStatus::Complete), 10_000);
    }

    #[test]
    fn overlapping_packets_refused() {
        assert!(matches!(nearest_outcome(0.0, &[-0.05, 0.05], 0.05), Err(Error::OverlappingPackets { .. })));
        assert_eq!(nearest_outcome(0.3, &[-0.5, 0.5], 0.05).unwrap(), 1);
    }

    #[test]
    fn eigenstate_does_not_move() {
        let w = WellWaveFunction::from_state(&StateVector::basis(4, 3).unwrap(), 1.0).unwrap();
        let tl = CoefficientTimeline::build(&w, &crate::well::GateSchedule::free(0.5).unwrap(), 0.01, crate::well::CoeffMethod::Exact)
            .unwrap();
        let spec = EnsembleSpec::equilibrium(300, 9).unwrap();
        let res = well_equivariance(&spec, &tl, Scheme::Rk4, crate::well::DEFAULT_DELTA).unwrap();
        let start = sample_well(&spec, &w).unwrap();
        let xs0: Vec<f64> = start.iter().map(|p| p.x).collect();
        let ks0 = ks_statistic(&xs0, |x| w.x_marginal_cdf(x));
        // Only rounding noise in the phase of a global factor.
        assert!(res.records.iter().all(|r| (r.x0.unwrap() - r.x_final.unwrap()).abs() < 1e-10));
        assert!((res.ks_of("x").unwrap() - ks0).abs() < 1e-9);
    }

    #[test]
    fn deutsch_correct_off_equilibrium() {
        // Any density supported where ψ ≠ 0 still decides every oracle.
        let uniform: DensityFn = Arc::new(|_: &[f64]| 1.0);
        let spec = EnsembleSpec::new(200, InitialDensity::Custom { density: uniform, bound: 1.0 }, 4).unwrap();
        for f in OracleId::ALL {
            let setup = WellDeutschSetup::new(f, WellDeutschParams::default()).unwrap();
            let res = deutsch_well_ensemble(&spec, &setup).unwrap();
            assert!(res.records.iter().filter(|r| r.status.is_complete()).count() > 190);
            assert_eq!(res.frequency_of(&classify(f).to_string()), Some(1.0), "{f}");
        }
        let narrow: DensityFn = Arc::new(|p: &[f64]| if p[0].abs() < 0.02 { 25.0 } else { 0.0 });
        let spec = EnsembleSpec::new(200, InitialDensity::Custom { density: narrow, bound: 25.0 }, 4).unwrap();
        for f in OracleId::ALL {
            let setup = SpinDeutschSetup::new(f, SpinParams::default()).unwrap();
            let res = deutsch_spin_ensemble(&spec, &setup).unwrap();
            assert_eq!(res.frequency_of(&classify(f).to_string()), Some(1.0), "{f}");
        }
    }
}

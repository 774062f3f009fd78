// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! The `pilotwave` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{ConfigLayer, Model, RunConfig};
use crate::ensemble::{
    deutsch_spin_ensemble, deutsch_well_ensemble, ks_critical, relative_entropy, spin_equivariance,
    well_equivariance, EnsembleResult, EnsembleSpec, DEFAULT_BINS,
};
use crate::error::{Error, Result};
use crate::gates::{classify, OracleClass, OracleId, StateVector};
use crate::io::{
    read_table, write_density, write_ensemble_report, write_pointer_trajectory, write_rows, write_text,
    write_trajectory_family,
};
use crate::ode::Scheme;
use crate::plot::{plot_csv_histogram, plot_csv_lines, Series};
use crate::pointer::PointerState;
use crate::spin::{SpinDeutschSetup, SpinParams, SpinPilotWave};
use crate::verify::{run_verification, VerifyOptions};
use crate::well::deutsch::{run_deutsch_well, WellDeutschParams, WellDeutschSetup};
use crate::well::{
    integrate_trajectory, omega, CoeffMethod, CoefficientTimeline, ConfigPoint, GateSchedule, Trajectory2D,
    WellWaveFunction, DEFAULT_DELTA,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ABORTS: u8 = 3;

/// Trajectories written per Deutsch run.
const SHOWN: usize = 9;

#[derive(Debug, Parser)]
#[command(name = "pilotwave", version, about = "Pilot-wave simulation of the Deutsch algorithm")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full Deutsch algorithm on an equilibrium ensemble.
    Deutsch(RunArgs),
    /// Free-evolution and oracle trajectory families in the well.
    Trajectories {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, value_enum, default_value_t = Family::Both)]
        family: Family,
    },
    /// Ensemble statistics: a Deutsch ensemble with --oracle, an equivariance check without.
    Ensemble(RunArgs),
    /// Run every verification suite.
    Verify {
        #[command(flatten)]
        run: RunArgs,
        /// Override the oracle-potential constant A (mutation self-test).
        #[arg(long, hide = true)]
        tamper_a: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Free,
    Oracle,
    Both,
}

#[derive(Clone, Debug, Default, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub model: Option<Model>,
    #[arg(long)]
    pub oracle: Option<OracleId>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// euler | rk4
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// Ensemble size.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = "PILOTWAVE_OUT")]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub emit_plots: bool,
    /// Flat TOML file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl RunArgs {
    fn layer(&self) -> Result<ConfigLayer> {
        let flags = ConfigLayer {
            model: self.model,
            oracle: self.oracle,
            mass: self.mass,
            dt: self.dt,
            scheme: self.scheme,
            n: self.n,
            seed: self.seed,
            out: self.out.clone(),
            emit_plots: self.emit_plots.then_some(true),
        };
        let file = match &self.config {
            Some(p) => ConfigLayer::from_file(p)?,
            None => ConfigLayer::default(),
        };
        Ok(flags.over(file))
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn run_from_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidParameter(_) => EXIT_USAGE,
                _ => EXIT_VERIFY,
            }
        }
    }
}

pub fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Deutsch(args) => {
            let cfg = RunConfig::resolve(args.layer()?)?;
            cmd_deutsch(&cfg)
        }
        Command::Trajectories { run, family } => {
            let layer = run.layer()?;
            let mass = layer.mass;
            let cfg = RunConfig::resolve(ConfigLayer { model: Some(Model::Well), ..layer })?;
            cmd_trajectories(&cfg, family, mass)
        }
        Command::Ensemble(args) => {
            let cfg = RunConfig::resolve(args.layer()?)?;
            cmd_ensemble(&cfg)
        }
        Command::Verify { run, tamper_a } => {
            let cfg = RunConfig::resolve(run.layer()?)?;
            cmd_verify(&cfg, tamper_a)
        }
    }
}

fn majority(res: &EnsembleResult) -> Option<String> {
    res.frequencies
        .iter()
        .filter(|(_, f, _)| *f > 0.0)
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(l, _, _)| l.clone())
}

/// Exit code of a Deutsch ensemble: aborts first, then correctness.
fn deutsch_exit(res: &EnsembleResult, want: OracleClass) -> u8 {
    let want = want.to_string();
    let all_right = res
        .records
        .iter()
        .filter(|r| r.status.is_complete())
        .all(|r| r.outcome.as_deref() == Some(want.as_str()));
    if !res.is_reliable() {
        EXIT_ABORTS
    } else if all_right && res.records.iter().any(|r| r.status.is_complete()) {
        EXIT_OK
    } else {
        EXIT_VERIFY
    }
}

fn finish_deutsch(dir: &Path, f: OracleId, res: &EnsembleResult) -> Result<u8> {
    write_ensemble_report(&dir.join("report.csv"), res)?;
    let verdict = majority(res).unwrap_or_else(|| "none".into());
    let code = deutsch_exit(res, classify(f));
    let text = format!("oracle: {f}\nexpected: {}\nverdict: {verdict}\n{}", classify(f), res.summary());
    write_text(&dir.join("summary.txt"), &text)?;
    say(&format!("{text}output: {}\n", dir.display()));
    Ok(code)
}

pub fn cmd_deutsch(cfg: &RunConfig) -> Result<u8> {
    let f = cfg.require_oracle()?;
    let spec = EnsembleSpec::equilibrium(cfg.n, cfg.seed)?;
    let dir = cfg.out.join(format!("deutsch-{}-{f}", cfg.model));
    match cfg.model {
        Model::Spin => {
            let params = SpinParams { dt: cfg.dt, scheme: cfg.scheme, ..SpinParams::default() };
            let setup = SpinDeutschSetup::new(f, params)?;
            let res = deutsch_spin_ensemble(&spec, &setup)?;
            let run = setup.run(res.records[0].y0)?;
            let traj = dir.join("trajectory.csv");
            write_pointer_trajectory(&traj, run.trajectory.samples())?;
            let code = finish_deutsch(&dir, f, &res)?;
            if cfg.emit_plots {
                plot_csv_lines(&traj, &dir.join("trajectory.svg"), &format!("pointer y(t), oracle {f}"), "t", "y", None)?;
                let reach = params.coupling * params.measurement_time + 8.0 * params.width;
                plot_csv_histogram(
                    &dir.join("report.csv"),
                    &dir.join("pointer_final.svg"),
                    &format!("final pointer positions, oracle {f}"),
                    "y_final",
                    (-reach, reach),
                    DEFAULT_BINS,
                    None,
                )?;
            }
            Ok(code)
        }
        Model::Well => {
            let params = WellDeutschParams { mass: cfg.mass, dt: cfg.dt, scheme: cfg.scheme, ..WellDeutschParams::default() };
            let setup = WellDeutschSetup::new(f, params)?;
            let res = deutsch_well_ensemble(&spec, &setup)?;
            // The gate-stage path does not depend on the pointer, so z0 = 0 is
            // used for the readout of the displayed samples.
            let mut shown = Vec::new();
            let mut readout = Vec::new();
            for r in res.records.iter().take(SHOWN) {
                let run = run_deutsch_well(&setup, ConfigPoint::new(r.x0.unwrap_or(0.5), r.y0)?, 0.0)?;
                if readout.is_empty() {
                    readout = run.pointer.iter().map(|&(t, x, z)| vec![t, x, z]).collect();
                }
                shown.push(run.trajectory);
            }
            let traj = dir.join("trajectories.csv");
            write_trajectory_family(&traj, &shown)?;
            write_rows(&dir.join("readout.csv"), &["t", "x", "z"], readout)?;
            let initial = setup.initial;
            let last = setup.timeline.final_wave();
            write_density(&dir.join("density_initial.csv"), |x| initial.x_marginal(x))?;
            write_density(&dir.join("density_final.csv"), |x| last.x_marginal(x))?;
            let code = finish_deutsch(&dir, f, &res)?;
            if cfg.emit_plots {
                plot_csv_lines(&traj, &dir.join("trajectories_x.svg"), &format!("x(t), oracle {f}"), "t", "x", Some("traj_id"))?;
                plot_csv_lines(&traj, &dir.join("trajectories_y.svg"), &format!("y(t), oracle {f}"), "t", "y", Some("traj_id"))?;
                for name in ["density_initial", "density_final"] {
                    let csv = dir.join(format!("{name}.csv"));
                    plot_csv_lines(&csv, &dir.join(format!("{name}.svg")), name, "x", "rho", None)?;
                }
            }
            Ok(code)
        }
    }
}

/// Runs the family at dt and dt/2; returns the coarse runs and, per start, the
/// largest pointwise gap at common times when both runs completed.
fn family_with_convergence(
    w: &WellWaveFunction,
    schedule: &GateSchedule,
    dt: f64,
    scheme: Scheme,
) -> Result<(Vec<Trajectory2D>, Vec<Option<f64>>)> {
    let mut family = Vec::new();
    let mut gaps = Vec::new();
    for k in 1..10 {
        let x0 = k as f64 / 10.0;
        let p0 = ConfigPoint::new(x0, x0)?;
        let coarse = integrate_trajectory(w, schedule, p0, dt, scheme)?;
        let fine = integrate_trajectory(w, schedule, p0, dt / 2.0, scheme)?;
        let gap = (coarse.status().is_complete() && fine.status().is_complete()).then(|| {
            let fs = fine.samples();
            let mut gap = (coarse.last().x - fine.last().x).abs().max((coarse.last().y - fine.last().y).abs());
            for (i, &(t, x, y)) in coarse.samples().iter().enumerate() {
                if let Some(&(_, xf, yf)) = fs.get(2 * i).filter(|s| (s.0 - t).abs() < 1e-9) {
                    gap = gap.max((x - xf).abs()).max((y - yf).abs());
                }
            }
            gap
        });
        family.push(coarse);
        gaps.push(gap);
    }
    Ok((family, gaps))
}

fn say(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

pub fn cmd_trajectories(cfg: &RunConfig, family: Family, mass_flag: Option<f64>) -> Result<u8> {
    let dir = cfg.out.join("trajectories");
    let mut text = String::new();
    let mut aborted = 0;
    let mut total = 0;
    let mut outputs = Vec::new();
    if matches!(family, Family::Free | Family::Both) {
        let m = mass_flag.unwrap_or(1.0);
        let w = WellWaveFunction::from_state(&StateVector::from_real(&[0.5, -0.5, 0.5, -0.5])?, m)?;
        let period = std::f64::consts::PI / omega(m)?.abs();
        let (fam, gaps) = family_with_convergence(&w, &GateSchedule::free(2.0 * period)?, cfg.dt, cfg.scheme)?;
        text += &format!("free |+>|->, m={m}, dt={}, {}: period {period:.6}\n", cfg.dt, cfg.scheme);
        outputs.push(("free", fam, gaps));
    }
    if matches!(family, Family::Oracle | Family::Both) {
        let m = mass_flag.unwrap_or(10.0);
        let f = cfg.oracle.unwrap_or(OracleId::F2);
        let w = WellWaveFunction::from_state(&StateVector::from_real(&[0.5, -0.5, 0.5, -0.5])?, m)?;
        let (fam, gaps) = family_with_convergence(&w, &GateSchedule::oracle(f)?, cfg.dt, cfg.scheme)?;
        text += &format!("oracle {f} on |->|->, m={m}, dt={}, {}\n", cfg.dt, cfg.scheme);
        outputs.push(("oracle", fam, gaps));
    }
    for (name, fam, gaps) in &outputs {
        let csv = dir.join(format!("{name}.csv"));
        write_trajectory_family(&csv, fam)?;
        for (k, tr) in fam.iter().enumerate() {
            let x0 = tr.initial().x;
            let gap = gaps[k].map_or("n/a".to_string(), |g| format!("{g:.3e}"));
            text += &format!(
                "  {name} traj {k}: x0=y0={x0:.1} status {} final ({:.6}, {:.6}) at t={:.6}, dt-halving deviation {gap}\n",
                tr.status(),
                tr.last().x,
                tr.last().y,
                tr.final_time()
            );
            total += 1;
            aborted += usize::from(!tr.status().is_complete());
        }
        if cfg.emit_plots {
            for col in ["x", "y"] {
                plot_csv_lines(&csv, &dir.join(format!("{name}_{col}.svg")), &format!("{name} family {col}(t)"), "t", col, Some("traj_id"))?;
            }
        }
    }
    write_text(&dir.join("summary.txt"), &text)?;
    say(&format!("{text}output: {}\n", dir.display()));
    let rate = aborted as f64 / total.max(1) as f64;
    Ok(if rate > crate::ensemble::MAX_ABORT_RATE { EXIT_ABORTS } else { EXIT_OK })
}

pub fn cmd_ensemble(cfg: &RunConfig) -> Result<u8> {
    if cfg.oracle.is_some() {
        return cmd_deutsch_ensemble(cfg);
    }
    let spec = EnsembleSpec::equilibrium(cfg.n, cfg.seed)?;
    let dir = cfg.out.join(format!("ensemble-{}", cfg.model));
    let (res, entropy, reference, range, col) = match cfg.model {
        Model::Spin => {
            let p = SpinParams::default();
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let state = StateVector::from_real(&[s, s])?.tensor(&StateVector::basis(2, 0)?)?;
            let wave = SpinPilotWave::new(&state, PointerState::new(0.0, p.width)?, p.coupling)?;
            let res = spin_equivariance(&spec, &wave, p.measurement_time, cfg.dt, cfg.scheme)?;
            let mix = wave.mixture();
            let t = p.measurement_time;
            let reach = p.coupling * t + 8.0 * p.width;
            let entropy = relative_entropy(&res.final_y(), |y| mix.cdf(y, t), -reach, reach, DEFAULT_BINS)?;
            let curve = (0..=400).map(|i| -reach + 2.0 * reach * i as f64 / 400.0).map(|y| (y, mix.density(y, t))).collect();
            (res, entropy, curve, (-reach, reach), "y_final")
        }
        Model::Well => {
            let w = WellWaveFunction::from_state(&StateVector::from_real(&[0.5, -0.5, 0.5, -0.5])?, cfg.mass)?;
            let period = std::f64::consts::PI / omega(cfg.mass)?.abs();
            let method = if cfg.scheme == Scheme::Rk4 { CoeffMethod::Exact } else { CoeffMethod::Euler };
            let tl = CoefficientTimeline::build(&w, &GateSchedule::free(period)?, cfg.dt, method)?;
            let res = well_equivariance(&spec, &tl, cfg.scheme, DEFAULT_DELTA)?;
            let last = tl.final_wave();
            let entropy = relative_entropy(&res.final_x(), |x| last.x_marginal_cdf(x), 0.0, 1.0, DEFAULT_BINS)?;
            let curve = (0..=400).map(|i| i as f64 / 400.0).map(|x| (x, last.x_marginal(x))).collect();
            (res, entropy, curve, (0.0, 1.0), "x_final")
        }
    };
    write_ensemble_report(&dir.join("report.csv"), &res)?;
    let limit = 3.0 * ks_critical(res.final_y().len().max(res.final_x().len()).max(1));
    let worst = res.ks.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    let text = format!("{}relative_entropy: {entropy:.6}\nks_limit: {limit:.6}\n", res.summary());
    write_text(&dir.join("summary.txt"), &text)?;
    say(&format!("{text}output: {}\n", dir.display()));
    if cfg.emit_plots {
        let reference = Series { label: "|psi|^2".into(), points: reference };
        plot_csv_histogram(&dir.join("report.csv"), &dir.join("final.svg"), "final positions", col, range, DEFAULT_BINS, Some(&reference))?;
    }
    Ok(if !res.is_reliable() {
        EXIT_ABORTS
    } else if worst > limit {
        EXIT_VERIFY
    } else {
        EXIT_OK
    })
}

fn cmd_deutsch_ensemble(cfg: &RunConfig) -> Result<u8> {
    let f = cfg.require_oracle()?;
    let spec = EnsembleSpec::equilibrium(cfg.n, cfg.seed)?;
    let dir = cfg.out.join(format!("ensemble-{}-{f}", cfg.model));
    let res = match cfg.model {
        Model::Spin => {
            let params = SpinParams { dt: cfg.dt, scheme: cfg.scheme, ..SpinParams::default() };
            deutsch_spin_ensemble(&spec, &SpinDeutschSetup::new(f, params)?)?
        }
        Model::Well => {
            let params = WellDeutschParams { mass: cfg.mass, dt: cfg.dt, scheme: cfg.scheme, ..WellDeutschParams::default() };
            deutsch_well_ensemble(&spec, &WellDeutschSetup::new(f, params)?)?
        }
    };
    let code = finish_deutsch(&dir, f, &res)?;
    if cfg.emit_plots {
        let col = if cfg.model == Model::Well { "x_final" } else { "y_final" };
        let t = read_table(&dir.join("report.csv"), &[col])?;
        let finite = t.columns[0].iter().copied().filter(|v| v.is_finite());
        let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if lo < hi {
            plot_csv_histogram(&dir.join("report.csv"), &dir.join("final.svg"), "final positions", col, (lo, hi), DEFAULT_BINS, None)?;
        }
    }
    Ok(code)
}

pub fn cmd_verify(cfg: &RunConfig, tamper_a: Option<f64>) -> Result<u8> {
    let report = run_verification(&VerifyOptions { seed: cfg.seed, tamper_a })?;
    say(&report.render());
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_VERIFY })
}

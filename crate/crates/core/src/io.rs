// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV export of trajectories, densities and ensemble reports.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::ensemble::EnsembleResult;
use crate::error::{Error, Result};
use crate::well::Trajectory2D;

/// Points in every exported density grid.
pub const DENSITY_GRID: usize = 512;

/// 15 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.14e}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(csv::Writer::from_path(path)?)
}

/// Spin pointer trajectory, header `t,y`.
pub fn write_pointer_trajectory(path: &Path, samples: &[(f64, f64)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "y"])?;
    for &(t, y) in samples {
        w.write_record([fmt_f64(t), fmt_f64(y)])?;
    }
    w.flush()?;
    Ok(())
}

/// One well trajectory, header `t,x,y`.
pub fn write_trajectory(path: &Path, samples: &[(f64, f64, f64)]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["t", "x", "y"])?;
    for &(t, x, y) in samples {
        w.write_record([fmt_f64(t), fmt_f64(x), fmt_f64(y)])?;
    }
    w.flush()?;
    Ok(())
}

/// Numeric rows under an arbitrary header.
pub fn write_rows(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.into_iter().map(fmt_f64))?;
    }
    w.flush()?;
    Ok(())
}

/// Several trajectories in long format, header `traj_id,t,x,y`.
pub fn write_trajectory_family(path: &Path, family: &[Trajectory2D]) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["traj_id", "t", "x", "y"])?;
    for (id, tr) in family.iter().enumerate() {
        for &(t, x, y) in tr.samples() {
            w.write_record([id.to_string(), fmt_f64(t), fmt_f64(x), fmt_f64(y)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `x,rho` on [0, 1] at [`DENSITY_GRID`] evenly spaced points.
pub fn write_density(path: &Path, rho: impl Fn(f64) -> f64) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["x", "rho"])?;
    for i in 0..DENSITY_GRID {
        let x = i as f64 / (DENSITY_GRID - 1) as f64;
        w.write_record([fmt_f64(x), fmt_f64(rho(x))])?;
    }
    w.flush()?;
    Ok(())
}

/// Per-sample CSV; absent values are empty fields.
pub fn write_ensemble_report(path: &Path, result: &EnsembleResult) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["sample_id", "x0", "y0", "x_final", "y_final", "status", "outcome"])?;
    for r in &result.records {
        w.write_record([
            r.id.to_string(),
            fmt_opt(r.x0),
            fmt_f64(r.y0),
            fmt_opt(r.x_final),
            fmt_opt(r.y_final),
            r.status.to_string(),
            r.outcome.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut f = File::create(path)?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

/// A numeric CSV read back column-wise. Empty fields become NaN.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers.iter().position(|h| h == name).map(|i| self.columns[i].as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }
}

/// Reads only the named columns, so text columns elsewhere in the file are fine.
pub fn read_table(path: &Path, wanted: &[&str]) -> Result<Table> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    let idx: Vec<usize> = wanted
        .iter()
        .map(|name| {
            header
                .iter()
                .position(|h| h == *name)
                .ok_or_else(|| Error::InvalidParameter(format!("{}: no column {name}", path.display())))
        })
        .collect::<Result<_>>()?;
    let mut columns = vec![Vec::new(); wanted.len()];
    for rec in r.records() {
        let rec = rec?;
        for (c, &i) in idx.iter().enumerate() {
            let field = rec.get(i).unwrap_or("");
            let v = if field.is_empty() {
                f64::NAN
            } else {
                field
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("{}: bad number {field:?}", path.display())))?
            };
            columns[c].push(v);
        }
    }
    Ok(Table { headers: wanted.iter().map(|s| s.to_string()).collect(), columns })
}

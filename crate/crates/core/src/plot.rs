// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Static SVG charts. Every chart is built from a CSV that was already written,
//! so plotting cannot change any numeric output.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::{read_table, write_text};

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 48.0;
const PALETTE: [&str; 9] =
    ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#17becf"];

#[derive(Clone, Debug)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>) -> Result<Self> {
        let (mut x, mut y) = ((f64::INFINITY, f64::NEG_INFINITY), (f64::INFINITY, f64::NEG_INFINITY));
        for (a, b) in points.filter(|(a, b)| a.is_finite() && b.is_finite()) {
            x = (x.0.min(a), x.1.max(a));
            y = (y.0.min(b), y.1.max(b));
        }
        if !x.0.is_finite() {
            return Err(Error::InvalidParameter("nothing to plot".into()));
        }
        let pad = |r: (f64, f64)| if r.1 > r.0 { r } else { (r.0 - 0.5, r.1 + 0.5) };
        Ok(Self { x: pad(x), y: pad(y) })
    }

    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (W - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        H - BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (H - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(svg: &mut String, f: &Frame, title: &str, x_label: &str, y_label: &str) {
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>
<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>
"#,
        W / 2.0,
        escape(title),
        W - LEFT - RIGHT,
        H - TOP - BOTTOM
    );
    for k in 0..=4 {
        let u = k as f64 / 4.0;
        let xv = f.x.0 + u * (f.x.1 - f.x.0);
        let yv = f.y.0 + u * (f.y.1 - f.y.0);
        let (x, y) = (f.px(xv), f.py(yv));
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.1}" y1="{b:.1}" x2="{x:.1}" y2="{b2:.1}" stroke="black"/><text x="{x:.1}" y="{ty:.1}" text-anchor="middle">{xv:.3}</text>"#,
            b = H - BOTTOM,
            b2 = H - BOTTOM + 5.0,
            ty = H - BOTTOM + 18.0
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{l:.1}" y1="{y:.1}" x2="{LEFT}" y2="{y:.1}" stroke="black"/><text x="{tx:.1}" y="{yy:.1}" text-anchor="end">{yv:.3}</text>"#,
            l = LEFT - 5.0,
            tx = LEFT - 8.0,
            yy = y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text><text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        LEFT + (W - LEFT - RIGHT) / 2.0,
        H - 10.0,
        escape(x_label),
        TOP + (H - TOP - BOTTOM) / 2.0,
        TOP + (H - TOP - BOTTOM) / 2.0,
        escape(y_label)
    );
}

fn polyline(svg: &mut String, f: &Frame, pts: &[(f64, f64)], color: &str) {
    let path: Vec<String> = pts
        .iter()
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .map(|&(a, b)| format!("{:.2},{:.2}", f.px(a), f.py(b)))
        .collect();
    let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" "));
}

fn legend(svg: &mut String, labels: &[&str]) {
    for (i, l) in labels.iter().enumerate().filter(|(_, l)| !l.is_empty()) {
        let y = TOP + 14.0 + 14.0 * i as f64;
        let x = W - RIGHT - 110.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="{c}" stroke-width="2"/><text x="{tx}" y="{ty}">{}</text>"#,
            escape(l),
            y0 = y - 4.0,
            x1 = x + 18.0,
            c = PALETTE[i % PALETTE.len()],
            tx = x + 24.0,
            ty = y
        );
    }
}

/// Line chart of one or more series.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> Result<String> {
    let f = Frame::fit(series.iter().flat_map(|s| s.points.iter().copied()))?;
    let mut svg = String::new();
    header(&mut svg, &f, title, x_label, y_label);
    for (i, s) in series.iter().enumerate() {
        polyline(&mut svg, &f, &s.points, PALETTE[i % PALETTE.len()]);
    }
    if series.len() <= 12 {
        legend(&mut svg, &series.iter().map(|s| s.label.as_str()).collect::<Vec<_>>());
    }
    svg += "</svg>\n";
    Ok(svg)
}

/// Bars at `centers` with common width, plus an optional reference curve.
pub fn histogram_chart(
    title: &str,
    x_label: &str,
    centers: &[f64],
    heights: &[f64],
    reference: Option<&Series>,
) -> Result<String> {
    if centers.len() != heights.len() || centers.is_empty() {
        return Err(Error::InvalidParameter("histogram needs matching, nonempty bins".into()));
    }
    let half = if centers.len() > 1 { 0.5 * (centers[1] - centers[0]).abs() } else { 0.5 };
    let edges = centers.iter().flat_map(|&c| [(c - half, 0.0), (c + half, 0.0)]);
    let tops = centers.iter().zip(heights).map(|(&c, &h)| (c, h));
    let refs = reference.into_iter().flat_map(|s| s.points.iter().copied());
    let f = Frame::fit(edges.chain(tops).chain(refs))?;
    let mut svg = String::new();
    header(&mut svg, &f, title, x_label, "density");
    for (&c, &h) in centers.iter().zip(heights) {
        let (x0, x1) = (f.px(c - half), f.px(c + half));
        let (y0, y1) = (f.py(h.max(f.y.0)), f.py(f.y.0.max(0.0)));
        let _ = writeln!(
            svg,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
            (x1 - x0).max(0.0),
            (y1 - y0).max(0.0)
        );
    }
    if let Some(s) = reference {
        polyline(&mut svg, &f, &s.points, PALETTE[3]);
        legend(&mut svg, &["", "", "", s.label.as_str()]);
    }
    svg += "</svg>\n";
    Ok(svg)
}

/// Plots `y_col` against `x_col`, one series per distinct `group_col` value if given.
pub fn plot_csv_lines(
    csv: &Path,
    svg: &Path,
    title: &str,
    x_col: &str,
    y_col: &str,
    group_col: Option<&str>,
) -> Result<()> {
    let mut cols = vec![x_col, y_col];
    cols.extend(group_col);
    let t = read_table(csv, &cols)?;
    let (xs, ys) = (&t.columns[0], &t.columns[1]);
    let mut series: Vec<Series> = Vec::new();
    match t.columns.get(2) {
        Some(g) => {
            for i in 0..xs.len() {
                let label = format!("{} {}", group_col.unwrap_or_default(), g[i]);
                if series.last().is_none_or(|s| s.label != label) {
                    series.push(Series { label, points: Vec::new() });
                }
                series.last_mut().expect("pushed").points.push((xs[i], ys[i]));
            }
        }
        None => series.push(Series { label: y_col.to_string(), points: xs.iter().copied().zip(ys.iter().copied()).collect() }),
    }
    write_text(svg, &line_chart(title, x_col, y_col, &series)?)
}

/// Normalized histogram of one CSV column over [lo, hi], NaN entries skipped.
pub fn plot_csv_histogram(
    csv: &Path,
    svg: &Path,
    title: &str,
    col: &str,
    (lo, hi): (f64, f64),
    bins: usize,
    reference: Option<&Series>,
) -> Result<()> {
    let t = read_table(csv, &[col])?;
    let values: Vec<f64> = t.columns[0].iter().copied().filter(|v| v.is_finite()).collect();
    let h = crate::ensemble::Histogram::new(&values, lo, hi, bins)?;
    let centers: Vec<f64> = (0..bins).map(|k| h.bin_center(k)).collect();
    write_text(svg, &histogram_chart(title, col, &centers, &h.density(), reference)?)
}

//! Deterministic file emitters: CSV with 17-significant-digit numbers, a
//! dependency-free SVG plotter, and JSON metadata. All outputs are byte
//! stable for identical inputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use coxswim_core::{reconstruct_world, ShapeCurve, Trajectory};

use crate::CliError;

/// Format a float with 17 significant digits, locale-independent.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact label for a snapshot time: integral seconds drop the fraction,
/// fractional ones keep up to six trimmed decimals.
pub fn fmt_time_label(t: f64) -> String {
    if t == t.trunc() && t.abs() < 1e15 {
        format!("{}", t as i64)
    } else {
        let mut s = format!("{t:.6}");
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
        s
    }
}

/// An output file staged in memory; the whole bundle is written at once so a
/// determinism check can compare two independently computed bundles first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFile {
    pub relative_path: String,
    pub bytes: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Bundle {
    pub files: Vec<OutputFile>,
}

impl Bundle {
    pub fn push(&mut self, relative_path: impl Into<String>, bytes: Vec<u8>) {
        self.files.push(OutputFile {
            relative_path: relative_path.into(),
            bytes,
        });
    }

    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::runtime(format!("cannot create {}: {e}", dir.display())))?;
        let mut written = Vec::with_capacity(self.files.len());
        for file in &self.files {
            let path = dir.join(&file.relative_path);
            std::fs::write(&path, &file.bytes)
                .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// trajectory.csv: one row per sample.
pub fn trajectory_csv(traj: &Trajectory) -> Vec<u8> {
    let mut out = String::from("t,v0x,v0y,omega0,x,y,theta,theta_unwrapped\n");
    for s in &traj.samples {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            fmt_num(s.t),
            fmt_num(s.xi.v0x),
            fmt_num(s.xi.v0y),
            fmt_num(s.xi.omega0),
            fmt_num(s.pose.x),
            fmt_num(s.pose.y),
            fmt_num(s.pose.theta),
            fmt_num(s.theta_unwrapped),
        )
        .expect("string write");
    }
    out.into_bytes()
}

/// shapes_<t>.csv: world-frame snapshot of the body curve.
pub fn snapshot_csv(curve: &ShapeCurve, pose: &coxswim_core::Pose) -> Vec<u8> {
    let mut out = String::from("s,x,y\n");
    let world = reconstruct_world(curve, pose);
    for (sample, p) in curve.samples().iter().zip(world) {
        writeln!(out, "{},{},{}", fmt_num(sample.s), fmt_num(p.x), fmt_num(p.y))
            .expect("string write");
    }
    out.into_bytes()
}

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    values: Vec<f64>,
}

/// plots.svg: four panels (translational velocity and position, rotational
/// velocity and position against time), plain polylines and axes.
pub fn plots_svg(traj: &Trajectory) -> Vec<u8> {
    let t: Vec<f64> = traj.samples.iter().map(|s| s.t).collect();
    let panels: [(&str, Vec<Series>); 4] = [
        (
            "translational velocity",
            vec![
                Series {
                    label: "v0x",
                    color: "#1f77b4",
                    values: traj.samples.iter().map(|s| s.xi.v0x).collect(),
                },
                Series {
                    label: "v0y",
                    color: "#d62728",
                    values: traj.samples.iter().map(|s| s.xi.v0y).collect(),
                },
            ],
        ),
        (
            "translational position",
            vec![
                Series {
                    label: "x",
                    color: "#1f77b4",
                    values: traj.samples.iter().map(|s| s.pose.x).collect(),
                },
                Series {
                    label: "y",
                    color: "#d62728",
                    values: traj.samples.iter().map(|s| s.pose.y).collect(),
                },
            ],
        ),
        (
            "rotational velocity",
            vec![Series {
                label: "omega0",
                color: "#2ca02c",
                values: traj.samples.iter().map(|s| s.xi.omega0).collect(),
            }],
        ),
        (
            "rotational position",
            vec![Series {
                label: "theta (unwrapped)",
                color: "#2ca02c",
                values: traj.samples.iter().map(|s| s.theta_unwrapped).collect(),
            }],
        ),
    ];

    const PANEL_W: f64 = 460.0;
    const PANEL_H: f64 = 320.0;
    const MARGIN: f64 = 56.0;
    const GAP: f64 = 24.0;
    let total_w = 2.0 * PANEL_W + 3.0 * GAP;
    let total_h = 2.0 * PANEL_H + 3.0 * GAP;

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{total_w}\" height=\"{total_h}\" viewBox=\"0 0 {total_w} {total_h}\">"
    )
    .expect("string write");
    writeln!(svg, "<rect width=\"{total_w}\" height=\"{total_h}\" fill=\"white\"/>")
        .expect("string write");

    for (idx, (title, series)) in panels.iter().enumerate() {
        let px = GAP + (idx % 2) as f64 * (PANEL_W + GAP);
        let py = GAP + (idx / 2) as f64 * (PANEL_H + GAP);
        let inner_x = px + MARGIN;
        let inner_y = py + 28.0;
        let inner_w = PANEL_W - MARGIN - 16.0;
        let inner_h = PANEL_H - 28.0 - 40.0;

        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for s in series {
            for &v in &s.values {
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        if !(hi > lo) {
            let pad = lo.abs().max(1.0) * 1e-3;
            lo -= pad;
            hi += pad;
        }
        let (t0, t1) = (t[0], t[t.len() - 1]);
        let map_x = |tv: f64| inner_x + (tv - t0) / (t1 - t0) * inner_w;
        let map_y = |v: f64| inner_y + (hi - v) / (hi - lo) * inner_h;

        writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"14\">{title}</text>",
            px + MARGIN,
            py + 18.0
        )
        .expect("string write");
        // axes
        writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            inner_x,
            inner_y,
            inner_x,
            inner_y + inner_h
        )
        .expect("string write");
        writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\" stroke-width=\"1\"/>",
            inner_x,
            inner_y + inner_h,
            inner_x + inner_w,
            inner_y + inner_h
        )
        .expect("string write");
        // range labels
        writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"10\">{:.4e}</text>",
            px + 4.0,
            inner_y + 6.0,
            hi
        )
        .expect("string write");
        writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"10\">{:.4e}</text>",
            px + 4.0,
            inner_y + inner_h,
            lo
        )
        .expect("string write");
        writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"10\">t = {} .. {} s</text>",
            inner_x,
            inner_y + inner_h + 16.0,
            fmt_time_label(t0),
            fmt_time_label(t1)
        )
        .expect("string write");

        for (si, s) in series.iter().enumerate() {
            let mut points = String::new();
            for (tv, v) in t.iter().zip(&s.values) {
                write!(points, "{:.3},{:.3} ", map_x(*tv), map_y(*v)).expect("string write");
            }
            writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>",
                s.color,
                points.trim_end()
            )
            .expect("string write");
            writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" fill=\"{}\">{}</text>",
                inner_x + inner_w - 120.0,
                inner_y + inner_h + 16.0 + 12.0 * si as f64,
                s.color,
                s.label
            )
            .expect("string write");
        }
    }
    svg.push_str("</svg>\n");
    svg.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn num_format_has_17_significant_digits() {
        assert_eq!(fmt_num(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_num(-0.25), "-2.5000000000000000e-1");
        let x = 0.1 + 0.2;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn time_labels_trim() {
        assert_eq!(fmt_time_label(3.0), "3");
        assert_eq!(fmt_time_label(0.0), "0");
        assert_eq!(fmt_time_label(2.5), "2.5");
        assert_eq!(fmt_time_label(0.125), "0.125");
    }
}

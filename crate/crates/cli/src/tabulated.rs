//! Tabulated shape program: a text table of y-displacement rows over a
//! fixed x grid, linearly interpolated in time.
//!
//! Format (comma-separated, `#` comments and blank lines ignored):
//!
//! ```text
//! # first data row: the x grid
//! x, 0.0, 0.25, 0.5, 0.75, 1.0
//! # then one row per time: t, y(x_0), …, y(x_n)
//! 0.0, 0.0, 0.01, 0.02, 0.01, 0.0
//! 1.0, 0.0, 0.02, 0.04, 0.02, 0.0
//! ```
//!
//! Between rows the displacement interpolates linearly, so the shape
//! velocity is the row-difference slope (constant per interval, zero outside
//! the table's time range).

use std::path::Path;

use coxswim_core::{curve_from_graph, ShapeCurve, ShapeProgram, ShapeVelocityField, Vec2};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct TabulatedProgram {
    x: Vec<f64>,
    times: Vec<f64>,
    rows: Vec<Vec<f64>>,
}

impl TabulatedProgram {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read table {}: {e}", path.display()))
        })?;
        Self::parse(&text).map_err(|msg| {
            CliError::config(format!("{}: {msg}", path.display()))
        })
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut x: Option<Vec<f64>> = None;
        let mut times = Vec::new();
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if x.is_none() {
                if fields[0] != "x" {
                    return Err(format!("line {}: first data row must start with 'x'", lineno + 1));
                }
                let grid = parse_floats(&fields[1..], lineno)?;
                if grid.len() < 3 {
                    return Err(format!("line {}: need at least 3 grid points", lineno + 1));
                }
                x = Some(grid);
                continue;
            }
            let values = parse_floats(&fields, lineno)?;
            let grid_len = x.as_ref().map(Vec::len).unwrap_or(0);
            if values.len() != grid_len + 1 {
                return Err(format!(
                    "line {}: expected {} values (t plus one per grid point), got {}",
                    lineno + 1,
                    grid_len + 1,
                    values.len()
                ));
            }
            times.push(values[0]);
            rows.push(values[1..].to_vec());
        }
        let x = x.ok_or_else(|| "missing x grid row".to_string())?;
        if times.len() < 2 {
            return Err("need at least 2 time rows".to_string());
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err("time rows must be strictly increasing".to_string());
            }
        }
        Ok(TabulatedProgram { x, times, rows })
    }

    fn row_at(&self, t: f64) -> (Vec<f64>, Vec<f64>) {
        let n = self.times.len();
        if t <= self.times[0] {
            return (self.rows[0].clone(), vec![0.0; self.x.len()]);
        }
        if t >= self.times[n - 1] {
            return (self.rows[n - 1].clone(), vec![0.0; self.x.len()]);
        }
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.times[mid] <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let span = self.times[hi] - self.times[lo];
        let w = (t - self.times[lo]) / span;
        let y: Vec<f64> = self.rows[lo]
            .iter()
            .zip(&self.rows[hi])
            .map(|(a, b)| a + (b - a) * w)
            .collect();
        let v: Vec<f64> = self.rows[lo]
            .iter()
            .zip(&self.rows[hi])
            .map(|(a, b)| (b - a) / span)
            .collect();
        (y, v)
    }
}

fn parse_floats(fields: &[&str], lineno: usize) -> Result<Vec<f64>, String> {
    fields
        .iter()
        .map(|f| {
            f.parse::<f64>()
                .map_err(|_| format!("line {}: not a number: {f:?}", lineno + 1))
        })
        .collect()
}

impl ShapeProgram for TabulatedProgram {
    fn shape_at(&self, t: f64) -> coxswim_core::Result<(ShapeCurve, ShapeVelocityField)> {
        let (y, v) = self.row_at(t);
        let curve = curve_from_graph(&self.x, &y)?;
        let field = ShapeVelocityField::new(
            self.x.clone(),
            v.into_iter().map(|vy| Vec2::new(0.0, vy)).collect(),
        )?;
        Ok((curve, field))
    }
}

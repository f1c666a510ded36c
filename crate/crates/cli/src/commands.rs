//! Command implementations. Each command computes its complete output
//! bundle in memory; `--seedless` builds the bundle twice and byte-compares
//! the two before anything is written.

use std::path::Path;

use serde::Serialize;

use coxswim_core::{controllability_report, simulate, GridSpec, Pose, SimOptions, Trajectory};

use crate::config::{Config, ScanSection};
use crate::output::{
    fmt_num, fmt_time_label, plots_svg, snapshot_csv, trajectory_csv, Bundle,
};
use crate::CliError;

#[derive(Debug, Serialize)]
struct RunMeta<'a> {
    version: &'static str,
    command: &'a str,
    config: &'a Config,
}

fn run_meta(command: &str, config: &Config) -> Vec<u8> {
    let meta = RunMeta {
        version: env!("CARGO_PKG_VERSION"),
        command,
        config,
    };
    let mut text = serde_json::to_string_pretty(&meta).expect("config serializes");
    text.push('\n');
    text.into_bytes()
}

/// Resolve the effective config: apply the `--mode` override so the emitted
/// metadata reflects what actually ran.
pub fn resolve_mode(config: &Config, mode: Option<&str>) -> Result<Config, CliError> {
    let mut resolved = config.clone();
    if let Some(mode) = mode {
        match mode {
            "paper" | "full" => resolved.run.coupling = mode.to_string(),
            other => {
                return Err(CliError::config(format!(
                    "--mode must be paper or full, got {other:?}"
                )))
            }
        }
    }
    resolved.run.coupling()?;
    Ok(resolved)
}

fn run_trajectory(config: &Config, config_dir: &Path) -> Result<Trajectory, CliError> {
    let params = config.model.params()?;
    let program = config.build_program(config_dir)?;
    let options = SimOptions {
        coupling: config.run.coupling()?,
        sampling: config.run.sampling()?,
        condition_cap: config.model.condition_cap,
    };
    simulate(
        program.as_ref(),
        &params,
        config.run.t_end,
        config.run.dt,
        &options,
        Pose::identity(),
    )
    .map_err(CliError::numerical)
}

/// Full simulation command: trajectory.csv, shapes_<t>.csv snapshots,
/// plots.svg, run_meta.json.
pub fn simulate_bundle(config: &Config, config_dir: &Path) -> Result<Bundle, CliError> {
    let traj = run_trajectory(config, config_dir)?;
    let program = config.build_program(config_dir)?;
    let mut bundle = Bundle::default();
    bundle.push("trajectory.csv", trajectory_csv(&traj));
    for &t in &config.run.snapshot_times {
        let index = (t / config.run.dt).round() as usize;
        let sample = traj.samples.get(index).ok_or_else(|| {
            CliError::config(format!("snapshot time {t} beyond the trajectory"))
        })?;
        let (curve, _) = program.shape_at(t).map_err(CliError::numerical)?;
        bundle.push(
            format!("shapes_{}.csv", fmt_time_label(t)),
            snapshot_csv(&curve, &sample.pose),
        );
    }
    bundle.push("plots.svg", plots_svg(&traj));
    bundle.push("run_meta.json", run_meta("simulate", config));
    Ok(bundle)
}

#[derive(Debug, Serialize)]
struct ScanFailure {
    alpha1: f64,
    alpha2: f64,
    error: String,
}

#[derive(Debug, Serialize)]
struct ScanSummary {
    points: usize,
    weak_count: usize,
    strong_count: usize,
    failure_count: usize,
    failures: Vec<ScanFailure>,
}

/// Controllability scan: rank_map.csv and summary.json.
pub fn scan_bundle(config: &Config) -> Result<Bundle, CliError> {
    let params = config.model.params()?;
    let scan = config.scan.clone().unwrap_or_else(ScanSection::default);
    let grid = GridSpec {
        alpha1_min: scan.alpha1_min,
        alpha1_max: scan.alpha1_max,
        n1: scan.n1,
        alpha2_min: scan.alpha2_min,
        alpha2_max: scan.alpha2_max,
        n2: scan.n2,
    };
    let rows = controllability_report(&grid, &params).map_err(|e| match e {
        coxswim_core::Error::InvalidParam { .. } => CliError::config(format!("[scan] {e}")),
        other => CliError::numerical(other),
    })?;

    let mut csv = String::from("alpha1,alpha2,rank_weak,rank_strong,weak,strong\n");
    let mut failures = Vec::new();
    let mut weak_count = 0usize;
    let mut strong_count = 0usize;
    for row in &rows {
        use std::fmt::Write as _;
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            fmt_num(row.alpha1),
            fmt_num(row.alpha2),
            row.rank_weak,
            row.rank_strong,
            row.weak,
            row.strong
        )
        .expect("string write");
        weak_count += row.weak as usize;
        strong_count += row.strong as usize;
        if let Some(error) = &row.error {
            failures.push(ScanFailure {
                alpha1: row.alpha1,
                alpha2: row.alpha2,
                error: error.clone(),
            });
        }
    }
    let summary = ScanSummary {
        points: rows.len(),
        weak_count,
        strong_count,
        failure_count: failures.len(),
        failures,
    };
    let mut bundle = Bundle::default();
    bundle.push("rank_map.csv", csv.into_bytes());
    let mut summary_text =
        serde_json::to_string_pretty(&summary).expect("summary serializes");
    summary_text.push('\n');
    bundle.push("summary.json", summary_text.into_bytes());
    bundle.push("run_meta.json", run_meta("purcell-scan", config));
    Ok(bundle)
}

/// Parameters a sweep may vary.
pub const SWEEP_PARAMETERS: &[&str] = &["h", "delta", "beta", "c1", "c2", "c3", "dt"];

fn apply_sweep_value(config: &Config, parameter: &str, value: f64) -> Result<Config, CliError> {
    let mut varied = config.clone();
    match parameter {
        "h" => varied.model.h = value,
        "delta" => varied.model.delta = value,
        "beta" => varied.model.beta = value,
        "dt" => varied.run.dt = value,
        "c1" | "c2" | "c3" => {
            if varied.program.kind != "bump" {
                return Err(CliError::config(format!(
                    "sweep parameter {parameter} applies only to bump programs"
                )));
            }
            match parameter {
                "c1" => varied.program.c1 = Some(value),
                "c2" => varied.program.c2 = Some(value),
                _ => varied.program.c3 = Some(value),
            }
        }
        other => {
            return Err(CliError::config(format!(
                "unknown sweep parameter {other:?}; expected one of {SWEEP_PARAMETERS:?}"
            )))
        }
    }
    varied.run.validate()?;
    varied.model.params()?;
    Ok(varied)
}

/// Parameter sweep: one simulation per value, net displacement per row.
pub fn sweep_bundle(
    config: &Config,
    config_dir: &Path,
    parameter: &str,
    values: &[f64],
) -> Result<Bundle, CliError> {
    if values.is_empty() {
        return Err(CliError::config("sweep needs at least one value".to_string()));
    }
    let mut csv = String::from("value,net_abs_dx,net_abs_dy,net_dtheta\n");
    for &value in values {
        let varied = apply_sweep_value(config, parameter, value)?;
        let traj = run_trajectory(&varied, config_dir)?;
        let (dx, dy, dtheta) = traj.net_displacement();
        use std::fmt::Write as _;
        writeln!(
            csv,
            "{},{},{},{}",
            fmt_num(value),
            fmt_num(dx.abs()),
            fmt_num(dy.abs()),
            fmt_num(dtheta)
        )
        .expect("string write");
    }
    let mut bundle = Bundle::default();
    bundle.push("sweep.csv", csv.into_bytes());
    bundle.push("run_meta.json", run_meta("sweep", config));
    Ok(bundle)
}

/// `--seedless` support: nothing in the pipeline draws randomness, so two
/// independent evaluations must agree byte-for-byte.
pub fn build_deterministic(
    seedless: bool,
    build: impl Fn() -> Result<Bundle, CliError>,
) -> Result<Bundle, CliError> {
    let bundle = build()?;
    if seedless {
        let second = build()?;
        if bundle != second {
            return Err(CliError::runtime(
                "determinism check failed: two evaluations produced different bytes".to_string(),
            ));
        }
    }
    Ok(bundle)
}

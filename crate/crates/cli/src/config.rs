//! Run configuration: a single TOML file with nested sections, versioned by
//! `schema_version`. Everything a run does is a deterministic function of
//! this file plus the command-line overrides.

use std::path::Path;

use serde::{Deserialize, Serialize};

use coxswim_core::{Coupling, ModelParams, SamplingMode};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub model: ModelSection,
    pub program: ProgramSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub scan: Option<ScanSection>,
    #[serde(default)]
    pub sweep: Option<SweepSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub h: f64,
    pub delta: f64,
    pub beta: f64,
    pub order: u8,
    pub n_quad: usize,
    /// Cap on the condition estimate of the balance solve.
    pub condition_cap: f64,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            h: coxswim_core::geometry::DEFAULT_H,
            delta: coxswim_core::geometry::DEFAULT_DELTA,
            beta: coxswim_core::geometry::DEFAULT_BETA,
            order: coxswim_core::geometry::DEFAULT_ORDER,
            n_quad: coxswim_core::geometry::DEFAULT_N_QUAD,
            condition_cap: coxswim_core::solver::DEFAULT_CONDITION_CAP,
        }
    }
}

impl ModelSection {
    pub fn params(&self) -> Result<ModelParams, CliError> {
        ModelParams::new(self.h, self.delta)
            .and_then(|p| p.with_beta(self.beta))
            .and_then(|p| p.with_order(self.order))
            .and_then(|p| p.with_n_quad(self.n_quad))
            .map_err(|e| CliError::config(format!("[model] {e}")))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramSection {
    /// "bump" | "purcell" | "tabulated"
    pub kind: String,

    // Bump program.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_samples: Option<usize>,

    // 3-link program: piecewise-linear joint-angle paths.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1_times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha1_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2_times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha2_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fractions: Option<[f64; 3]>,

    // Tabulated program: path to a (x, y(t)) table.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_end: f64,
    pub dt: f64,
    /// "paper" (head-only resistance; default) | "full" (full-body coupling).
    pub coupling: String,
    /// "left" (default) | "midpoint" step sampling.
    pub sampling: String,
    pub snapshot_times: Vec<f64>,
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            t_end: 15.0,
            dt: 0.01,
            coupling: "paper".to_string(),
            sampling: "left".to_string(),
            snapshot_times: vec![0.0, 3.0, 6.0, 9.0, 12.0, 15.0],
        }
    }
}

impl RunSection {
    pub fn coupling(&self) -> Result<Coupling, CliError> {
        match self.coupling.as_str() {
            "paper" => Ok(Coupling::HeadOnly),
            "full" => Ok(Coupling::FullBody),
            other => Err(CliError::config(format!(
                "[run] coupling must be \"paper\" or \"full\", got {other:?}"
            ))),
        }
    }

    pub fn sampling(&self) -> Result<SamplingMode, CliError> {
        match self.sampling.as_str() {
            "left" => Ok(SamplingMode::LeftEndpoint),
            "midpoint" => Ok(SamplingMode::Midpoint),
            other => Err(CliError::config(format!(
                "[run] sampling must be \"left\" or \"midpoint\", got {other:?}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.t_end > 0.0) || !(self.dt > 0.0) {
            return Err(CliError::config(
                "[run] t_end and dt must be positive".to_string(),
            ));
        }
        let steps = self.t_end / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(CliError::config(
                "[run] t_end must be an integral number of steps".to_string(),
            ));
        }
        for &t in &self.snapshot_times {
            if t < 0.0 || t > self.t_end {
                return Err(CliError::config(format!(
                    "[run] snapshot time {t} outside [0, t_end]"
                )));
            }
            let k = t / self.dt;
            if (k - k.round()).abs() > 1e-9 * k.max(1.0) {
                return Err(CliError::config(format!(
                    "[run] snapshot time {t} does not land on the step grid"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub alpha1_min: f64,
    pub alpha1_max: f64,
    pub n1: usize,
    pub alpha2_min: f64,
    pub alpha2_max: f64,
    pub n2: usize,
}

impl Default for ScanSection {
    fn default() -> Self {
        ScanSection {
            alpha1_min: -2.5,
            alpha1_max: 2.5,
            n1: 21,
            alpha2_min: -2.5,
            alpha2_max: 2.5,
            n2: 21,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub parameter: String,
    pub values: Vec<f64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: Config = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        if config.schema_version != SCHEMA_VERSION {
            return Err(CliError::config(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                config.schema_version
            )));
        }
        config.run.validate()?;
        config.model.params()?;
        config.validate_program()?;
        Ok(config)
    }

    fn validate_program(&self) -> Result<(), CliError> {
        match self.program.kind.as_str() {
            "bump" => {
                let c1 = self.program.c1.unwrap_or(1e6);
                let c2 = self.program.c2.unwrap_or(15.0);
                let c3 = self.program.c3.unwrap_or(1.0 / 15.0);
                coxswim_core::BumpParams::new(c1, c2, c3)
                    .map_err(|e| CliError::config(format!("[program] {e}")))?;
                if self.program.grid_samples.unwrap_or(201) < 3 {
                    return Err(CliError::config(
                        "[program] grid_samples must be at least 3".to_string(),
                    ));
                }
                Ok(())
            }
            "purcell" => {
                for (name, field) in [
                    ("alpha1_times", &self.program.alpha1_times),
                    ("alpha1_values", &self.program.alpha1_values),
                    ("alpha2_times", &self.program.alpha2_times),
                    ("alpha2_values", &self.program.alpha2_values),
                ] {
                    if field.is_none() {
                        return Err(CliError::config(format!(
                            "[program] purcell programs need {name}"
                        )));
                    }
                }
                Ok(())
            }
            "tabulated" => {
                if self.program.path.is_none() {
                    return Err(CliError::config(
                        "[program] tabulated programs need a path".to_string(),
                    ));
                }
                Ok(())
            }
            other => Err(CliError::config(format!(
                "[program] kind must be \"bump\", \"purcell\", or \"tabulated\", got {other:?}"
            ))),
        }
    }

    /// Build the shape program the config describes. Tabulated paths are
    /// resolved relative to the config file's directory.
    pub fn build_program(
        &self,
        config_dir: &Path,
    ) -> Result<Box<dyn coxswim_core::ShapeProgram>, CliError> {
        match self.program.kind.as_str() {
            "bump" => {
                let params = coxswim_core::BumpParams::new(
                    self.program.c1.unwrap_or(1e6),
                    self.program.c2.unwrap_or(15.0),
                    self.program.c3.unwrap_or(1.0 / 15.0),
                )
                .map_err(|e| CliError::config(format!("[program] {e}")))?;
                let program = coxswim_core::BumpProgram::new(
                    params,
                    self.program.grid_samples.unwrap_or(201),
                )
                .map_err(|e| CliError::config(format!("[program] {e}")))?;
                Ok(Box::new(program))
            }
            "purcell" => {
                let path = |times: &Option<Vec<f64>>, values: &Option<Vec<f64>>| {
                    coxswim_core::PiecewiseLinearPath::new(
                        times.clone().unwrap_or_default(),
                        values.clone().unwrap_or_default(),
                    )
                    .map_err(|e| CliError::config(format!("[program] {e}")))
                };
                let p1 = path(&self.program.alpha1_times, &self.program.alpha1_values)?;
                let p2 = path(&self.program.alpha2_times, &self.program.alpha2_values)?;
                let mut program = coxswim_core::PurcellProgram::new(p1, p2);
                if let Some(fractions) = self.program.fractions {
                    program.fractions = fractions;
                }
                Ok(Box::new(program))
            }
            "tabulated" => {
                let rel = self.program.path.as_deref().unwrap_or_default();
                let full = config_dir.join(rel);
                let program = crate::tabulated::TabulatedProgram::load(&full)?;
                Ok(Box::new(program))
            }
            other => Err(CliError::config(format!("[program] unknown kind {other:?}"))),
        }
    }
}

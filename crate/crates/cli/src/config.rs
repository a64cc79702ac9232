//! Run configuration: defaults, config-file parsing, flag merging.
//!
//! Precedence is flags > config file > built-in defaults. The config file is
//! plain `key = value` lines with dotted keys (`bath.T = 10`); `#` starts a
//! comment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use redlin_core::bath::BathParams;
use redlin_core::integrals::QuadratureConfig;
use redlin_core::kernels::QubitParams;

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Redfield,
    Lindblad,
    Both,
}

impl ModelChoice {
    pub fn models(&self) -> Vec<redlin_core::kernels::Model> {
        use redlin_core::kernels::Model;
        match self {
            ModelChoice::Redfield => vec![Model::Redfield],
            ModelChoice::Lindblad => vec![Model::Lindblad],
            ModelChoice::Both => vec![Model::Redfield, Model::Lindblad],
        }
    }
}

impl FromStr for ModelChoice {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "redfield" => Ok(ModelChoice::Redfield),
            "lindblad" => Ok(ModelChoice::Lindblad),
            "both" => Ok(ModelChoice::Both),
            other => Err(UsageError(format!(
                "unknown model '{other}' (expected redfield|lindblad|both)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(UsageError(format!(
                "unknown format '{other}' (expected csv|json)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl FromStr for Spacing {
    type Err = UsageError;
    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "linear" => Ok(Spacing::Linear),
            "log" => Ok(Spacing::Log),
            other => Err(UsageError(format!(
                "unknown spacing '{other}' (expected linear|log)"
            ))),
        }
    }
}

/// Fully resolved run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelChoice,
    pub qubit: QubitParams,
    pub bath: BathParams,
    pub quadrature: QuadratureConfig,
    pub format: OutputFormat,
    pub out: Option<String>,
    pub precision: usize,
}

/// Raw (pre-validation) values gathered from defaults, file and flags.
#[derive(Debug, Clone)]
pub struct RawConfig {
    pub model: ModelChoice,
    pub omega0: f64,
    pub f1: f64,
    pub f2: f64,
    pub temperature: f64,
    pub g: f64,
    pub s: f64,
    pub omega_c: f64,
    pub format: OutputFormat,
    pub out: Option<String>,
    pub precision: usize,
    pub sweep_from: f64,
    pub sweep_to: f64,
    pub sweep_steps: usize,
    pub sweep_spacing: Spacing,
    pub t_max: f64,
    pub samples: usize,
    pub rho0: (f64, f64, f64),
}

impl Default for RawConfig {
    fn default() -> Self {
        // figure defaults: T=10, omega_c=100, s=1, g=1, f1=f2=1, omega0=5
        Self {
            model: ModelChoice::Both,
            omega0: 5.0,
            f1: 1.0,
            f2: 1.0,
            temperature: 10.0,
            g: 1.0,
            s: 1.0,
            omega_c: 100.0,
            format: OutputFormat::Csv,
            out: None,
            precision: 12,
            sweep_from: 1.0,
            sweep_to: 50.0,
            sweep_steps: 200,
            sweep_spacing: Spacing::Linear,
            t_max: 1.0,
            samples: 100,
            rho0: (1.0, 0.0, 0.0),
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, UsageError> {
    value
        .parse()
        .map_err(|_| UsageError(format!("config key '{key}': not a number: '{value}'")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, UsageError> {
    value
        .parse()
        .map_err(|_| UsageError(format!("config key '{key}': not an integer: '{value}'")))
}

impl RawConfig {
    /// Parse a `key = value` config file into a key map.
    pub fn read_file(path: &Path) -> Result<BTreeMap<String, String>, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                UsageError(format!(
                    "config {}:{}: expected 'key = value', got '{raw}'",
                    path.display(),
                    lineno + 1
                ))
            })?;
            map.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(map)
    }

    pub fn apply_file(&mut self, map: &BTreeMap<String, String>) -> Result<(), UsageError> {
        for (key, value) in map {
            match key.as_str() {
                "model" => self.model = value.parse()?,
                "qubit.omega0" => self.omega0 = parse_f64(key, value)?,
                "qubit.f1" => self.f1 = parse_f64(key, value)?,
                "qubit.f2" => self.f2 = parse_f64(key, value)?,
                "bath.T" => self.temperature = parse_f64(key, value)?,
                "bath.g" => self.g = parse_f64(key, value)?,
                "bath.s" => self.s = parse_f64(key, value)?,
                "bath.omega_c" => self.omega_c = parse_f64(key, value)?,
                "output.format" => self.format = value.parse()?,
                "output.path" => self.out = Some(value.to_string()),
                "output.precision" => self.precision = parse_usize(key, value)?,
                "sweep.from" => self.sweep_from = parse_f64(key, value)?,
                "sweep.to" => self.sweep_to = parse_f64(key, value)?,
                "sweep.steps" => self.sweep_steps = parse_usize(key, value)?,
                "sweep.spacing" => self.sweep_spacing = value.parse()?,
                "evolve.t_max" => self.t_max = parse_f64(key, value)?,
                "evolve.samples" => self.samples = parse_usize(key, value)?,
                "evolve.rho0" => self.rho0 = parse_rho0(value)?,
                other => {
                    return Err(UsageError(format!("unknown config key '{other}'")));
                }
            }
        }
        Ok(())
    }

    /// Validate and freeze into a RunConfig.
    pub fn resolve(&self) -> Result<RunConfig, UsageError> {
        let bath = BathParams::new(self.g, self.s, self.omega_c, self.temperature)
            .map_err(|e| UsageError(e.to_string()))?;
        let qubit = QubitParams::new(self.omega0, self.f1, self.f2)
            .map_err(|e| UsageError(e.to_string()))?;
        if !(6..=17).contains(&self.precision) {
            return Err(UsageError(format!(
                "precision must be in [6, 17], got {}",
                self.precision
            )));
        }
        Ok(RunConfig {
            model: self.model,
            qubit,
            bath,
            quadrature: QuadratureConfig::default(),
            format: self.format,
            out: self.out.clone(),
            precision: self.precision,
        })
    }

    pub fn sweep_grid(&self) -> Result<Vec<f64>, UsageError> {
        use redlin_core::sweep::SweepRequest;
        if self.sweep_steps < 2 {
            return Err(UsageError(format!(
                "sweep needs steps >= 2, got {}",
                self.sweep_steps
            )));
        }
        // negated form so NaN bounds are rejected as well
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(self.sweep_from < self.sweep_to) {
            return Err(UsageError(format!(
                "sweep bounds must satisfy from < to, got [{}, {}]",
                self.sweep_from, self.sweep_to
            )));
        }
        match self.sweep_spacing {
            Spacing::Linear => Ok(SweepRequest::linear_grid(
                self.sweep_from,
                self.sweep_to,
                self.sweep_steps,
            )),
            Spacing::Log => SweepRequest::log_grid(self.sweep_from, self.sweep_to, self.sweep_steps)
                .ok_or_else(|| UsageError("log spacing requires positive bounds".into())),
        }
    }
}

pub fn parse_rho0(s: &str) -> Result<(f64, f64, f64), UsageError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(UsageError(format!(
            "rho0 must be three comma-separated Bloch components, got '{s}'"
        )));
    }
    let v: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse::<f64>()).collect();
    let v = v.map_err(|_| UsageError(format!("rho0 components must be numbers, got '{s}'")))?;
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(UsageError(format!(
            "rho0 Bloch vector must have norm <= 1, got {norm}"
        )));
    }
    Ok((v[0], v[1], v[2]))
}

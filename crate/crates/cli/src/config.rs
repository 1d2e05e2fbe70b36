//! Run configuration: defaults, flat `key = value` config files, and
//! command-line overrides, merged in that order of precedence.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use spinor_gordon::fields::FieldError;
use spinor_gordon::scenarios::{ScenarioError, SCENARIO_NAMES};
use spinor_gordon::{Grid, PhysicalParams, SpacetimePoint, Tolerances};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config: {0}")]
    Invalid(String),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(ConfigError::Invalid(format!(
                "unknown format '{other}' (expected json or csv)"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

/// One layer of settings; `None` means "not specified at this layer".
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub scenarios: Option<Vec<String>>,
    pub grid_corners: Option<[f64; 8]>,
    pub grid_counts: Option<[usize; 4]>,
    pub m: Option<f64>,
    pub hbar: Option<f64>,
    pub c: Option<f64>,
    pub tols: Vec<(String, f64)>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
    pub parallel: Option<bool>,
}

impl Overrides {
    /// `other` wins where it specifies a value; tolerance overrides stack
    /// with `other`'s applied last.
    fn layered_under(self, other: Overrides) -> Overrides {
        let mut tols = self.tols;
        tols.extend(other.tols);
        Overrides {
            scenarios: other.scenarios.or(self.scenarios),
            grid_corners: other.grid_corners.or(self.grid_corners),
            grid_counts: other.grid_counts.or(self.grid_counts),
            m: other.m.or(self.m),
            hbar: other.hbar.or(self.hbar),
            c: other.c.or(self.c),
            tols,
            format: other.format.or(self.format),
            out: other.out.or(self.out),
            parallel: other.parallel.or(self.parallel),
        }
    }
}

/// Fully resolved settings for `run`.
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub scenarios: Vec<String>,
    pub grid: Grid,
    pub params: PhysicalParams,
    pub tolerances: Tolerances,
    pub format: OutputFormat,
    pub out_dir: PathBuf,
    pub parallel: bool,
}

pub fn parse_f64_list<const N: usize>(s: &str, what: &str) -> Result<[f64; N], ConfigError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(ConfigError::Invalid(format!(
            "{what} needs {N} comma-separated numbers, got {}",
            parts.len()
        )));
    }
    let mut out = [0.0; N];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .parse()
            .map_err(|_| ConfigError::Invalid(format!("{what}: bad number '{p}'")))?;
    }
    Ok(out)
}

pub fn parse_usize_list<const N: usize>(s: &str, what: &str) -> Result<[usize; N], ConfigError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(ConfigError::Invalid(format!(
            "{what} needs {N} comma-separated integers, got {}",
            parts.len()
        )));
    }
    let mut out = [0; N];
    for (i, p) in parts.iter().enumerate() {
        out[i] = p
            .parse()
            .map_err(|_| ConfigError::Invalid(format!("{what}: bad integer '{p}'")))?;
    }
    Ok(out)
}

pub fn parse_tol(s: &str) -> Result<(String, f64), ConfigError> {
    let (label, value) = s
        .split_once('=')
        .ok_or_else(|| ConfigError::Invalid(format!("tolerance override '{s}' is not label=value")))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| ConfigError::Invalid(format!("tolerance '{label}': bad number '{value}'")))?;
    Ok((label.trim().to_string(), value))
}

/// Parses a flat `key = value` config file. `#` starts a comment; blank
/// lines are ignored. Keys mirror the long command-line flags, with
/// tolerance entries spelled `tol.<label>`.
pub fn parse_config_file(text: &str) -> Result<Overrides, ConfigError> {
    let mut over = Overrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ConfigError::Invalid(format!("line {}: expected key = value, got '{raw}'", idx + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "scenario" | "scenarios" => {
                over.scenarios =
                    Some(value.split(',').map(|s| s.trim().to_string()).collect());
            }
            "grid" => over.grid_corners = Some(parse_f64_list::<8>(value, "grid")?),
            "grid-counts" | "grid_counts" => {
                over.grid_counts = Some(parse_usize_list::<4>(value, "grid-counts")?)
            }
            "m" => over.m = Some(parse_scalar(key, value)?),
            "hbar" => over.hbar = Some(parse_scalar(key, value)?),
            "c" => over.c = Some(parse_scalar(key, value)?),
            "format" => over.format = Some(value.parse()?),
            "out" => over.out = Some(PathBuf::from(value)),
            "parallel" => {
                over.parallel = Some(value.parse().map_err(|_| {
                    ConfigError::Invalid(format!("parallel: expected true/false, got '{value}'"))
                })?)
            }
            _ => {
                if let Some(label) = key.strip_prefix("tol.") {
                    let v: f64 = value.parse().map_err(|_| {
                        ConfigError::Invalid(format!("tol.{label}: bad number '{value}'"))
                    })?;
                    over.tols.push((label.to_string(), v));
                } else {
                    return Err(ConfigError::Invalid(format!("unknown key '{key}'")));
                }
            }
        }
    }
    Ok(over)
}

fn parse_scalar(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse()
        .map_err(|_| ConfigError::Invalid(format!("{key}: bad number '{value}'")))
}

/// Expands `all`, validates names, preserves order, drops duplicates.
pub fn resolve_scenarios(requested: &[String]) -> Result<Vec<String>, ConfigError> {
    let mut out: Vec<String> = Vec::new();
    for name in requested {
        if name == "all" {
            for n in SCENARIO_NAMES {
                if !out.iter().any(|o| o == n) {
                    out.push(n.to_string());
                }
            }
        } else if SCENARIO_NAMES.contains(&name.as_str()) {
            if !out.contains(name) {
                out.push(name.clone());
            }
        } else {
            return Err(ConfigError::Invalid(format!(
                "unknown scenario '{name}'; valid names: {}, all",
                SCENARIO_NAMES.join(", ")
            )));
        }
    }
    Ok(out)
}

/// Applies precedence (defaults, then config file, then flags) and
/// validates the result.
pub fn resolve(file_layer: Option<Overrides>, flag_layer: Overrides) -> Result<RunSettings, ConfigError> {
    let merged = match file_layer {
        Some(file) => file.layered_under(flag_layer),
        None => flag_layer,
    };

    let scenarios = resolve_scenarios(
        &merged.scenarios.unwrap_or_else(|| vec!["all".to_string()]),
    )?;

    let corners = merged.grid_corners.unwrap_or([-2.0, -2.0, -2.0, -2.0, 2.0, 2.0, 2.0, 2.0]);
    let counts = merged.grid_counts.unwrap_or([9, 5, 5, 9]);
    for (k, &n) in counts.iter().enumerate() {
        if n < 2 {
            return Err(ConfigError::Invalid(format!(
                "grid-counts axis {k}: need at least 2 samples, got {n}"
            )));
        }
    }
    let grid = Grid::new(
        SpacetimePoint::new(corners[0], corners[1], corners[2], corners[3]),
        SpacetimePoint::new(corners[4], corners[5], corners[6], corners[7]),
        counts,
    )?;

    let params = PhysicalParams::new(
        merged.hbar.unwrap_or(1.0),
        merged.c.unwrap_or(1.0),
        merged.m.unwrap_or(1.0),
    )?;

    let mut tolerances = Tolerances::default();
    for (label, value) in &merged.tols {
        tolerances.set(label, *value)?;
    }

    Ok(RunSettings {
        scenarios,
        grid,
        params,
        tolerances,
        format: merged.format.unwrap_or(OutputFormat::Json),
        out_dir: merged.out.unwrap_or_else(|| PathBuf::from("reports")),
        parallel: merged.parallel.unwrap_or(false),
    })
}

//! Run configuration: command-line flags layered over an optional
//! `key = value` file named by `TRIWELL_CONFIG`, layered over defaults.

use std::fmt;
use std::path::{Path, PathBuf};

use triwell::{GridSpec, PotentialParams};

pub const CONFIG_ENV: &str = "TRIWELL_CONFIG";
pub const MAX_SWEEP_COUNT: usize = 10_000;
pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_BETA: f64 = 2.0;
/// Default half-interval in units of `1/(β²√(2α))`.
pub const DEFAULT_SCALED_T: f64 = 12.0;

const KEYS: [&str; 9] = ["alpha", "beta", "alpha_range", "beta_range", "T", "x_max", "n_points", "format", "out"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message)
    }
}

/// Unvalidated settings from one layer, kept as text.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub alpha_range: Option<Vec<String>>,
    pub beta_range: Option<Vec<String>>,
    pub t: Option<String>,
    pub x_max: Option<String>,
    pub n_points: Option<String>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
}

impl RawConfig {
    pub fn parse_file_contents(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::new(
                    CONFIG_ENV,
                    format!("line {}: expected key = value, got '{line}'", lineno + 1),
                ));
            };
            let key = key.trim();
            let value = value.trim().to_string();
            let range = || {
                value
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(str::to_string)
                    .collect()
            };
            match key {
                "alpha" => raw.alpha = Some(value),
                "beta" => raw.beta = Some(value),
                "alpha_range" => raw.alpha_range = Some(range()),
                "beta_range" => raw.beta_range = Some(range()),
                "T" => raw.t = Some(value),
                "x_max" => raw.x_max = Some(value),
                "n_points" => raw.n_points = Some(value),
                "format" => raw.format = Some(value),
                "out" => raw.out = Some(PathBuf::from(value)),
                other => {
                    return Err(ConfigError::new(
                        other,
                        format!("unknown configuration key '{other}' (known keys: {})", KEYS.join(", ")),
                    ))
                }
            }
        }
        Ok(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new(CONFIG_ENV, format!("cannot read config file {}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
    }

    fn check_exclusive(&self) -> Result<(), ConfigError> {
        if self.alpha.is_some() && self.alpha_range.is_some() {
            return Err(ConfigError::new("alpha_range", "alpha and alpha_range are mutually exclusive"));
        }
        if self.beta.is_some() && self.beta_range.is_some() {
            return Err(ConfigError::new("beta_range", "beta and beta_range are mutually exclusive"));
        }
        Ok(())
    }

    /// `self` over `lower`; a point value and a range for the same parameter
    /// occupy one slot, so either replaces the other.
    pub fn over(self, lower: RawConfig) -> Result<RawConfig, ConfigError> {
        self.check_exclusive()?;
        lower.check_exclusive()?;
        let (alpha, alpha_range) = if self.alpha.is_some() || self.alpha_range.is_some() {
            (self.alpha, self.alpha_range)
        } else {
            (lower.alpha, lower.alpha_range)
        };
        let (beta, beta_range) = if self.beta.is_some() || self.beta_range.is_some() {
            (self.beta, self.beta_range)
        } else {
            (lower.beta, lower.beta_range)
        };
        Ok(RawConfig {
            alpha,
            beta,
            alpha_range,
            beta_range,
            t: self.t.or(lower.t),
            x_max: self.x_max.or(lower.x_max),
            n_points: self.n_points.or(lower.n_points),
            format: self.format.or(lower.format),
            out: self.out.or(lower.out),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Swept {
    Alpha,
    Beta,
}

impl Swept {
    pub fn key(self) -> &'static str {
        match self {
            Swept::Alpha => "alpha_range",
            Swept::Beta => "beta_range",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    /// `count` evenly spaced values from `start` to `stop` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.stop } else { self.start + i as f64 * step }).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Point { alpha: f64, beta: f64 },
    Sweep { swept: Swept, fixed: f64, range: Range },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    /// Explicit half-interval; `None` means `12/(β²√(2α))` per point.
    pub t: Option<f64>,
    pub x_max: Option<f64>,
    pub n_points: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

fn positive(field: &str, text: &str) -> Result<f64, ConfigError> {
    let value: f64 =
        text.trim().parse().map_err(|_| ConfigError::new(field, format!("{field} must be a number (got '{text}')")))?;
    if !(value.is_finite() && value > 0.0) {
        return Err(ConfigError::new(field, format!("{field} must be positive (got {text})")));
    }
    Ok(value)
}

fn range(field: &str, parts: &[String]) -> Result<Range, ConfigError> {
    if parts.len() != 3 {
        return Err(ConfigError::new(field, format!("{field} needs START STOP COUNT (got {} values)", parts.len())));
    }
    let start = positive(field, &parts[0])?;
    let stop = positive(field, &parts[1])?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| ConfigError::new(field, format!("{field} count must be an integer (got '{}')", parts[2])))?;
    if !(2..=MAX_SWEEP_COUNT).contains(&count) {
        return Err(ConfigError::new(
            field,
            format!("{field} count must be between 2 and {MAX_SWEEP_COUNT} (got {count})"),
        ));
    }
    if start == stop {
        return Err(ConfigError::new(field, format!("{field} start and stop must differ")));
    }
    Ok(Range { start, stop, count })
}

impl RunConfig {
    pub fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        raw.check_exclusive()?;
        let alpha = raw.alpha.as_deref().map(|s| positive("alpha", s)).transpose()?;
        let beta = raw.beta.as_deref().map(|s| positive("beta", s)).transpose()?;
        let alpha_range = raw.alpha_range.as_deref().map(|r| range("alpha_range", r)).transpose()?;
        let beta_range = raw.beta_range.as_deref().map(|r| range("beta_range", r)).transpose()?;

        let mode = match (alpha_range, beta_range) {
            (Some(_), Some(_)) => {
                return Err(ConfigError::new("beta_range", "at most one of alpha_range and beta_range may be set"))
            }
            (Some(range), None) => Mode::Sweep { swept: Swept::Alpha, fixed: beta.unwrap_or(DEFAULT_BETA), range },
            (None, Some(range)) => Mode::Sweep { swept: Swept::Beta, fixed: alpha.unwrap_or(DEFAULT_ALPHA), range },
            (None, None) => Mode::Point { alpha: alpha.unwrap_or(DEFAULT_ALPHA), beta: beta.unwrap_or(DEFAULT_BETA) },
        };

        let t = raw.t.as_deref().map(|s| positive("T", s)).transpose()?;
        let x_max = raw.x_max.as_deref().map(|s| positive("x_max", s)).transpose()?;
        let n_points = raw
            .n_points
            .as_deref()
            .map(|s| {
                s.trim().parse::<usize>().map_err(|_| {
                    ConfigError::new("n_points", format!("n_points must be a positive integer (got '{s}')"))
                })
            })
            .transpose()?;
        let format = match raw.format.as_deref().map(str::trim) {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => {
                return Err(ConfigError::new("format", format!("format must be json or csv (got '{other}')")))
            }
        };
        Ok(RunConfig { mode, t, x_max, n_points, format, out: raw.out })
    }

    /// Flags over the file named by `TRIWELL_CONFIG` (if set) over defaults.
    pub fn resolve(flags: RawConfig, config_path: Option<PathBuf>) -> Result<Self, ConfigError> {
        let file = match config_path {
            Some(path) => RawConfig::from_file(&path)?,
            None => RawConfig::default(),
        };
        Self::from_raw(flags.over(file)?)
    }

    /// `(α, β)` pairs in sweep order, or the single point.
    pub fn points(&self) -> Vec<(f64, f64)> {
        match self.mode {
            Mode::Point { alpha, beta } => vec![(alpha, beta)],
            Mode::Sweep { swept: Swept::Beta, fixed, range } => {
                range.values().into_iter().map(|b| (fixed, b)).collect()
            }
            Mode::Sweep { swept: Swept::Alpha, fixed, range } => {
                range.values().into_iter().map(|a| (a, fixed)).collect()
            }
        }
    }

    pub fn half_interval(&self, params: &PotentialParams) -> f64 {
        self.t.unwrap_or(DEFAULT_SCALED_T / params.rate())
    }

    pub fn grid(&self, params: &PotentialParams) -> GridSpec {
        let base = GridSpec::default_for(params);
        GridSpec { x_max: self.x_max.unwrap_or(base.x_max), n_points: self.n_points.unwrap_or(base.n_points) }
    }

    pub fn is_sweep(&self) -> bool {
        matches!(self.mode, Mode::Sweep { .. })
    }
}

//! Run configuration: defaults, `key = value` config files, and range checks
//! shared between the file parser and the flag overlay.

use std::fmt;
use std::path::{Path, PathBuf};

/// Which solver pipeline a run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcmd {
    Eta,
    Wall,
    HomogeneousWall,
    SplitScan,
    Spectrum,
    Bifurcation,
    LimitNu0,
    LimitProfile,
    Energy,
}

impl Subcmd {
    /// Kebab-case name, also the default CSV file stem.
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Subcmd::Eta => "eta",
            Subcmd::Wall => "wall",
            Subcmd::HomogeneousWall => "homogeneous-wall",
            Subcmd::SplitScan => "split-scan",
            Subcmd::Spectrum => "spectrum",
            Subcmd::Bifurcation => "bifurcation",
            Subcmd::LimitNu0 => "limit-nu0",
            Subcmd::LimitProfile => "limit-profile",
            Subcmd::Energy => "energy",
        }
    }

    /// Default truncation length: 3 for trapped problems, 10 for the
    /// half-line limit eigenproblem, 20 for the flat-background wall.
    #[must_use]
    pub fn default_domain(self) -> f64 {
        match self {
            Subcmd::HomogeneousWall => 20.0,
            Subcmd::LimitNu0 => 10.0,
            _ => 3.0,
        }
    }
}

/// Coordinate form of the limit eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Coordinate {
    /// Degenerate form on the unit interval.
    X,
    /// Transformed form on a truncated half-line.
    Xi,
}

impl Coordinate {
    #[must_use]
    pub fn name(self) -> &'static str {
        match self {
            Coordinate::X => "x",
            Coordinate::Xi => "xi",
        }
    }
}

/// Merged settings of one run. Optional fields are "not provided"; each
/// subcommand decides which of them it requires or defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: Option<Subcmd>,
    pub eps: Option<f64>,
    pub gamma: Option<f64>,
    pub mu: Option<f64>,
    pub alpha: Option<f64>,
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub steps: Option<usize>,
    pub eps_list: Option<Vec<f64>>,
    pub grid_n: usize,
    pub domain_length: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub out_path: Option<PathBuf>,
    pub find_alpha: bool,
    pub coordinate: Coordinate,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            subcommand: None,
            eps: None,
            gamma: None,
            mu: None,
            alpha: None,
            alpha_min: None,
            alpha_max: None,
            steps: None,
            eps_list: None,
            grid_n: 2049,
            domain_length: None,
            tol: 1e-9,
            max_iter: 200_000,
            out_path: None,
            find_alpha: false,
            coordinate: Coordinate::Xi,
        }
    }
}

/// A bad flag, config line, or out-of-range value; reported on stderr with
/// exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Reads a `key = value` config file into a [`RunConfig`] over the defaults.
/// `#` starts a comment; unknown keys and out-of-range values are errors
/// carrying the offending line number.
pub fn load_config(path: &Path) -> Result<RunConfig, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg = RunConfig::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(UsageError(format!(
                "config line {line}: expected `key = value`, got `{raw}`"
            )));
        };
        set_entry(&mut cfg, key.trim(), value.trim())
            .map_err(|m| UsageError(format!("config line {line}: {m}")))?;
    }
    Ok(cfg)
}

fn set_entry(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "epsilon" => cfg.eps = Some(check_epsilon(number(key, value)?)?),
        "gamma" => cfg.gamma = Some(check_gamma(number(key, value)?)?),
        "mu" => cfg.mu = Some(check_mu(number(key, value)?)?),
        "alpha" => cfg.alpha = Some(check_alpha(number(key, value)?)?),
        "alpha_min" => cfg.alpha_min = Some(check_alpha(number(key, value)?)?),
        "alpha_max" => cfg.alpha_max = Some(check_alpha(number(key, value)?)?),
        "steps" => cfg.steps = Some(check_steps(integer(key, value)?)?),
        "eps_list" => {
            let list = value
                .split(',')
                .map(|s| number(key, s.trim()))
                .collect::<Result<Vec<f64>, String>>()?;
            cfg.eps_list = Some(check_eps_list(list)?);
        }
        "grid_n" => cfg.grid_n = check_grid_n(integer(key, value)?)?,
        "domain" => cfg.domain_length = Some(check_domain(number(key, value)?)?),
        "tol" => cfg.tol = check_tol(number(key, value)?)?,
        "max_iter" => cfg.max_iter = check_max_iter(integer(key, value)?)?,
        "out" => cfg.out_path = Some(PathBuf::from(value)),
        "find_alpha" => cfg.find_alpha = boolean(key, value)?,
        "coordinate" => {
            cfg.coordinate = match value {
                "x" => Coordinate::X,
                "xi" => Coordinate::Xi,
                other => return Err(format!("expected x or xi for `{key}`, got `{other}`")),
            }
        }
        other => return Err(format!("unknown key `{other}`")),
    }
    Ok(())
}

fn number(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse()
        .map_err(|_| format!("expected a number for `{key}`, got `{value}`"))
}

fn integer(key: &str, value: &str) -> Result<usize, String> {
    value
        .parse()
        .map_err(|_| format!("expected a non-negative integer for `{key}`, got `{value}`"))
}

fn boolean(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("expected true or false for `{key}`, got `{other}`")),
    }
}

pub(crate) fn check_epsilon(v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `epsilon`: must be positive and finite, got {v}"
        ))
    }
}

pub(crate) fn check_gamma(v: f64) -> Result<f64, String> {
    if v > -1.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `gamma`: must be finite and exceed -1, got {v}"
        ))
    }
}

pub(crate) fn check_mu(v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `mu`: must be positive and finite, got {v}"
        ))
    }
}

pub(crate) fn check_alpha(v: f64) -> Result<f64, String> {
    if v > 0.0 && v < 1.5 {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `alpha`: must lie in (0, 1.5), got {v}"
        ))
    }
}

pub(crate) fn check_steps(v: usize) -> Result<usize, String> {
    if v >= 2 {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `steps`: need at least 2, got {v}"
        ))
    }
}

pub(crate) fn check_eps_list(v: Vec<f64>) -> Result<Vec<f64>, String> {
    if v.is_empty() {
        return Err("range violation for `eps_list`: must not be empty".into());
    }
    for &e in &v {
        if !(e > 0.0 && e.is_finite()) {
            return Err(format!(
                "range violation for `eps_list`: entries must be positive and finite, got {e}"
            ));
        }
    }
    Ok(v)
}

pub(crate) fn check_grid_n(v: usize) -> Result<usize, String> {
    if v >= 16 {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `grid_n`: need at least 16 nodes, got {v}"
        ))
    }
}

pub(crate) fn check_domain(v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `domain`: must be positive and finite, got {v}"
        ))
    }
}

pub(crate) fn check_tol(v: f64) -> Result<f64, String> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `tol`: must be positive and finite, got {v}"
        ))
    }
}

pub(crate) fn check_max_iter(v: usize) -> Result<usize, String> {
    if v >= 1 {
        Ok(v)
    } else {
        Err(format!(
            "range violation for `max_iter`: need at least 1, got {v}"
        ))
    }
}

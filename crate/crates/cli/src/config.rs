use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};

use tempjump::direct::DEFAULT_TOL;
use tempjump::system::{DEFAULT_K_NODES, DEFAULT_MAP_SCALE, DEFAULT_MU_NODES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Flags shared by every subcommand. All are optional so that values from a
/// config file can fill the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Accommodation coefficient, 0 < q <= 1.
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// Dimensionless temperature gradient.
    #[arg(long = "g-t", global = true)]
    pub g_t: Option<f64>,
    /// Truncation order of the series in q.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    #[arg(long = "mu-nodes", global = true)]
    pub mu_nodes: Option<usize>,
    #[arg(long = "k-nodes", global = true)]
    pub k_nodes: Option<usize>,
    #[arg(long = "map-scale", global = true)]
    pub map_scale: Option<f64>,
    /// Convergence tolerance of the fixed-point oracle.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Also solve the full equation by fixed-point iteration and compare.
    #[arg(long, global = true)]
    pub oracle: bool,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// File of `key = value` lines; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub q: f64,
    pub g_t: f64,
    pub order: usize,
    pub mu_nodes: usize,
    pub k_nodes: usize,
    pub map_scale: f64,
    pub tol: f64,
    pub oracle: bool,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            q: 1.0,
            g_t: 1.0,
            order: tempjump::neumann::DEFAULT_ORDER,
            mu_nodes: DEFAULT_MU_NODES,
            k_nodes: DEFAULT_K_NODES,
            map_scale: DEFAULT_MAP_SCALE,
            tol: DEFAULT_TOL,
            oracle: false,
            format: Format::Json,
            out: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T, ConfigError> {
    value
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("line {line}: invalid value '{value}' for '{key}'")))
}

impl RunConfig {
    /// Defaults, then the config file (if any), then flags.
    pub fn resolve(args: &CommonArgs) -> Result<Self, ConfigError> {
        let mut cfg = match &args.config {
            Some(path) => Self::from_file(path)?,
            None => Self::default(),
        };
        cfg.apply_args(args);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_key_values(&text)
    }

    pub fn from_key_values(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {line}: expected key = value")))?;
            let key = key.trim().replace('-', "_");
            match key.as_str() {
                "q" => cfg.q = parse_value(&key, value, line)?,
                "g_t" => cfg.g_t = parse_value(&key, value, line)?,
                "order" => cfg.order = parse_value(&key, value, line)?,
                "mu_nodes" => cfg.mu_nodes = parse_value(&key, value, line)?,
                "k_nodes" => cfg.k_nodes = parse_value(&key, value, line)?,
                "map_scale" => cfg.map_scale = parse_value(&key, value, line)?,
                "tol" => cfg.tol = parse_value(&key, value, line)?,
                "oracle" => cfg.oracle = parse_value(&key, value, line)?,
                "format" => {
                    cfg.format = value
                        .parse()
                        .map_err(|e: String| ConfigError(format!("line {line}: {e}")))?
                }
                "out" => cfg.out = Some(PathBuf::from(value.trim())),
                _ => return Err(ConfigError(format!("line {line}: unknown key '{key}'"))),
            }
        }
        Ok(cfg)
    }

    fn apply_args(&mut self, args: &CommonArgs) {
        if let Some(v) = args.q {
            self.q = v;
        }
        if let Some(v) = args.g_t {
            self.g_t = v;
        }
        if let Some(v) = args.order {
            self.order = v;
        }
        if let Some(v) = args.mu_nodes {
            self.mu_nodes = v;
        }
        if let Some(v) = args.k_nodes {
            self.k_nodes = v;
        }
        if let Some(v) = args.map_scale {
            self.map_scale = v;
        }
        if let Some(v) = args.tol {
            self.tol = v;
        }
        if args.oracle {
            self.oracle = true;
        }
        if let Some(v) = args.format {
            self.format = v;
        }
        if let Some(v) = &args.out {
            self.out = Some(v.clone());
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.q.is_finite() && self.q > 0.0 && self.q <= 1.0) {
            return Err(ConfigError(format!("q must lie in (0, 1], got {}", self.q)));
        }
        if !self.g_t.is_finite() {
            return Err(ConfigError(format!("g-t must be finite, got {}", self.g_t)));
        }
        if self.mu_nodes < 2 || self.k_nodes < 2 {
            return Err(ConfigError("node counts must be at least 2".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(ConfigError(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if !(self.map_scale.is_finite() && self.map_scale > 0.0) {
            return Err(ConfigError(format!(
                "map-scale must be positive, got {}",
                self.map_scale
            )));
        }
        if self.order > tempjump::neumann::MAX_ORDER {
            return Err(ConfigError(format!(
                "order must be at most {}, got {}",
                tempjump::neumann::MAX_ORDER,
                self.order
            )));
        }
        Ok(())
    }

    pub fn solver_config(&self) -> tempjump::SolverConfig {
        tempjump::SolverConfig {
            mu_nodes: self.mu_nodes,
            k_nodes: self.k_nodes,
            map_scale: self.map_scale,
        }
    }
}

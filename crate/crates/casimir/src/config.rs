//! Scenario configuration: a flat key = value text format, CLI-flag
//! overrides, and lossless round-tripping.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{CasimirError, Result};

/// Which data product to generate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Dce1d,
    DceNd,
    Oracle1d,
    Mathieu,
    Lyapunov,
    Sumrules,
    Compare,
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Scenario::Dce1d => "dce1d",
            Scenario::DceNd => "dce-nd",
            Scenario::Oracle1d => "oracle1d",
            Scenario::Mathieu => "mathieu",
            Scenario::Lyapunov => "lyapunov",
            Scenario::Sumrules => "sumrules",
            Scenario::Compare => "compare",
        };
        f.write_str(s)
    }
}

impl FromStr for Scenario {
    type Err = CasimirError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dce1d" => Ok(Scenario::Dce1d),
            "dce-nd" => Ok(Scenario::DceNd),
            "oracle1d" => Ok(Scenario::Oracle1d),
            "mathieu" => Ok(Scenario::Mathieu),
            "lyapunov" => Ok(Scenario::Lyapunov),
            "sumrules" => Ok(Scenario::Sumrules),
            "compare" => Ok(Scenario::Compare),
            other => Err(CasimirError::InvalidArgument(format!(
                "unknown scenario '{other}'"
            ))),
        }
    }
}

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = CasimirError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CasimirError::InvalidArgument(format!(
                "unknown output format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Uniform grid written as start:stop:count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(CasimirError::InvalidArgument(format!(
                "grid needs at least 2 points, got {count}"
            )));
        }
        if !(start.is_finite() && stop.is_finite() && stop > start) {
            return Err(CasimirError::InvalidArgument(format!(
                "grid needs finite stop > start, got {start}:{stop}"
            )));
        }
        Ok(Grid { start, stop, count })
    }

    pub fn point(&self, i: usize) -> f64 {
        self.start + (self.stop - self.start) * i as f64 / (self.count - 1) as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.point(i))
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

impl FromStr for Grid {
    type Err = CasimirError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CasimirError::InvalidArgument(format!(
                "grid must be start:stop:count, got '{s}'"
            )));
        }
        let start = parts[0]
            .parse()
            .map_err(|_| CasimirError::InvalidArgument(format!("bad grid start '{}'", parts[0])))?;
        let stop = parts[1]
            .parse()
            .map_err(|_| CasimirError::InvalidArgument(format!("bad grid stop '{}'", parts[1])))?;
        let count = parts[2]
            .parse()
            .map_err(|_| CasimirError::InvalidArgument(format!("bad grid count '{}'", parts[2])))?;
        Grid::new(start, stop, count)
    }
}

/// Full scenario configuration. Every scenario reads the subset of fields
/// it needs; the rest keep their defaults so a config file can describe
/// any run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    /// Cavity side lengths; a single entry selects the 1-D treatment.
    pub lengths: Vec<f64>,
    /// Relative wall-oscillation amplitude.
    pub epsilon: f64,
    /// τ or time grid, depending on the scenario.
    pub grid: Grid,
    /// Scalar τ for scenarios that evaluate at a single point.
    pub tau: f64,
    /// Analytic ladder cutoffs (sum-rule convergence study uses the whole
    /// list; other scenarios use the last, largest entry).
    pub n_max: Vec<usize>,
    /// Mode cutoff of the numerical integration, serialized as `N`.
    #[serde(rename = "N")]
    pub oracle_n: usize,
    /// Random subsystem draws for the Lyapunov scenario.
    pub draws: usize,
    pub format: OutputFormat,
    pub seed: u64,
    /// Scenario being cross-checked by `compare` (dce1d or mathieu).
    pub target: Scenario,
}

impl ScenarioConfig {
    pub fn defaults(scenario: Scenario) -> Self {
        let (grid, format) = match scenario {
            Scenario::Dce1d => (Grid { start: 0.0, stop: 6.0, count: 600 }, OutputFormat::Csv),
            Scenario::DceNd => (Grid { start: 0.0, stop: 2000.0, count: 400 }, OutputFormat::Csv),
            Scenario::Oracle1d => (Grid { start: 0.0, stop: 0.3, count: 7 }, OutputFormat::Csv),
            Scenario::Mathieu => (Grid { start: 0.0, stop: 200.0, count: 100 }, OutputFormat::Csv),
            Scenario::Lyapunov => (Grid { start: 0.0, stop: 900.0, count: 40 }, OutputFormat::Csv),
            Scenario::Sumrules => (Grid { start: 0.0, stop: 1.0, count: 2 }, OutputFormat::Json),
            Scenario::Compare => (Grid { start: 0.05, stop: 0.3, count: 4 }, OutputFormat::Json),
        };
        let lengths = match scenario {
            Scenario::DceNd | Scenario::Mathieu | Scenario::Lyapunov => vec![1.0, 1.0],
            _ => vec![1.0],
        };
        ScenarioConfig {
            scenario,
            lengths,
            epsilon: match scenario {
                Scenario::Oracle1d | Scenario::Compare => 0.005,
                _ => 0.01,
            },
            grid,
            tau: 0.5,
            n_max: vec![11, 21, 41],
            oracle_n: 15,
            draws: 5,
            format,
            seed: 0,
            target: Scenario::Dce1d,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lengths.is_empty() || self.lengths.iter().any(|&l| !(l > 0.0)) {
            return Err(CasimirError::InvalidArgument(
                "cavity lengths must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(CasimirError::InvalidArgument(format!(
                "need 0 ≤ ε < 1, got {}",
                self.epsilon
            )));
        }
        Grid::new(self.grid.start, self.grid.stop, self.grid.count)?;
        if self.tau < 0.0 {
            return Err(CasimirError::InvalidArgument(format!(
                "τ must be nonnegative, got {}",
                self.tau
            )));
        }
        if self.n_max.is_empty() || self.n_max.iter().any(|&n| n < 2) {
            return Err(CasimirError::InvalidArgument(
                "ladder cutoffs must all be ≥ 2".into(),
            ));
        }
        if self.oracle_n < 2 {
            return Err(CasimirError::InvalidArgument(format!(
                "mode cutoff N must be ≥ 2, got {}",
                self.oracle_n
            )));
        }
        if self.draws == 0 {
            return Err(CasimirError::InvalidArgument("draws must be ≥ 1".into()));
        }
        if self.scenario == Scenario::Compare
            && !matches!(self.target, Scenario::Dce1d | Scenario::Mathieu)
        {
            return Err(CasimirError::InvalidArgument(format!(
                "compare supports targets dce1d and mathieu, got {}",
                self.target
            )));
        }
        Ok(())
    }

    /// Flat key = value rendering; `from_file_str` inverts it exactly.
    pub fn to_file_string(&self) -> String {
        let lengths: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
        let n_max: Vec<String> = self.n_max.iter().map(|n| n.to_string()).collect();
        format!(
            "scenario = {}\nlengths = {}\nepsilon = {}\ngrid = {}\ntau = {}\nn_max = {}\nN = {}\ndraws = {}\nformat = {}\nseed = {}\ntarget = {}\n",
            self.scenario,
            lengths.join(","),
            self.epsilon,
            self.grid,
            self.tau,
            n_max.join(","),
            self.oracle_n,
            self.draws,
            self.format,
            self.seed,
            self.target,
        )
    }

    /// Parses a flat key = value file, starting from the defaults of the
    /// scenario named in the file (or `fallback` if absent).
    pub fn from_file_str(text: &str, fallback: Scenario) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CasimirError::InvalidArgument(format!(
                    "config line {} is not key = value: '{raw}'",
                    lineno + 1
                ))
            })?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        let scenario = pairs
            .iter()
            .find(|(k, _)| k == "scenario")
            .map(|(_, v)| v.parse())
            .transpose()?
            .unwrap_or(fallback);
        let mut config = ScenarioConfig::defaults(scenario);
        for (key, value) in &pairs {
            config.apply(key, value)?;
        }
        Ok(config)
    }

    /// Applies one key = value override.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| {
            CasimirError::InvalidArgument(format!("bad value '{value}' for {what}"))
        };
        match key {
            "scenario" => self.scenario = value.parse()?,
            "lengths" => {
                self.lengths = value
                    .split(',')
                    .map(|v| v.trim().parse::<f64>().map_err(|_| bad("lengths")))
                    .collect::<Result<_>>()?;
            }
            "epsilon" => self.epsilon = value.parse().map_err(|_| bad("epsilon"))?,
            "grid" => self.grid = value.parse()?,
            "tau" => self.tau = value.parse().map_err(|_| bad("tau"))?,
            "n_max" => {
                self.n_max = value
                    .split(',')
                    .map(|v| v.trim().parse::<usize>().map_err(|_| bad("n_max")))
                    .collect::<Result<_>>()?;
            }
            "N" => self.oracle_n = value.parse().map_err(|_| bad("N"))?,
            "draws" => self.draws = value.parse().map_err(|_| bad("draws"))?,
            "format" => self.format = value.parse()?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "target" => self.target = value.parse()?,
            other => {
                return Err(CasimirError::InvalidArgument(format!(
                    "unknown config key '{other}'"
                )))
            }
        }
        Ok(())
    }
}

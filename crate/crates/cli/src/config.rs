//! Run configuration: defaults, optional TOML file, command-line overrides.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use mzi_core::correlation::dephasing::{DEFAULT_QUADRATURE_POINTS, MIN_QUADRATURE_POINTS};
use mzi_core::correlation::{Engine, NormalizationMode, SpectrumModel};
use mzi_core::modulation::{DetuningConfig, PortMap, SequencePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
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
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected csv|json)")),
        }
    }
}

/// Everything a run depends on. A run is reproducible from this value alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Detuning Δ (rad/s).
    pub delta: f64,
    /// Pulse cycle T (s).
    pub period: f64,
    /// Carrier f₀ (rad/s), reported only.
    pub carrier: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_steps: usize,
    pub normalization: NormalizationMode,
    pub policy: SequencePolicy,
    pub port_map: PortMap,
    pub segments: usize,
    pub seed: u64,
    /// Source bandwidth σ (rad/s); 0 means monochromatic.
    pub bandwidth_sigma: f64,
    pub quadrature_points: usize,
    /// Arm imbalance ΔL/c (s).
    pub path_delay: f64,
    pub engine: Engine,
    pub format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gnuplot_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            delta: PI,
            period: 1.0,
            carrier: 0.0,
            phi_min: -PI,
            phi_max: PI,
            phi_steps: 1001,
            normalization: NormalizationMode::Paper,
            policy: SequencePolicy::Alternate,
            port_map: PortMap::Alternating,
            segments: 1000,
            seed: 0,
            bandwidth_sigma: 0.0,
            quadrature_points: DEFAULT_QUADRATURE_POINTS,
            path_delay: 0.0,
            engine: Engine::ClosedForm,
            format: OutputFormat::Csv,
            output_path: None,
            gnuplot_path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid `{field}`: {reason}")]
pub struct ConfigError {
    pub field: &'static str,
    pub reason: String,
}

impl ConfigError {
    pub fn new(field: &'static str, reason: impl Into<String>) -> Self {
        ConfigError {
            field,
            reason: reason.into(),
        }
    }
}

fn finite(field: &'static str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(ConfigError::new(field, format!("must be finite (got {v})")))
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        for (field, v) in [
            ("delta", self.delta),
            ("period", self.period),
            ("carrier", self.carrier),
            ("phi_min", self.phi_min),
            ("phi_max", self.phi_max),
            ("bandwidth_sigma", self.bandwidth_sigma),
            ("path_delay", self.path_delay),
        ] {
            finite(field, v)?;
        }
        if self.delta < 0.0 {
            return Err(ConfigError::new(
                "delta",
                format!("must be >= 0 (got {})", self.delta),
            ));
        }
        if self.period <= 0.0 {
            return Err(ConfigError::new(
                "period",
                format!("must be > 0 (got {})", self.period),
            ));
        }
        if self.phi_steps < 2 {
            return Err(ConfigError::new(
                "phi_steps",
                format!("must be >= 2 (got {})", self.phi_steps),
            ));
        }
        if self.phi_min >= self.phi_max {
            return Err(ConfigError::new(
                "phi_min",
                format!(
                    "must be < phi_max (got {} >= {})",
                    self.phi_min, self.phi_max
                ),
            ));
        }
        if self.segments < 1 {
            return Err(ConfigError::new("segments", "must be >= 1 (got 0)"));
        }
        if self.bandwidth_sigma < 0.0 {
            return Err(ConfigError::new(
                "bandwidth_sigma",
                format!("must be >= 0 (got {})", self.bandwidth_sigma),
            ));
        }
        if self.quadrature_points < MIN_QUADRATURE_POINTS
            || self.quadrature_points.is_multiple_of(2)
        {
            return Err(ConfigError::new(
                "quadrature_points",
                format!(
                    "must be odd and >= {MIN_QUADRATURE_POINTS} (got {})",
                    self.quadrature_points
                ),
            ));
        }
        Ok(())
    }

    pub fn detuning(&self) -> DetuningConfig {
        DetuningConfig {
            delta: self.delta,
            period: self.period,
            f0: self.carrier,
        }
    }

    pub fn spectrum(&self) -> SpectrumModel {
        SpectrumModel::from_bandwidth(self.bandwidth_sigma, self.quadrature_points)
    }

    pub fn phi_grid(&self) -> Vec<f64> {
        mzi_core::numeric::linspace(self.phi_min, self.phi_max, self.phi_steps)
    }

    pub fn from_toml_str(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("RunConfig always serializes to TOML")
    }

    pub fn load(path: &Path) -> Result<Self, ConfigFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigFileError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text).map_err(|source| ConfigFileError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigFileError {
    #[error("cannot read config {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse config {}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
}

/// Flags shared by every subcommand. Anything given here overrides `--config`.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// TOML file with any subset of the run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Detuning Δ in rad/s.
    #[arg(long, allow_negative_numbers = true)]
    pub delta: Option<f64>,
    /// Pulse cycle T in seconds (each pulse lasts T/2).
    #[arg(long, allow_negative_numbers = true)]
    pub period: Option<f64>,
    /// Carrier frequency in rad/s (reported only).
    #[arg(long, allow_negative_numbers = true)]
    pub carrier: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub phi_max: Option<f64>,
    #[arg(long)]
    pub phi_steps: Option<usize>,
    /// paper | derived
    #[arg(long)]
    pub normalization: Option<NormalizationMode>,
    /// alternate | random
    #[arg(long)]
    pub policy: Option<SequencePolicy>,
    /// alternating | flipped | shared
    #[arg(long)]
    pub port_map: Option<PortMap>,
    #[arg(long)]
    pub segments: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Source bandwidth σ in rad/s.
    #[arg(long, allow_negative_numbers = true)]
    pub bandwidth: Option<f64>,
    /// Odd number of Gauss–Hermite nodes (>= 11).
    #[arg(long)]
    pub quadrature_points: Option<usize>,
    /// Arm imbalance ΔL/c in seconds.
    #[arg(long, allow_negative_numbers = true)]
    pub path_delay: Option<f64>,
    /// closed | matrix
    #[arg(long)]
    pub engine: Option<Engine>,
    /// csv | json
    #[arg(long)]
    pub format: Option<OutputFormat>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also write a two-column `phi g2` file for gnuplot.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
}

impl RunArgs {
    /// Defaults, then the `--config` file, then explicit flags.
    pub fn resolve(&self) -> Result<RunConfig, ConfigFileError> {
        let base = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        Ok(self.apply(base))
    }

    pub fn apply(&self, mut cfg: RunConfig) -> RunConfig {
        macro_rules! set {
            ($($flag:ident => $field:ident),* $(,)?) => {
                $(if let Some(v) = self.$flag.clone() { cfg.$field = v; })*
            };
        }
        set!(
            delta => delta,
            period => period,
            carrier => carrier,
            phi_min => phi_min,
            phi_max => phi_max,
            phi_steps => phi_steps,
            normalization => normalization,
            policy => policy,
            port_map => port_map,
            segments => segments,
            seed => seed,
            bandwidth => bandwidth_sigma,
            quadrature_points => quadrature_points,
            path_delay => path_delay,
            engine => engine,
            format => format,
        );
        if let Some(p) = &self.output {
            cfg.output_path = Some(p.clone());
        }
        if let Some(p) = &self.gnuplot {
            cfg.gnuplot_path = Some(p.clone());
        }
        cfg
    }
}

//! Subcommand implementations. Each command computes its result from a validated
//! [`RunConfig`] and writes it in the configured format.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use mzi_core::correlation::{
    audit_consistency, dephase_with_path_delay, g2_closed, g2_ensemble, AuditGrid, AuditReport,
    CorrelationCurve, Engine, SpectrumModel,
};
use mzi_core::export::{write_audit_csv, write_curve_csv, write_curve_gnuplot, write_sequence_csv};
use mzi_core::modulation::{
    make_sequence_with_ports, quadrature_check, PulseSequence, SequencePolicy,
};

use crate::config::{ConfigError, ConfigFileError, OutputFormat, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Sweep,
    Ensemble,
    Audit,
    Sequence,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Sweep => "sweep",
            CommandKind::Ensemble => "ensemble",
            CommandKind::Audit => "audit",
            CommandKind::Sequence => "sequence",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    ConfigFile(#[from] ConfigFileError),
    #[error(transparent)]
    Core(#[from] mzi_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot write to stdout: {0}")]
    Stdout(io::Error),
}

impl CliError {
    /// 2 for bad configuration, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::ConfigFile(_) => 2,
            _ => 1,
        }
    }
}

/// Sidecar metadata path for a CSV output: `<output>.meta.toml`.
pub fn metadata_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.toml");
    PathBuf::from(name)
}

#[derive(Serialize)]
struct CurveDocument<'a> {
    command: &'static str,
    config: &'a RunConfig,
    provenance: String,
    mode: String,
    points: &'a [mzi_core::correlation::CurvePoint],
}

#[derive(Serialize)]
struct SequenceRow {
    index: usize,
    branch: &'static str,
    phase_rad: f64,
    freq_offset_rad_per_s: f64,
    duration_s: f64,
    active_port: u8,
}

#[derive(Serialize)]
struct SequenceDocument<'a> {
    command: &'static str,
    config: &'a RunConfig,
    segments: Vec<SequenceRow>,
}

#[derive(Serialize)]
struct AuditDocument<'a> {
    command: &'static str,
    config: &'a RunConfig,
    checks: &'a AuditReport,
}

/// g² curve for `sweep`: closed form (or its bandwidth-averaged version) over the φ grid.
///
/// With the matrix engine the equal-weight {ζ, ζ′} pair is pushed through the MZI
/// instead; that path has no bandwidth model.
pub fn sweep_curve(cfg: &RunConfig) -> Result<CorrelationCurve, CliError> {
    cfg.validate()?;
    let grid = cfg.phi_grid();
    let detuning = cfg.detuning();
    let spectrum = cfg.spectrum();
    match cfg.engine {
        Engine::Matrix => {
            if spectrum != SpectrumModel::Delta || cfg.path_delay != 0.0 {
                return Err(ConfigError::new(
                    "engine",
                    "the matrix engine has no bandwidth model; use --engine closed with --bandwidth/--path-delay",
                )
                .into());
            }
            let seq = make_sequence_with_ports(
                &detuning,
                2,
                SequencePolicy::Alternate,
                cfg.seed,
                cfg.port_map,
            )?;
            Ok(g2_ensemble(&seq, &grid, Engine::Matrix, cfg.normalization)?)
        }
        Engine::ClosedForm => {
            let ideal = spectrum == SpectrumModel::Delta && cfg.path_delay == 0.0;
            if ideal && quadrature_check(&detuning).is_quadrature {
                Ok(g2_closed(&grid, cfg.normalization)?)
            } else {
                Ok(dephase_with_path_delay(
                    &detuning,
                    &grid,
                    &spectrum,
                    cfg.path_delay,
                    cfg.normalization,
                )?)
            }
        }
    }
}

pub fn ensemble_curve(cfg: &RunConfig) -> Result<CorrelationCurve, CliError> {
    cfg.validate()?;
    if cfg.bandwidth_sigma != 0.0 {
        return Err(ConfigError::new(
            "bandwidth_sigma",
            "ensembles are monochromatic; use `sweep --bandwidth` for dephasing",
        )
        .into());
    }
    let seq = pulse_sequence(cfg)?;
    Ok(g2_ensemble(
        &seq,
        &cfg.phi_grid(),
        cfg.engine,
        cfg.normalization,
    )?)
}

pub fn pulse_sequence(cfg: &RunConfig) -> Result<PulseSequence, CliError> {
    cfg.validate()?;
    Ok(make_sequence_with_ports(
        &cfg.detuning(),
        cfg.segments,
        cfg.policy,
        cfg.seed,
        cfg.port_map,
    )?)
}

pub fn audit_report(cfg: &RunConfig) -> Result<AuditReport, CliError> {
    cfg.validate()?;
    Ok(audit_consistency(&AuditGrid::default()))
}

/// Write to `path`, or stdout when `None`.
fn emit<F>(path: Option<&Path>, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match path {
        Some(p) => {
            let io_err = |source| CliError::Io {
                path: p.to_path_buf(),
                source,
            };
            let file = File::create(p).map_err(io_err)?;
            let mut w = BufWriter::new(file);
            body(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)
                .and_then(|_| w.flush())
                .map_err(CliError::Stdout)
        }
    }
}

fn write_metadata(kind: CommandKind, cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.format != OutputFormat::Csv {
        return Ok(());
    }
    let Some(out) = &cfg.output_path else {
        return Ok(());
    };
    let meta = metadata_path(out);
    let text = format!("# mzi {}\n{}", kind.name(), cfg.to_toml_string());
    emit(Some(&meta), |w| w.write_all(text.as_bytes()))
}

fn write_json<T: Serialize>(w: &mut dyn Write, doc: &T) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *w, doc).map_err(io::Error::from)?;
    writeln!(w)
}

fn write_curve(
    kind: CommandKind,
    cfg: &RunConfig,
    curve: &CorrelationCurve,
) -> Result<(), CliError> {
    let out = cfg.output_path.as_deref();
    match cfg.format {
        OutputFormat::Csv => emit(out, |w| write_curve_csv(curve, w))?,
        OutputFormat::Json => {
            let doc = CurveDocument {
                command: kind.name(),
                config: cfg,
                provenance: curve.provenance.to_string(),
                mode: curve.mode.to_string(),
                points: &curve.points,
            };
            emit(out, |w| write_json(w, &doc))?
        }
    }
    if let Some(g) = &cfg.gnuplot_path {
        emit(Some(g), |w| write_curve_gnuplot(curve, w))?;
    }
    write_metadata(kind, cfg)
}

/// Run `kind` end to end. Success means every requested file was written.
pub fn run(kind: CommandKind, cfg: &RunConfig) -> Result<(), CliError> {
    match kind {
        CommandKind::Sweep => {
            let q = quadrature_check(&cfg.detuning());
            if cfg.validate().is_ok() && !q.is_quadrature {
                eprintln!(
                    "note: zeta = {} is off quadrature (nearest n = {}, deviation {:+.6})",
                    cfg.detuning().zeta(),
                    q.nearest_n,
                    q.deviation
                );
            }
            let curve = sweep_curve(cfg)?;
            write_curve(kind, cfg, &curve)
        }
        CommandKind::Ensemble => {
            let curve = ensemble_curve(cfg)?;
            write_curve(kind, cfg, &curve)
        }
        CommandKind::Audit => {
            let report = audit_report(cfg)?;
            let out = cfg.output_path.as_deref();
            match cfg.format {
                OutputFormat::Json => {
                    let doc = AuditDocument {
                        command: kind.name(),
                        config: cfg,
                        checks: &report,
                    };
                    emit(out, |w| write_json(w, &doc))?
                }
                OutputFormat::Csv => emit(out, |w| write_audit_csv(&report, w))?,
            }
            write_metadata(kind, cfg)
        }
        CommandKind::Sequence => {
            let seq = pulse_sequence(cfg)?;
            let out = cfg.output_path.as_deref();
            match cfg.format {
                OutputFormat::Csv => emit(out, |w| write_sequence_csv(&seq, w))?,
                OutputFormat::Json => {
                    let segments = seq
                        .segments
                        .iter()
                        .enumerate()
                        .map(|(index, s)| SequenceRow {
                            index,
                            branch: s.branch.tag().as_str(),
                            phase_rad: s.branch.phase(),
                            freq_offset_rad_per_s: s.freq_offset,
                            duration_s: s.duration,
                            active_port: s.active_port.index(),
                        })
                        .collect();
                    let doc = SequenceDocument {
                        command: kind.name(),
                        config: cfg,
                        segments,
                    };
                    emit(out, |w| write_json(w, &doc))?
                }
            }
            write_metadata(kind, cfg)
        }
    }
}

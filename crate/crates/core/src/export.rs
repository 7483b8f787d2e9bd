//! Plain-text writers for curves, pulse sequences and audit reports.
//!
//! Floating-point values are written with 17 significant digits, which round-trips
//! every `f64` exactly. Undefined g² values are written as an empty CSV field (and as
//! `?` in gnuplot files), never as `NaN`.

use std::io::{self, Write};

use crate::correlation::{AuditReport, CorrelationCurve};
use crate::modulation::PulseSequence;

pub const CURVE_CSV_HEADER: &str = "phi,i_a_mean,i_b_mean,r_mean,g2";
pub const SEQUENCE_CSV_HEADER: &str =
    "index,branch,phase_rad,freq_offset_rad_per_s,duration_s,active_port";
pub const AUDIT_CSV_HEADER: &str = "name,max_abs_discrepancy,phi,zeta";

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_curve_csv<W: Write>(curve: &CorrelationCurve, mut w: W) -> io::Result<()> {
    writeln!(w, "{CURVE_CSV_HEADER}")?;
    for p in &curve.points {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(p.phi),
            fmt_f64(p.i_a_mean),
            fmt_f64(p.i_b_mean),
            fmt_f64(p.r_mean),
            p.g2.map(fmt_f64).unwrap_or_default()
        )?;
    }
    Ok(())
}

/// Two whitespace-separated columns `phi g2`; plot with `set datafile missing "?"`.
pub fn write_curve_gnuplot<W: Write>(curve: &CorrelationCurve, mut w: W) -> io::Result<()> {
    writeln!(w, "# phi g2 ({}, {})", curve.provenance, curve.mode)?;
    for p in &curve.points {
        let g2 = p.g2.map(fmt_f64).unwrap_or_else(|| "?".to_string());
        writeln!(w, "{} {}", fmt_f64(p.phi), g2)?;
    }
    Ok(())
}

pub fn write_sequence_csv<W: Write>(seq: &PulseSequence, mut w: W) -> io::Result<()> {
    writeln!(w, "{SEQUENCE_CSV_HEADER}")?;
    for (k, s) in seq.segments.iter().enumerate() {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            k,
            s.branch.tag(),
            fmt_f64(s.branch.phase()),
            fmt_f64(s.freq_offset),
            fmt_f64(s.duration),
            s.active_port
        )?;
    }
    Ok(())
}

pub fn write_audit_csv<W: Write>(report: &AuditReport, mut w: W) -> io::Result<()> {
    writeln!(w, "{AUDIT_CSV_HEADER}")?;
    for r in &report.records {
        writeln!(
            w,
            "{},{},{},{}",
            r.name,
            fmt_f64(r.max_abs_discrepancy),
            fmt_f64(r.at.phi),
            fmt_f64(r.at.zeta)
        )?;
    }
    Ok(())
}

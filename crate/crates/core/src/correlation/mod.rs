//! Output intensities, intensity product and second-order correlation g²(φ).
//!
//! The basis toggle between ζ and ζ′ is realised per segment: a single intensity
//! evaluation always uses exactly one branch, and ensemble quantities are plain
//! arithmetic means over segments (all segments last T/2, so time weighting is
//! the same thing).
//!
//! Two normalizations of g² are carried side by side:
//!
//! - [`NormalizationMode::Paper`]: `½(1 − sin²φ)`, including the leading ½;
//! - [`NormalizationMode::Derived`]: `⟨I_A I_B⟩ / (⟨I_A⟩⟨I_B⟩)` evaluated from the
//!   intensities themselves, which for the equal-weight {ζ, ζ′} ensemble at
//!   quadrature is `1 − sin²φ`.
//!
//! Their ratio is exactly ½ wherever both are defined; [`audit`] reports it.

pub mod audit;
pub mod dephasing;
pub mod ensemble;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modulation::BasisBranch;

pub use audit::{audit_consistency, AuditGrid, AuditPoint, AuditRecord, AuditReport};
pub use dephasing::{
    dephase, dephase_with_path_delay, sin_attenuation, spectral_average, SpectrumModel,
};
pub use ensemble::{g2_ensemble, Engine};

/// Mean intensities at or below this (in units of I₀) make g² undefined.
pub const MIN_MEAN_INTENSITY: f64 = 1e-12;

/// Detector intensities in units of I₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntensityPair {
    pub i_a: f64,
    pub i_b: f64,
}

impl IntensityPair {
    pub fn total(&self) -> f64 {
        self.i_a + self.i_b
    }

    /// Normalized product `4·I_A·I_B`, equal to 1 when both detectors see I₀/2.
    pub fn normalized_product(&self) -> f64 {
        4.0 * self.i_a * self.i_b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    /// `½(1 − sin²φ)`, keeping the leading ½.
    #[default]
    Paper,
    /// `⟨I_A I_B⟩ / (⟨I_A⟩⟨I_B⟩)` from the intensities.
    Derived,
}

impl NormalizationMode {
    /// Factor applied to the intensity ratio `⟨I_A I_B⟩ / (⟨I_A⟩⟨I_B⟩)`.
    pub fn scale(self) -> f64 {
        match self {
            NormalizationMode::Paper => 0.5,
            NormalizationMode::Derived => 1.0,
        }
    }
}

impl fmt::Display for NormalizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalizationMode::Paper => "paper",
            NormalizationMode::Derived => "derived",
        })
    }
}

impl FromStr for NormalizationMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "paper" => Ok(NormalizationMode::Paper),
            "derived" => Ok(NormalizationMode::Derived),
            other => Err(format!(
                "unknown normalization `{other}` (expected paper|derived)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Closed,
    Ensemble,
    Dephased,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Closed => "closed",
            Provenance::Ensemble => "ensemble",
            Provenance::Dephased => "dephased",
        })
    }
}

/// One φ sample of a correlation curve.
///
/// `r_mean` is the mean normalized product `⟨4·I_A·I_B⟩`; `g2` is `None` where a
/// mean intensity vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub phi: f64,
    pub i_a_mean: f64,
    pub i_b_mean: f64,
    pub r_mean: f64,
    pub g2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationCurve {
    pub points: Vec<CurvePoint>,
    pub mode: NormalizationMode,
    pub provenance: Provenance,
}

impl CorrelationCurve {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn phi(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.phi).collect()
    }

    pub fn g2(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.g2).collect()
    }

    pub fn max_g2(&self) -> Option<f64> {
        self.points.iter().filter_map(|p| p.g2).reduce(f64::max)
    }

    pub fn min_g2(&self) -> Option<f64> {
        self.points.iter().filter_map(|p| p.g2).reduce(f64::min)
    }

    /// max − min of the defined g² values.
    pub fn modulation_depth(&self) -> Option<f64> {
        Some(self.max_g2()? - self.min_g2()?)
    }
}

/// g² from ensemble means; `None` when either mean intensity vanishes.
pub(crate) fn g2_from_means(
    i_a_mean: f64,
    i_b_mean: f64,
    r_mean: f64,
    mode: NormalizationMode,
) -> Option<f64> {
    if i_a_mean <= MIN_MEAN_INTENSITY || i_b_mean <= MIN_MEAN_INTENSITY {
        return None;
    }
    let ratio = (r_mean / 4.0) / (i_a_mean * i_b_mean);
    Some(mode.scale() * ratio)
}

/// `I_A = ½[1 − sinφ·sin(phase)]`, `I_B = ½[1 + sinφ·sin(phase)]`.
///
/// The branch decides the sign of the basis phase, so passing ζ′ flips the modulation.
pub fn intensities_closed(phi: f64, branch: &BasisBranch) -> IntensityPair {
    let m = phi.sin() * branch.phase().sin();
    IntensityPair {
        i_a: 0.5 * (1.0 - m),
        i_b: 0.5 * (1.0 + m),
    }
}

/// Normalized intensity product `R = 1 − sin²φ·sin²(phase)`; the same for ζ and ζ′.
pub fn intensity_product(phi: f64, branch: &BasisBranch) -> f64 {
    let s = phi.sin();
    let z = branch.phase().sin();
    1.0 - s * s * z * z
}

/// Closed-form g²(φ) at quadrature.
///
/// Paper mode evaluates `½(1 − sin²φ)`; derived mode evaluates the equal-weight
/// {ζ, ζ′} ensemble ratio, `1 − sin²φ`.
pub fn g2_closed(phi_grid: &[f64], mode: NormalizationMode) -> Result<CorrelationCurve> {
    if phi_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if phi_grid.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("phi"));
    }
    let points = phi_grid
        .iter()
        .map(|&phi| {
            let s = phi.sin();
            let r = 1.0 - s * s;
            let g2 = match mode {
                NormalizationMode::Paper => 0.5 * (1.0 - s * s),
                NormalizationMode::Derived => r,
            };
            CurvePoint {
                phi,
                i_a_mean: 0.5,
                i_b_mean: 0.5,
                r_mean: r,
                g2: Some(g2),
            }
        })
        .collect();
    Ok(CorrelationCurve {
        points,
        mode,
        provenance: Provenance::Closed,
    })
}

//! Finite source bandwidth.
//!
//! A source component detuned by δ from the carrier accumulates the basis phase
//! ζ(δ) = (Δ + δ)T/2. Averaging the coherent modulation term over the source spectrum
//! washes out the φ dependence:
//!
//! ```text
//! m(φ) = ⟨ sin(φ + δ·τ) · sin((Δ + δ)T/2) ⟩_δ
//! ```
//!
//! where τ is an optional path delay between the interferometer arms (zero by default).
//! The two basis branches then give `I_A = ½(1 ∓ m)`, so `⟨I_A⟩ = ⟨I_B⟩ = ½` and the
//! derived g² is `1 − m²`. For a Gaussian spectrum with τ = 0,
//! `⟨sin(ζ + x)⟩ = e^{−s²/2} sin ζ` with `s = σT/2`.
//!
//! The spectral average uses a fixed Gauss–Hermite rule, so results are deterministic.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::num::NonZeroUsize;

use gauss_quad::GaussHermite;
use serde::{Deserialize, Serialize};

use super::{CorrelationCurve, CurvePoint, NormalizationMode, Provenance};
use crate::error::{Error, Result};
use crate::modulation::DetuningConfig;

/// Fewest Gauss–Hermite nodes accepted for a Gaussian spectrum.
pub const MIN_QUADRATURE_POINTS: usize = 11;
pub const DEFAULT_QUADRATURE_POINTS: usize = 41;

/// Distribution of the source detuning δ (rad/s).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumModel {
    /// Monochromatic source.
    #[default]
    Delta,
    /// Normal distribution with standard deviation `sigma`, integrated with an odd
    /// Gauss–Hermite rule of `quadrature_points` nodes.
    Gaussian {
        sigma: f64,
        quadrature_points: usize,
    },
}

impl SpectrumModel {
    pub fn gaussian(sigma: f64) -> Self {
        SpectrumModel::Gaussian {
            sigma,
            quadrature_points: DEFAULT_QUADRATURE_POINTS,
        }
    }

    /// Delta for σ = 0, Gaussian with the default rule otherwise.
    pub fn from_bandwidth(sigma: f64, quadrature_points: usize) -> Self {
        if sigma == 0.0 {
            SpectrumModel::Delta
        } else {
            SpectrumModel::Gaussian {
                sigma,
                quadrature_points,
            }
        }
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            SpectrumModel::Delta => 0.0,
            SpectrumModel::Gaussian { sigma, .. } => sigma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SpectrumModel::Delta => Ok(()),
            SpectrumModel::Gaussian {
                sigma,
                quadrature_points,
            } => {
                if !sigma.is_finite() || sigma <= 0.0 {
                    return Err(Error::InvalidSpectrum(format!(
                        "gaussian sigma must be finite and > 0, got {sigma}"
                    )));
                }
                if quadrature_points < MIN_QUADRATURE_POINTS || quadrature_points % 2 == 0 {
                    return Err(Error::InvalidSpectrum(format!(
                        "quadrature_points must be odd and >= {MIN_QUADRATURE_POINTS}, got {quadrature_points}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// `(δ_k, p_k)` pairs with `Σ p_k = 1`.
    pub fn nodes(&self) -> Result<Vec<(f64, f64)>> {
        self.validate()?;
        match *self {
            SpectrumModel::Delta => Ok(vec![(0.0, 1.0)]),
            SpectrumModel::Gaussian {
                sigma,
                quadrature_points,
            } => {
                // ∫ f(δ) N(δ; 0, σ) dδ = π^{-1/2} ∫ e^{-x²} f(√2 σ x) dx
                let deg = NonZeroUsize::new(quadrature_points).expect("validated above");
                let rule = GaussHermite::new(deg);
                let norm = PI.sqrt();
                Ok(rule
                    .as_node_weight_pairs()
                    .iter()
                    .map(|&(x, w)| (SQRT_2 * sigma * x, w / norm))
                    .collect())
            }
        }
    }
}

/// `⟨f(δ)⟩` over the spectrum.
pub fn spectral_average<F: Fn(f64) -> f64>(spectrum: &SpectrumModel, f: F) -> Result<f64> {
    Ok(spectrum
        .nodes()?
        .into_iter()
        .fold(0.0, |acc, (delta, p)| acc + p * f(delta)))
}

/// `⟨sin ζ(δ)⟩ / sin ζ` at ζ = π/2 for pulses of length `period / 2`.
pub fn sin_attenuation(spectrum: &SpectrumModel, period: f64) -> Result<f64> {
    spectral_average(spectrum, |delta| (FRAC_PI_2 + delta * period / 2.0).sin())
}

/// Bandwidth-averaged g²(φ) with no arm path delay.
pub fn dephase(
    cfg: &DetuningConfig,
    phi_grid: &[f64],
    spectrum: &SpectrumModel,
    mode: NormalizationMode,
) -> Result<CorrelationCurve> {
    dephase_with_path_delay(cfg, phi_grid, spectrum, 0.0, mode)
}

/// Bandwidth-averaged g²(φ); `path_delay` is the arm imbalance ΔL/c in seconds.
///
/// A delta spectrum with zero delay is labelled [`Provenance::Closed`]: it is the
/// ideal two-branch curve at the configured ζ.
pub fn dephase_with_path_delay(
    cfg: &DetuningConfig,
    phi_grid: &[f64],
    spectrum: &SpectrumModel,
    path_delay: f64,
    mode: NormalizationMode,
) -> Result<CorrelationCurve> {
    cfg.validate()?;
    if phi_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if phi_grid.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("phi"));
    }
    if !path_delay.is_finite() {
        return Err(Error::NonFinite("path_delay"));
    }
    let nodes = spectrum.nodes()?;
    let zeta = cfg.zeta();
    let half_period = cfg.period / 2.0;
    let points = phi_grid
        .iter()
        .map(|&phi| {
            let m = nodes.iter().fold(0.0, |acc, &(delta, p)| {
                acc + p * (phi + delta * path_delay).sin() * (zeta + delta * half_period).sin()
            });
            let r = 1.0 - m * m;
            let g2 = match mode {
                NormalizationMode::Paper => 0.5 * (1.0 - m * m),
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
    let provenance = if matches!(spectrum, SpectrumModel::Delta) && path_delay == 0.0 {
        Provenance::Closed
    } else {
        Provenance::Dephased
    };
    Ok(CorrelationCurve {
        points,
        mode,
        provenance,
    })
}

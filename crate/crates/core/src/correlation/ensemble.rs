//! g²(φ) averaged over the segments of a pulse sequence.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    g2_from_means, intensities_closed, CorrelationCurve, CurvePoint, NormalizationMode, Provenance,
};
use crate::error::{Error, Result};
use crate::modulation::PulseSequence;
use crate::numeric::pairwise_mean;
use crate::optics::{BsConvention, MatrixEngine};

/// How per-segment detector intensities are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Engine {
    /// Closed-form intensities driven by the branch phase alone (the input port is ignored).
    #[default]
    #[serde(rename = "closed")]
    ClosedForm,
    /// Hadamard-convention MZI acting on `(E₀e^{i·phase}/√2, E₀/√2)` with the shifted
    /// field on the segment's active port.
    #[serde(rename = "matrix")]
    Matrix,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::ClosedForm => "closed",
            Engine::Matrix => "matrix",
        })
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "closed" | "closed_form" => Ok(Engine::ClosedForm),
            "matrix" => Ok(Engine::Matrix),
            other => Err(format!("unknown engine `{other}` (expected closed|matrix)")),
        }
    }
}

fn ensemble_point(
    seq: &PulseSequence,
    phi: f64,
    engine: Engine,
    mode: NormalizationMode,
) -> CurvePoint {
    let n = seq.segments.len();
    let mut i_a = Vec::with_capacity(n);
    let mut i_b = Vec::with_capacity(n);
    match engine {
        Engine::ClosedForm => {
            for seg in &seq.segments {
                let p = intensities_closed(phi, &seg.branch);
                i_a.push(p.i_a);
                i_b.push(p.i_b);
            }
        }
        Engine::Matrix => {
            let mzi = MatrixEngine::new(phi, BsConvention::Hadamard);
            let e0 = Complex64::new(1.0, 0.0);
            for seg in &seq.segments {
                let (a, b) = mzi.intensities(e0, seg.branch.phase(), seg.active_port);
                i_a.push(a);
                i_b.push(b);
            }
        }
    }
    let products: Vec<f64> = i_a.iter().zip(&i_b).map(|(a, b)| 4.0 * a * b).collect();
    // `n > 0` is checked by the caller.
    let i_a_mean = pairwise_mean(&i_a).unwrap_or(0.0);
    let i_b_mean = pairwise_mean(&i_b).unwrap_or(0.0);
    let r_mean = pairwise_mean(&products).unwrap_or(0.0);
    CurvePoint {
        phi,
        i_a_mean,
        i_b_mean,
        r_mean,
        g2: g2_from_means(i_a_mean, i_b_mean, r_mean, mode),
    }
}

/// Ensemble g²(φ) from the arithmetic means `⟨I_A⟩`, `⟨I_B⟩` and `⟨I_A I_B⟩` over
/// the segments of `seq`.
///
/// Points where a mean intensity vanishes carry `g2: None`. Grid points are evaluated
/// independently (and in parallel); each mean uses a fixed pairwise reduction, so the
/// output is bit-identical from run to run.
pub fn g2_ensemble(
    seq: &PulseSequence,
    phi_grid: &[f64],
    engine: Engine,
    mode: NormalizationMode,
) -> Result<CorrelationCurve> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    if phi_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if phi_grid.iter().any(|p| !p.is_finite()) {
        return Err(Error::NonFinite("phi"));
    }
    let points = phi_grid
        .par_iter()
        .map(|&phi| ensemble_point(seq, phi, engine, mode))
        .collect();
    Ok(CorrelationCurve {
        points,
        mode,
        provenance: Provenance::Ensemble,
    })
}

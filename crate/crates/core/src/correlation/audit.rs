//! Cross-checks between the closed-form field expressions, the closed-form intensities,
//! the matrix engine and the preparation-stage fields.
//!
//! Several of these layers do not agree with each other. The audit measures by how much
//! instead of hiding it; non-zero discrepancies are findings, not failures.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{g2_closed, intensities_closed, NormalizationMode};
use crate::modulation::{BasisBranch, Branch, PortMap};
use crate::numeric::linspace;
use crate::optics::{eq_fields_closed, stage1_fields, BsConvention, MatrixEngine, Port};

/// Field-level `|E_A|²` (with ζ′ = −ζ) against the intensity-level `I_A`.
pub const CHECK_FIELD_VS_INTENSITY: &str = "field_vs_intensity_i_a";
/// Hadamard matrix engine against the closed-form `(I_A, I_B)`.
pub const CHECK_MATRIX_VS_CLOSED: &str = "matrix_vs_closed_intensities";
/// `I₁ + I₂ − I₀` of the preparation-stage fields.
pub const CHECK_STAGE1_ENERGY: &str = "stage1_energy_defect";
/// `g²_paper / g²_derived − ½` at quadrature.
pub const CHECK_G2_RATIO: &str = "g2_paper_over_derived_minus_half";
/// `|E_A|² + |E_B|² − I₀` of the closed-form output fields.
pub const CHECK_FIELD_ENERGY: &str = "output_field_energy_defect";
/// Two-segment `⟨I_A⟩` of the matrix engine with ζ on port 1 and ζ′ on port 2,
/// against the closed-form toggle.
pub const CHECK_PORT_TOGGLE: &str = "alternating_port_mean_i_a";

pub const CHECK_NAMES: [&str; 6] = [
    CHECK_FIELD_VS_INTENSITY,
    CHECK_MATRIX_VS_CLOSED,
    CHECK_STAGE1_ENERGY,
    CHECK_G2_RATIO,
    CHECK_FIELD_ENERGY,
    CHECK_PORT_TOGGLE,
];

/// Two discrepancies closer than this count as a tie when locating the maximum.
const TIE_TOL: f64 = 1e-12;

/// (φ, ζ) grid the audit sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditGrid {
    pub phi_min: f64,
    pub phi_max: f64,
    pub phi_steps: usize,
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub zeta_steps: usize,
}

impl Default for AuditGrid {
    fn default() -> Self {
        AuditGrid {
            phi_min: -PI,
            phi_max: PI,
            phi_steps: 101,
            zeta_min: 0.0,
            zeta_max: PI,
            zeta_steps: 101,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditPoint {
    pub phi: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub name: String,
    pub max_abs_discrepancy: f64,
    pub at: AuditPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AuditReport {
    pub records: Vec<AuditRecord>,
}

impl AuditReport {
    pub fn get(&self, name: &str) -> Option<&AuditRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

/// Running maximum of |d| over a grid.
///
/// Ties (within [`TIE_TOL`]) prefer a positive signed discrepancy over a negative one,
/// then the earliest point visited.
struct MaxTracker {
    best: Option<(f64, f64, AuditPoint)>,
}

impl MaxTracker {
    fn new() -> Self {
        MaxTracker { best: None }
    }

    fn offer(&mut self, signed: f64, at: AuditPoint) {
        let mag = signed.abs();
        let replace = match self.best {
            None => true,
            Some((best_mag, best_signed, _)) => {
                mag > best_mag + TIE_TOL
                    || ((mag - best_mag).abs() <= TIE_TOL && signed > 0.0 && best_signed <= 0.0)
            }
        };
        if replace {
            self.best = Some((mag, signed, at));
        }
    }

    fn into_record(self, name: &str) -> AuditRecord {
        let (mag, _, at) = self.best.unwrap_or((
            0.0,
            0.0,
            AuditPoint {
                phi: 0.0,
                zeta: 0.0,
            },
        ));
        AuditRecord {
            name: name.to_string(),
            max_abs_discrepancy: mag,
            at,
        }
    }
}

/// Run every check in [`CHECK_NAMES`] over `grid`, in that order.
///
/// Intensities are in units of I₀ (E₀ = 1). The g² ratio check runs on the φ axis at
/// ζ = π/2, where the closed-form g² applies.
pub fn audit_consistency(grid: &AuditGrid) -> AuditReport {
    let phis = linspace(grid.phi_min, grid.phi_max, grid.phi_steps);
    let zetas = linspace(grid.zeta_min, grid.zeta_max, grid.zeta_steps);
    let e0 = Complex64::new(1.0, 0.0);

    let mut field_vs_intensity = MaxTracker::new();
    let mut matrix_vs_closed = MaxTracker::new();
    let mut stage1 = MaxTracker::new();
    let mut field_energy = MaxTracker::new();
    let mut port_toggle = MaxTracker::new();

    for &phi in &phis {
        let mzi = MatrixEngine::new(phi, BsConvention::Hadamard);
        for &zeta in &zetas {
            let at = AuditPoint { phi, zeta };
            let zeta_branch = BasisBranch::zeta(zeta);
            let closed = intensities_closed(phi, &zeta_branch);

            let fields = eq_fields_closed(e0, zeta, -zeta, phi);
            let (ia_field, ib_field) = fields.intensities();
            field_vs_intensity.offer(ia_field - closed.i_a, at);
            field_energy.offer(ia_field + ib_field - 1.0, at);

            let (ia_m, ib_m) = mzi.intensities(e0, zeta, Port::One);
            let da = ia_m - closed.i_a;
            let db = ib_m - closed.i_b;
            matrix_vs_closed.offer(if da.abs() >= db.abs() { da } else { db }, at);

            let s1 = stage1_fields(e0, zeta);
            stage1.offer(s1.total_intensity() - 1.0, at);

            let ports = PortMap::Alternating;
            let toggled = [Branch::Zeta, Branch::ZetaPrime].map(|tag| {
                let b = BasisBranch::of(tag, zeta);
                (
                    mzi.intensities(e0, b.phase(), ports.port_for(tag)).0,
                    intensities_closed(phi, &b).i_a,
                )
            });
            let matrix_mean = (toggled[0].0 + toggled[1].0) / 2.0;
            let closed_mean = (toggled[0].1 + toggled[1].1) / 2.0;
            port_toggle.offer(matrix_mean - closed_mean, at);
        }
    }

    let mut ratio = MaxTracker::new();
    // The phase grid is non-empty whenever phi_steps > 0.
    if let (Ok(paper), Ok(derived)) = (
        g2_closed(&phis, NormalizationMode::Paper),
        g2_closed(&phis, NormalizationMode::Derived),
    ) {
        for (p, d) in paper.points.iter().zip(&derived.points) {
            if let (Some(gp), Some(gd)) = (p.g2, d.g2) {
                if gd != 0.0 {
                    ratio.offer(
                        gp / gd - 0.5,
                        AuditPoint {
                            phi: p.phi,
                            zeta: FRAC_PI_2,
                        },
                    );
                }
            }
        }
    }

    AuditReport {
        records: vec![
            field_vs_intensity.into_record(CHECK_FIELD_VS_INTENSITY),
            matrix_vs_closed.into_record(CHECK_MATRIX_VS_CLOSED),
            stage1.into_record(CHECK_STAGE1_ENERGY),
            ratio.into_record(CHECK_G2_RATIO),
            field_energy.into_record(CHECK_FIELD_ENERGY),
            port_toggle.into_record(CHECK_PORT_TOGGLE),
        ],
    }
}

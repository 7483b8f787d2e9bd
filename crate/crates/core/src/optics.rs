//! Two-port field algebra for a lossless Mach-Zehnder interferometer.
//!
//! A [`TwoPortField`] is the amplitude pair on the two ports (or arms) of a stage and a
//! [`TwoPortMatrix`] is the 2×2 transfer matrix of a linear element acting on it. The
//! interferometer is modelled as `BS · diag(e^{iφ}, 1) · BS`, with φ applied to arm 1.
//!
//! Two families of expressions live here side by side:
//!
//! - the matrix engine ([`make_bs`], [`phase_arm`], [`mzi_transfer`], [`apply`],
//!   [`MatrixEngine`]), which is unitary by construction;
//! - the closed-form field expressions ([`eq_fields_closed`], [`stage1_fields`]) which are
//!   transcribed term by term and deliberately not simplified, so any disagreement
//!   with the matrix engine stays visible.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// One optical field amplitude in units of √I₀.
pub type ComplexAmplitude = Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Physical port (or arm) index of a two-port element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Port {
    One,
    Two,
}

impl Port {
    pub fn index(self) -> u8 {
        match self {
            Port::One => 1,
            Port::Two => 2,
        }
    }

    pub fn other(self) -> Port {
        match self {
            Port::One => Port::Two,
            Port::Two => Port::One,
        }
    }
}

impl From<Port> for u8 {
    fn from(p: Port) -> u8 {
        p.index()
    }
}

impl TryFrom<u8> for Port {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Port::One),
            2 => Ok(Port::Two),
            other => Err(format!("port must be 1 or 2, got {other}")),
        }
    }
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Amplitude pair on the two ports of a stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPortField {
    pub port1: ComplexAmplitude,
    pub port2: ComplexAmplitude,
}

impl TwoPortField {
    pub fn new(port1: ComplexAmplitude, port2: ComplexAmplitude) -> Self {
        TwoPortField { port1, port2 }
    }

    pub fn get(&self, port: Port) -> ComplexAmplitude {
        match port {
            Port::One => self.port1,
            Port::Two => self.port2,
        }
    }

    /// `(|port1|², |port2|²)`.
    pub fn intensities(&self) -> (f64, f64) {
        (self.port1.norm_sqr(), self.port2.norm_sqr())
    }

    pub fn total_intensity(&self) -> f64 {
        self.port1.norm_sqr() + self.port2.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.port1.is_finite() && self.port2.is_finite()
    }
}

/// 2×2 complex transfer matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPortMatrix {
    entries: [[ComplexAmplitude; 2]; 2],
}

impl TwoPortMatrix {
    pub fn new(entries: [[ComplexAmplitude; 2]; 2]) -> Self {
        TwoPortMatrix { entries }
    }

    pub fn identity() -> Self {
        Self::diag(Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn diag(a: ComplexAmplitude, b: ComplexAmplitude) -> Self {
        let z = Complex64::new(0.0, 0.0);
        TwoPortMatrix::new([[a, z], [z, b]])
    }

    /// Entry at zero-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> ComplexAmplitude {
        self.entries[row][col]
    }

    pub fn entries(&self) -> [[ComplexAmplitude; 2]; 2] {
        self.entries
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let e = &self.entries;
        TwoPortMatrix::new([
            [e[0][0].conj(), e[1][0].conj()],
            [e[0][1].conj(), e[1][1].conj()],
        ])
    }

    pub fn scale(&self, s: ComplexAmplitude) -> Self {
        let e = &self.entries;
        TwoPortMatrix::new([[e[0][0] * s, e[0][1] * s], [e[1][0] * s, e[1][1] * s]])
    }

    /// Largest elementwise magnitude of `M†M − I`.
    pub fn unitarity_defect(&self) -> f64 {
        let g = self.adjoint() * *self;
        let id = TwoPortMatrix::identity();
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((g.entries[r][c] - id.entries[r][c]).norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Largest elementwise distance to `other`.
    pub fn max_abs_diff(&self, other: &TwoPortMatrix) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }
}

impl Mul for TwoPortMatrix {
    type Output = TwoPortMatrix;

    fn mul(self, rhs: TwoPortMatrix) -> TwoPortMatrix {
        let a = &self.entries;
        let b = &rhs.entries;
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        TwoPortMatrix::new(out)
    }
}

impl Mul<TwoPortField> for TwoPortMatrix {
    type Output = TwoPortField;

    fn mul(self, f: TwoPortField) -> TwoPortField {
        apply(&self, &f)
    }
}

/// Phase convention of a lossless 50/50 beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BsConvention {
    /// Rows `(1, i)/√2`, `(i, 1)/√2`: reflection picks up a π/2 phase.
    Symmetric,
    /// Rows `(1, 1)/√2`, `(1, −1)/√2`.
    #[default]
    Hadamard,
}

impl fmt::Display for BsConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BsConvention::Symmetric => "symmetric",
            BsConvention::Hadamard => "hadamard",
        })
    }
}

impl FromStr for BsConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "symmetric" => Ok(BsConvention::Symmetric),
            "hadamard" => Ok(BsConvention::Hadamard),
            other => Err(format!("unknown beam-splitter convention `{other}`")),
        }
    }
}

/// Exact 50/50 beam-splitter matrix for `conv`.
pub fn make_bs(conv: BsConvention) -> TwoPortMatrix {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let ih = Complex64::new(0.0, FRAC_1_SQRT_2);
    match conv {
        BsConvention::Symmetric => TwoPortMatrix::new([[h, ih], [ih, h]]),
        BsConvention::Hadamard => TwoPortMatrix::new([[h, h], [h, -h]]),
    }
}

/// Relative phase φ applied to arm 1: `diag(e^{iφ}, 1)`.
pub fn phase_arm(phi: f64) -> TwoPortMatrix {
    TwoPortMatrix::diag(Complex64::cis(phi), Complex64::new(1.0, 0.0))
}

/// `BS · phase_arm(φ) · BS`.
pub fn mzi_transfer(phi: f64, conv: BsConvention) -> TwoPortMatrix {
    let bs = make_bs(conv);
    bs * phase_arm(phi) * bs
}

pub fn apply(m: &TwoPortMatrix, f: &TwoPortField) -> TwoPortField {
    let e = &m.entries;
    TwoPortField {
        port1: e[0][0] * f.port1 + e[0][1] * f.port2,
        port2: e[1][0] * f.port1 + e[1][1] * f.port2,
    }
}

/// Input pair for one pulse segment: `E₀e^{i·phase}/√2` on `active`, `E₀/√2` on the other port.
pub fn basis_input(e0: ComplexAmplitude, phase: f64, active: Port) -> TwoPortField {
    let shifted = e0 * Complex64::cis(phase) * FRAC_1_SQRT_2;
    let plain = e0 * FRAC_1_SQRT_2;
    match active {
        Port::One => TwoPortField::new(shifted, plain),
        Port::Two => TwoPortField::new(plain, shifted),
    }
}

/// MZI transfer matrix for one φ, reused across many input segments.
///
/// Outputs are returned in detector order `(E_A, E_B)`. With φ on arm 1, the
/// `(1 − sinφ·sinζ)/2` output of the Hadamard interferometer appears on physical
/// port 2, so detector A reads port 2 and detector B reads port 1.
#[derive(Debug, Clone, Copy)]
pub struct MatrixEngine {
    transfer: TwoPortMatrix,
}

impl MatrixEngine {
    pub fn new(phi: f64, conv: BsConvention) -> Self {
        MatrixEngine {
            transfer: mzi_transfer(phi, conv),
        }
    }

    pub fn transfer(&self) -> &TwoPortMatrix {
        &self.transfer
    }

    pub fn detector_fields(&self, input: &TwoPortField) -> TwoPortField {
        let out = apply(&self.transfer, input);
        TwoPortField::new(out.port2, out.port1)
    }

    /// `(I_A, I_B)` for a segment with `phase` on the `active` input port.
    pub fn intensities(&self, e0: ComplexAmplitude, phase: f64, active: Port) -> (f64, f64) {
        self.detector_fields(&basis_input(e0, phase, active))
            .intensities()
    }
}

/// One-shot [`MatrixEngine`] evaluation, fields in detector order `(E_A, E_B)`.
pub fn engine_fields(
    e0: ComplexAmplitude,
    phase: f64,
    active: Port,
    phi: f64,
    conv: BsConvention,
) -> TwoPortField {
    MatrixEngine::new(phi, conv).detector_fields(&basis_input(e0, phase, active))
}

/// Closed-form output fields `(E_A, E_B)` for basis phases `(ζ, ζ′)` and MZI phase φ.
///
/// Transcribed term by term:
/// `E_A = E₀/(2√2) [e^{iζ}(1 − e^{iφ}) − e^{−iζ′}(1 + e^{iφ})]`,
/// `E_B = iE₀/(2√2) [e^{iζ}(1 + e^{iφ}) − e^{−iζ′}(1 − e^{iφ})]`.
pub fn eq_fields_closed(e0: ComplexAmplitude, zeta: f64, zeta_p: f64, phi: f64) -> TwoPortField {
    let one = Complex64::new(1.0, 0.0);
    let prefactor = 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let ez = Complex64::cis(zeta);
    let ezp = Complex64::cis(-zeta_p);
    let ep = Complex64::cis(phi);
    let e_a = e0 * prefactor * (ez * (one - ep) - ezp * (one + ep));
    let e_b = I * e0 * prefactor * (ez * (one + ep) - ezp * (one - ep));
    TwoPortField::new(e_a, e_b)
}

/// Preparation-stage fields `(E₁, E₂)` for the active basis phase, transcribed verbatim:
/// `E₁ = E₀/√2 [1 − cos ζ]`, `E₂ = E₀/√2 [1 + cos ζ]`.
///
/// These are not energy conserving away from ζ = (2n+1)π/2; the defect is `I₀cos²ζ`.
pub fn stage1_fields(e0: ComplexAmplitude, basis_phase: f64) -> TwoPortField {
    let c = basis_phase.cos();
    TwoPortField::new(
        e0 * FRAC_1_SQRT_2 * (1.0 - c),
        e0 * FRAC_1_SQRT_2 * (1.0 + c),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_field(f: TwoPortField, p1: Complex64, p2: Complex64) {
        assert!((f.port1 - p1).norm() < 1e-12, "port1 {} != {}", f.port1, p1);
        assert!((f.port2 - p2).norm() < 1e-12, "port2 {} != {}", f.port2, p2);
    }

    #[test]
    fn hadamard_is_unitary_and_involutive() {
        let h = make_bs(BsConvention::Hadamard);
        assert!(h.is_unitary(1e-12));
        let twice = h * (h * TwoPortField::new(c(1.0, 0.0), c(0.0, 0.0)));
        assert_field(twice, c(1.0, 0.0), c(0.0, 0.0));
    }

    #[test]
    fn symmetric_twice_swaps_with_i() {
        let s = make_bs(BsConvention::Symmetric);
        assert!(s.is_unitary(1e-12));
        let twice = s * (s * TwoPortField::new(c(1.0, 0.0), c(0.0, 0.0)));
        assert_field(twice, c(0.0, 0.0), c(0.0, 1.0));
    }

    #[test]
    fn phase_arm_examples() {
        assert!(phase_arm(0.0).max_abs_diff(&TwoPortMatrix::identity()) < 1e-15);
        let pi = phase_arm(PI);
        assert!(pi.max_abs_diff(&TwoPortMatrix::diag(c(-1.0, 0.0), c(1.0, 0.0))) < 1e-15);
        let half = phase_arm(FRAC_PI_2);
        assert!(half.max_abs_diff(&TwoPortMatrix::diag(c(0.0, 1.0), c(1.0, 0.0))) < 1e-15);
        assert!(phase_arm(1.234).is_unitary(1e-12));
    }

    #[test]
    fn hadamard_mzi_at_zero_is_identity() {
        let m = mzi_transfer(0.0, BsConvention::Hadamard);
        assert!(m.max_abs_diff(&TwoPortMatrix::identity()) < 1e-12);
    }

    #[test]
    fn hadamard_mzi_at_pi_is_antidiagonal_up_to_global_phase() {
        let m = mzi_transfer(PI, BsConvention::Hadamard);
        let swap = TwoPortMatrix::new([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]);
        // φ sits on arm 1, so the swap carries a global −1.
        assert!(m.max_abs_diff(&swap.scale(c(-1.0, 0.0))) < 1e-12);
        assert!(m.entry(0, 0).norm() < 1e-12 && m.entry(1, 1).norm() < 1e-12);
    }

    #[test]
    fn apply_examples() {
        let a = c(0.3, -0.2);
        let b = c(-1.1, 0.7);
        assert_field(
            apply(&TwoPortMatrix::identity(), &TwoPortField::new(a, b)),
            a,
            b,
        );
        let unit = TwoPortField::new(c(1.0, 0.0), c(0.0, 0.0));
        assert_field(
            apply(&make_bs(BsConvention::Hadamard), &unit),
            c(FRAC_1_SQRT_2, 0.0),
            c(FRAC_1_SQRT_2, 0.0),
        );
        assert_field(
            apply(&make_bs(BsConvention::Symmetric), &unit),
            c(FRAC_1_SQRT_2, 0.0),
            c(0.0, FRAC_1_SQRT_2),
        );
    }

    #[test]
    fn closed_fields_examples() {
        let e0 = c(1.0, 0.0);
        let f = eq_fields_closed(e0, FRAC_PI_2, -FRAC_PI_2, 0.0);
        assert_field(f, c(0.0, -FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2, 0.0));
        assert_abs_diff_eq!(f.total_intensity(), 1.0, epsilon = 1e-12);

        let f = eq_fields_closed(e0, 0.0, 0.0, 0.0);
        assert_field(f, c(-FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2));

        let f = eq_fields_closed(e0, 0.0, 0.0, PI);
        assert_field(f, c(FRAC_1_SQRT_2, 0.0), c(0.0, -FRAC_1_SQRT_2));
    }

    #[test]
    fn stage1_examples() {
        let e0 = c(1.0, 0.0);
        let f = stage1_fields(e0, FRAC_PI_2);
        assert_field(f, c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0));
        assert_field(stage1_fields(e0, 0.0), c(0.0, 0.0), c(SQRT_2, 0.0));
        assert_field(stage1_fields(e0, PI), c(SQRT_2, 0.0), c(0.0, 0.0));
    }

    #[test]
    fn engine_reads_detector_a_from_port_two() {
        let f = engine_fields(
            c(1.0, 0.0),
            FRAC_PI_2,
            Port::One,
            FRAC_PI_2,
            BsConvention::Hadamard,
        );
        let (ia, ib) = f.intensities();
        assert_abs_diff_eq!(ia, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ib, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn port_serde_is_numeric() {
        assert_eq!(Port::try_from(2).unwrap(), Port::Two);
        assert!(Port::try_from(3).is_err());
        assert_eq!(Port::One.other(), Port::Two);
        assert_eq!(u8::from(Port::Two), 2);
    }

    #[test]
    fn convention_parses() {
        assert_eq!(
            "hadamard".parse::<BsConvention>().unwrap(),
            BsConvention::Hadamard
        );
        assert_eq!(
            "symmetric".parse::<BsConvention>().unwrap(),
            BsConvention::Symmetric
        );
        assert!("fresnel".parse::<BsConvention>().is_err());
        assert_eq!(BsConvention::default(), BsConvention::Hadamard);
    }
}

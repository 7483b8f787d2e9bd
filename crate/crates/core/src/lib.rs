//! Numerics for a Mach-Zehnder interferometer driven by a pair of
//! symmetrically detuned input fields.
//!
//! The crate is split along the physical pipeline:
//!
//! - [`optics`]: two-port fields, beam-splitter / phase / MZI transfer matrices and the
//!   closed-form output-field expressions.
//! - [`modulation`]: the detuning-derived basis phases ζ = ΔT/2, ζ′ = −ζ and the
//!   alternating (or seeded random) pulse sequence that toggles between them.
//! - [`correlation`]: output intensities, the intensity product, g²(φ) in closed form,
//!   over pulse ensembles and under spectral dephasing, plus a consistency audit
//!   between the formula layers and the matrix engine.
//! - [`export`]: CSV / JSON writers for curves, sequences and audit reports.
//!
//! All intensities are expressed in units of the input intensity I₀ = |E₀|².

pub mod correlation;
pub mod error;
pub mod export;
pub mod modulation;
pub mod numeric;
pub mod optics;

pub use error::{Error, Result};

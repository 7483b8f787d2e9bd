//! Detuning-derived basis phases and the pulse sequence that toggles between them.
//!
//! An AOM shifts the carrier by ±Δ. Each shifted pulse lasts T/2, so the two
//! inputs pick up the symmetric phase pair ζ = ΔT/2 and ζ′ = −ζ. A [`PulseSequence`]
//! lists which branch is active in each half period and on which input port the
//! shifted field enters; the other port carries the unshifted carrier.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand_chacha::rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::Port;

/// Tolerance on |ζ − (2n+1)π/2| for the quadrature condition.
pub const QUADRATURE_TOL: f64 = 1e-9;

/// AOM drive parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetuningConfig {
    /// Detuning Δ in rad/s.
    pub delta: f64,
    /// Full cycle T in seconds; each pulse lasts T/2.
    pub period: f64,
    /// Carrier f₀ in rad/s. Only reported, never enters the phases.
    pub f0: f64,
}

impl DetuningConfig {
    pub fn new(delta: f64, period: f64, f0: f64) -> Result<Self> {
        let cfg = DetuningConfig { delta, period, f0 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_finite() || self.delta < 0.0 {
            return Err(Error::InvalidDetuning(format!(
                "delta must be finite and >= 0, got {}",
                self.delta
            )));
        }
        if !self.period.is_finite() || self.period <= 0.0 {
            return Err(Error::InvalidDetuning(format!(
                "period must be finite and > 0, got {}",
                self.period
            )));
        }
        if !self.f0.is_finite() {
            return Err(Error::InvalidDetuning(format!(
                "f0 must be finite, got {}",
                self.f0
            )));
        }
        Ok(())
    }

    pub fn zeta(&self) -> f64 {
        zeta_of(self)
    }

    /// Shifted carriers `(f₀ + Δ, f₀ − Δ)`.
    pub fn shifted_frequencies(&self) -> (f64, f64) {
        (self.f0 + self.delta, self.f0 - self.delta)
    }

    pub fn pulse_duration(&self) -> f64 {
        self.period / 2.0
    }
}

/// ζ = ΔT/2.
pub fn zeta_of(cfg: &DetuningConfig) -> f64 {
    cfg.delta * cfg.period / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Zeta,
    ZetaPrime,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Zeta => "zeta",
            Branch::ZetaPrime => "zeta_prime",
        }
    }

    /// +1 for ζ, −1 for ζ′.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Zeta => 1.0,
            Branch::ZetaPrime => -1.0,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the two basis phases; the phase is always `±ζ` according to the tag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisBranch {
    tag: Branch,
    phase: f64,
}

impl BasisBranch {
    /// Branch `tag` of the symmetric pair built on `zeta`.
    pub fn of(tag: Branch, zeta: f64) -> Self {
        let phase = match tag {
            Branch::Zeta => zeta,
            Branch::ZetaPrime => -zeta,
        };
        BasisBranch { tag, phase }
    }

    pub fn zeta(zeta: f64) -> Self {
        Self::of(Branch::Zeta, zeta)
    }

    pub fn zeta_prime(zeta: f64) -> Self {
        Self::of(Branch::ZetaPrime, zeta)
    }

    pub fn from_config(tag: Branch, cfg: &DetuningConfig) -> Self {
        Self::of(tag, zeta_of(cfg))
    }

    pub fn tag(&self) -> Branch {
        self.tag
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureCheck {
    pub is_quadrature: bool,
    pub nearest_n: u64,
    /// Signed `ζ − (2n+1)π/2` for the nearest admissible n.
    pub deviation: f64,
}

/// Test ζ = ΔT/2 against the quadrature condition ζ = (2n+1)π/2, n ≥ 0.
pub fn quadrature_check(cfg: &DetuningConfig) -> QuadratureCheck {
    quadrature_check_phase(zeta_of(cfg))
}

pub fn quadrature_check_phase(zeta: f64) -> QuadratureCheck {
    let n = ((zeta - FRAC_PI_2) / PI).round().max(0.0);
    let nearest_n = n as u64;
    let deviation = zeta - (2.0 * n + 1.0) * FRAC_PI_2;
    QuadratureCheck {
        is_quadrature: deviation.abs() <= QUADRATURE_TOL,
        nearest_n,
        deviation,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequencePolicy {
    /// ζ, ζ′, ζ, ζ′, …
    #[default]
    Alternate,
    /// Fair coin per segment, keyed by `(seed, index)`.
    Random,
}

impl fmt::Display for SequencePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SequencePolicy::Alternate => "alternate",
            SequencePolicy::Random => "random",
        })
    }
}

impl FromStr for SequencePolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "alternate" => Ok(SequencePolicy::Alternate),
            "random" => Ok(SequencePolicy::Random),
            other => Err(format!(
                "unknown policy `{other}` (expected alternate|random)"
            )),
        }
    }
}

/// Which input port carries the frequency-shifted pulse for each branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortMap {
    /// ζ on port 1, ζ′ on port 2 (E₁ and E₂ take turns).
    #[default]
    Alternating,
    /// ζ on port 2, ζ′ on port 1.
    Flipped,
    /// Both branches on port 1; only the sign of the phase toggles.
    Shared,
}

impl PortMap {
    pub fn port_for(self, branch: Branch) -> Port {
        match (self, branch) {
            (PortMap::Alternating, Branch::Zeta) => Port::One,
            (PortMap::Alternating, Branch::ZetaPrime) => Port::Two,
            (PortMap::Flipped, Branch::Zeta) => Port::Two,
            (PortMap::Flipped, Branch::ZetaPrime) => Port::One,
            (PortMap::Shared, _) => Port::One,
        }
    }
}

impl fmt::Display for PortMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PortMap::Alternating => "alternating",
            PortMap::Flipped => "flipped",
            PortMap::Shared => "shared",
        })
    }
}

impl FromStr for PortMap {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "alternating" => Ok(PortMap::Alternating),
            "flipped" => Ok(PortMap::Flipped),
            "shared" => Ok(PortMap::Shared),
            other => Err(format!(
                "unknown port map `{other}` (expected alternating|flipped|shared)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment {
    pub branch: BasisBranch,
    /// Seconds, always T/2.
    pub duration: f64,
    /// +Δ for the ζ branch, −Δ for ζ′ (rad/s).
    pub freq_offset: f64,
    pub active_port: Port,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseSequence {
    pub segments: Vec<PulseSegment>,
    pub policy: SequencePolicy,
    pub seed: u64,
    pub port_map: PortMap,
}

impl PulseSequence {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// `(#ζ, #ζ′)`.
    pub fn branch_counts(&self) -> (usize, usize) {
        let zeta = self
            .segments
            .iter()
            .filter(|s| s.branch.tag() == Branch::Zeta)
            .count();
        (zeta, self.segments.len() - zeta)
    }
}

/// Branch drawn for segment `index` under the random policy.
///
/// Reads the `index`-th 64-bit word of a ChaCha8 stream seeded with `seed`, so any
/// segment can be regenerated on its own and the result does not depend on the order
/// in which segments are produced.
pub fn random_branch(seed: u64, index: u64) -> Branch {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * index as u128);
    branch_from_word(rng.next_u64())
}

fn branch_from_word(word: u64) -> Branch {
    if word >> 63 == 0 {
        Branch::Zeta
    } else {
        Branch::ZetaPrime
    }
}

fn segment(cfg: &DetuningConfig, tag: Branch, port_map: PortMap) -> PulseSegment {
    PulseSegment {
        branch: BasisBranch::from_config(tag, cfg),
        duration: cfg.pulse_duration(),
        freq_offset: tag.sign() * cfg.delta,
        active_port: port_map.port_for(tag),
    }
}

/// Sequence with the default port assignment (ζ on port 1, ζ′ on port 2).
pub fn make_sequence(
    cfg: &DetuningConfig,
    n_segments: usize,
    policy: SequencePolicy,
    seed: u64,
) -> Result<PulseSequence> {
    make_sequence_with_ports(cfg, n_segments, policy, seed, PortMap::default())
}

pub fn make_sequence_with_ports(
    cfg: &DetuningConfig,
    n_segments: usize,
    policy: SequencePolicy,
    seed: u64,
    port_map: PortMap,
) -> Result<PulseSequence> {
    cfg.validate()?;
    if n_segments == 0 {
        return Err(Error::EmptySequence);
    }
    let segments = match policy {
        SequencePolicy::Alternate => (0..n_segments)
            .map(|k| {
                let tag = if k % 2 == 0 {
                    Branch::Zeta
                } else {
                    Branch::ZetaPrime
                };
                segment(cfg, tag, port_map)
            })
            .collect(),
        SequencePolicy::Random => {
            // Sequential draws walk the same words `random_branch` seeks to.
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n_segments)
                .map(|_| segment(cfg, branch_from_word(rng.next_u64()), port_map))
                .collect()
        }
    };
    Ok(PulseSequence {
        segments,
        policy,
        seed,
        port_map,
    })
}

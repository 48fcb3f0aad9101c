//! Chain parameters, the Bose-Hubbard to spin-model map, and phase labels.
//!
//! The Hamiltonian is
//! `H = J Σ_i [cos θ S_i·S_{i+1} + sin θ (S_i·S_{i+1})²]`
//! with lattice spacing `d = 1` and `ħ = 1`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hilbert::MAX_LENGTH;

/// Tolerance used when comparing an angle against a phase boundary.
const BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Open => f.write_str("open"),
            Boundary::Periodic => f.write_str("periodic"),
        }
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "open" | "obc" => Ok(Boundary::Open),
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            other => Err(Error::Domain(format!(
                "boundary must be `open` or `periodic`, got `{other}`"
            ))),
        }
    }
}

/// Parameters of the bilinear-biquadratic chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub theta: f64,
    pub j_scale: f64,
    pub length: usize,
    pub boundary: Boundary,
}

impl ModelParams {
    /// Open chain with `J = 1`.
    pub fn new(theta: f64, length: usize) -> Result<Self> {
        Self::with_options(theta, 1.0, length, Boundary::Open)
    }

    pub fn with_options(
        theta: f64,
        j_scale: f64,
        length: usize,
        boundary: Boundary,
    ) -> Result<Self> {
        let params = Self {
            theta,
            j_scale,
            length,
            boundary,
        };
        params.validate()?;
        if length % 6 != 0 {
            log::warn!(
                "chain length {length} is not a multiple of 6; period-2 and period-3 \
                 correlations are incommensurate with the chain"
            );
        }
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(-PI..=PI).contains(&self.theta) {
            return Err(Error::Domain(format!(
                "theta = {} lies outside [-pi, pi]",
                self.theta
            )));
        }
        if !(self.j_scale.is_finite() && self.j_scale > 0.0) {
            return Err(Error::Domain(format!(
                "j_scale must be finite and positive, got {}",
                self.j_scale
            )));
        }
        if self.length < 2 || self.length > MAX_LENGTH {
            return Err(Error::Domain(format!(
                "length must lie in [2, {MAX_LENGTH}], got {}",
                self.length
            )));
        }
        Ok(())
    }

    /// Nearest-neighbour bonds `(i, j)`; periodic chains add `(L-1, 0)` when `L > 2`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let mut bonds: Vec<(usize, usize)> = (0..self.length - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic && self.length > 2 {
            bonds.push((self.length - 1, 0));
        }
        bonds
    }
}

/// The AKLT angle, `tan θ = 1/3`.
pub fn aklt_theta() -> f64 {
    (1.0f64 / 3.0).atan()
}

/// Couplings of the spin-1 Bose-Hubbard model at unit filling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardParams {
    pub u0: f64,
    pub u2: f64,
    pub t_hop: f64,
}

impl HubbardParams {
    pub fn new(u0: f64, u2: f64, t_hop: f64) -> Result<Self> {
        let h = Self { u0, u2, t_hop };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.u0.is_finite() && self.u0 > 0.0) {
            return Err(Error::Domain(format!("u0 must be positive, got {}", self.u0)));
        }
        if !self.u2.is_finite() || self.u0 + self.u2 <= 0.0 {
            return Err(Error::Domain(format!(
                "u0 + u2 must be positive, got {}",
                self.u0 + self.u2
            )));
        }
        if !(self.t_hop.is_finite() && self.t_hop >= 0.0) {
            return Err(Error::Domain(format!(
                "t_hop must be non-negative, got {}",
                self.t_hop
            )));
        }
        Ok(())
    }
}

/// Second-order map from Hubbard couplings to `(θ, J)`.
///
/// The branch of `tan θ = U0 / (U0 - 2 U2)` is fixed by the two-argument
/// arctangent, so `U0 > 0` always gives `θ ∈ (0, π)`. At the pole
/// `U0 = 2 U2` the energy scale `J` diverges and `+∞` is returned.
pub fn hubbard_to_spin(h: &HubbardParams) -> Result<(f64, f64)> {
    h.validate()?;
    let denom = h.u0 - 2.0 * h.u2;
    let theta = h.u0.atan2(denom);
    let prefactor = 2.0 * h.t_hop * h.t_hop / (h.u0 + h.u2);
    // sqrt(1 + tan²θ) = |sec θ| = hypot(U0, U0 - 2U2) / |U0 - 2U2|
    let sec = if denom == 0.0 {
        f64::INFINITY
    } else {
        h.u0.hypot(denom) / denom.abs()
    };
    let j_scale = if prefactor == 0.0 { 0.0 } else { prefactor * sec };
    Ok((theta, j_scale))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhaseLabel {
    Ferromagnetic,
    Critical,
    Haldane,
    Dimer,
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::Ferromagnetic => "ferromagnetic",
            PhaseLabel::Critical => "critical",
            PhaseLabel::Haldane => "haldane",
            PhaseLabel::Dimer => "dimer",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Transition angles in ascending order, each paired with the phase that
/// begins there.
const TRANSITIONS: [(f64, PhaseLabel); 4] = [
    (-3.0 * FRAC_PI_4, PhaseLabel::Dimer),
    (-FRAC_PI_4, PhaseLabel::Haldane),
    (FRAC_PI_4, PhaseLabel::Critical),
    (FRAC_PI_2, PhaseLabel::Ferromagnetic),
];

/// Phase of the chain at angle `theta`.
///
/// The ferromagnetic interval `(π/2, 5π/4)` wraps to `(π/2, π] ∪ [-π, -3π/4)`.
/// A boundary angle belongs to the phase at larger θ; use
/// [`is_transition_point`] to detect it.
pub fn classify_phase(theta: f64) -> Result<PhaseLabel> {
    if !(-PI..=PI).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} lies outside [-pi, pi]")));
    }
    let mut label = PhaseLabel::Ferromagnetic;
    for (start, phase) in TRANSITIONS {
        if theta >= start - BOUNDARY_EPS {
            label = phase;
        }
    }
    Ok(label)
}

/// True when `theta` sits on one of the four phase boundaries.
pub fn is_transition_point(theta: f64) -> bool {
    TRANSITIONS
        .iter()
        .any(|(start, _)| (theta - start).abs() <= BOUNDARY_EPS)
}

//! Photoionization optics in the wire: dipole moment, Rabi frequency,
//! spontaneous emission.
//!
//! The bulk ionization dipole moment `d_bulk` is defined against the
//! supercell volume it was computed in, so the wire moment picks up the
//! envelope amplitude at the defect site with the matching normalization,
//!
//! ```text
//!   d_wire = F₀(s) · e^(−S/2) · d_bulk ,
//!   F₀(s)  = √(8 V_sc / w²L) · cos(π s / 2L) ,
//! ```
//!
//! where e^(−S/2) is the zero-phonon Franck-Condon amplitude. Driving both
//! transitions with beams of power P focused to radius r gives the effective
//! Rabi frequency
//!
//! ```text
//!   Ω = e^(−S/2)/(r ħ) · √(8 P / (n_D c ε₀ π)) · F₀(s) · d_bulk ,
//! ```
//!
//! equal to √(Ω_P² + Ω_S²) with Ω_P = Ω_S = d_wire |E₀| / ħ.

use crate::constants::PhysicalConstants;
use crate::geometry::WireGeometry;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default ionization photon energy: the 2.6 eV zero-phonon threshold.
pub const DEFAULT_IONIZATION_ENERGY_EV: f64 = 2.6;

/// Drive laser parameters (identical for pump and Stokes unless overridden).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaserParams {
    /// Power per beam (W)
    pub power: f64,
    /// Gaussian spot radius (m)
    pub r_spot: f64,
    /// Single-photon detuning Δ (rad/s)
    pub detuning: f64,
}

impl Default for LaserParams {
    fn default() -> Self {
        // diffraction-limited spot at a conservative power
        LaserParams { power: 0.1, r_spot: 200e-9, detuning: 0.0 }
    }
}

impl LaserParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.power > 0.0) {
            return Err(format!("laser power must be positive, got {} W", self.power));
        }
        if !(self.r_spot > 0.0) {
            return Err(format!("spot radius must be positive, got {} m", self.r_spot));
        }
        Ok(())
    }
}

/// Derived optical quantities for one geometry and laser setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OpticalCoupling {
    /// Envelope amplitude at the NV site (supercell normalization)
    pub f0: f64,
    /// Wire photoionization dipole moment (C·m)
    pub d_wire: f64,
    /// Effective Rabi frequency (rad/s)
    pub omega: f64,
    /// Spontaneous emission rate of the driven transition (1/s)
    pub gamma_se: f64,
}

impl OpticalCoupling {
    pub fn compute(
        geometry: &WireGeometry,
        laser: &LaserParams,
        constants: &PhysicalConstants,
        omega_transition: f64,
    ) -> OpticalCoupling {
        OpticalCoupling {
            f0: envelope_norm_f0(geometry, constants),
            d_wire: dipole_wire(geometry, constants),
            omega: rabi_effective(geometry, laser, constants),
            gamma_se: spontaneous_emission(geometry, omega_transition, constants),
        }
    }
}

/// Envelope amplitude F₀ at the NV sites, √(8 V_sc/w²L)·cos(πs/2L).
///
/// Carries the supercell normalization to match `d_bulk`; it is exactly
/// √(V_sc/V_c) times the unit-cell-normalized envelope evaluated at the
/// defect position.
pub fn envelope_norm_f0(geometry: &WireGeometry, constants: &PhysicalConstants) -> f64 {
    (8.0 * constants.v_sc / geometry.volume()).sqrt()
        * (PI * geometry.s / (2.0 * geometry.l)).cos()
}

/// Squared vibrational overlap |⟨μ₀|ν_p⟩|² = e^(−S) S^p / p!.
///
/// Resonant driving uses p = 0. Evaluated as a running product so large p
/// underflows to zero instead of overflowing.
pub fn huang_rhys_overlap_sq(p: u32, s: f64) -> Result<f64, String> {
    if !(s >= 0.0) {
        return Err(format!("Huang-Rhys factor must be ≥ 0, got {s}"));
    }
    let mut value = (-s).exp();
    for k in 1..=p {
        value *= s / k as f64;
    }
    Ok(value)
}

/// Wire photoionization dipole moment F₀ · e^(−S/2) · d_bulk (C·m).
pub fn dipole_wire(geometry: &WireGeometry, constants: &PhysicalConstants) -> f64 {
    envelope_norm_f0(geometry, constants) * (-constants.s_hr / 2.0).exp() * constants.d_bulk
}

/// Peak field of a Gaussian beam, |E₀| = √(4P / (n_D c ε₀ π r²)) (V/m).
pub fn field_amplitude(laser: &LaserParams, constants: &PhysicalConstants) -> f64 {
    (4.0 * laser.power
        / (constants.n_d * constants.c_light * constants.eps0 * PI * laser.r_spot * laser.r_spot))
        .sqrt()
}

/// Effective photoionization Rabi frequency (rad/s).
pub fn rabi_effective(
    geometry: &WireGeometry,
    laser: &LaserParams,
    constants: &PhysicalConstants,
) -> f64 {
    ((-constants.s_hr / 2.0).exp() / (laser.r_spot * constants.hbar))
        * (8.0 * laser.power / (constants.n_d * constants.c_light * constants.eps0 * PI)).sqrt()
        * envelope_norm_f0(geometry, constants)
        * constants.d_bulk
}

/// Spontaneous emission rate 2ω³ d_wire² / (3π ε₀ n_D ħ c³) (1/s) for the
/// wire transition at angular frequency `omega_transition`.
pub fn spontaneous_emission(
    geometry: &WireGeometry,
    omega_transition: f64,
    constants: &PhysicalConstants,
) -> f64 {
    let d = dipole_wire(geometry, constants);
    2.0 * omega_transition.powi(3) * d * d
        / (3.0
            * PI
            * constants.eps0
            * constants.n_d
            * constants.hbar
            * constants.c_light.powi(3))
}

//! Deformation-potential electron-phonon scattering.
//!
//! Only dilational acoustic modes have nonzero divergence and therefore
//! couple through H = Ξ_d ∇·u. Two phonon baths apply depending on how the
//! wire is confined:
//!
//! * free-standing wires carry their own discrete dilational spectrum
//!   ([`surface::surface_ep_rate`]), summed against a Lorentzian density of
//!   states of width ω/Q;
//! * electrostatically defined wires sit in bulk material and scatter off
//!   continuum bulk modes ([`bulk::bulk_ep_rate`]), reduced to an angular
//!   integral on the energy-conserving shell.

pub mod bulk;
pub mod surface;

pub use bulk::{bulk_ep_rate, bulk_overlap_g, AngularGrid};
pub use surface::{dilational_overlap_m, surface_ep_rate, SurfaceCutoffs, SurfaceRate};

use crate::constants::PhysicalConstants;
use crate::geometry::WireGeometry;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PhononError {
    #[error("invalid indices: {0}")]
    InvalidIndices(String),
    #[error("mode sum not converged: total {total:.6e} 1/s, tail estimate {tail:.6e} 1/s exceeds {tolerance:.1}% (cutoffs: modes {mode_bounds:?}, states {state_bounds:?})")]
    TruncationNotConverged {
        total: f64,
        tail: f64,
        tolerance: f64,
        mode_bounds: [u32; 3],
        state_bounds: [u32; 3],
    },
    #[error("angular quadrature not converged: {coarse:.6e} vs {fine:.6e} 1/s differ by more than 1%")]
    QuadratureNotConverged { coarse: f64, fine: f64 },
    #[error("{0}")]
    Invalid(String),
}

/// One quantized dilational mode of a free-standing wire.
///
/// Indices are non-negative and not all zero; a zero index means the mode is
/// uniform along that direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhononMode {
    pub m: [u32; 3],
    /// Angular frequency (rad/s)
    pub omega: f64,
}

impl PhononMode {
    pub fn new(
        m: [u32; 3],
        geometry: &WireGeometry,
        constants: &PhysicalConstants,
    ) -> Result<PhononMode, PhononError> {
        if m == [0, 0, 0] {
            return Err(PhononError::InvalidIndices(
                "phonon mode indices must not all be zero".into(),
            ));
        }
        Ok(PhononMode { m, omega: mode_frequency(m, geometry, constants) })
    }
}

/// ω_m = π c_l √((m_x² + m_y²)/w² + m_z²/L²).
pub fn mode_frequency(m: [u32; 3], geometry: &WireGeometry, constants: &PhysicalConstants) -> f64 {
    let [mx, my, mz] = m.map(f64::from);
    PI * constants.c_l
        * ((mx * mx + my * my) / (geometry.w * geometry.w)
            + mz * mz / (geometry.l * geometry.l))
            .sqrt()
}

/// Bose-Einstein occupation 1/(e^(ħω/kT) − 1).
pub fn bose_occupation(omega: f64, temperature: f64, constants: &PhysicalConstants) -> f64 {
    1.0 / (constants.hbar * omega / (constants.k_b * temperature)).exp_m1()
}

/// Normalized Lorentzian density of states, (γ/π) / (Δ² + γ²), in seconds.
pub fn lorentzian_dos(delta: f64, gamma: f64) -> f64 {
    gamma / PI / (delta * delta + gamma * gamma)
}

/// One row of the per-channel breakdown of a surface-wire scattering rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringChannel {
    pub n_final: [u32; 3],
    pub m: [u32; 3],
    /// |M|² of the electron-phonon overlap (1/m²)
    pub overlap_sq: f64,
    /// Contribution to the total rate (1/s)
    pub rate_contribution: f64,
}

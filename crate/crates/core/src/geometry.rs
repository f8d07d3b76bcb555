//! Wire geometry and environment parameters.

use serde::{Deserialize, Serialize};

/// How the one-dimensional confining potential is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Confinement {
    /// Free-standing etched wire; phonons are the wire's own dilational modes.
    #[default]
    Surface,
    /// Electrode-defined potential in bulk material; phonons are bulk modes.
    Electrostatic,
}

impl std::fmt::Display for Confinement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Confinement::Surface => write!(f, "surface"),
            Confinement::Electrostatic => write!(f, "electrostatic"),
        }
    }
}

/// Crystal direction of the wire axis. Only (100) is implemented; other
/// directions need a rotated mass tensor and the tag is reserved for them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CrystalAxis {
    #[default]
    #[serde(rename = "100")]
    Axis100,
}

/// Square-prism wire of cross-section w × w and length L, with the two NV
/// centers on the longitudinal axis separated by s and symmetric about the
/// wire center: z = (L−s)/2 and z = (L+s)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireGeometry {
    /// Width (m)
    pub w: f64,
    /// Length (m)
    pub l: f64,
    /// NV separation (m)
    pub s: f64,
    pub axis: CrystalAxis,
    pub design: Confinement,
}

impl WireGeometry {
    /// Checked constructor: 0 < w ≤ L and 0 < s < L.
    pub fn new(w: f64, l: f64, s: f64, axis: CrystalAxis, design: Confinement) -> Result<Self, String> {
        let g = WireGeometry { w, l, s, axis, design };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.w > 0.0 && self.w.is_finite()) {
            return Err(format!("wire width must be positive, got {} m", self.w));
        }
        if !(self.l >= self.w) {
            return Err(format!(
                "wire width must not exceed its length (w = {} m > L = {} m)",
                self.w, self.l
            ));
        }
        if !(self.s > 0.0 && self.s < self.l) {
            return Err(format!(
                "NV separation must satisfy 0 < s < L, got s = {} m, L = {} m",
                self.s, self.l
            ));
        }
        Ok(())
    }

    /// Wire volume w²L (m³).
    pub fn volume(&self) -> f64 {
        self.w * self.w * self.l
    }

    /// Position of NV A on the longitudinal axis: (w/2, w/2, (L−s)/2).
    pub fn nv_a_position(&self) -> [f64; 3] {
        [self.w / 2.0, self.w / 2.0, (self.l - self.s) / 2.0]
    }
}

/// Temperature, defect and phonon-quality environment of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentParams {
    /// Temperature (K)
    pub temperature: f64,
    /// Ionized substitutional-nitrogen concentration (ppb of carbon sites)
    pub rho_nplus_ppb: f64,
    /// Donor capture cross section (m²)
    pub sigma_cap: f64,
    /// Phonon quality factor
    pub quality_factor: f64,
    /// Whether a sacrificial donor layer passivates surface traps
    /// (meaningful for the electrostatic design only)
    pub sacrificial_layer: bool,
}

impl Default for EnvironmentParams {
    fn default() -> Self {
        EnvironmentParams {
            temperature: 4.0,
            rho_nplus_ppb: 1.0,
            sigma_cap: 5e-18,
            quality_factor: 1e6,
            sacrificial_layer: true,
        }
    }
}

impl EnvironmentParams {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.temperature > 0.0) {
            return Err(format!("temperature must be positive, got {} K", self.temperature));
        }
        if !(self.quality_factor >= 1.0) {
            return Err(format!("quality factor must be ≥ 1, got {}", self.quality_factor));
        }
        if !(self.rho_nplus_ppb >= 0.0) {
            return Err(format!("donor concentration must be ≥ 0, got {} ppb", self.rho_nplus_ppb));
        }
        // plausible capture cross sections; measurements cluster in 3–7 nm²
        if !(self.sigma_cap >= 1e-18 && self.sigma_cap <= 20e-18) {
            return Err(format!(
                "capture cross section {} m² outside the plausible window [1, 20] nm²",
                self.sigma_cap
            ));
        }
        if self.sigma_cap < 3e-18 || self.sigma_cap > 7e-18 {
            log::warn!(
                "capture cross section {:.3} nm² outside the expected 3–7 nm² range",
                self.sigma_cap * 1e18
            );
        }
        Ok(())
    }
}

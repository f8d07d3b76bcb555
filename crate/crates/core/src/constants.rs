//! Physical constants and diamond material parameters, SI units throughout.
//!
//! Fundamental constants are CODATA 2018. Material values are standard
//! diamond numbers; the effective masses m∥ = 1.56 mₑ and m⊥ = 0.28 mₑ are
//! the usual band-structure values for the conduction minima along Γ–X.
//! Defect-specific inputs (supercell-normalized ionization dipole moment,
//! Huang-Rhys factor, deformation potential) enter as fixed constants.
//! Everything is overridable through the `[constants]` config section.

use serde::{Deserialize, Serialize};

/// Reduced Planck constant (J·s)
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge (C)
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant (J/K)
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum (m/s)
pub const C_LIGHT: f64 = 299_792_458.0;
/// Vacuum permittivity (F/m)
pub const EPS0: f64 = 8.854_187_8128e-12;
/// Electron rest mass (kg)
pub const M_E: f64 = 9.109_383_7015e-31;

/// One electronvolt (J)
pub const EV: f64 = E_CHARGE;

/// Which scalar mean reduces the anisotropic mass tensor to the single m*
/// used in thermal-velocity estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MassMean {
    /// (m∥ + 2 m⊥) / 3
    #[default]
    Arithmetic,
    /// (m∥ · m⊥²)^(1/3)
    Geometric,
}

/// Full constant set shared by every module. Immutable after construction;
/// safe to share across parallel workers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Reduced Planck constant (J·s)
    pub hbar: f64,
    /// Elementary charge (C)
    pub e_charge: f64,
    /// Boltzmann constant (J/K)
    pub k_b: f64,
    /// Speed of light (m/s)
    pub c_light: f64,
    /// Vacuum permittivity (F/m)
    pub eps0: f64,
    /// Electron rest mass (kg)
    pub m_e: f64,
    /// Transverse effective mass of the conduction valleys (kg)
    pub m_perp: f64,
    /// Longitudinal effective mass of the conduction valleys (kg)
    pub m_par: f64,
    /// Diamond deformation potential, 8.7 eV (J)
    pub xi_d: f64,
    /// Longitudinal sound speed in diamond (m/s)
    pub c_l: f64,
    /// Diamond mass density (kg/m³)
    pub rho_c: f64,
    /// Refractive index of diamond
    pub n_d: f64,
    /// Volume of the 512-atom supercell the dipole moment is normalized to (m³)
    pub v_sc: f64,
    /// Volume of the conventional 8-atom diamond cell, v_sc / 64 (m³)
    pub v_c: f64,
    /// Bulk NV photoionization transition dipole moment, 0.085 e·Å (C·m)
    pub d_bulk: f64,
    /// Huang-Rhys factor of the ionizing transition
    pub s_hr: f64,
    /// Carbon site density (m⁻³), converts ppb defect concentrations
    pub atom_density: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        default_constants()
    }
}

/// The default constant set. 512 carbon sites = 64 conventional cells, so
/// the unit-cell volume is tied to the supercell volume.
pub fn default_constants() -> PhysicalConstants {
    let v_sc = 2.837e-27;
    PhysicalConstants {
        hbar: HBAR,
        e_charge: E_CHARGE,
        k_b: K_B,
        c_light: C_LIGHT,
        eps0: EPS0,
        m_e: M_E,
        m_perp: 0.28 * M_E,
        m_par: 1.56 * M_E,
        xi_d: 8.7 * EV,
        c_l: 17_500.0,
        rho_c: 3515.0,
        n_d: 2.41,
        v_sc,
        v_c: v_sc / 64.0,
        d_bulk: 0.085 * E_CHARGE * 1e-10,
        s_hr: 1.39,
        atom_density: 1.76e29,
    }
}

impl PhysicalConstants {
    /// Scalar effective mass m* (kg) under the chosen mean.
    pub fn isotropic_mass(&self, mean: MassMean) -> f64 {
        match mean {
            MassMean::Arithmetic => (self.m_par + 2.0 * self.m_perp) / 3.0,
            MassMean::Geometric => (self.m_par * self.m_perp * self.m_perp).cbrt(),
        }
    }

    /// All entries must be strictly positive.
    pub fn validate(&self) -> Result<(), String> {
        let fields = [
            ("hbar", self.hbar),
            ("e_charge", self.e_charge),
            ("k_b", self.k_b),
            ("c_light", self.c_light),
            ("eps0", self.eps0),
            ("m_e", self.m_e),
            ("m_perp", self.m_perp),
            ("m_par", self.m_par),
            ("xi_d", self.xi_d),
            ("c_l", self.c_l),
            ("rho_c", self.rho_c),
            ("n_d", self.n_d),
            ("v_sc", self.v_sc),
            ("v_c", self.v_c),
            ("d_bulk", self.d_bulk),
            ("s_hr", self.s_hr),
            ("atom_density", self.atom_density),
        ];
        for (name, value) in fields {
            if !(value > 0.0) || !value.is_finite() {
                return Err(format!("constant `{name}` must be strictly positive, got {value}"));
            }
        }
        Ok(())
    }
}

/// Convert a defect concentration in parts per billion of carbon sites to a
/// number density (m⁻³).
pub fn ppb_to_density(rho_ppb: f64, constants: &PhysicalConstants) -> Result<f64, String> {
    if !(rho_ppb >= 0.0) {
        return Err(format!("ppb concentration must be non-negative, got {rho_ppb}"));
    }
    Ok(rho_ppb * 1e-9 * constants.atom_density)
}

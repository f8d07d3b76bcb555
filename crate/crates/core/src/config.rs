//! TOML run configuration.
//!
//! Sections `[constants]`, `[geometry]`, `[environment]`, `[laser]`,
//! `[pulses]`, `[sweep]` and `[electrostatics]`; every key optional with a
//! default, unknown keys a hard error. Values are either bare numbers (SI)
//! or strings with a convenience unit suffix, e.g. `w = "0.2 um"`,
//! `P = "100 mW"`, `sigma_cap = "5 nm^2"`, `m_perp = "0.28 me"`. Everything
//! is converted to SI at parse time; serializing a resolved config emits
//! plain SI numbers that parse back to the identical configuration.

use crate::constants::{default_constants, MassMean, PhysicalConstants, EV, M_E};
use crate::electrostatics::ElectrodeSetup;
use crate::geometry::{Confinement, CrystalAxis, EnvironmentParams, WireGeometry};
use crate::optics::{LaserParams, DEFAULT_IONIZATION_ENERGY_EV};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("config serialize error: {0}")]
    Emit(#[from] toml::ser::Error),
    #[error("bad quantity `{0}`: {1}")]
    Quantity(String, String),
    #[error("invalid config: {0}")]
    Validation(String),
}

/// Parse a number with an optional unit suffix into SI.
///
/// Accepted units: lengths m/mm/um/µm/nm/pm, areas m^2/um^2/nm^2, times
/// s/ms/us/µs/ns/ps, energies J/eV/meV/ueV/µeV, powers W/mW/uW/µW,
/// temperatures K, voltages V/mV, masses kg/me, rates rad/s and 1/s, and
/// the bare tag ppb. A bare number is taken as SI.
pub fn parse_quantity(text: &str) -> Result<f64, ConfigError> {
    let trimmed = text.trim();
    let mut split = trimmed
        .char_indices()
        .find(|(_, ch)| !ch.is_ascii_digit() && !matches!(ch, '.' | '+' | '-' | 'e' | 'E'))
        .map(|(i, _)| i)
        .unwrap_or(trimmed.len());
    // an 'e' directly before the unit is part of it, not an exponent ("2eV")
    if split > 0 && trimmed[..split].ends_with(['e', 'E']) && trimmed[..split - 1].parse::<f64>().is_ok()
    {
        split -= 1;
    }
    let (num_str, unit_str) = trimmed.split_at(split);
    let number: f64 = num_str.trim().parse().map_err(|_| {
        ConfigError::Quantity(text.into(), format!("`{}` is not a number", num_str.trim()))
    })?;
    let factor = unit_factor(unit_str.trim()).ok_or_else(|| {
        ConfigError::Quantity(text.into(), format!("unknown unit `{}`", unit_str.trim()))
    })?;
    Ok(number * factor)
}

fn unit_factor(unit: &str) -> Option<f64> {
    Some(match unit {
        "" | "m" | "s" | "J" | "W" | "K" | "V" | "kg" | "ppb" | "rad/s" | "1/s" => 1.0,
        "mm" | "ms" | "mV" | "mW" => 1e-3,
        "um" | "µm" | "us" | "µs" | "uW" | "µW" => 1e-6,
        "nm" | "ns" => 1e-9,
        "pm" | "ps" => 1e-12,
        "m2" | "m^2" => 1.0,
        "um2" | "um^2" | "µm^2" => 1e-12,
        "nm2" | "nm^2" => 1e-18,
        "eV" => EV,
        "meV" => 1e-3 * EV,
        "ueV" | "µeV" => 1e-6 * EV,
        "me" => M_E,
        _ => return None,
    })
}

/// Raw config value: a bare SI number or a unit-suffixed string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawValue {
    Float(f64),
    Int(i64),
    Text(String),
}

impl RawValue {
    fn to_si(&self, key: &str) -> Result<f64, ConfigError> {
        match self {
            RawValue::Float(v) => Ok(*v),
            RawValue::Int(v) => Ok(*v as f64),
            RawValue::Text(s) => parse_quantity(s)
                .map_err(|e| ConfigError::Validation(format!("key `{key}`: {e}"))),
        }
    }
}

fn get(value: &Option<RawValue>, key: &str, default: f64) -> Result<f64, ConfigError> {
    match value {
        Some(v) => v.to_si(key),
        None => Ok(default),
    }
}

fn get_opt(value: &Option<RawValue>, key: &str) -> Result<Option<f64>, ConfigError> {
    value.as_ref().map(|v| v.to_si(key)).transpose()
}

macro_rules! raw_section {
    ($name:ident { $($field:ident),* $(,)? } extras { $($extra:ident : $ty:ty),* $(,)? }) => {
        #[derive(Debug, Clone, Default, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        struct $name {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                $field: Option<RawValue>,
            )*
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                $extra: Option<$ty>,
            )*
        }
    };
}

raw_section!(RawConstants {
    hbar, e_charge, k_b, c_light, eps0, m_e, m_perp, m_par, xi_d, c_l,
    rho_c, n_d, v_sc, v_c, d_bulk, s_hr, atom_density,
} extras { mass_mean: MassMean });

raw_section!(RawGeometry { w, l, s } extras { axis: String, design: String });

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnvironment {
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    t: Option<RawValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rho_nplus_ppb: Option<RawValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma_cap: Option<RawValue>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    q: Option<RawValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sacrificial_layer: Option<bool>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaser {
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    p: Option<RawValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_spot: Option<RawValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    detuning: Option<RawValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ionization_energy: Option<RawValue>,
}

raw_section!(RawPulses {
    omega0, sigma_t, t_delay, adiabaticity, delay_to_sigma,
    detuning_two_photon, loss_split, gamma_override,
} extras {});

raw_section!(RawSweep {
    w_min, w_max, l_min, l_max, nv_end_offset, s_fixed,
} extras { design: String, n_w: usize, n_l: usize, scale: String });

raw_section!(RawElectrostatics {
    electrode_radius, electrode_height, substrate_depth, substrate_radius,
    v_applied, tol, fraction,
} extras { n_r: usize, n_z: usize, max_iter: usize });

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constants: Option<RawConstants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<RawGeometry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    environment: Option<RawEnvironment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    laser: Option<RawLaser>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pulses: Option<RawPulses>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sweep: Option<RawSweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    electrostatics: Option<RawElectrostatics>,
}

/// Pulse-shaping configuration. When `sigma_t`/`t_delay` are absent they are
/// derived from the adiabaticity target Ωτ and the delay-to-width ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseConfig {
    /// Peak effective Rabi frequency override (rad/s); None derives it from
    /// the optics at the configured geometry
    pub omega0: Option<f64>,
    pub sigma_t: Option<f64>,
    pub t_delay: Option<f64>,
    /// Target Ωτ when the times are derived (τ = t_delay)
    pub adiabaticity: f64,
    /// t_delay / sigma_t when the times are derived
    pub delay_to_sigma: f64,
    pub detuning_two_photon: f64,
    /// Fraction of Γ acting as loss, remainder as pure dephasing
    pub loss_split: f64,
    /// Total decoherence rate override (1/s); None computes the budget
    pub gamma_override: Option<f64>,
}

impl Default for PulseConfig {
    fn default() -> Self {
        PulseConfig {
            omega0: None,
            sigma_t: None,
            t_delay: None,
            adiabaticity: 100.0,
            delay_to_sigma: 1.5,
            detuning_two_photon: 0.0,
            loss_split: 1.0,
            gamma_override: None,
        }
    }
}

/// Grid spacing law for sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridScale {
    #[default]
    Log,
    Linear,
}

/// Sweep grid configuration; None bounds fall back to the per-design
/// defaults ([0.05, 0.8] µm surface, [0.2, 1.5] µm electrostatic).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub design: Option<Confinement>,
    pub w_min: Option<f64>,
    pub w_max: Option<f64>,
    pub l_min: Option<f64>,
    pub l_max: Option<f64>,
    pub n_w: usize,
    pub n_l: usize,
    pub scale: GridScale,
    /// NV distance from each wire end when `s_fixed` is absent
    pub nv_end_offset: f64,
    pub s_fixed: Option<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            design: None,
            w_min: None,
            w_max: None,
            l_min: None,
            l_max: None,
            n_w: 40,
            n_l: 40,
            scale: GridScale::Log,
            nv_end_offset: 100e-9,
            s_fixed: None,
        }
    }
}

/// Electrostatics solve configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ElectrostaticsConfig {
    pub setup: ElectrodeSetup,
    /// SOR convergence threshold (V)
    pub tol: f64,
    pub max_iter: usize,
    /// Potential fraction defining the effective wire length
    pub fraction: f64,
}

impl Default for ElectrostaticsConfig {
    fn default() -> Self {
        ElectrostaticsConfig {
            setup: ElectrodeSetup::default(),
            tol: 1e-7,
            max_iter: 200_000,
            fraction: 0.1,
        }
    }
}

/// Fully resolved run configuration, SI throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub constants: PhysicalConstants,
    pub mass_mean: MassMean,
    pub geometry: WireGeometry,
    pub environment: EnvironmentParams,
    pub laser: LaserParams,
    /// Photon energy of the ionizing transition (J)
    pub ionization_energy: f64,
    pub pulses: PulseConfig,
    pub sweep: SweepConfig,
    pub electrostatics: ElectrostaticsConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            constants: default_constants(),
            mass_mean: MassMean::Arithmetic,
            geometry: WireGeometry {
                w: 0.2e-6,
                l: 0.6e-6,
                s: 0.4e-6,
                axis: CrystalAxis::Axis100,
                design: Confinement::Surface,
            },
            environment: EnvironmentParams::default(),
            laser: LaserParams::default(),
            ionization_energy: DEFAULT_IONIZATION_ENERGY_EV * EV,
            pulses: PulseConfig::default(),
            sweep: SweepConfig::default(),
            electrostatics: ElectrostaticsConfig::default(),
        }
    }
}

impl Config {
    pub fn from_file(path: &std::path::Path) -> Result<Config, ConfigError> {
        Config::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn from_toml_str(text: &str) -> Result<Config, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        resolve(&raw)
    }

    /// Angular frequency of the ionizing transition (rad/s).
    pub fn omega_transition(&self) -> f64 {
        self.ionization_energy / self.constants.hbar
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.constants.validate().map_err(ConfigError::Validation)?;
        self.geometry.validate().map_err(ConfigError::Validation)?;
        self.environment.validate().map_err(ConfigError::Validation)?;
        self.laser.validate().map_err(ConfigError::Validation)?;
        if !(self.ionization_energy > 0.0) {
            return Err(ConfigError::Validation("ionization energy must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.pulses.loss_split) {
            return Err(ConfigError::Validation(format!(
                "loss_split must lie in [0, 1], got {}",
                self.pulses.loss_split
            )));
        }
        if self.sweep.n_w < 2 || self.sweep.n_l < 2 {
            return Err(ConfigError::Validation("sweep grid needs at least 2×2 points".into()));
        }
        Ok(())
    }

    /// Serialize as TOML with every value in SI; parsing the output yields
    /// an identical configuration.
    pub fn to_toml_string(&self) -> Result<String, ConfigError> {
        let n = |v: f64| Some(RawValue::Float(v));
        let opt = |v: Option<f64>| v.map(RawValue::Float);
        let c = &self.constants;
        let raw = RawConfig {
            constants: Some(RawConstants {
                hbar: n(c.hbar),
                e_charge: n(c.e_charge),
                k_b: n(c.k_b),
                c_light: n(c.c_light),
                eps0: n(c.eps0),
                m_e: n(c.m_e),
                m_perp: n(c.m_perp),
                m_par: n(c.m_par),
                xi_d: n(c.xi_d),
                c_l: n(c.c_l),
                rho_c: n(c.rho_c),
                n_d: n(c.n_d),
                v_sc: n(c.v_sc),
                v_c: n(c.v_c),
                d_bulk: n(c.d_bulk),
                s_hr: n(c.s_hr),
                atom_density: n(c.atom_density),
                mass_mean: Some(self.mass_mean),
            }),
            geometry: Some(RawGeometry {
                w: n(self.geometry.w),
                l: n(self.geometry.l),
                s: n(self.geometry.s),
                axis: Some("100".into()),
                design: Some(self.geometry.design.to_string()),
            }),
            environment: Some(RawEnvironment {
                t: n(self.environment.temperature),
                rho_nplus_ppb: n(self.environment.rho_nplus_ppb),
                sigma_cap: n(self.environment.sigma_cap),
                q: n(self.environment.quality_factor),
                sacrificial_layer: Some(self.environment.sacrificial_layer),
            }),
            laser: Some(RawLaser {
                p: n(self.laser.power),
                r_spot: n(self.laser.r_spot),
                detuning: n(self.laser.detuning),
                ionization_energy: n(self.ionization_energy),
            }),
            pulses: Some(RawPulses {
                omega0: opt(self.pulses.omega0),
                sigma_t: opt(self.pulses.sigma_t),
                t_delay: opt(self.pulses.t_delay),
                adiabaticity: n(self.pulses.adiabaticity),
                delay_to_sigma: n(self.pulses.delay_to_sigma),
                detuning_two_photon: n(self.pulses.detuning_two_photon),
                loss_split: n(self.pulses.loss_split),
                gamma_override: opt(self.pulses.gamma_override),
            }),
            sweep: Some(RawSweep {
                w_min: opt(self.sweep.w_min),
                w_max: opt(self.sweep.w_max),
                l_min: opt(self.sweep.l_min),
                l_max: opt(self.sweep.l_max),
                nv_end_offset: n(self.sweep.nv_end_offset),
                s_fixed: opt(self.sweep.s_fixed),
                design: self.sweep.design.map(|d| d.to_string()),
                n_w: Some(self.sweep.n_w),
                n_l: Some(self.sweep.n_l),
                scale: Some(
                    match self.sweep.scale {
                        GridScale::Log => "log",
                        GridScale::Linear => "linear",
                    }
                    .into(),
                ),
            }),
            electrostatics: Some(RawElectrostatics {
                electrode_radius: n(self.electrostatics.setup.electrode_radius),
                electrode_height: n(self.electrostatics.setup.electrode_height),
                substrate_depth: n(self.electrostatics.setup.substrate_depth),
                substrate_radius: n(self.electrostatics.setup.substrate_radius),
                v_applied: n(self.electrostatics.setup.v_applied),
                tol: n(self.electrostatics.tol),
                fraction: n(self.electrostatics.fraction),
                n_r: Some(self.electrostatics.setup.grid.0),
                n_z: Some(self.electrostatics.setup.grid.1),
                max_iter: Some(self.electrostatics.max_iter),
            }),
        };
        Ok(toml::to_string(&raw)?)
    }
}

fn parse_design(text: &str) -> Result<Confinement, ConfigError> {
    match text.to_ascii_lowercase().as_str() {
        "surface" => Ok(Confinement::Surface),
        "electrostatic" => Ok(Confinement::Electrostatic),
        other => Err(ConfigError::Validation(format!(
            "unknown confinement design `{other}` (expected `surface` or `electrostatic`)"
        ))),
    }
}

fn parse_axis(text: &str) -> Result<CrystalAxis, ConfigError> {
    match text.trim_matches(|ch| ch == '(' || ch == ')') {
        "100" => Ok(CrystalAxis::Axis100),
        other => Err(ConfigError::Validation(format!(
            "unsupported wire axis `{other}`; only (100) is implemented"
        ))),
    }
}

fn resolve(raw: &RawConfig) -> Result<Config, ConfigError> {
    let defaults = Config::default();
    let dc = &defaults.constants;

    let rc = raw.constants.clone().unwrap_or_default();
    let constants = PhysicalConstants {
        hbar: get(&rc.hbar, "hbar", dc.hbar)?,
        e_charge: get(&rc.e_charge, "e_charge", dc.e_charge)?,
        k_b: get(&rc.k_b, "k_b", dc.k_b)?,
        c_light: get(&rc.c_light, "c_light", dc.c_light)?,
        eps0: get(&rc.eps0, "eps0", dc.eps0)?,
        m_e: get(&rc.m_e, "m_e", dc.m_e)?,
        m_perp: get(&rc.m_perp, "m_perp", dc.m_perp)?,
        m_par: get(&rc.m_par, "m_par", dc.m_par)?,
        xi_d: get(&rc.xi_d, "xi_d", dc.xi_d)?,
        c_l: get(&rc.c_l, "c_l", dc.c_l)?,
        rho_c: get(&rc.rho_c, "rho_c", dc.rho_c)?,
        n_d: get(&rc.n_d, "n_d", dc.n_d)?,
        v_sc: get(&rc.v_sc, "v_sc", dc.v_sc)?,
        v_c: get(&rc.v_c, "v_c", dc.v_c)?,
        d_bulk: get(&rc.d_bulk, "d_bulk", dc.d_bulk)?,
        s_hr: get(&rc.s_hr, "s_hr", dc.s_hr)?,
        atom_density: get(&rc.atom_density, "atom_density", dc.atom_density)?,
    };
    let mass_mean = rc.mass_mean.unwrap_or(defaults.mass_mean);

    let rg = raw.geometry.clone().unwrap_or_default();
    let geometry = WireGeometry {
        w: get(&rg.w, "w", defaults.geometry.w)?,
        l: get(&rg.l, "l", defaults.geometry.l)?,
        s: get(&rg.s, "s", defaults.geometry.s)?,
        axis: rg.axis.as_deref().map(parse_axis).transpose()?.unwrap_or_default(),
        design: rg.design.as_deref().map(parse_design).transpose()?.unwrap_or_default(),
    };

    let re = raw.environment.clone().unwrap_or_default();
    let de = &defaults.environment;
    let environment = EnvironmentParams {
        temperature: get(&re.t, "T", de.temperature)?,
        rho_nplus_ppb: get(&re.rho_nplus_ppb, "rho_nplus_ppb", de.rho_nplus_ppb)?,
        sigma_cap: get(&re.sigma_cap, "sigma_cap", de.sigma_cap)?,
        quality_factor: get(&re.q, "Q", de.quality_factor)?,
        sacrificial_layer: re.sacrificial_layer.unwrap_or(de.sacrificial_layer),
    };

    let rl = raw.laser.clone().unwrap_or_default();
    let laser = LaserParams {
        power: get(&rl.p, "P", defaults.laser.power)?,
        r_spot: get(&rl.r_spot, "r_spot", defaults.laser.r_spot)?,
        detuning: get(&rl.detuning, "detuning", defaults.laser.detuning)?,
    };
    let ionization_energy =
        get(&rl.ionization_energy, "ionization_energy", defaults.ionization_energy)?;

    let rp = raw.pulses.clone().unwrap_or_default();
    let dp = &defaults.pulses;
    let pulses = PulseConfig {
        omega0: get_opt(&rp.omega0, "omega0")?,
        sigma_t: get_opt(&rp.sigma_t, "sigma_t")?,
        t_delay: get_opt(&rp.t_delay, "t_delay")?,
        adiabaticity: get(&rp.adiabaticity, "adiabaticity", dp.adiabaticity)?,
        delay_to_sigma: get(&rp.delay_to_sigma, "delay_to_sigma", dp.delay_to_sigma)?,
        detuning_two_photon: get(&rp.detuning_two_photon, "detuning_two_photon", dp.detuning_two_photon)?,
        loss_split: get(&rp.loss_split, "loss_split", dp.loss_split)?,
        gamma_override: get_opt(&rp.gamma_override, "gamma_override")?,
    };

    let rs = raw.sweep.clone().unwrap_or_default();
    let ds = &defaults.sweep;
    let sweep = SweepConfig {
        design: rs.design.as_deref().map(parse_design).transpose()?,
        w_min: get_opt(&rs.w_min, "w_min")?,
        w_max: get_opt(&rs.w_max, "w_max")?,
        l_min: get_opt(&rs.l_min, "l_min")?,
        l_max: get_opt(&rs.l_max, "l_max")?,
        n_w: rs.n_w.unwrap_or(ds.n_w),
        n_l: rs.n_l.unwrap_or(ds.n_l),
        scale: match rs.scale.as_deref() {
            None => ds.scale,
            Some("log") => GridScale::Log,
            Some("linear") => GridScale::Linear,
            Some(other) => {
                return Err(ConfigError::Validation(format!(
                    "unknown sweep scale `{other}` (expected `log` or `linear`)"
                )))
            }
        },
        nv_end_offset: get(&rs.nv_end_offset, "nv_end_offset", ds.nv_end_offset)?,
        s_fixed: get_opt(&rs.s_fixed, "s_fixed")?,
    };

    let rel = raw.electrostatics.clone().unwrap_or_default();
    let del = &defaults.electrostatics;
    let electrostatics = ElectrostaticsConfig {
        setup: ElectrodeSetup {
            electrode_radius: get(&rel.electrode_radius, "electrode_radius", del.setup.electrode_radius)?,
            electrode_height: get(&rel.electrode_height, "electrode_height", del.setup.electrode_height)?,
            substrate_depth: get(&rel.substrate_depth, "substrate_depth", del.setup.substrate_depth)?,
            substrate_radius: get(&rel.substrate_radius, "substrate_radius", del.setup.substrate_radius)?,
            v_applied: get(&rel.v_applied, "v_applied", del.setup.v_applied)?,
            grid: (rel.n_r.unwrap_or(del.setup.grid.0), rel.n_z.unwrap_or(del.setup.grid.1)),
        },
        tol: get(&rel.tol, "tol", del.tol)?,
        max_iter: rel.max_iter.unwrap_or(del.max_iter),
        fraction: get(&rel.fraction, "fraction", del.fraction)?,
    };

    let config = Config {
        constants,
        mass_mean,
        geometry,
        environment,
        laser,
        ionization_energy,
        pulses,
        sweep,
        electrostatics,
    };
    config.validate()?;
    Ok(config)
}

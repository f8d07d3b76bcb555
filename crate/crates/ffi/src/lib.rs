//! C ABI over the nanowire transport feasibility library.
//!
//! Conventions:
//! - every function returns [`SwStatus`] (0 = success) or a pointer that is
//!   null on failure;
//! - on failure a thread-local message is set, retrievable with
//!   [`sw_last_error`];
//! - [`SwConfig`] is an opaque handle created by `sw_config_*` constructors
//!   and released with [`sw_config_free`];
//! - all quantities are SI (meters, seconds, kelvin, rad/s, 1/s, joules).
//!
//! The header `include/stirap_wire.h` is generated at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::ptr;

use stirap_wire::config::Config;
use stirap_wire::geometry::Confinement;
use stirap_wire::optics::OpticalCoupling;
use stirap_wire::phonons::{AngularGrid, SurfaceCutoffs};
use stirap_wire::rates::{decoherence_budget, RateInputs};
use stirap_wire::stirap::{evolve, transport_time, IntegratorTol, PulseSchedule};
use stirap_wire::sweep::{build_map, map_to_csv};

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = CString::new(message.into()).unwrap_or_else(|_| CString::new("error").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidConfig = 2,
    NumericalFailure = 3,
    IoFailure = 4,
    InvalidUtf8 = 5,
}

/// Confinement design selector.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwDesign {
    Surface = 0,
    Electrostatic = 1,
}

impl From<SwDesign> for Confinement {
    fn from(design: SwDesign) -> Confinement {
        match design {
            SwDesign::Surface => Confinement::Surface,
            SwDesign::Electrostatic => Confinement::Electrostatic,
        }
    }
}

/// Opaque configuration handle.
pub struct SwConfig {
    inner: Config,
}

/// Optical coupling summary for the configured wire.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SwOpticalCoupling {
    /// Envelope amplitude at the defect site (dimensionless)
    pub f0: f64,
    /// Wire transition dipole moment (C·m)
    pub d_wire: f64,
    /// Effective Rabi frequency (rad/s)
    pub omega: f64,
    /// Spontaneous emission rate (1/s)
    pub gamma_se: f64,
}

/// Decoherence budget for the configured wire (all 1/s).
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SwRates {
    pub gamma_cap: f64,
    pub gamma_se: f64,
    pub gamma_ep: f64,
    pub gamma_total: f64,
}

/// Outcome of one pulsed-transport integration.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SwTransport {
    /// Final target-state population
    pub fidelity: f64,
    /// Peak intermediate-state population
    pub max_p2: f64,
    /// Ω·τ of the schedule
    pub adiabaticity: f64,
    /// Protocol duration (s)
    pub transport_time: f64,
    /// Drive Rabi frequency used (rad/s)
    pub omega: f64,
    /// Lumped decoherence rate used (1/s)
    pub gamma: f64,
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy the last error message into `buffer` (up to `capacity` bytes
/// including the NUL). Returns the full message length in bytes, or 0 when
/// no error is pending. `buffer` may be null to query the length.
///
/// # Safety
/// `buffer` must point to at least `capacity` writable bytes when non-null.
#[no_mangle]
pub unsafe extern "C" fn sw_last_error(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let guard = slot.borrow();
        let Some(message) = guard.as_ref() else {
            return 0;
        };
        let bytes = message.as_bytes_with_nul();
        if !buffer.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buffer, n);
            // always terminate
            *buffer.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// New configuration with built-in defaults. Free with [`sw_config_free`].
#[no_mangle]
pub extern "C" fn sw_config_default() -> *mut SwConfig {
    Box::into_raw(Box::new(SwConfig { inner: Config::default() }))
}

/// Parse a configuration file (TOML). Returns null on failure.
///
/// # Safety
/// `path` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sw_config_from_file(path: *const c_char) -> *mut SwConfig {
    if path.is_null() {
        set_error("null path");
        return ptr::null_mut();
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8");
        return ptr::null_mut();
    };
    match Config::from_file(Path::new(path)) {
        Ok(config) => Box::into_raw(Box::new(SwConfig { inner: config })),
        Err(err) => {
            set_error(err.to_string());
            ptr::null_mut()
        }
    }
}

/// Parse a configuration from a TOML string. Returns null on failure.
///
/// # Safety
/// `text` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sw_config_from_string(text: *const c_char) -> *mut SwConfig {
    if text.is_null() {
        set_error("null config text");
        return ptr::null_mut();
    }
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("config text is not valid UTF-8");
        return ptr::null_mut();
    };
    match Config::from_toml_str(text) {
        Ok(config) => Box::into_raw(Box::new(SwConfig { inner: config })),
        Err(err) => {
            set_error(err.to_string());
            ptr::null_mut()
        }
    }
}

/// Release a configuration handle. Null is a no-op.
///
/// # Safety
/// `config` must have been returned by a `sw_config_*` constructor and not
/// yet freed.
#[no_mangle]
pub unsafe extern "C" fn sw_config_free(config: *mut SwConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

unsafe fn config_ref<'a>(config: *const SwConfig) -> Option<&'a Config> {
    if config.is_null() {
        set_error("null config handle");
        None
    } else {
        Some(&(*config).inner)
    }
}

/// Set wire width, length and defect separation (m).
///
/// # Safety
/// `config` must be a live handle from a `sw_config_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn sw_config_set_geometry(
    config: *mut SwConfig,
    w: f64,
    l: f64,
    s: f64,
) -> SwStatus {
    if config.is_null() {
        set_error("null config handle");
        return SwStatus::NullArgument;
    }
    let inner = &mut (*config).inner;
    let mut geometry = inner.geometry;
    geometry.w = w;
    geometry.l = l;
    geometry.s = s;
    if let Err(err) = geometry.validate() {
        set_error(err);
        return SwStatus::InvalidConfig;
    }
    inner.geometry = geometry;
    SwStatus::Ok
}

/// Select the confinement design.
///
/// # Safety
/// `config` must be a live handle from a `sw_config_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn sw_config_set_design(config: *mut SwConfig, design: SwDesign) -> SwStatus {
    if config.is_null() {
        set_error("null config handle");
        return SwStatus::NullArgument;
    }
    (*config).inner.geometry.design = design.into();
    SwStatus::Ok
}

/// Set the bath temperature (K).
///
/// # Safety
/// `config` must be a live handle from a `sw_config_*` constructor.
#[no_mangle]
pub unsafe extern "C" fn sw_config_set_temperature(config: *mut SwConfig, t: f64) -> SwStatus {
    if config.is_null() {
        set_error("null config handle");
        return SwStatus::NullArgument;
    }
    let mut env = (*config).inner.environment;
    env.temperature = t;
    if let Err(err) = env.validate() {
        set_error(err);
        return SwStatus::InvalidConfig;
    }
    (*config).inner.environment = env;
    SwStatus::Ok
}

/// Level gap between the first and second conduction states (J).
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_delta_ec(config: *const SwConfig, out: *mut f64) -> SwStatus {
    let Some(inner) = config_ref(config) else {
        return SwStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return SwStatus::NullArgument;
    }
    *out = stirap_wire::emt::delta_ec_unchecked(&inner.geometry, &inner.constants);
    SwStatus::Ok
}

/// Optical coupling quantities for the configured wire.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_optical_coupling(
    config: *const SwConfig,
    out: *mut SwOpticalCoupling,
) -> SwStatus {
    let Some(inner) = config_ref(config) else {
        return SwStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return SwStatus::NullArgument;
    }
    let coupling = OpticalCoupling::compute(
        &inner.geometry,
        &inner.laser,
        &inner.constants,
        inner.omega_transition(),
    );
    *out = SwOpticalCoupling {
        f0: coupling.f0,
        d_wire: coupling.d_wire,
        omega: coupling.omega,
        gamma_se: coupling.gamma_se,
    };
    SwStatus::Ok
}

/// Full decoherence budget for the configured wire and design.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_decoherence_rates(
    config: *const SwConfig,
    out: *mut SwRates,
) -> SwStatus {
    let Some(inner) = config_ref(config) else {
        return SwStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return SwStatus::NullArgument;
    }
    let cutoffs = SurfaceCutoffs::default();
    let grid = AngularGrid::default();
    let inputs = RateInputs {
        env: &inner.environment,
        laser: &inner.laser,
        constants: &inner.constants,
        mass_mean: inner.mass_mean,
        omega_transition: inner.omega_transition(),
        surface_cutoffs: &cutoffs,
        angular_grid: &grid,
    };
    match decoherence_budget(&inner.geometry, &inputs) {
        Ok((budget, _)) => {
            *out = SwRates {
                gamma_cap: budget.gamma_cap,
                gamma_se: budget.gamma_se,
                gamma_ep: budget.gamma_ep,
                gamma_total: budget.total(),
            };
            SwStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            SwStatus::NumericalFailure
        }
    }
}

/// Integrate the pulsed transport at the configured geometry with the given
/// adiabaticity Ωτ; drive and decoherence derive from the configuration.
///
/// # Safety
/// `config` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sw_stirap_transport(
    config: *const SwConfig,
    adiabaticity: f64,
    out: *mut SwTransport,
) -> SwStatus {
    let Some(inner) = config_ref(config) else {
        return SwStatus::NullArgument;
    };
    if out.is_null() {
        set_error("null output pointer");
        return SwStatus::NullArgument;
    }
    if !(adiabaticity > 0.0) {
        set_error("adiabaticity must be positive");
        return SwStatus::InvalidConfig;
    }
    let omega = inner.pulses.omega0.unwrap_or_else(|| {
        stirap_wire::optics::rabi_effective(&inner.geometry, &inner.laser, &inner.constants)
    });
    let cutoffs = SurfaceCutoffs::default();
    let grid = AngularGrid::default();
    let inputs = RateInputs {
        env: &inner.environment,
        laser: &inner.laser,
        constants: &inner.constants,
        mass_mean: inner.mass_mean,
        omega_transition: inner.omega_transition(),
        surface_cutoffs: &cutoffs,
        angular_grid: &grid,
    };
    let gamma = match inner.pulses.gamma_override {
        Some(value) => value,
        None => match decoherence_budget(&inner.geometry, &inputs) {
            Ok((budget, _)) => budget.total(),
            Err(err) => {
                set_error(err.to_string());
                return SwStatus::NumericalFailure;
            }
        },
    };
    let t_delay = adiabaticity / omega;
    let schedule =
        PulseSchedule::counter_intuitive(omega, t_delay / inner.pulses.delay_to_sigma, t_delay);
    match evolve(&schedule, gamma, inner.pulses.loss_split, &IntegratorTol::default()) {
        Ok(result) => {
            *out = SwTransport {
                fidelity: result.fidelity,
                max_p2: result.max_p2,
                adiabaticity: result.adiabaticity,
                transport_time: transport_time(&schedule),
                omega,
                gamma,
            };
            SwStatus::Ok
        }
        Err(err) => {
            set_error(err.to_string());
            SwStatus::NumericalFailure
        }
    }
}

/// Build the feasibility map for `design` and write it as CSV to `path`.
///
/// # Safety
/// `config` must be a live handle; `path` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sw_sweep_csv(
    config: *const SwConfig,
    design: SwDesign,
    path: *const c_char,
) -> SwStatus {
    let Some(inner) = config_ref(config) else {
        return SwStatus::NullArgument;
    };
    if path.is_null() {
        set_error("null path");
        return SwStatus::NullArgument;
    }
    let Ok(path) = CStr::from_ptr(path).to_str() else {
        set_error("path is not valid UTF-8");
        return SwStatus::InvalidUtf8;
    };
    let map = build_map(design.into(), inner);
    match std::fs::write(path, map_to_csv(&map)) {
        Ok(()) => SwStatus::Ok,
        Err(err) => {
            set_error(err.to_string());
            SwStatus::IoFailure
        }
    }
}

//! Composition of the full decoherence budget for one wire.

use crate::capture::{apply_sacrificial_layer, capture_rate, CaptureModel};
use crate::constants::{MassMean, PhysicalConstants};
use crate::geometry::{Confinement, EnvironmentParams, WireGeometry};
use crate::optics::{spontaneous_emission, LaserParams};
use crate::phonons::{
    bulk_ep_rate, surface_ep_rate, AngularGrid, PhononError, ScatteringChannel, SurfaceCutoffs,
};
use serde::{Deserialize, Serialize};

/// The three decoherence channels competing with the drive (all 1/s).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DecoherenceBudget {
    pub gamma_cap: f64,
    pub gamma_se: f64,
    pub gamma_ep: f64,
}

impl DecoherenceBudget {
    pub fn total(&self) -> f64 {
        self.gamma_cap + self.gamma_se + self.gamma_ep
    }
}

/// Everything needed to evaluate the budget at one geometry.
#[derive(Debug, Clone, Copy)]
pub struct RateInputs<'a> {
    pub env: &'a EnvironmentParams,
    pub laser: &'a LaserParams,
    pub constants: &'a PhysicalConstants,
    pub mass_mean: MassMean,
    /// Transition angular frequency for spontaneous emission (rad/s)
    pub omega_transition: f64,
    pub surface_cutoffs: &'a SurfaceCutoffs,
    pub angular_grid: &'a AngularGrid,
}

/// Budget for one wire, with the surface-design channel breakdown when that
/// phonon model applies. The sacrificial-layer mitigation is applied iff the
/// design is electrostatic and the environment enables it.
pub fn decoherence_budget(
    geometry: &WireGeometry,
    inputs: &RateInputs<'_>,
) -> Result<(DecoherenceBudget, Vec<ScatteringChannel>), PhononError> {
    let model = CaptureModel::from_environment(inputs.env, inputs.constants, inputs.mass_mean)
        .map_err(PhononError::Invalid)?;
    let raw_cap = capture_rate(&model, inputs.constants);
    let gamma_cap = match geometry.design {
        Confinement::Electrostatic => {
            apply_sacrificial_layer(raw_cap, inputs.env.sacrificial_layer, geometry.design)
        }
        Confinement::Surface => raw_cap,
    };
    let gamma_se = spontaneous_emission(geometry, inputs.omega_transition, inputs.constants);
    let (gamma_ep, channels) = match geometry.design {
        Confinement::Surface => {
            let rate = surface_ep_rate(
                [1, 1, 1],
                geometry,
                inputs.env,
                inputs.constants,
                inputs.surface_cutoffs,
            )?;
            (rate.total, rate.channels)
        }
        Confinement::Electrostatic => {
            let rate =
                bulk_ep_rate([1, 1, 1], geometry, inputs.env, inputs.constants, inputs.angular_grid)?;
            (rate, Vec::new())
        }
    };
    Ok((DecoherenceBudget { gamma_cap, gamma_se, gamma_ep }, channels))
}

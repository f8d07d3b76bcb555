//! Axisymmetric finite-difference Laplace solver for the electrode-defined
//! confining potential.
//!
//! Domain: the substrate cylinder r ∈ [0, R], z ∈ [−d, 0], uniform grid.
//! A disc electrode of radius r_e held at V sits on the top surface; the
//! bottom plate is grounded. Boundaries: Dirichlet on the electrode and the
//! bottom plate, symmetry Neumann on the axis, zero-flux Neumann on the
//! outer radius and on the surface outside the electrode (surface-charge-free
//! approximation; with no volume charge the permittivity drops out).
//!
//! Successive over-relaxation on the cylindrical five-point stencil
//!
//! ```text
//!   (1/r) ∂_r (r ∂_r φ) + ∂²_z φ = 0 ,
//! ```
//!
//! with ω from the usual optimal-SOR estimate for a rectangular grid.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("SOR failed to reach tol = {tol:.3e} V in {iterations} sweeps (last update {residual:.3e} V)")]
    NotConverged { tol: f64, iterations: usize, residual: f64 },
    #[error("{0}")]
    Invalid(String),
}

/// Electrode, substrate and grid description.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElectrodeSetup {
    /// Disc electrode radius (m)
    pub electrode_radius: f64,
    /// Electrode height above the surface (m); geometry bookkeeping only,
    /// the substrate model sees the electrode as a surface Dirichlet patch
    pub electrode_height: f64,
    /// Substrate thickness (m)
    pub substrate_depth: f64,
    /// Radial truncation of the simulation domain (m)
    pub substrate_radius: f64,
    /// Electrode potential (V)
    pub v_applied: f64,
    /// Radial × axial grid cells
    pub grid: (usize, usize),
}

impl Default for ElectrodeSetup {
    fn default() -> Self {
        ElectrodeSetup {
            electrode_radius: 1e-6,
            electrode_height: 1e-6,
            substrate_depth: 10e-6,
            substrate_radius: 5e-6,
            v_applied: 1.0,
            grid: (128, 256),
        }
    }
}

impl ElectrodeSetup {
    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.substrate_depth > 0.0) {
            return Err(SolveError::Invalid("substrate depth must be positive".into()));
        }
        if !(self.electrode_radius > 0.0) {
            return Err(SolveError::Invalid("electrode radius must be positive".into()));
        }
        if self.substrate_radius < self.electrode_radius {
            return Err(SolveError::Invalid(
                "domain radius must not truncate the electrode".into(),
            ));
        }
        if self.grid.0 < 64 || self.grid.1 < 64 {
            return Err(SolveError::Invalid(format!(
                "grid must be at least 64×64, got {}×{}",
                self.grid.0, self.grid.1
            )));
        }
        if !self.v_applied.is_finite() {
            return Err(SolveError::Invalid("applied potential must be finite".into()));
        }
        Ok(())
    }
}

/// Solved potential on the (r, z) node grid; z runs from −depth (j = 0) to
/// the surface (j = n_z).
#[derive(Debug, Clone)]
pub struct PotentialField {
    pub n_r: usize,
    pub n_z: usize,
    pub dr: f64,
    pub dz: f64,
    pub depth: f64,
    pub v_applied: f64,
    /// Node values, (n_r+1) × (n_z+1), row-major in j
    pub phi: Vec<f64>,
    /// Largest node update of the final sweep (V)
    pub residual: f64,
}

impl PotentialField {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.phi[j * (self.n_r + 1) + i]
    }

    pub fn r(&self, i: usize) -> f64 {
        i as f64 * self.dr
    }

    /// Depth below the surface, positive downward.
    pub fn z_depth(&self, j: usize) -> f64 {
        self.depth - j as f64 * self.dz
    }
}

/// Solve the Dirichlet/Neumann problem by SOR.
pub fn solve_potential(
    setup: &ElectrodeSetup,
    tol: f64,
    max_iter: usize,
) -> Result<PotentialField, SolveError> {
    setup.validate()?;
    let (n_r, n_z) = setup.grid;
    let dr = setup.substrate_radius / n_r as f64;
    let dz = setup.substrate_depth / n_z as f64;
    let width = n_r + 1;
    let mut phi = vec![0.0; width * (n_z + 1)];

    // electrode patch on the surface row
    let electrode_nodes = (setup.electrode_radius / dr).floor() as usize;
    let is_electrode = |i: usize| i <= electrode_nodes.min(n_r);
    for i in 0..=n_r {
        if is_electrode(i) {
            phi[n_z * width + i] = setup.v_applied;
        }
    }

    let inv_dr2 = 1.0 / (dr * dr);
    let inv_dz2 = 1.0 / (dz * dz);
    let n_max = n_r.max(n_z) as f64;
    let omega = 2.0 / (1.0 + (std::f64::consts::PI / n_max).sin());

    let mut residual = f64::INFINITY;
    for sweep in 0..max_iter {
        let mut max_update: f64 = 0.0;
        for j in 0..=n_z {
            let bottom = j == 0;
            let surface = j == n_z;
            for i in 0..=n_r {
                if bottom || (surface && is_electrode(i)) {
                    continue; // Dirichlet nodes stay fixed
                }
                let idx = j * width + i;
                // z neighbors; the surface outside the electrode mirrors
                let (below, above) = if surface {
                    (phi[idx - width], phi[idx - width])
                } else {
                    (phi[idx - width], phi[idx + width])
                };
                let (r_term, r_diag) = if i == 0 {
                    // axis limit of the radial operator: 4(φ₁ − φ₀)/dr²
                    (4.0 * phi[idx + 1] * inv_dr2, 4.0 * inv_dr2)
                } else if i == n_r {
                    // outer Neumann: ghost mirrors the inner neighbor
                    (2.0 * phi[idx - 1] * inv_dr2, 2.0 * inv_dr2)
                } else {
                    let half = dr / (2.0 * (i as f64 * dr));
                    (
                        ((1.0 + half) * phi[idx + 1] + (1.0 - half) * phi[idx - 1]) * inv_dr2,
                        2.0 * inv_dr2,
                    )
                };
                let gauss_seidel =
                    (r_term + (below + above) * inv_dz2) / (r_diag + 2.0 * inv_dz2);
                let new = phi[idx] + omega * (gauss_seidel - phi[idx]);
                max_update = max_update.max((new - phi[idx]).abs());
                phi[idx] = new;
            }
        }
        residual = max_update;
        if residual < tol {
            log::debug!("SOR converged in {} sweeps, residual {:.3e} V", sweep + 1, residual);
            return Ok(PotentialField {
                n_r,
                n_z,
                dr,
                dz,
                depth: setup.substrate_depth,
                v_applied: setup.v_applied,
                phi,
                residual,
            });
        }
    }
    Err(SolveError::NotConverged { tol, iterations: max_iter, residual })
}

/// On-axis depth at which the potential first drops below
/// `fraction`·V_applied, by linear interpolation between grid rows.
pub fn effective_wire_length(field: &PotentialField, fraction: f64) -> Result<f64, SolveError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(SolveError::Invalid(format!(
            "threshold fraction must lie in (0, 1), got {fraction}"
        )));
    }
    if field.v_applied == 0.0 {
        return Ok(0.0);
    }
    let target = fraction * field.v_applied;
    let sign = field.v_applied.signum();
    let mut prev = field.at(0, field.n_z);
    for j in (0..field.n_z).rev() {
        let value = field.at(0, j);
        if sign * value < sign * target {
            let above_depth = field.z_depth(j + 1);
            let frac = (prev - target) / (prev - value);
            return Ok(above_depth + frac * field.dz);
        }
        prev = value;
    }
    Ok(field.depth)
}

/// Extract equipotential polylines at the given levels via marching squares
/// with greedy segment chaining. Points are (r, z-depth) pairs.
pub fn equipotential_polylines(
    field: &PotentialField,
    levels: &[f64],
) -> Vec<(f64, Vec<Vec<(f64, f64)>>)> {
    let mut out = Vec::new();
    for &level in levels {
        let mut segments: Vec<((f64, f64), (f64, f64))> = Vec::new();
        for j in 0..field.n_z {
            for i in 0..field.n_r {
                let corners = [
                    (field.r(i), field.z_depth(j), field.at(i, j)),
                    (field.r(i + 1), field.z_depth(j), field.at(i + 1, j)),
                    (field.r(i + 1), field.z_depth(j + 1), field.at(i + 1, j + 1)),
                    (field.r(i), field.z_depth(j + 1), field.at(i, j + 1)),
                ];
                let mut crossings = Vec::new();
                for e in 0..4 {
                    let (r0, z0, v0) = corners[e];
                    let (r1, z1, v1) = corners[(e + 1) % 4];
                    if (v0 - level) * (v1 - level) < 0.0 {
                        let t = (level - v0) / (v1 - v0);
                        crossings.push((r0 + t * (r1 - r0), z0 + t * (z1 - z0)));
                    }
                }
                if crossings.len() == 2 {
                    segments.push((crossings[0], crossings[1]));
                }
            }
        }
        out.push((level, chain_segments(segments, field.dr.min(field.dz) * 1e-6)));
    }
    out
}

fn chain_segments(
    mut segments: Vec<((f64, f64), (f64, f64))>,
    eps: f64,
) -> Vec<Vec<(f64, f64)>> {
    let close = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() < eps && (a.1 - b.1).abs() < eps;
    let mut polylines = Vec::new();
    while let Some((a, b)) = segments.pop() {
        let mut line = vec![a, b];
        loop {
            let tail = *line.last().unwrap();
            if let Some(pos) = segments
                .iter()
                .position(|&(p, q)| close(p, tail) || close(q, tail))
            {
                let (p, q) = segments.swap_remove(pos);
                line.push(if close(p, tail) { q } else { p });
            } else {
                break;
            }
        }
        polylines.push(line);
    }
    polylines
}

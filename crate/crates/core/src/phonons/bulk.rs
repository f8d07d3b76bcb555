//! Golden-rule scattering off bulk dilational modes for electrostatically
//! confined wires.
//!
//! The continuum of plane-wave modes collapses the energy delta onto the
//! shell |k| = ω_n/c_l, leaving an angular integral of the squared envelope
//! overlap
//!
//! ```text
//!   G_n(k) = | (8/w²L) (1/|k|) J(n_x,κ_x w) J(n_y,κ_y w) J(n_z,κ_z L) |² ,
//!   J(a, κD) = ∫₀^D sin(aπu/D) e^(iκu) sin(cπu/D) du ,
//! ```
//!
//! (the 1/|k| is the mode amplitude c_l/ω_k on the shell) and the rate
//!
//! ```text
//!   Γ_ep = Ξ_d²/(8π² ħ ρ_C c_l⁷) Σ_n ω_n⁵ n_B(ω_n, T)
//!          ∫₀^π ∫₀^{2π} G_n(ω_n/c_l, θ, φ) sinθ dθ dφ .
//! ```
//!
//! The 1-D factor has the exact form
//!
//! ```text
//!   |J|² = (κ²D⁴/2) (1 − s·cos κD) R²(κD) ,     s = (−1)^(a+c) ,
//!   R(x) = 1/(p₋²π² − x²) − 1/(p₊²π² − x²) ,    p∓ = |a∓c| ,
//! ```
//!
//! a box form factor: a smooth rational envelope peaked where κD ≈ p₊π or
//! p₋π times a single fast oscillation. Resolving that oscillation fixes the
//! quadrature resolution: the θ integral is Gauss–Legendre in cosθ and the
//! φ integral a periodic trapezoid rule, both scaled up with kD/π beyond the
//! requested floor so large wires do not alias the form factor.
//!
//! The state sum is pruned by an upper bound on each state's angular
//! integral (envelope peak value times the full solid angle): states are
//! visited in decreasing bound order until the remaining bounds cannot move
//! the total by more than 0.2%.

use super::{bose_occupation, PhononError};
use crate::constants::PhysicalConstants;
use crate::emt::{valley_energy, ValleyGroup};
use crate::geometry::{EnvironmentParams, WireGeometry};
use crate::numerics::sinc;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Angular quadrature policy for the shell integral.
#[derive(Debug, Clone, Copy)]
pub struct AngularGrid {
    /// Minimum Gauss–Legendre points in cosθ (the grid auto-scales up with
    /// the shell radius)
    pub n_theta: usize,
    /// Minimum trapezoid points in φ
    pub n_phi: usize,
    /// Rigid rotation of the φ grid (rad); the result must not depend on it
    pub phi_offset: f64,
    /// Include final states with ħω_n ≤ factor·k_B T
    pub thermal_factor: f64,
    /// Hard per-component electron index bound
    pub max_index: u32,
    /// Oscillation-resolution multiplier for the auto-scaled grid
    pub resolution: f64,
}

impl Default for AngularGrid {
    fn default() -> Self {
        AngularGrid {
            n_theta: 32,
            n_phi: 64,
            phi_offset: 0.0,
            thermal_factor: 14.0,
            max_index: 1024,
            resolution: 1.3,
        }
    }
}

fn gauss_legendre_cached(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<std::collections::HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(std::collections::HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(crate::numerics::gauss_legendre(n)))
        .clone()
}

/// Cached (cos φ, sin φ) tables for the trapezoid grids.
fn phi_table_cached(n_phi: usize, offset: f64) -> Arc<Vec<(f64, f64)>> {
    type Key = (usize, u64);
    static CACHE: OnceLock<Mutex<std::collections::HashMap<Key, Arc<Vec<(f64, f64)>>>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(std::collections::HashMap::new()));
    let key = (n_phi, offset.to_bits());
    let mut guard = cache.lock().unwrap();
    guard
        .entry(key)
        .or_insert_with(|| {
            let dphi = 2.0 * PI / n_phi as f64;
            Arc::new(
                (0..n_phi)
                    .map(|j| {
                        let phi = offset + j as f64 * dphi;
                        (phi.cos(), phi.sin())
                    })
                    .collect(),
            )
        })
        .clone()
}

/// K(p, κ, D) = ∫₀^D cos(pπu/D) e^(iκu) du, exact and stable for all κ.
fn cos_exp_integral(p: u32, kappa: f64, d: f64) -> Complex64 {
    let x = kappa * d;
    if p == 0 {
        let half = x / 2.0;
        return Complex64::from_polar(1.0, half) * (d * sinc(half));
    }
    let pp = p as f64 * PI;
    let dm = x - pp;
    let dp = x + pp;
    // K = 2κD² e^(iδ/2) sin(δ/2)/(δ₋ δ₊); either half-angle form is exact,
    // pick the one that keeps the linear factor in the denominator
    if dm.abs() <= dp.abs() {
        Complex64::from_polar(1.0, dm / 2.0) * (kappa * d * d * sinc(dm / 2.0) / dp)
    } else {
        Complex64::from_polar(1.0, dp / 2.0) * (kappa * d * d * sinc(dp / 2.0) / dm)
    }
}

/// J(a, c, κ, D) = ∫₀^D sin(aπu/D) e^(iκu) sin(cπu/D) du by product-to-sum.
fn sin_exp_sin_integral(a: u32, c: u32, kappa: f64, d: f64) -> Complex64 {
    0.5 * (cos_exp_integral(a.abs_diff(c), kappa, d) - cos_exp_integral(a + c, kappa, d))
}

/// |J(a, c, κ, D)|² through the real rational form, falling back to the
/// complex half-angle path near the removable poles.
fn j_norm_sqr(a: u32, c: u32, kappa: f64, d: f64) -> f64 {
    let x = kappa * d;
    let p_minus = a.abs_diff(c) as f64 * PI;
    let p_plus = (a + c) as f64 * PI;
    let x2 = x * x;
    let dm = p_minus * p_minus - x2;
    let dp = p_plus * p_plus - x2;
    // stay a unit away from either pole (and from the p₋ = 0 origin)
    if dm.abs() < p_minus.max(1.0) || dp.abs() < p_plus {
        return sin_exp_sin_integral(a, c, kappa, d).norm_sqr();
    }
    // 1 − s·cos x by half-angle, free of cancellation near the cos extrema
    let oscillation = if (a + c) % 2 == 0 {
        2.0 * (x / 2.0).sin().powi(2)
    } else {
        2.0 * (x / 2.0).cos().powi(2)
    };
    let r = 1.0 / dm - 1.0 / dp;
    0.5 * (kappa * d * d).powi(2) * oscillation * r * r
}

/// Upper bound on |J(a, c, κ ≤ k, D)|² over the reachable κ range, plus a
/// flag for whether the bound comes from a reachable resonance peak.
fn j_norm_sqr_bound(a: u32, c: u32, k: f64, d: f64) -> (f64, bool) {
    let x = k * d;
    let p_minus = a.abs_diff(c) as f64 * PI;
    if x >= p_minus - PI {
        // a resonance is reachable; |J| never exceeds D/2 and peaks near
        // 0.41·D at the pole
        return (0.25 * d * d, true);
    }
    // fully off-resonant: the envelope is monotone in x up to the first
    // pole, bound it at the endpoint with the oscillation at its crest
    let x2 = x * x;
    let p_plus = (a + c) as f64 * PI;
    let r = 1.0 / (p_minus * p_minus - x2) - 1.0 / (p_plus * p_plus - x2);
    ((x * d).powi(2) * r * r, false)
}

/// Squared envelope overlap G_n(k) (m²) between the ground envelope and
/// state `n` through a bulk mode of wavevector `k_vec`.
pub fn bulk_overlap_g(n: [u32; 3], k_vec: [f64; 3], geometry: &WireGeometry) -> f64 {
    bulk_overlap_g_from(n, [1, 1, 1], k_vec, geometry)
}

/// As [`bulk_overlap_g`] with an explicit initial envelope.
pub fn bulk_overlap_g_from(
    n: [u32; 3],
    initial: [u32; 3],
    k_vec: [f64; 3],
    geometry: &WireGeometry,
) -> f64 {
    let k_mag = (k_vec[0] * k_vec[0] + k_vec[1] * k_vec[1] + k_vec[2] * k_vec[2]).sqrt();
    debug_assert!(k_mag > 0.0, "bulk overlap needs |k| > 0");
    let j2 = j_norm_sqr(n[0], initial[0], k_vec[0], geometry.w)
        * j_norm_sqr(n[1], initial[1], k_vec[1], geometry.w)
        * j_norm_sqr(n[2], initial[2], k_vec[2], geometry.l);
    let amp = 8.0 / geometry.volume() / k_mag;
    amp * amp * j2
}

/// Angular integral ∫ G_n sinθ dθ dφ on the shell |k| = k_mag, with the
/// grid auto-scaled to resolve the form-factor oscillations.
///
/// The integrand is even in cosθ, so only the positive half of the
/// Gauss–Legendre nodes is visited; θ rows whose axial factor |J_z|² is
/// negligible against the row maximum are dropped.
fn angular_integral(
    n: [u32; 3],
    initial: [u32; 3],
    k_mag: f64,
    geometry: &WireGeometry,
    grid: &AngularGrid,
    coarsen: f64,
) -> f64 {
    let osc_z = k_mag * geometry.l / PI;
    let osc_xy = k_mag * geometry.w / PI;
    let margin_theta = grid.n_theta * 3 / 4;
    let margin_phi = grid.n_phi / 8;
    let n_theta = ((grid.resolution * coarsen * osc_z).ceil() as usize + margin_theta)
        .max((grid.n_theta as f64 * coarsen) as usize)
        .next_multiple_of(8);
    let n_phi = (4 * ((grid.resolution * coarsen * osc_xy / 4.0).ceil() as usize + margin_phi))
        .max((grid.n_phi as f64 * coarsen) as usize)
        .next_multiple_of(4);
    let gl = gauss_legendre_cached(n_theta);
    let half = n_theta / 2;
    let u_nodes = &gl.0[half..];
    let u_weights = &gl.1[half..];
    let jz_rows: Vec<f64> = u_nodes
        .iter()
        .map(|&u| j_norm_sqr(n[2], initial[2], k_mag * u, geometry.l))
        .collect();
    let jz_max = jz_rows.iter().fold(0.0f64, |a, &b| a.max(b));
    if jz_max == 0.0 {
        return 0.0;
    }
    let row_floor = 1e-7 * jz_max;
    let dphi = 2.0 * PI / n_phi as f64;
    let phi_table = phi_table_cached(n_phi, grid.phi_offset);
    let mut total = 0.0;
    for ((&u, &wu), &jz) in u_nodes.iter().zip(u_weights).zip(&jz_rows) {
        if jz < row_floor {
            continue;
        }
        let k_perp = k_mag * (1.0 - u * u).max(0.0).sqrt();
        let mut phi_sum = 0.0;
        for &(cos_phi, sin_phi) in phi_table.iter() {
            let jx = j_norm_sqr(n[0], initial[0], k_perp * cos_phi, geometry.w);
            if jx == 0.0 {
                continue;
            }
            phi_sum += jx * j_norm_sqr(n[1], initial[1], k_perp * sin_phi, geometry.w);
        }
        // even in cosθ: count the mirrored node too
        total += 2.0 * wu * phi_sum * dphi * jz;
    }
    let amp = 8.0 / geometry.volume() / k_mag;
    amp * amp * total
}

/// Bulk-phonon scattering rate out of envelope state `initial` (1/s).
pub fn bulk_ep_rate(
    initial: [u32; 3],
    geometry: &WireGeometry,
    env: &EnvironmentParams,
    constants: &PhysicalConstants,
    grid: &AngularGrid,
) -> Result<f64, PhononError> {
    if initial.iter().any(|&c| c == 0) {
        return Err(PhononError::InvalidIndices(format!(
            "initial state indices must be ≥ 1, got {initial:?}"
        )));
    }
    if grid.n_theta < 16 || grid.n_phi < 32 {
        return Err(PhononError::Invalid(format!(
            "angular grid must be at least 16×32, got {}×{}",
            grid.n_theta, grid.n_phi
        )));
    }
    let (full, half) = rate_on_grid(initial, geometry, env, constants, grid);
    if full > 1e-30 && (full - half).abs() > 0.01 * full {
        return Err(PhononError::QuadratureNotConverged { coarse: half, fine: full });
    }
    Ok(full)
}

/// One full evaluation: returns the rate at the requested resolution and at
/// half resolution (same candidate ranking) for the convergence check.
fn rate_on_grid(
    initial: [u32; 3],
    geometry: &WireGeometry,
    env: &EnvironmentParams,
    constants: &PhysicalConstants,
    grid: &AngularGrid,
) -> (f64, f64) {
    let hbar = constants.hbar;
    let e_initial =
        valley_energy(initial, ValleyGroup::Perpendicular, geometry, constants).unwrap();
    let omega_lim = grid.thermal_factor * constants.k_b * env.temperature / hbar;

    let k = hbar * hbar * PI * PI / 2.0;
    let bound = |mass: f64, dim: f64| -> u32 {
        let cap = ((e_initial + hbar * omega_lim) * mass * dim * dim / k).sqrt();
        (cap.floor() as u32).clamp(1, grid.max_index)
    };
    let bounds = [
        bound(constants.m_par, geometry.w),
        bound(constants.m_perp, geometry.w),
        bound(constants.m_perp, geometry.l),
    ];

    struct Candidate {
        n: [u32; 3],
        omega_n: f64,
        weight: f64,
        screen: f64,
    }
    let mut candidates = Vec::new();
    let mut max_screen = 0.0f64;
    for nx in 1..=bounds[0] {
        for ny in 1..=bounds[1] {
            for nz in 1..=bounds[2] {
                let n = [nx, ny, nz];
                if n == initial {
                    continue;
                }
                let e_n =
                    valley_energy(n, ValleyGroup::Perpendicular, geometry, constants).unwrap();
                let omega_n = (e_n - e_initial) / hbar;
                if omega_n <= 0.0 || omega_n > omega_lim {
                    continue;
                }
                let weight =
                    omega_n.powi(5) * bose_occupation(omega_n, env.temperature, constants);
                // reachability screen on the peak form factors, discounted
                // by the angular sliver a resonance peak actually covers
                let k_mag = omega_n / constants.c_l;
                let (bx2, res_x) = j_norm_sqr_bound(nx, initial[0], k_mag, geometry.w);
                let (by2, res_y) = j_norm_sqr_bound(ny, initial[1], k_mag, geometry.w);
                let (bz2, res_z) = j_norm_sqr_bound(nz, initial[2], k_mag, geometry.l);
                let amp = 8.0 / geometry.volume() / k_mag;
                let mut screen = weight * amp * amp * bx2 * by2 * bz2;
                if res_z {
                    screen *= (8.0 * PI / (k_mag * geometry.l)).min(1.0);
                }
                if res_x && res_y {
                    screen *= (8.0 * PI / (k_mag * geometry.w)).min(1.0);
                }
                max_screen = max_screen.max(screen);
                if screen > 0.0 {
                    candidates.push(Candidate { n, omega_n, weight, screen });
                }
            }
        }
    }
    candidates.retain(|c| c.screen > 1e-8 * max_screen);

    // stage 1: rank every candidate by a low-resolution estimate of its
    // angular integral; stage 2: recompute the states carrying 99.5% of the
    // stage-1 total at full (and half) resolution, keeping the cheap
    // estimates for the long tail
    let coarse = AngularGrid {
        n_theta: 16,
        n_phi: 32,
        resolution: (0.25 * grid.resolution).max(0.15),
        ..*grid
    };
    let mut estimates: Vec<(usize, f64)> = candidates
        .par_iter()
        .enumerate()
        .map(|(idx, cand)| {
            let k_mag = cand.omega_n / constants.c_l;
            let est = cand.weight
                * angular_integral(cand.n, initial, k_mag, geometry, &coarse, 1.0);
            (idx, est)
        })
        .collect();
    estimates.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let stage1_total: f64 = estimates.iter().map(|e| e.1).sum();
    let mut refine_count = estimates.len();
    let mut running = 0.0;
    for (rank, (_, est)) in estimates.iter().enumerate() {
        running += est;
        if running >= 0.99 * stage1_total {
            refine_count = rank + 1;
            break;
        }
    }
    refine_count = refine_count.max(32.min(estimates.len()));
    // half-resolution confirmation on the states that carry the total
    let check_count = refine_count.min(256);

    let refined: Vec<(f64, f64)> = estimates[..refine_count]
        .par_iter()
        .enumerate()
        .map(|(rank, &(idx, _))| {
            let cand = &candidates[idx];
            let k_mag = cand.omega_n / constants.c_l;
            let fine = cand.weight * angular_integral(cand.n, initial, k_mag, geometry, grid, 1.0);
            let coarse_check = if rank < check_count {
                cand.weight * angular_integral(cand.n, initial, k_mag, geometry, grid, 0.7)
            } else {
                fine
            };
            (fine, coarse_check)
        })
        .collect();
    // correct the unrefined tail by the coarse estimator's bias measured on
    // the refined subset
    let fine_sum: f64 = refined.iter().map(|r| r.0).sum();
    let est_sum: f64 = estimates[..refine_count].iter().map(|e| e.1).sum();
    let tail_raw: f64 = estimates[refine_count..].iter().map(|e| e.1).sum();
    let tail = if est_sum > 0.0 { tail_raw * fine_sum / est_sum } else { tail_raw };
    log::debug!(
        "bulk rate: {} candidates, {} refined, tail fraction {:.2e}",
        candidates.len(),
        refine_count,
        tail / (fine_sum + tail).max(1e-300)
    );

    let prefactor = constants.xi_d * constants.xi_d
        / (8.0 * PI * PI * hbar * constants.rho_c * constants.c_l.powi(7));
    let fine_total = prefactor * (fine_sum + tail);
    let check_total = prefactor * (refined.iter().map(|r| r.1).sum::<f64>() + tail);
    (fine_total, check_total)
}

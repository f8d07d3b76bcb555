//! Shared oracle machinery for the integration suites: adaptive quadrature
//! and brute-force golden-rule sums that stay independent of the library's
//! closed-form evaluation paths.

#![allow(dead_code)]

use num_complex::Complex64;
use stirap_wire::constants::PhysicalConstants;
use stirap_wire::emt::{valley_energy, ValleyGroup};
use stirap_wire::geometry::{EnvironmentParams, WireGeometry};
use stirap_wire::phonons::{bose_occupation, lorentzian_dos, mode_frequency, surface::chi_norm_factor};
use std::f64::consts::PI;

/// Adaptive Simpson quadrature.
pub fn adaptive_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(f, a, fa, m, fm, flm);
        let right = simpson(f, m, fm, b, fb, frm);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            recurse(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(&f, a, fa, b, fb, fm);
    recurse(&f, a, b, fa, fb, fm, whole, tol, 40)
}

/// Complex version through independent real/imaginary quadratures.
pub fn adaptive_simpson_complex<F: Fn(f64) -> Complex64 + Copy>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Complex64 {
    let re = adaptive_simpson(move |u| f(u).re, a, b, tol);
    let im = adaptive_simpson(move |u| f(u).im, a, b, tol);
    Complex64::new(re, im)
}

/// Quadrature of the 1-D electron-phonon factor
/// ∫₀^D sin(aπu/D) cos(bπu/D) sin(cπu/D) du.
pub fn quad_sin_cos_sin(a: u32, b: u32, c: u32, d: f64) -> f64 {
    let (af, bf, cf) = (a as f64, b as f64, c as f64);
    adaptive_simpson(
        move |u| {
            (af * PI * u / d).sin() * (bf * PI * u / d).cos() * (cf * PI * u / d).sin()
        },
        0.0,
        d,
        1e-13 * d,
    )
}

/// Quadrature evaluation of the dilational overlap M, assembled from its
/// defining integral: (ω²/c_l²)(1/V_c)∫ F_n χ_m F_i d³r.
pub fn quad_dilational_m(
    n: [u32; 3],
    m: [u32; 3],
    initial: [u32; 3],
    geometry: &WireGeometry,
    constants: &PhysicalConstants,
) -> f64 {
    let omega = mode_frequency(m, geometry, constants);
    let amp = chi_norm_factor(m) * constants.c_l / omega;
    let dims = [geometry.w, geometry.w, geometry.l];
    let mut product = 1.0;
    for d in 0..3 {
        product *= quad_sin_cos_sin(n[d], m[d], initial[d], dims[d]);
    }
    (omega * omega / (constants.c_l * constants.c_l))
        * (8.0 / geometry.volume())
        * amp
        * product
}

/// Cached per-axis version for exhaustive scans (initial component fixed).
pub struct AxisQuadTable {
    d: f64,
    initial: u32,
    values: Vec<f64>, // indexed by a * stride + b
    stride: usize,
}

impl AxisQuadTable {
    pub fn build(a_max: u32, b_max: u32, initial: u32, d: f64) -> AxisQuadTable {
        let stride = b_max as usize + 1;
        let mut values = vec![0.0; (a_max as usize + 1) * stride];
        for a in 1..=a_max {
            for b in 0..=b_max {
                values[a as usize * stride + b as usize] = quad_sin_cos_sin(a, b, initial, d);
            }
        }
        AxisQuadTable { d, initial, values, stride }
    }

    pub fn get(&self, a: u32, b: u32) -> f64 {
        self.values[a as usize * self.stride + b as usize]
    }
}

/// Blind brute-force double sum for the surface scattering rate: every
/// (n, m) pair inside the boxes, overlaps by quadrature, no selection rules.
pub fn brute_force_surface_rate(
    initial: [u32; 3],
    geometry: &WireGeometry,
    env: &EnvironmentParams,
    constants: &PhysicalConstants,
    n_box: [u32; 3],
    m_box: [u32; 3],
) -> f64 {
    let hbar = constants.hbar;
    let e_initial =
        valley_energy(initial, ValleyGroup::Perpendicular, geometry, constants).unwrap();
    let dims = [geometry.w, geometry.w, geometry.l];
    let tables: Vec<AxisQuadTable> = (0..3)
        .map(|axis| AxisQuadTable::build(n_box[axis], m_box[axis], initial[axis], dims[axis]))
        .collect();
    let prefactor = 2.0 * PI / (hbar * hbar) * constants.xi_d * constants.xi_d;
    let two_rho_v = 2.0 * constants.rho_c * geometry.volume();

    let mut total = 0.0;
    for nx in 1..=n_box[0] {
        for ny in 1..=n_box[1] {
            for nz in 1..=n_box[2] {
                let n = [nx, ny, nz];
                if n == initial {
                    continue;
                }
                let e_n =
                    valley_energy(n, ValleyGroup::Perpendicular, geometry, constants).unwrap();
                let omega_n = (e_n - e_initial) / hbar;
                for mx in 0..=m_box[0] {
                    for my in 0..=m_box[1] {
                        for mz in 0..=m_box[2] {
                            let m = [mx, my, mz];
                            if m == [0, 0, 0] {
                                continue;
                            }
                            let omega_m = mode_frequency(m, geometry, constants);
                            let q1d = tables[0].get(nx, mx)
                                * tables[1].get(ny, my)
                                * tables[2].get(nz, mz);
                            if q1d == 0.0 {
                                continue;
                            }
                            let amp = chi_norm_factor(m) * constants.c_l / omega_m;
                            let overlap = (omega_m * omega_m
                                / (constants.c_l * constants.c_l))
                                * (8.0 / geometry.volume())
                                * amp
                                * q1d;
                            let gamma = omega_m / env.quality_factor;
                            total += prefactor
                                * overlap
                                * overlap
                                * (hbar / (two_rho_v * omega_m))
                                * bose_occupation(omega_m, env.temperature, constants)
                                * lorentzian_dos(omega_n - omega_m, gamma);
                        }
                    }
                }
            }
        }
    }
    total
}

/// Quadrature evaluation of the bulk overlap G_n(k) from its defining
/// triple integral.
pub fn quad_bulk_g(
    n: [u32; 3],
    initial: [u32; 3],
    k_vec: [f64; 3],
    geometry: &WireGeometry,
) -> f64 {
    let dims = [geometry.w, geometry.w, geometry.l];
    let k_mag = (k_vec[0] * k_vec[0] + k_vec[1] * k_vec[1] + k_vec[2] * k_vec[2]).sqrt();
    let mut j = Complex64::new(1.0, 0.0);
    for d in 0..3 {
        let (a, c, kappa, len) = (n[d] as f64, initial[d] as f64, k_vec[d], dims[d]);
        j *= adaptive_simpson_complex(
            move |u| {
                Complex64::from_polar((a * PI * u / len).sin() * (c * PI * u / len).sin(), kappa * u)
            },
            0.0,
            len,
            1e-12 * len,
        );
    }
    let amp = 8.0 / geometry.volume() / k_mag;
    amp * amp * j.norm_sqr()
}

/// Final electronic states within the thermal window, with their transition
/// frequencies (re-derived independently of the library's internal bounds).
pub fn thermal_final_states(
    initial: [u32; 3],
    geometry: &WireGeometry,
    env: &EnvironmentParams,
    constants: &PhysicalConstants,
    thermal_factor: f64,
) -> Vec<([u32; 3], f64)> {
    let hbar = constants.hbar;
    let e_initial =
        valley_energy(initial, ValleyGroup::Perpendicular, geometry, constants).unwrap();
    let omega_lim = thermal_factor * constants.k_b * env.temperature / hbar;
    let k = hbar * hbar * PI * PI / 2.0;
    let bound = |mass: f64, dim: f64| -> u32 {
        (((e_initial + hbar * omega_lim) * mass * dim * dim / k).sqrt().floor() as u32).max(1)
    };
    let (bx, by, bz) = (
        bound(constants.m_par, geometry.w),
        bound(constants.m_perp, geometry.w),
        bound(constants.m_perp, geometry.l),
    );
    let mut out = Vec::new();
    for nx in 1..=bx {
        for ny in 1..=by {
            for nz in 1..=bz {
                let n = [nx, ny, nz];
                if n == initial {
                    continue;
                }
                let e_n =
                    valley_energy(n, ValleyGroup::Perpendicular, geometry, constants).unwrap();
                let omega_n = (e_n - e_initial) / hbar;
                if omega_n > 0.0 && omega_n <= omega_lim {
                    out.push((n, omega_n));
                }
            }
        }
    }
    out
}

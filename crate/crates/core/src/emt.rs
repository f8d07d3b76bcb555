//! Effective-mass electronic structure of the wire.
//!
//! The wire is an infinite square well of dimensions w × w × L. Each of the
//! six conduction valleys contributes a ladder of confined states with
//! envelope
//!
//! ```text
//!   F_n(r) = √(8 V_c / w²L) · sin(n_x π x / w) sin(n_y π y / w) sin(n_z π z / L)
//! ```
//!
//! normalized so that ∫|F|² d³r = V_c. The anisotropic mass tensor makes the
//! confinement energy depend on how the valley axis is oriented relative to
//! the wire: for a (100) wire the two valleys along the axis (`Parallel`
//! group) put the heavy mass on the z term, the four transverse valleys
//! (`Perpendicular` group) put it on a cross-section term. The lowest gap
//! relevant to driving the wire optically is the z-ladder spacing of the
//! perpendicular group,
//!
//! ```text
//!   ΔE_c = E(1,1,2) − E(1,1,1) = 3 ħ²π² / (2 m⊥ L²) .
//! ```
//!
//! Symmetry-adapted valley combinations (D₄ₕ projection) and the parity
//! selection rule of the longitudinal Stark Hamiltonian e Φ z / L live here
//! too: the Stark operator has A₂ᵤ symmetry, so it couples nothing but
//! A₂ᵤ ↔ A₁g pairs, and in particular leaves all four band-minimum states
//! untouched.

use crate::constants::PhysicalConstants;
use crate::geometry::{CrystalAxis, WireGeometry};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Valley classification by orientation relative to the (100) wire axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ValleyGroup {
    /// Valleys 1, 2 — axis along the wire (two-fold)
    Parallel,
    /// Valleys 3–6 — axis in the cross-section plane (four-fold)
    Perpendicular,
}

/// Irreducible-representation label of a symmetry-adapted valley combination.
///
/// `SingleValley(i)` tags perpendicular-group states with n_x ≠ n_y, whose
/// x- and y-valley pairs are no longer degenerate and do not mix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    A1g1,
    A2u,
    A1g2,
    B1g,
    Eu1,
    Eu2,
    SingleValley(u8),
}

impl std::fmt::Display for Symmetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Symmetry::A1g1 => write!(f, "A1g_1"),
            Symmetry::A2u => write!(f, "A2u"),
            Symmetry::A1g2 => write!(f, "A1g_2"),
            Symmetry::B1g => write!(f, "B1g"),
            Symmetry::Eu1 => write!(f, "Eu_1"),
            Symmetry::Eu2 => write!(f, "Eu_2"),
            Symmetry::SingleValley(i) => write!(f, "valley_{i}"),
        }
    }
}

/// One confined conduction state: envelope indices, valley group, symmetry
/// label and energy above the bulk conduction-band minimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConductionState {
    pub n: [u32; 3],
    pub valley_group: ValleyGroup,
    pub symmetry: Symmetry,
    /// Confinement energy (J)
    pub energy: f64,
}

/// Infinite-well envelope for quantum triple `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFunction {
    pub n: [u32; 3],
    pub geometry: WireGeometry,
}

impl EnvelopeFunction {
    pub fn new(n: [u32; 3], geometry: WireGeometry) -> Result<Self, String> {
        if n.iter().any(|&c| c == 0) {
            return Err(format!("envelope indices must be ≥ 1, got {n:?}"));
        }
        Ok(EnvelopeFunction { n, geometry })
    }

    /// √(8 V_c / w²L), the peak amplitude.
    pub fn normalization(&self, constants: &PhysicalConstants) -> f64 {
        (8.0 * constants.v_c / self.geometry.volume()).sqrt()
    }
}

/// Evaluate the envelope at a point. Outside the wire box the infinite well
/// forces zero.
pub fn envelope_value(f: &EnvelopeFunction, r: [f64; 3], constants: &PhysicalConstants) -> f64 {
    let g = &f.geometry;
    let [x, y, z] = r;
    // walls count as outside so the boundary value is an exact zero
    if x <= 0.0 || x >= g.w || y <= 0.0 || y >= g.w || z <= 0.0 || z >= g.l {
        return 0.0;
    }
    let [nx, ny, nz] = f.n.map(f64::from);
    f.normalization(constants)
        * (nx * PI * x / g.w).sin()
        * (ny * PI * y / g.w).sin()
        * (nz * PI * z / g.l).sin()
}

/// Confinement energy of envelope `n` for a valley group of a (100) wire.
///
/// The perpendicular group uses the x-heavy canonical form (valleys along x);
/// the y-heavy pair is the same formula with n_x and n_y swapped.
pub fn valley_energy(
    n: [u32; 3],
    group: ValleyGroup,
    geometry: &WireGeometry,
    constants: &PhysicalConstants,
) -> Result<f64, String> {
    match geometry.axis {
        CrystalAxis::Axis100 => {}
    }
    if n.iter().any(|&c| c == 0) {
        return Err(format!("quantum numbers must be ≥ 1, got {n:?}"));
    }
    let [nx, ny, nz] = n.map(f64::from);
    let w2 = geometry.w * geometry.w;
    let l2 = geometry.l * geometry.l;
    let k = constants.hbar * constants.hbar * PI * PI / 2.0;
    let e = match group {
        ValleyGroup::Perpendicular => {
            k * (nx * nx / (constants.m_par * w2)
                + ny * ny / (constants.m_perp * w2)
                + nz * nz / (constants.m_perp * l2))
        }
        ValleyGroup::Parallel => {
            k * (nx * nx / (constants.m_perp * w2)
                + ny * ny / (constants.m_perp * w2)
                + nz * nz / (constants.m_par * l2))
        }
    };
    Ok(e)
}

/// Gap between the first and second conduction levels of the perpendicular
/// group, 3ħ²π²/(2 m⊥ L²). Identical to E(1,1,2) − E(1,1,1).
///
/// Warns when L < 3w, where the z-ladder is not guaranteed to set the gap.
pub fn delta_ec(geometry: &WireGeometry, constants: &PhysicalConstants) -> f64 {
    if geometry.l < 3.0 * geometry.w {
        log::warn!(
            "ΔE_c formula assumes L ≫ w; called with w = {:.3e} m, L = {:.3e} m",
            geometry.w,
            geometry.l
        );
    }
    delta_ec_unchecked(geometry, constants)
}

/// Same as [`delta_ec`] without the aspect-ratio warning; used by grid sweeps
/// where near-cubic cells are expected.
pub fn delta_ec_unchecked(geometry: &WireGeometry, constants: &PhysicalConstants) -> f64 {
    3.0 * constants.hbar * constants.hbar * PI * PI
        / (2.0 * constants.m_perp * geometry.l * geometry.l)
}

/// Symmetry-adapted combinations of the degenerate single-valley states, as
/// rows of an orthonormal coefficient matrix over the valley indices of the
/// group (1,2 or 3,4,5,6).
pub fn symmetry_basis(group: ValleyGroup) -> Vec<(Symmetry, Vec<f64>)> {
    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    match group {
        ValleyGroup::Parallel => vec![
            (Symmetry::A1g1, vec![r2, r2]),
            (Symmetry::A2u, vec![-r2, r2]),
        ],
        ValleyGroup::Perpendicular => vec![
            (Symmetry::A1g2, vec![0.5, 0.5, 0.5, 0.5]),
            (Symmetry::B1g, vec![-0.5, -0.5, 0.5, 0.5]),
            (Symmetry::Eu1, vec![0.0, 0.0, -r2, r2]),
            (Symmetry::Eu2, vec![-r2, r2, 0.0, 0.0]),
        ],
    }
}

/// Level splitting between the two NV sites under a potential difference Φ
/// across the wire ends: ΔE_d = e Φ s / L (J).
pub fn stark_detuning(geometry: &WireGeometry, phi: f64, constants: &PhysicalConstants) -> f64 {
    constants.e_charge * phi * geometry.s / geometry.l
}

/// Parity selection rule of the longitudinal field: the operator transforms
/// as A₂ᵤ, so only {A₂ᵤ, A₁g} pairs couple. Every pair involving B₁g or Eᵤ
/// is inert, as is any diagonal element.
pub fn stark_couples(a: Symmetry, b: Symmetry) -> bool {
    use Symmetry::*;
    matches!((a, b), (A2u, A1g1) | (A1g1, A2u) | (A2u, A1g2) | (A1g2, A2u))
}

/// Enumerate conduction states with envelope components ≤ `n_max`, both
/// valley groups, sorted by energy.
///
/// Perpendicular states with n_x = n_y keep the four-fold D₄ₕ labels; with
/// n_x ≠ n_y the x- and y-valley pairs split and are listed per valley at
/// their own energies.
pub fn conduction_states(
    geometry: &WireGeometry,
    constants: &PhysicalConstants,
    n_max: u32,
) -> Result<Vec<ConductionState>, String> {
    let mut states = Vec::new();
    for nx in 1..=n_max {
        for ny in 1..=n_max {
            for nz in 1..=n_max {
                let n = [nx, ny, nz];
                let e_par = valley_energy(n, ValleyGroup::Parallel, geometry, constants)?;
                for sym in [Symmetry::A1g1, Symmetry::A2u] {
                    states.push(ConductionState {
                        n,
                        valley_group: ValleyGroup::Parallel,
                        symmetry: sym,
                        energy: e_par,
                    });
                }
                let e_x = valley_energy(n, ValleyGroup::Perpendicular, geometry, constants)?;
                if nx == ny {
                    for sym in [Symmetry::A1g2, Symmetry::B1g, Symmetry::Eu1, Symmetry::Eu2] {
                        states.push(ConductionState {
                            n,
                            valley_group: ValleyGroup::Perpendicular,
                            symmetry: sym,
                            energy: e_x,
                        });
                    }
                } else {
                    let e_y =
                        valley_energy([ny, nx, nz], ValleyGroup::Perpendicular, geometry, constants)?;
                    for (i, e) in [(3u8, e_x), (4, e_x), (5, e_y), (6, e_y)] {
                        states.push(ConductionState {
                            n,
                            valley_group: ValleyGroup::Perpendicular,
                            symmetry: Symmetry::SingleValley(i),
                            energy: e,
                        });
                    }
                }
            }
        }
    }
    states.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    Ok(states)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::default_constants;
    use crate::geometry::{Confinement, CrystalAxis};
    use approx::assert_relative_eq;

    fn geom(w: f64, l: f64, s: f64) -> WireGeometry {
        WireGeometry::new(w, l, s, CrystalAxis::Axis100, Confinement::Surface).unwrap()
    }

    #[test]
    fn envelope_vanishes_on_walls_and_outside() {
        let c = default_constants();
        let g = geom(0.2e-6, 0.6e-6, 0.4e-6);
        let f = EnvelopeFunction::new([1, 1, 1], g).unwrap();
        assert_eq!(envelope_value(&f, [0.0, 0.1e-6, 0.3e-6], &c), 0.0);
        assert_eq!(envelope_value(&f, [0.2e-6, 0.1e-6, 0.3e-6], &c), 0.0);
        assert_eq!(envelope_value(&f, [0.1e-6, 0.1e-6, -1e-9], &c), 0.0);
    }

    #[test]
    fn envelope_center_values() {
        let c = default_constants();
        let g = geom(0.2e-6, 0.6e-6, 0.4e-6);
        let center = [g.w / 2.0, g.w / 2.0, g.l / 2.0];
        let f111 = EnvelopeFunction::new([1, 1, 1], g).unwrap();
        assert_relative_eq!(
            envelope_value(&f111, center, &c),
            (8.0 * c.v_c / g.volume()).sqrt(),
            max_relative = 1e-12
        );
        // sin(π) node at the center for even n_x (zero up to rounding)
        let f211 = EnvelopeFunction::new([2, 1, 1], g).unwrap();
        assert!(envelope_value(&f211, center, &c).abs() < 1e-17);
    }

    #[test]
    fn valley_energy_oracle_value() {
        // independently evaluated scalar: (ħ²π²/2)(1/(m∥w²) + 1/(m⊥w²) + 1/(m⊥L²))
        // at w = 0.1 µm, L = 1.0 µm, m∥ = 1.56 mₑ, m⊥ = 0.28 mₑ
        let c = default_constants();
        let g = geom(0.1e-6, 1.0e-6, 0.5e-6);
        let e = valley_energy([1, 1, 1], ValleyGroup::Perpendicular, &g, &c).unwrap();
        assert_relative_eq!(e, 2.5593802238764664e-23, max_relative = 1e-12);
    }

    #[test]
    fn groups_swap_under_mass_exchange_for_cube() {
        // for w = L the perpendicular form equals the parallel form with the
        // heavy mass moved between the x and z terms
        let c = default_constants();
        let g = geom(0.5e-6, 0.5e-6, 0.25e-6);
        let e_perp = valley_energy([1, 1, 1], ValleyGroup::Perpendicular, &g, &c).unwrap();
        let e_par = valley_energy([1, 1, 1], ValleyGroup::Parallel, &g, &c).unwrap();
        assert_relative_eq!(e_perp, e_par, max_relative = 1e-12);
    }

    #[test]
    fn z_term_quarters_when_length_doubles() {
        let c = default_constants();
        let g1 = geom(0.1e-6, 1.0e-6, 0.5e-6);
        let g2 = geom(0.1e-6, 2.0e-6, 0.5e-6);
        let iso = |g: &WireGeometry, n: [u32; 3]| {
            valley_energy(n, ValleyGroup::Perpendicular, g, &c).unwrap()
        };
        // isolate the n_z² term by differencing n_z = 2 and n_z = 1
        let z1 = iso(&g1, [1, 1, 2]) - iso(&g1, [1, 1, 1]);
        let z2 = iso(&g2, [1, 1, 2]) - iso(&g2, [1, 1, 1]);
        assert_relative_eq!(z1 / z2, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn delta_ec_oracle_and_identity() {
        let c = default_constants();
        let g = geom(0.1e-6, 1.0e-6, 0.5e-6);
        let gap = delta_ec_unchecked(&g, &c);
        // independently evaluated: 3ħ²π²/(2·0.28 mₑ·(1 µm)²)
        assert_relative_eq!(gap / c.hbar, 6.1209684121508037e9, max_relative = 1e-12);
        let e112 = valley_energy([1, 1, 2], ValleyGroup::Perpendicular, &g, &c).unwrap();
        let e111 = valley_energy([1, 1, 1], ValleyGroup::Perpendicular, &g, &c).unwrap();
        assert_relative_eq!(gap, e112 - e111, max_relative = 1e-12);
    }

    #[test]
    fn delta_ec_scales_inverse_square_length() {
        let c = default_constants();
        let g1 = geom(0.1e-6, 1.0e-6, 0.5e-6);
        let g2 = geom(0.1e-6, 2.0e-6, 0.5e-6);
        assert_relative_eq!(
            delta_ec_unchecked(&g1, &c) / delta_ec_unchecked(&g2, &c),
            4.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn parallel_minimum_above_perpendicular_minimum() {
        // for L ≥ 3w the axis-aligned valleys sit higher
        let c = default_constants();
        for (w, l) in [(0.1e-6, 0.3e-6), (0.05e-6, 1.0e-6), (0.2e-6, 0.8e-6)] {
            let g = geom(w, l, l / 2.0);
            let min_group = |grp| {
                let mut best = f64::INFINITY;
                for nx in 1..=3u32 {
                    for ny in 1..=3u32 {
                        for nz in 1..=3u32 {
                            let e = valley_energy([nx, ny, nz], grp, &g, &c).unwrap();
                            if e < best {
                                best = e;
                            }
                        }
                    }
                }
                best
            };
            assert!(min_group(ValleyGroup::Parallel) > min_group(ValleyGroup::Perpendicular));
        }
    }

    #[test]
    fn symmetry_basis_rows_orthonormal() {
        for group in [ValleyGroup::Parallel, ValleyGroup::Perpendicular] {
            let basis = symmetry_basis(group);
            for (i, (_, row_i)) in basis.iter().enumerate() {
                for (j, (_, row_j)) in basis.iter().enumerate() {
                    let dot: f64 = row_i.iter().zip(row_j).map(|(a, b)| a * b).sum();
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert_relative_eq!(dot, expected, epsilon = 1e-15);
                }
            }
        }
    }

    #[test]
    fn parallel_basis_matches_projection() {
        let basis = symmetry_basis(ValleyGroup::Parallel);
        let r2 = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(basis[0].0, Symmetry::A1g1);
        assert_eq!(basis[0].1, vec![r2, r2]);
        assert_eq!(basis[1].0, Symmetry::A2u);
        assert_eq!(basis[1].1, vec![-r2, r2]);
    }

    #[test]
    fn stark_detuning_values() {
        let c = default_constants();
        let g = geom(0.2e-6, 0.6e-6, 0.4e-6);
        assert_eq!(stark_detuning(&g, 0.0, &c), 0.0);
        // e · 0.01 V · (2/3), independently evaluated
        assert_relative_eq!(stark_detuning(&g, 0.01, &c), 1.068117756e-21, max_relative = 1e-9);
        let half = geom(0.2e-6, 0.6e-6, 0.3e-6);
        assert_relative_eq!(stark_detuning(&half, 1.0, &c), 0.5 * c.e_charge, max_relative = 1e-12);
    }

    #[test]
    fn stark_selection_rule_exhaustive() {
        use Symmetry::*;
        let labels = [A1g1, A2u, A1g2, B1g, Eu1, Eu2];
        for &a in &labels {
            for &b in &labels {
                let expected = matches!(
                    (a, b),
                    (A2u, A1g1) | (A1g1, A2u) | (A2u, A1g2) | (A1g2, A2u)
                );
                assert_eq!(stark_couples(a, b), expected, "pair {a:?}, {b:?}");
            }
        }
        // the four band-minimum states are all Stark-inert
        for &a in &[A1g2, B1g, Eu1, Eu2] {
            for &b in &[A1g2, B1g, Eu1, Eu2] {
                assert!(!stark_couples(a, b));
            }
        }
    }

    #[test]
    fn band_table_sorted_and_labeled() {
        let c = default_constants();
        let g = geom(0.1e-6, 0.6e-6, 0.4e-6);
        let states = conduction_states(&g, &c, 2).unwrap();
        assert!(states.windows(2).all(|p| p[0].energy <= p[1].energy));
        // ground manifold is the four-fold perpendicular set
        let ground: Vec<_> = states.iter().take(4).collect();
        assert!(ground.iter().all(|s| s.n == [1, 1, 1]
            && s.valley_group == ValleyGroup::Perpendicular));
        // n_x ≠ n_y perpendicular states carry per-valley labels
        assert!(states
            .iter()
            .any(|s| matches!(s.symmetry, Symmetry::SingleValley(_))));
    }
}

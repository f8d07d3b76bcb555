//! Dimensional bookkeeping: every rate formula in the crate, reassembled on
//! symbolic SI dimensions, must come out as s⁻¹ (and the Rabi frequency as
//! rad/s ≡ s⁻¹).

use std::ops::{Div, Mul};

/// SI dimension vector (m, kg, s, A, K).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Dim {
    m: i32,
    kg: i32,
    s: i32,
    a: i32,
    k: i32,
}

const ONE: Dim = Dim { m: 0, kg: 0, s: 0, a: 0, k: 0 };
const METER: Dim = Dim { m: 1, ..ONE };
const KG: Dim = Dim { kg: 1, ..ONE };
const SECOND: Dim = Dim { s: 1, ..ONE };
const AMPERE: Dim = Dim { a: 1, ..ONE };
const KELVIN: Dim = Dim { k: 1, ..ONE };
const HERTZ: Dim = Dim { s: -1, ..ONE };

impl Mul for Dim {
    type Output = Dim;
    fn mul(self, o: Dim) -> Dim {
        Dim { m: self.m + o.m, kg: self.kg + o.kg, s: self.s + o.s, a: self.a + o.a, k: self.k + o.k }
    }
}

impl Div for Dim {
    type Output = Dim;
    fn div(self, o: Dim) -> Dim {
        Dim { m: self.m - o.m, kg: self.kg - o.kg, s: self.s - o.s, a: self.a - o.a, k: self.k - o.k }
    }
}

impl Dim {
    fn pow(self, n: i32) -> Dim {
        Dim { m: self.m * n, kg: self.kg * n, s: self.s * n, a: self.a * n, k: self.k * n }
    }

    fn sqrt(self) -> Dim {
        assert!(
            self.m % 2 == 0 && self.kg % 2 == 0 && self.s % 2 == 0 && self.a % 2 == 0 && self.k % 2 == 0,
            "odd exponent under square root: {self:?}"
        );
        Dim { m: self.m / 2, kg: self.kg / 2, s: self.s / 2, a: self.a / 2, k: self.k / 2 }
    }
}

// the constant set, as dimensions
fn joule() -> Dim {
    KG * METER.pow(2) / SECOND.pow(2)
}
fn hbar() -> Dim {
    joule() * SECOND
}
fn coulomb() -> Dim {
    AMPERE * SECOND
}
fn k_b() -> Dim {
    joule() / KELVIN
}
fn eps0() -> Dim {
    // F/m = A²s⁴ kg⁻¹ m⁻³
    AMPERE.pow(2) * SECOND.pow(4) / KG / METER.pow(3)
}
fn velocity() -> Dim {
    METER / SECOND
}
fn watt() -> Dim {
    joule() / SECOND
}
fn dipole() -> Dim {
    coulomb() * METER
}
fn density() -> Dim {
    KG / METER.pow(3)
}

#[test]
fn rabi_frequency_is_inverse_seconds() {
    // Ω = (1/(rħ)) √(8P/(n c ε₀ π)) F₀ d_bulk, with F₀ dimensionless
    let omega = dipole() * (watt() / (velocity() * eps0())).sqrt() / (METER * hbar());
    assert_eq!(omega, HERTZ);
}

#[test]
fn field_amplitude_is_volts_per_meter() {
    // |E₀| = √(4P/(n c ε₀ π r²)); V/m = kg m A⁻¹ s⁻³
    let e0 = (watt() / (velocity() * eps0() * METER.pow(2))).sqrt();
    assert_eq!(e0, KG * METER / AMPERE / SECOND.pow(3));
}

#[test]
fn spontaneous_emission_is_inverse_seconds() {
    // Γ_SE = 2ω³ d²/(3π ε₀ n ħ c³)
    let gamma = HERTZ.pow(3) * dipole().pow(2) / (eps0() * hbar() * velocity().pow(3));
    assert_eq!(gamma, HERTZ);
}

#[test]
fn capture_rate_is_inverse_seconds() {
    // Γ_cap = ρ_N⁺ σ √(k_B T/m*)
    let gamma = METER.pow(-3) * METER.pow(2) * (k_b() * KELVIN / KG).sqrt();
    assert_eq!(gamma, HERTZ);
}

#[test]
fn level_gap_over_hbar_is_inverse_seconds() {
    // ΔE_c/ħ = 3ħπ²/(2 m⊥ L²)
    let rate = hbar() / (KG * METER.pow(2));
    assert_eq!(rate, HERTZ);
}

#[test]
fn surface_scattering_rate_is_inverse_seconds() {
    // Γ = (2π/ħ²) Ξ² |M|² (ħ/(2ρVω)) n_B ρ_L with M carrying 1/m from the
    // mode Laplacian and the cell-normalized envelope product
    let overlap_m = HERTZ.pow(2) / velocity().pow(2) * METER; // (ω²/c²)·⟨χ⟩, ⟨χ⟩ ~ m
    assert_eq!(overlap_m, METER.pow(-1));
    let zero_point_sq = hbar() / (density() * METER.pow(3) * HERTZ); // m²
    assert_eq!(zero_point_sq, METER.pow(2));
    let lorentzian = SECOND;
    let gamma = joule().pow(2) * overlap_m.pow(2) * zero_point_sq * lorentzian / hbar().pow(2);
    assert_eq!(gamma, HERTZ);
}

#[test]
fn bulk_scattering_rate_is_inverse_seconds() {
    // Γ = Ξ²/(8π² ħ ρ c⁷) Σ ω⁵ n_B ∫G dΩ with G ~ m²
    let g_overlap = (METER.pow(-3) * METER.pow(3) * METER).pow(2); // ((1/V_c)∫F(c/ω)e^{ikr}F)²
    assert_eq!(g_overlap, METER.pow(2));
    let gamma = joule().pow(2) / (hbar() * density() * velocity().pow(7)) * HERTZ.pow(5) * g_overlap;
    assert_eq!(gamma, HERTZ);
}

#[test]
fn stark_detuning_is_energy() {
    // ΔE_d = eΦs/L; volt = kg m² A⁻¹ s⁻³
    let volt = KG * METER.pow(2) / AMPERE / SECOND.pow(3);
    assert_eq!(coulomb() * volt, joule());
}

//! Closure-approximation spin-orbit Hamiltonian on the four-state
//! conduction-band-minimum manifold.
//!
//! First order, only the Eᵤ doublet splits, through the axial angular
//! momentum: H⁽¹⁾ = λ∥⁽¹⁾ (|Eᵤ₊⟩⟨Eᵤ₊| − |Eᵤ₋⟩⟨Eᵤ₋|). Second order, summing
//! the excited-state ladder with a single closure denominator ΔE,
//!
//! ```text
//!   H⁽²⁾ = (1/ΔE) [ (ħ²/4)(L_x² + L_y² + L_z²) ⊗ I_s
//!                 + (iħ/2)(L_x L_y − L_y L_x) ⊗ s_z ] .
//! ```
//!
//! Both terms commute with I ⊗ s_z for *any* orbital operators — the first
//! acts trivially on spin, the second carries s_z itself — so the spin
//! projection along the wire axis is conserved by construction. The tests
//! and the `spin-check` subcommand verify that identity numerically on
//! random Hermitian inputs.
//!
//! λ∥⁽¹⁾ and ΔE have no first-principles values here; the defaults of 1 µeV
//! and 10 meV exist purely to instantiate tests and are not physical
//! predictions.

use crate::constants::HBAR;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Orbital basis ordering used throughout: [A1g_2, B1g, Eu_1, Eu_2].
pub const ORBITAL_DIM: usize = 4;
/// Position of the Eᵤ doublet in the orbital basis.
pub const EU_INDICES: (usize, usize) = (2, 3);

/// Test-instantiation default for λ∥⁽¹⁾ (J): 1 µeV, not a physical value.
pub const DEFAULT_LAMBDA_PAR_1: f64 = 1e-6 * crate::constants::EV;
/// Test-instantiation default for the closure denominator ΔE (J): 10 meV.
pub const DEFAULT_DELTA_E: f64 = 10e-3 * crate::constants::EV;

/// Effective spin-orbit model data: orbital angular momentum blocks, the
/// closure denominator and the first-order Eᵤ splitting.
#[derive(Debug, Clone)]
pub struct EffectiveSoHamiltonian {
    pub orbital_dim: usize,
    pub l_ops: [DMatrix<Complex64>; 3],
    /// Closure energy denominator (J)
    pub delta_e: f64,
    /// First-order Eᵤ splitting (J)
    pub lambda_par_1: f64,
}

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let diff = m - m.adjoint();
    frobenius(&diff) / frobenius(m).max(1e-300)
}

/// Spin-½ s_z = (ħ/2) σ_z.
pub fn spin_z() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(HBAR / 2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-HBAR / 2.0, 0.0),
        ],
    )
}

fn identity(n: usize) -> DMatrix<Complex64> {
    DMatrix::identity(n, n)
}

/// Second-order closure Hamiltonian on orbital ⊗ spin space.
///
/// Rejects non-Hermitian orbital inputs (relative defect above 1e-12).
pub fn build_second_order(
    l_ops: &[DMatrix<Complex64>; 3],
    delta_e: f64,
) -> Result<DMatrix<Complex64>, String> {
    if !(delta_e > 0.0) {
        return Err(format!("closure denominator must be positive, got {delta_e}"));
    }
    let dim = l_ops[0].nrows();
    for (i, l) in l_ops.iter().enumerate() {
        if l.nrows() != dim || l.ncols() != dim {
            return Err("orbital operators must be square and equally sized".into());
        }
        if frobenius(l) > 0.0 && hermiticity_defect(l) > 1e-12 {
            return Err(format!("orbital operator {i} is not Hermitian"));
        }
    }
    let [lx, ly, lz] = l_ops;
    let l_sq = lx * lx + ly * ly + lz * lz;
    let commutator = lx * ly - ly * lx;
    let i_spin = identity(2);
    let sz = spin_z();
    let scalar_part = l_sq.kronecker(&i_spin) * Complex64::new(HBAR * HBAR / 4.0, 0.0);
    let axial_part = commutator.kronecker(&sz) * Complex64::new(0.0, HBAR / 2.0);
    Ok((scalar_part + axial_part) / Complex64::new(delta_e, 0.0))
}

/// First-order Eᵤ splitting on the Eᵤ ⊗ spin product basis
/// (Eu_1↑, Eu_1↓, Eu_2↑, Eu_2↓): λ · ℓ_z ⊗ σ_z with ℓ_z the axial angular
/// momentum within the doublet. Eigenvalues ±λ, each twice.
pub fn build_first_order(lambda_par_1: f64) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let l = lambda_par_1;
    // ℓ_z = [[0, -i], [i, 0]] on the doublet, σ_z on spin
    let lz = DMatrix::from_row_slice(
        2,
        2,
        &[zero, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), zero],
    );
    let sigma_z = DMatrix::from_row_slice(
        2,
        2,
        &[Complex64::new(1.0, 0.0), zero, zero, Complex64::new(-1.0, 0.0)],
    );
    lz.kronecker(&sigma_z) * Complex64::new(l, 0.0)
}

/// H⁽¹⁾ + H⁽²⁾ on the full orbital ⊗ spin space, with the first-order term
/// embedded on the Eᵤ block.
pub fn combined_hamiltonian(
    model: &EffectiveSoHamiltonian,
) -> Result<DMatrix<Complex64>, String> {
    let h2 = build_second_order(&model.l_ops, model.delta_e)?;
    let h1_block = build_first_order(model.lambda_par_1);
    let dim = model.orbital_dim * 2;
    let mut h1 = DMatrix::zeros(dim, dim);
    let (e1, e2) = EU_INDICES;
    let orbital = [e1, e2];
    for (bi, &oi) in orbital.iter().enumerate() {
        for (bj, &oj) in orbital.iter().enumerate() {
            for si in 0..2 {
                for sj in 0..2 {
                    h1[(2 * oi + si, 2 * oj + sj)] = h1_block[(2 * bi + si, 2 * bj + sj)];
                }
            }
        }
    }
    Ok(h1 + h2)
}

/// Relative Frobenius norm of [H, I ⊗ s_z]; zero means the axial spin
/// projection is conserved.
pub fn sz_commutator_norm(h: &DMatrix<Complex64>) -> f64 {
    let orbital_dim = h.nrows() / 2;
    let sz_full = identity(orbital_dim).kronecker(&spin_z());
    let comm = h * &sz_full - &sz_full * h;
    frobenius(&comm) / (frobenius(h) * frobenius(&sz_full)).max(1e-300)
}

/// Seeded random Hermitian matrix, entries O(1).
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let raw = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (&raw + raw.adjoint()) / Complex64::new(2.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn random_l_ops(seed: u64) -> [DMatrix<Complex64>; 3] {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        [
            random_hermitian(ORBITAL_DIM, &mut rng),
            random_hermitian(ORBITAL_DIM, &mut rng),
            random_hermitian(ORBITAL_DIM, &mut rng),
        ]
    }

    #[test]
    fn zero_inputs_give_zero_hamiltonian() {
        let zeros: [DMatrix<Complex64>; 3] = std::array::from_fn(|_| DMatrix::zeros(4, 4));
        let h = build_second_order(&zeros, DEFAULT_DELTA_E).unwrap();
        assert_eq!(frobenius(&h), 0.0);
    }

    #[test]
    fn commuting_l_components_leave_only_the_scalar_part() {
        // diagonal (hence commuting) L_x, L_y: the axial term vanishes and
        // H is (Σ L²)⊗I only
        let diag = |values: [f64; 4]| {
            DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                4,
                values.iter().map(|&v| Complex64::new(v, 0.0)),
            ))
        };
        let l_ops = [diag([1.0, 2.0, -1.0, 0.5]), diag([0.3, -0.7, 1.1, 2.0]), diag([0.0; 4])];
        let h = build_second_order(&l_ops, DEFAULT_DELTA_E).unwrap();
        let l_sq = &l_ops[0] * &l_ops[0] + &l_ops[1] * &l_ops[1];
        let expected =
            l_sq.kronecker(&identity(2)) * Complex64::new(HBAR * HBAR / 4.0 / DEFAULT_DELTA_E, 0.0);
        let diff = &h - &expected;
        assert!(frobenius(&diff) <= 1e-12 * frobenius(&expected));
    }

    #[test]
    fn second_order_hermitian_and_scalar_block_psd() {
        let l_ops = random_l_ops(7);
        let h = build_second_order(&l_ops, DEFAULT_DELTA_E).unwrap();
        assert!(hermiticity_defect(&h) < 1e-12);
        // the I_s part alone is a sum of squares of Hermitian matrices
        let l_sq = &l_ops[0] * &l_ops[0] + &l_ops[1] * &l_ops[1] + &l_ops[2] * &l_ops[2];
        let eig = l_sq.symmetric_eigenvalues();
        assert!(eig.iter().all(|e| *e > -1e-12));
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut l_ops = random_l_ops(11);
        l_ops[1][(0, 1)] += Complex64::new(0.5, 0.0);
        assert!(build_second_order(&l_ops, DEFAULT_DELTA_E).is_err());
    }

    #[test]
    fn spin_projection_conserved_for_random_inputs() {
        // the module-level claim as a matrix identity
        for seed in 0..20 {
            let model = EffectiveSoHamiltonian {
                orbital_dim: ORBITAL_DIM,
                l_ops: random_l_ops(seed),
                delta_e: DEFAULT_DELTA_E,
                lambda_par_1: DEFAULT_LAMBDA_PAR_1,
            };
            let h = combined_hamiltonian(&model).unwrap();
            assert!(
                sz_commutator_norm(&h) < 1e-12,
                "seed {seed}: commutator norm {}",
                sz_commutator_norm(&h)
            );
        }
    }

    #[test]
    fn first_order_spectrum() {
        let h0 = build_first_order(0.0);
        assert_eq!(frobenius(&h0), 0.0);
        let lambda = DEFAULT_LAMBDA_PAR_1;
        let h = build_first_order(lambda);
        // traceless, eigenvalues ±λ doubly degenerate
        assert!(h.trace().norm() < 1e-30);
        let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        assert_relative_eq!(eig[0], -lambda, max_relative = 1e-12);
        assert_relative_eq!(eig[1], -lambda, max_relative = 1e-12);
        assert_relative_eq!(eig[2], lambda, max_relative = 1e-12);
        assert_relative_eq!(eig[3], lambda, max_relative = 1e-12);
    }
}

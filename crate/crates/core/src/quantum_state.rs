//! Coherent superpositions, density matrices and their metrics.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::numkernel::{check_hermitian, hermitian_eigenvalues, ComplexMatrix, ComplexVector};

/// Tolerance on the simplex constraint of superposition weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Tolerance on basis orthonormality.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Tolerance on Hermiticity, trace and negativity of density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as zero in the entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// `Σ_k √λ_k · e^{-i E_k t} · |ψ_k⟩` over an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    weights: Vec<f64>,
    energies: Vec<f64>,
    basis: ComplexMatrix,
}

impl SuperpositionState {
    /// `basis` holds one orthonormal column per weight. Every weight must be
    /// strictly positive; drop a component instead of giving it zero weight.
    pub fn new(weights: Vec<f64>, energies: Vec<f64>, basis: ComplexMatrix) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::dimension("superposition with no components"));
        }
        if weights.len() != energies.len() || weights.len() != basis.cols() {
            return Err(Error::shape(format!(
                "{} weights, {} energies, {} basis columns",
                weights.len(),
                energies.len(),
                basis.cols()
            )));
        }
        if let Some((k, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(**w > 0.0) || !w.is_finite())
        {
            return Err(Error::contract(format!("weight {k} = {w} is not positive")));
        }
        let sum: f64 = weights.iter().sum();
        if math::abs(sum - 1.0) > WEIGHT_SUM_TOL {
            return Err(Error::contract(format!("weights sum to {sum}, not 1")));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::contract("energies must be finite"));
        }
        let gram = basis.adjoint().matmul(&basis)?;
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                let target = if i == j { 1.0 } else { 0.0 };
                if (gram[(i, j)] - target).norm() > ORTHONORMAL_TOL {
                    return Err(Error::contract(format!(
                        "basis columns {i} and {j} are not orthonormal"
                    )));
                }
            }
        }
        Ok(Self {
            weights,
            energies,
            basis,
        })
    }

    /// Superposition over the first `K+1` standard basis vectors of `C^dim`.
    pub fn in_standard_basis(weights: Vec<f64>, energies: Vec<f64>, dim: usize) -> Result<Self> {
        if weights.len() > dim {
            return Err(Error::shape(format!(
                "{} components do not fit in dimension {dim}",
                weights.len()
            )));
        }
        let k = weights.len().max(1);
        let basis = ComplexMatrix::from_fn(dim, k, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })?;
        Self::new(weights, energies, basis)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Complex amplitudes `√λ_k e^{-i E_k t}` on the basis columns.
    pub fn amplitudes(&self, t: f64) -> Vec<Complex64> {
        self.weights
            .iter()
            .zip(&self.energies)
            .map(|(&w, &e)| phase(e * t) * math::sqrt(w))
            .collect()
    }
}

/// `e^{-iθ}`.
pub(crate) fn phase(theta: f64) -> Complex64 {
    Complex64::new(math::cos(theta), -math::sin(theta))
}

/// The state vector at time `t`.
pub fn evaluate_state(state: &SuperpositionState, t: f64) -> ComplexVector {
    let amps = state.amplitudes(t);
    let dim = state.dim();
    let entries = (0..dim)
        .map(|i| {
            amps.iter()
                .enumerate()
                .map(|(k, &a)| a * state.basis[(i, k)])
                .sum()
        })
        .collect();
    ComplexVector::new(entries).expect("dim >= 1")
}

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and eigenvalues `≥ -1e-10`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.require_square("density matrix")?;
        check_hermitian(&matrix)?;
        let tr = matrix.trace();
        if math::abs(tr.re - 1.0) > DENSITY_TOL || math::abs(tr.im) > DENSITY_TOL {
            return Err(Error::contract(format!("trace is {tr}, not 1")));
        }
        let eigs = hermitian_eigenvalues(&matrix)?;
        if let Some(min) = eigs.last() {
            if *min < -DENSITY_TOL {
                return Err(Error::contract(format!(
                    "eigenvalue {min:e} is negative (not positive semidefinite)"
                )));
            }
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if math::abs(norm - 1.0) > DENSITY_TOL {
            return Err(Error::contract(format!("state norm is {norm}, not 1")));
        }
        Ok(Self {
            matrix: psi.outer(psi),
        })
    }

    /// Wraps a matrix already known to satisfy the invariants, e.g. a
    /// partial trace of a normalized state.
    pub(crate) fn from_trusted(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Eigenvalues, descending, with round-off negatives clamped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
            .expect("validated Hermitian")
            .into_iter()
            .map(|l| l.max(0.0))
            .collect()
    }
}

/// `ψψ†` at time `t`; always pure.
pub fn density_matrix(state: &SuperpositionState, t: f64) -> DensityMatrix {
    DensityMatrix::from_trusted({
        let psi = evaluate_state(state, t);
        psi.outer(&psi)
    })
}

/// `Σ λ_k²` over the eigenvalues of `rho`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    purity_from_spectrum(&rho.eigenvalues())
}

/// `-Σ λ_k ln λ_k`, skipping eigenvalues below [`ENTROPY_CUTOFF`].
pub fn entanglement_entropy(rho: &DensityMatrix) -> f64 {
    entropy_from_spectrum(&rho.eigenvalues())
}

pub(crate) fn purity_from_spectrum(eigs: &[f64]) -> f64 {
    eigs.iter().map(|l| l * l).sum()
}

pub(crate) fn entropy_from_spectrum(eigs: &[f64]) -> f64 {
    let s: f64 = eigs
        .iter()
        .filter(|&&l| l >= ENTROPY_CUTOFF)
        .map(|&l| -l * math::ln(l))
        .sum();
    // Eigenvalues a hair above 1 give tiny negative terms.
    s.max(0.0)
}

/// L1 coherence: `Σ_{k≠l} |ρ_kl|`. Defined for any square matrix.
pub fn coherence(rho: &ComplexMatrix) -> Result<f64> {
    let n = rho.require_square("coherence operand")?;
    Ok((0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| rho[(i, j)].norm())
        .sum())
}

/// Point on the torus traced by a two-component superposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl TorusPoint {
    /// `(√(X²+Y²) - R)² + Z²`, which equals `r²` on the torus.
    pub fn implicit(&self, major: f64) -> f64 {
        let rho = math::hypot(self.x, self.y) - major;
        rho * rho + self.z * self.z
    }
}

/// Major radius `R = λ₀ + λ₁`, always one.
pub const TORUS_MAJOR_RADIUS: f64 = 1.0;

/// Minor radius `r = 2√(λ₀λ₁)`.
pub fn torus_minor_radius(lambda0: f64, lambda1: f64) -> f64 {
    2.0 * math::sqrt(lambda0 * lambda1)
}

/// Coordinates with `θ = E₀t` and `φ = E₁t`:
/// `X = (R + r cos θ) cos φ`, `Y = (R + r cos θ) sin φ`, `Z = r sin θ`.
pub fn torus_coordinates(
    lambda0: f64,
    lambda1: f64,
    e0: f64,
    e1: f64,
    t: f64,
) -> Result<TorusPoint> {
    if !(lambda0 >= 0.0) || !(lambda1 >= 0.0) {
        return Err(Error::contract(format!(
            "torus weights ({lambda0}, {lambda1}) must be nonnegative"
        )));
    }
    if math::abs(lambda0 + lambda1 - 1.0) > WEIGHT_SUM_TOL {
        return Err(Error::contract(format!(
            "torus weights sum to {}, not 1",
            lambda0 + lambda1
        )));
    }
    let r = torus_minor_radius(lambda0, lambda1);
    let theta = e0 * t;
    let phi = e1 * t;
    let ring = TORUS_MAJOR_RADIUS + r * math::cos(theta);
    Ok(TorusPoint {
        x: ring * math::cos(phi),
        y: ring * math::sin(phi),
        z: r * math::sin(theta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use core::f64::consts::{LN_2, PI};

    fn two_state(l0: f64, e: [f64; 2]) -> SuperpositionState {
        SuperpositionState::in_standard_basis(vec![l0, 1.0 - l0], e.to_vec(), 2).unwrap()
    }

    #[test]
    fn state_validation() {
        assert!(SuperpositionState::in_standard_basis(vec![0.5, 0.4], vec![0.0, 0.0], 2).is_err());
        assert!(SuperpositionState::in_standard_basis(vec![1.0, 0.0], vec![0.0, 0.0], 2).is_err());
        assert!(SuperpositionState::in_standard_basis(vec![1.0], vec![0.0, 1.0], 2).is_err());
        let skew = ComplexMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(SuperpositionState::new(vec![0.5, 0.5], vec![0.0, 0.0], skew).is_err());
    }

    #[test]
    fn single_component_is_basis_column() {
        let s = SuperpositionState::in_standard_basis(vec![1.0], vec![3.0], 3).unwrap();
        let psi = evaluate_state(&s, 0.7);
        assert!((psi[0].norm() - 1.0).abs() < 1e-15);
        assert_eq!(psi[1], Complex64::new(0.0, 0.0));
        let rho = density_matrix(&s, 0.7);
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!(coherence(rho.matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn zero_energies_freeze_phases() {
        let s = two_state(0.5, [0.0, 0.0]);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        for t in [0.0, 1.0, 17.3] {
            let psi = evaluate_state(&s, t);
            assert!((psi[0] - Complex64::new(r, 0.0)).norm() < 1e-15);
            assert!((psi[1] - Complex64::new(r, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn full_period_phases() {
        let s = two_state(0.9, [1.0, 2.0]);
        let psi = evaluate_state(&s, 2.0 * PI);
        assert!((psi[0] - Complex64::new(0.9f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((psi[1] - Complex64::new(0.1f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn density_is_idempotent() {
        let s = SuperpositionState::in_standard_basis(
            vec![0.1, 0.2, 0.3, 0.4],
            vec![0.3, -1.0, 2.5, 4.0],
            5,
        )
        .unwrap();
        for t in [0.0, 0.4, 3.3] {
            let rho = density_matrix(&s, t);
            let sq = rho.matrix().matmul(rho.matrix()).unwrap();
            assert!(sq.max_abs_diff(rho.matrix()).unwrap() <= 1e-10);
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_superposition_offdiagonal() {
        let s = two_state(0.5, [0.3, 1.9]);
        for t in [0.0, 1.0, 2.5] {
            let rho = density_matrix(&s, t);
            assert!((rho.matrix()[(0, 1)].norm() - 0.5).abs() < 1e-15);
            assert!((coherence(rho.matrix()).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_four_state_coherence() {
        let s = SuperpositionState::in_standard_basis(vec![0.25; 4], vec![0.0, 1.0, 2.0, 3.0], 4)
            .unwrap();
        let rho = density_matrix(&s, 0.37);
        assert!((coherence(rho.matrix()).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn metric_values() {
        let half = DensityMatrix::new(ComplexMatrix::diag_real(&[0.5, 0.5]).unwrap()).unwrap();
        assert!((purity(&half) - 0.5).abs() < 1e-15);
        assert!((entanglement_entropy(&half) - LN_2).abs() < 1e-10);
        assert_eq!(coherence(half.matrix()).unwrap(), 0.0);

        let skewed = DensityMatrix::new(ComplexMatrix::diag_real(&[0.25, 0.75]).unwrap()).unwrap();
        assert!((purity(&skewed) - 0.625).abs() < 1e-15);
        assert!((entanglement_entropy(&skewed) - 0.562335).abs() < 1e-6);

        let pure = density_matrix(&two_state(0.3, [0.0, 1.0]), 0.8);
        assert!((purity(&pure) - 1.0).abs() < 1e-10);
        assert!(entanglement_entropy(&pure).abs() < 1e-9);
    }

    #[test]
    fn density_validation_errors() {
        let bad_trace = ComplexMatrix::diag_real(&[0.5, 0.6]).unwrap();
        assert!(matches!(
            DensityMatrix::new(bad_trace),
            Err(Error::ContractViolation(_))
        ));
        let negative = ComplexMatrix::diag_real(&[1.5, -0.5]).unwrap();
        assert!(matches!(
            DensityMatrix::new(negative),
            Err(Error::ContractViolation(_))
        ));
        let skew = ComplexMatrix::from_real_rows(&[[0.5, 0.1], [0.0, 0.5]]).unwrap();
        assert!(matches!(
            DensityMatrix::new(skew),
            Err(Error::NotHermitian { .. })
        ));
        let tiny_negative = ComplexMatrix::diag_real(&[1.0 + 5e-11, -5e-11]).unwrap();
        let rho = DensityMatrix::new(tiny_negative).unwrap();
        assert!(rho.eigenvalues().iter().all(|&l| l >= 0.0));
        assert!(coherence(&ComplexMatrix::zeros(2, 3).unwrap()).is_err());
    }

    #[test]
    fn torus_examples() {
        assert!((torus_minor_radius(0.9, 0.1) - 0.6).abs() < 1e-15);
        let p = torus_coordinates(0.9, 0.1, 1.0, 2.0, 0.0).unwrap();
        assert!((p.x - 1.6).abs() < 1e-15 && p.y == 0.0 && p.z == 0.0);

        let p = torus_coordinates(0.5, 0.5, 1.0, 2.0, PI / 2.0).unwrap();
        assert!((p.x + 1.0).abs() < 1e-12, "{p:?}");
        assert!(p.y.abs() < 1e-12);
        assert!((p.z - 1.0).abs() < 1e-12);

        assert!(torus_coordinates(0.5, 0.6, 1.0, 2.0, 0.0).is_err());
        assert!(torus_coordinates(1.2, -0.2, 1.0, 2.0, 0.0).is_err());
    }
}

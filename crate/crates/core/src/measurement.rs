//! Expectation values, rank-1 measurement scoring, and the classical
//! mixture baseline.

use alloc::format;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::numkernel::{ComplexMatrix, ComplexVector};

/// Tolerance on the norm of a measured state.
pub const STATE_NORM_TOL: f64 = 1e-10;

/// `⟨ψ|H|ψ⟩`. The value is complex in general; it is real up to rounding
/// when `H` is Hermitian.
pub fn qtv(psi: &ComplexVector, h: &ComplexMatrix) -> Result<Complex64> {
    let n = h.require_square("measurement operator")?;
    if psi.dim() != n {
        return Err(Error::shape(format!(
            "state of length {} against a {n}x{n} operator",
            psi.dim()
        )));
    }
    let norm = psi.norm();
    if math::abs(norm - 1.0) > STATE_NORM_TOL {
        return Err(Error::contract(format!("state norm is {norm}, not 1")));
    }
    Ok(expectation(psi, h))
}

/// `⟨ψ|H|ψ⟩` without argument checks.
pub(crate) fn expectation(psi: &ComplexVector, h: &ComplexMatrix) -> Complex64 {
    let hp = h.matvec(psi).expect("shape checked by caller");
    psi.inner(&hp).expect("shape checked by caller")
}

/// `Σ_k |E_k|·λ_k`: the expectation expressed in the operator's eigenbasis.
pub fn qtv_spectral(weights: &[f64], eigenvalues: &[f64]) -> Result<f64> {
    if eigenvalues.is_empty() {
        return Err(Error::dimension("empty eigenvalue list"));
    }
    if weights.len() != eigenvalues.len() {
        return Err(Error::shape(format!(
            "{} weights for {} eigenvalues",
            weights.len(),
            eigenvalues.len()
        )));
    }
    Ok(weights
        .iter()
        .zip(eigenvalues)
        .map(|(w, e)| w * math::abs(*e))
        .sum())
}

/// Projector onto `(cos α, sin α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rank1Measurement {
    pub alpha: f64,
}

impl Rank1Measurement {
    pub fn matrix(&self) -> ComplexMatrix {
        rank1_operator(self.alpha)
    }
}

/// `[[cos²α, cosα·sinα], [cosα·sinα, sin²α]]`.
pub fn rank1_operator(alpha: f64) -> ComplexMatrix {
    let c = math::cos(alpha);
    let s = math::sin(alpha);
    ComplexMatrix::from_real_rows(&[[c * c, c * s], [c * s, s * s]]).expect("2x2")
}

/// Best time and value of a two-state superposition measured by a rank-1
/// projector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alignment {
    pub t_star: f64,
    pub qtv_max: f64,
}

fn check_lambda1(lambda1: f64) -> Result<()> {
    if (0.0..=1.0).contains(&lambda1) {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "lambda1 = {lambda1} outside [0, 1]"
        )))
    }
}

/// Maximizes `⟨ψ(t)|H(α)|ψ(t)⟩` over `t` for
/// `ψ(t) = √(1-λ₁) e^{-iE₀t} e₀ + √λ₁ e^{-iE₁t} e₁`.
///
/// The expectation is `(c√λ₀)² + (s√λ₁)² + 2cs√(λ₀λ₁)·cos((E₁-E₀)t)`. For
/// `cos α·sin α ≥ 0` the maximum `(cos α √(1-λ₁) + sin α √λ₁)²` is reached
/// at `t* = 2π/|E₁-E₀|`; otherwise the interference term peaks half a
/// period earlier and the maximum is `(|cos α| √(1-λ₁) + |sin α| √λ₁)²`.
/// Equal energies freeze the phase: `t* = 0` and the value is the
/// (time-independent) expectation.
pub fn best_alignment(alpha: f64, lambda1: f64, e0: f64, e1: f64) -> Result<Alignment> {
    check_lambda1(lambda1)?;
    let c = math::cos(alpha);
    let s = math::sin(alpha);
    let a0 = math::sqrt(1.0 - lambda1);
    let a1 = math::sqrt(lambda1);
    let gap = math::abs(e1 - e0);
    if gap == 0.0 {
        let v = c * a0 + s * a1;
        return Ok(Alignment {
            t_star: 0.0,
            qtv_max: v * v,
        });
    }
    let period = 2.0 * core::f64::consts::PI / gap;
    let (t_star, amp) = if c * s >= 0.0 {
        (period, c * a0 + s * a1)
    } else {
        (period / 2.0, math::abs(c) * a0 + math::abs(s) * a1)
    };
    Ok(Alignment {
        t_star,
        qtv_max: amp * amp,
    })
}

/// `Tr(ρH)` for the incoherent mixture `ρ = diag(1-λ₁, λ₁)`; the
/// off-diagonal entries of `H` never contribute.
pub fn classical_expectation(lambda1: f64, h: &ComplexMatrix) -> Result<f64> {
    check_lambda1(lambda1)?;
    if h.rows() != 2 || h.cols() != 2 {
        return Err(Error::shape(format!(
            "classical expectation needs a 2x2 operator, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    Ok((1.0 - lambda1) * h[(0, 0)].re + lambda1 * h[(1, 1)].re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::eig_hermitian;
    use crate::quantum_state::{evaluate_state, SuperpositionState};
    use alloc::vec;
    use alloc::vec::Vec;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn qtv_examples() {
        let h = ComplexMatrix::diag_real(&[2.0, 1.0]).unwrap();
        let e0 = ComplexVector::basis(2, 0).unwrap();
        assert_eq!(qtv(&e0, &h).unwrap(), Complex64::new(2.0, 0.0));
        let plus = ComplexVector::from_real(&[1.0, 1.0])
            .unwrap()
            .normalized()
            .unwrap();
        assert!((qtv(&plus, &h).unwrap() - Complex64::new(1.5, 0.0)).norm() < 1e-15);

        assert!(matches!(
            qtv(&ComplexVector::from_real(&[1.0, 1.0]).unwrap(), &h),
            Err(Error::ContractViolation(_))
        ));
        assert!(matches!(
            qtv(&ComplexVector::basis(3, 0).unwrap(), &h),
            Err(Error::InvalidShape(_))
        ));
    }

    #[test]
    fn qtv_spectral_examples() {
        assert_eq!(qtv_spectral(&[1.0, 0.0], &[2.0, 1.0]).unwrap(), 2.0);
        let v = qtv_spectral(&[0.5, 0.5], &[2.0, 1.0]).unwrap();
        assert_eq!(v, 1.5);
        assert!(v <= 2.0);
        assert!((qtv_spectral(&[0.25; 4], &[0.7; 4]).unwrap() - 0.7).abs() < 1e-15);
        assert!(qtv_spectral(&[1.0], &[1.0, 2.0]).is_err());
        assert!(qtv_spectral(&[], &[]).is_err());
    }

    #[test]
    fn rank1_examples() {
        let h = rank1_operator(0.0);
        assert_eq!(
            h,
            ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, 0.0]]).unwrap()
        );
        let h = rank1_operator(FRAC_PI_2);
        assert!(
            h.max_abs_diff(&ComplexMatrix::diag_real(&[0.0, 1.0]).unwrap())
                .unwrap()
                < 1e-15
        );
        for k in 0..64 {
            let alpha = -PI + 2.0 * PI * k as f64 / 64.0;
            let e = eig_hermitian(&Rank1Measurement { alpha }.matrix()).unwrap();
            assert!((e.values[0] - 1.0).abs() < 1e-12 && e.values[1].abs() < 1e-12);
            assert!((rank1_operator(alpha).trace().re - 1.0).abs() < 1e-15);
        }
    }

    fn brute_force_max(alpha: f64, lambda1: f64, e0: f64, e1: f64, samples: usize) -> f64 {
        let state =
            SuperpositionState::in_standard_basis(vec![1.0 - lambda1, lambda1], vec![e0, e1], 2)
                .unwrap();
        let h = rank1_operator(alpha);
        let period = 2.0 * PI / (e1 - e0).abs();
        (0..samples)
            .map(|k| {
                let t = period * k as f64 / samples as f64;
                expectation(&evaluate_state(&state, t), &h).re
            })
            .fold(f64::MIN, f64::max)
    }

    #[test]
    fn alignment_examples() {
        let a = best_alignment(FRAC_PI_4, 0.5, 0.0, 1.0).unwrap();
        assert!((a.qtv_max - 1.0).abs() < 1e-12);
        assert!((a.t_star - 2.0 * PI).abs() < 1e-12);

        assert!((best_alignment(0.0, 0.0, 0.3, 1.1).unwrap().qtv_max - 1.0).abs() < 1e-15);

        let a = best_alignment(FRAC_PI_4, 0.25, 0.0, 1.0).unwrap();
        let closed = (0.5f64.sqrt() * (0.75f64.sqrt() + 0.25f64.sqrt())).powi(2);
        assert!((a.qtv_max - closed).abs() < 1e-15);
        assert!((a.qtv_max - 0.9330).abs() < 1e-4);
        assert!((brute_force_max(FRAC_PI_4, 0.25, 0.0, 1.0, 100_000) - a.qtv_max).abs() < 1e-6);

        assert!(best_alignment(0.1, 1.5, 0.0, 1.0).is_err());
        assert!(best_alignment(0.1, -0.1, 0.0, 1.0).is_err());
        assert_eq!(best_alignment(0.3, 0.2, 1.0, 1.0).unwrap().t_star, 0.0);
    }

    #[test]
    fn alignment_with_anticorrelated_projector() {
        // cos α · sin α < 0: the peak moves to half a period.
        let alpha = -0.6;
        let a = best_alignment(alpha, 0.3, 0.2, 1.7).unwrap();
        assert!((a.t_star - PI / 1.5).abs() < 1e-12);
        assert!((brute_force_max(alpha, 0.3, 0.2, 1.7, 100_000) - a.qtv_max).abs() < 1e-6);
    }

    #[test]
    fn classical_examples() {
        let h = ComplexMatrix::from_real_rows(&[[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert_eq!(classical_expectation(0.5, &h).unwrap(), 0.5);
        let h = ComplexMatrix::from_real_rows(&[[0.3, 0.9], [0.9, 0.8]]).unwrap();
        assert_eq!(classical_expectation(0.0, &h).unwrap(), 0.3);
        let diag = ComplexMatrix::from_real_rows(&[[0.3, 0.0], [0.0, 0.8]]).unwrap();
        for l in [0.1, 0.4, 0.9] {
            assert_eq!(
                classical_expectation(l, &h).unwrap(),
                classical_expectation(l, &diag).unwrap()
            );
        }
        assert!(classical_expectation(0.5, &ComplexMatrix::identity(3).unwrap()).is_err());
        assert!(classical_expectation(2.0, &h).is_err());
    }

    #[test]
    fn quantum_beats_classical_on_grid() {
        let mut gaps = Vec::new();
        for i in 1..=10 {
            for j in 1..=10 {
                let alpha = FRAC_PI_2 * i as f64 / 11.0;
                let lambda1 = j as f64 / 11.0;
                let q = best_alignment(alpha, lambda1, 0.0, 1.0).unwrap().qtv_max;
                let c = classical_expectation(lambda1, &rank1_operator(alpha)).unwrap();
                gaps.push(q - c);
            }
        }
        assert_eq!(gaps.len(), 100);
        assert!(gaps.iter().all(|&g| g >= 1e-6));
    }
}

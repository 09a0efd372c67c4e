//! Eigensolvers and operator norms.
//!
//! * Hermitian problems use cyclic complex Jacobi rotations, which are
//!   accurate to working precision for the small matrices used here.
//! * General (non-normal) spectra use Householder reduction to Hessenberg
//!   form followed by single-shift complex QR with Wilkinson shifts.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::math;

/// Absolute Hermiticity tolerance, scaled by the largest entry when that
/// exceeds one.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Above this size the spectral radius is estimated by power iteration
/// instead of a full eigensolve.
pub const DENSE_EIG_LIMIT: usize = 64;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues, descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V·diag(E)·V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * self.values[k] * v[(j, k)].conj())
                .sum()
        })
        .expect("nonempty")
    }
}

fn max_entry(m: &ComplexMatrix) -> f64 {
    m.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Fails with the worst offending pair if `m` is not Hermitian within
/// [`HERMITIAN_TOL`].
pub fn check_hermitian(m: &ComplexMatrix) -> Result<()> {
    m.require_square("Hermitian operand")?;
    let tol = HERMITIAN_TOL * max_entry(m).max(1.0);
    match m.hermitian_residual() {
        Some((row, col, deviation)) if deviation > tol => Err(Error::NotHermitian {
            row,
            col,
            deviation,
        }),
        _ => Ok(()),
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian
/// matrix.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(m)?;
    Ok(jacobi(m))
}

fn jacobi(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.rows();
    // Symmetrize so rounding in the input cannot stall the rotations.
    let mut a =
        ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5).expect("square");
    let mut v = ComplexMatrix::identity(n).expect("square");
    let scale = a.frobenius_norm_sqr();

    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum();
        if off <= f64::EPSILON * f64::EPSILON * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let phase = apq / mag;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta >= 0.0 {
                    1.0 / (theta + math::sqrt(1.0 + theta * theta))
                } else {
                    -1.0 / (-theta + math::sqrt(1.0 + theta * theta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = t * c;
                // J = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let jpp = Complex64::new(c, 0.0);
                let jpq = Complex64::new(s, 0.0);
                let jqp = -phase.conj() * s;
                let jqq = phase.conj() * c;

                for k in 0..n {
                    let x = a[(k, p)];
                    let y = a[(k, q)];
                    a[(k, p)] = x * jpp + y * jqp;
                    a[(k, q)] = x * jpq + y * jqq;
                }
                for k in 0..n {
                    let x = a[(p, k)];
                    let y = a[(q, k)];
                    a[(p, k)] = jpp.conj() * x + jqp.conj() * y;
                    a[(q, k)] = jpq.conj() * x + jqq.conj() * y;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = x * jpp + y * jqp;
                    v[(k, q)] = x * jpq + y * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]).expect("square");
    HermitianEigen { values, vectors }
}

/// Eigenvalues of a Hermitian matrix, descending, without eigenvectors.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    eig_hermitian(m).map(|e| e.values)
}

/// All eigenvalues of a general square complex matrix, in no particular
/// order.
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    m.require_square("eigenvalue operand")?;
    let mut h = m.clone();
    hessenberg(&mut h);
    hessenberg_qr(&mut h)
}

fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.rows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let x: Vec<Complex64> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = math::sqrt(x.iter().map(|z| z.norm_sqr()).sum());
        if xnorm == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let mut v = x;
        v[0] += phase * xnorm;
        let vnorm = math::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // A <- (I - 2vv†) A on rows k+1..n.
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * a[(k + 1 + r, j)])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                a[(k + 1 + r, j)] -= *vr * dot * 2.0;
            }
        }
        // A <- A (I - 2vv†) on columns k+1..n.
        for i in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(c, vc)| a[(i, k + 1 + c)] * vc)
                .sum();
            for (c, vc) in v.iter().enumerate() {
                a[(i, k + 1 + c)] -= dot * vc.conj() * 2.0;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

fn hessenberg_qr(h: &mut ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.rows();
    let anorm = math::sqrt(h.frobenius_norm_sqr());
    let mut eigs = vec![Complex64::new(0.0, 0.0); n];
    if anorm == 0.0 {
        return Ok(eigs);
    }
    let max_iters = 100 * n.max(1);
    let mut hi = n - 1;
    let mut iters = 0usize;
    let mut total = 0usize;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);

    loop {
        if hi == 0 {
            eigs[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = anorm;
            }
            if sub <= f64::EPSILON * s {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eigs[hi] = h[(hi, hi)];
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        total += 1;
        if iters > max_iters {
            return Err(Error::NoConvergence {
                iterations: total,
                residual: h[(hi, hi - 1)].norm(),
            });
        }

        let mu = if iters % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm() * 0.75, 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        rotations.clear();
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = l + offset;
            for i in l..=(k + 2).min(hi) {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok(eigs)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5) * ((a - d) * 0.5) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = math::hypot(an, bn);
    (an / r, (a / an) * b.conj() / r)
}

/// Spectral radius and largest singular value of a square matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorNorms {
    pub spectral_radius: f64,
    pub two_norm: f64,
}

pub fn operator_norms(m: &ComplexMatrix) -> Result<OperatorNorms> {
    Ok(OperatorNorms {
        spectral_radius: spectral_radius(m)?,
        two_norm: two_norm(m)?,
    })
}

pub fn spectral_radius(m: &ComplexMatrix) -> Result<f64> {
    let n = m.require_square("spectral radius operand")?;
    if n <= DENSE_EIG_LIMIT {
        Ok(general_eigenvalues(m)?
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    } else {
        Ok(power_radius_estimate(m))
    }
}

/// Largest singular value, from the top eigenvalue of `M†M`.
pub fn two_norm(m: &ComplexMatrix) -> Result<f64> {
    m.require_square("two-norm operand")?;
    let gram = m.adjoint().matmul(m)?;
    let top = jacobi(&gram).values[0];
    Ok(math::sqrt(top.max(0.0)))
}

// Gelfand-style estimate ||M^k v||^(1/k) averaged over the tail; converges
// for any matrix, including ones with several eigenvalues on the spectral
// circle where plain power iteration oscillates.
fn power_radius_estimate(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let inv = 1.0 / math::sqrt(n as f64);
    let mut v = ComplexVector::new(vec![Complex64::new(inv, 0.0); n]).expect("n > 0");
    let iters = 2000;
    let mut log_sum = 0.0;
    let mut window: VecDeque<f64> = VecDeque::new();
    for _ in 0..iters {
        let w = m.matvec(&v).expect("square");
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let growth = math::ln(norm);
        log_sum += growth;
        window.push_back(growth);
        if window.len() > iters / 2 {
            if let Some(old) = window.pop_front() {
                log_sum -= old;
            }
        }
        v = w.scale(Complex64::new(1.0 / norm, 0.0));
    }
    math::exp(log_sum / window.len() as f64)
}

/// Whether the directed graph with an edge `i → j` for every `M_ij > 0` is
/// strongly connected.
pub fn is_irreducible(m: &ComplexMatrix) -> Result<bool> {
    let n = m.require_square("irreducibility operand")?;
    require_nonnegative_real(m)?;
    let edge = |i: usize, j: usize| m[(i, j)].re > 0.0;
    let reach_all = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (j, s) in seen.iter_mut().enumerate() {
                let e = if forward { edge(i, j) } else { edge(j, i) };
                if e && !*s {
                    *s = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    Ok(reach_all(true) && reach_all(false))
}

fn require_nonnegative_real(m: &ComplexMatrix) -> Result<()> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let z = m[(i, j)];
            if z.im != 0.0 || !(z.re >= 0.0) {
                return Err(Error::contract(format!(
                    "entry ({i},{j}) = {z} is not a nonnegative real"
                )));
            }
        }
    }
    Ok(())
}

/// Outcome of [`dominant_eigenpair`].
#[derive(Debug, Clone)]
pub struct DominantEigenpair {
    pub value: f64,
    /// Unit 2-norm, real and nonnegative entries.
    pub vector: ComplexVector,
    /// Another eigenvalue coincides with `value` (within a cluster radius of
    /// `1e-4·max(1, value)`), so the Perron pair is not unique.
    pub degenerate: bool,
    pub iterations: usize,
}

/// Power iteration from the all-ones vector on a nonnegative real matrix.
///
/// Converged when `|Mv - value·v| ≤ tol·|value|` holds entrywise.
pub fn dominant_eigenpair(
    m: &ComplexMatrix,
    max_iters: usize,
    tol: f64,
) -> Result<DominantEigenpair> {
    let n = m.require_square("dominant eigenpair operand")?;
    require_nonnegative_real(m)?;
    let real: Vec<f64> = m.real_parts();
    let apply = |v: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).map(|j| real[i * n + j] * v[j]).sum())
            .collect()
    };

    let mut v = vec![1.0 / math::sqrt(n as f64); n];
    let mut residual = f64::INFINITY;
    for iter in 1..=max_iters {
        let w = apply(&v);
        let value: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        residual = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| math::abs(wi - value * vi))
            .fold(0.0, f64::max);
        if residual <= tol * math::abs(value) || residual == 0.0 {
            let degenerate = is_degenerate(m, value)?;
            return Ok(DominantEigenpair {
                value,
                vector: ComplexVector::from_real(&v)?,
                degenerate,
                iterations: iter,
            });
        }
        let norm = math::sqrt(w.iter().map(|x| x * x).sum());
        if norm == 0.0 {
            break;
        }
        v = w.into_iter().map(|x| x / norm).collect();
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        residual,
    })
}

fn is_degenerate(m: &ComplexMatrix, value: f64) -> Result<bool> {
    let radius = 1e-4 * value.abs().max(1.0);
    let target = Complex64::new(value, 0.0);
    let close = general_eigenvalues(m)?
        .iter()
        .filter(|z| (**z - target).norm() <= radius)
        .count();
    Ok(close > 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::RandomStream;

    fn random_hermitian(n: usize, s: &mut RandomStream) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| s.complex_normal()).unwrap();
        g.linear_combination(0.5, &g.adjoint(), 0.5).unwrap()
    }

    #[test]
    fn identity_and_diagonal() {
        let e = eig_hermitian(&ComplexMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);

        let e = eig_hermitian(&ComplexMatrix::diag_real(&[1.0, 2.0]).unwrap()).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((e.vectors[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_rejected_with_pair() {
        let m = ComplexMatrix::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, 1.0, 2.0], [0.0, 0.0, 1.0]])
            .unwrap();
        match eig_hermitian(&m) {
            Err(Error::NotHermitian { row, col, .. }) => assert_eq!((row, col), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn random_reconstruction() {
        let mut s = RandomStream::new(21, 0);
        for n in [1, 2, 5, 8, 16] {
            let m = random_hermitian(n, &mut s);
            let e = eig_hermitian(&m).unwrap();
            assert!(e.reconstruct().max_abs_diff(&m).unwrap() <= 1e-9);
            assert!(e.vectors.is_unitary(1e-10));
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn general_matches_hermitian_spectrum() {
        let mut s = RandomStream::new(22, 0);
        let m = random_hermitian(7, &mut s);
        let herm = hermitian_eigenvalues(&m).unwrap();
        let mut gen: Vec<f64> = general_eigenvalues(&m)
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        gen.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in herm.iter().zip(&gen) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn general_eigenvalues_of_rotation() {
        let m = ComplexMatrix::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        let mut eigs = general_eigenvalues(&m).unwrap();
        eigs.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((eigs[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((eigs[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn general_eigenvalues_companion() {
        // Companion matrix of (x-1)(x-2)(x-3)(x+4).
        // x^4 - 2x^3 - 13x^2 + 38x - 24
        let m = ComplexMatrix::from_real_rows(&[
            [2.0, 13.0, -38.0, 24.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let mut eigs: Vec<f64> = general_eigenvalues(&m)
            .unwrap()
            .iter()
            .map(|z| z.re)
            .collect();
        eigs.sort_by(f64::total_cmp);
        for (got, want) in eigs.iter().zip([-4.0, 1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-9, "{eigs:?}");
        }
    }

    #[test]
    fn norms_examples() {
        let id = ComplexMatrix::identity(4).unwrap();
        let n = operator_norms(&id).unwrap();
        assert!((n.spectral_radius - 1.0).abs() < 1e-14);
        assert!((n.two_norm - 1.0).abs() < 1e-14);

        let nil = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        let n = operator_norms(&nil).unwrap();
        assert!(n.spectral_radius.abs() < 1e-14);
        assert!((n.two_norm - 1.0).abs() < 1e-14);

        let rect = ComplexMatrix::zeros(2, 3).unwrap();
        assert!(matches!(operator_norms(&rect), Err(Error::InvalidShape(_))));
    }

    #[test]
    fn large_matrix_uses_power_estimate() {
        let n = 70;
        let mut s = RandomStream::new(5, 0);
        let m =
            ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(0.1 + s.uniform(), 0.0)).unwrap();
        let est = spectral_radius(&m).unwrap();
        let perron = dominant_eigenpair(&m, 10_000, 1e-12).unwrap().value;
        assert!((est - perron).abs() < 1e-3 * perron, "{est} vs {perron}");
    }

    #[test]
    fn irreducibility_examples() {
        assert!(!is_irreducible(&ComplexMatrix::identity(2).unwrap()).unwrap());
        let cyc =
            ComplexMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
                .unwrap();
        assert!(is_irreducible(&cyc).unwrap());
        let neg = ComplexMatrix::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(
            is_irreducible(&neg),
            Err(Error::ContractViolation(_))
        ));
        let cplx = ComplexMatrix::from_vec(1, 1, vec![Complex64::new(0.0, 1.0)]).unwrap();
        assert!(is_irreducible(&cplx).is_err());
    }

    #[test]
    fn dominant_examples() {
        let swap = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let d = dominant_eigenpair(&swap, 100, 1e-12).unwrap();
        assert!((d.value - 1.0).abs() < 1e-14);
        let r = 1.0 / 2f64.sqrt();
        assert!((d.vector[0].re - r).abs() < 1e-14 && (d.vector[1].re - r).abs() < 1e-14);
        assert!(!d.degenerate);

        let d = dominant_eigenpair(&ComplexMatrix::identity(3).unwrap(), 100, 1e-12).unwrap();
        assert!((d.value - 1.0).abs() < 1e-14);
        assert!(d.degenerate);
    }

    #[test]
    fn dominant_matches_full_eigensolve() {
        // Symmetric positive matrix so the Jacobi solver is an independent
        // oracle for both the value and the vector.
        let mut s = RandomStream::new(31, 0);
        let n = 6;
        let a =
            ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(0.05 + s.uniform(), 0.0)).unwrap();
        let m = a.linear_combination(0.5, &a.adjoint(), 0.5).unwrap();
        let d = dominant_eigenpair(&m, 10_000, 1e-13).unwrap();
        let e = eig_hermitian(&m).unwrap();
        assert!((d.value - e.values[0]).abs() < 1e-8);
        let top = e.vectors.column(0);
        let overlap = top.inner(&d.vector).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-8);
        assert!(d.vector.as_slice().iter().all(|z| z.re > 0.0));
        assert!(!d.degenerate);

        // Non-symmetric positive matrix: residual contract.
        let d = dominant_eigenpair(&a, 10_000, 1e-12).unwrap();
        let mv = a.matvec(&d.vector).unwrap();
        for i in 0..n {
            assert!((mv[i] - d.vector[i] * d.value).norm() <= 1e-12 * d.value * 1.0001);
        }
    }

    #[test]
    fn dominant_non_convergence() {
        // Permutation with period 2 started away from its fixed point.
        let m = ComplexMatrix::from_real_rows(&[[0.0, 2.0], [0.5, 0.0]]).unwrap();
        match dominant_eigenpair(&m, 50, 1e-12) {
            Err(Error::NoConvergence {
                iterations,
                residual,
            }) => {
                assert_eq!(iterations, 50);
                assert!(residual > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

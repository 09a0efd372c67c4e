use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{ComplexMatrix, ComplexVector};
use crate::error::{Error, Result};
use crate::math;

/// Seeded source of uniform and Gaussian draws.
///
/// Backed by ChaCha8, a counter-based generator: the `seed` selects the key
/// and `stream_id` selects one of 2^64 independent streams under that key.
/// The same `(seed, stream_id)` pair always reproduces the same sequence.
/// Parallel work should use distinct stream ids rather than sharing one
/// stream.
///
/// Normal variates come from the Box–Muller transform; the second value of
/// each pair is cached and returned by the next call.
#[derive(Debug, Clone)]
pub struct RandomStream {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl RandomStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self {
            seed,
            stream_id,
            rng,
            spare: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// A fresh stream under the same seed.
    pub fn fork(&self, stream_id: u64) -> Self {
        Self::new(self.seed, stream_id)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `0..n`. `n` must be nonzero.
    pub fn index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 - u lies in (0, 1], keeping the logarithm finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = math::sqrt(-2.0 * math::ln(u1));
        let angle = 2.0 * PI * u2;
        self.spare = Some(radius * math::sin(angle));
        radius * math::cos(angle)
    }

    /// Standard complex Gaussian: real and imaginary parts independent with
    /// variance 1/2 each, so `E|z|² = 1`.
    pub fn complex_normal(&mut self) -> Complex64 {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let re = self.standard_normal();
        let im = self.standard_normal();
        Complex64::new(re * s, im * s)
    }
}

/// Unit vector from independent complex Gaussian entries.
pub fn gaussian_state(dim: usize, stream: &mut RandomStream) -> Result<ComplexVector> {
    if dim == 0 {
        return Err(Error::dimension("state dimension 0"));
    }
    loop {
        let entries: Vec<Complex64> = (0..dim).map(|_| stream.complex_normal()).collect();
        let v = ComplexVector::new(entries)?;
        if v.norm() > 0.0 {
            return v.normalized();
        }
    }
}

/// Haar-distributed unitary.
///
/// Orthonormalizes the columns of a complex Gaussian matrix with modified
/// Gram–Schmidt (two passes). The distribution is Haar only when the QR
/// factorization is made unique by a positive real diagonal in R; dividing
/// each column by its own residual norm `r_jj > 0` is exactly that phase
/// correction.
pub fn haar_unitary(dim: usize, stream: &mut RandomStream) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::dimension("unitary dimension 0"));
    }
    'draw: loop {
        let mut cols: Vec<Vec<Complex64>> = (0..dim)
            .map(|_| (0..dim).map(|_| stream.complex_normal()).collect())
            .collect();
        for j in 0..dim {
            let (done, rest) = cols.split_at_mut(j);
            let col = &mut rest[0];
            for _pass in 0..2 {
                for q in done.iter() {
                    let proj: Complex64 =
                        q.iter().zip(col.iter()).map(|(a, &b)| a.conj() * b).sum();
                    for (c, &qi) in col.iter_mut().zip(q) {
                        *c -= proj * qi;
                    }
                }
            }
            let r_jj = math::sqrt(col.iter().map(|z| z.norm_sqr()).sum());
            if !(r_jj > 1e-12) {
                continue 'draw;
            }
            for c in col.iter_mut() {
                *c /= r_jj;
            }
        }
        return ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i]);
    }
}

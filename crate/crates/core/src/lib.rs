//! Quantum-inspired evolution of masked nonnegative Hamiltonians.
//!
//! The crate is split bottom-up:
//!
//! * [`numkernel`]: dense complex linear algebra, eigensolvers, seeded
//!   randomness (Gaussian states, Haar unitaries).
//! * [`quantum_state`]: coherent superpositions, density matrices, purity,
//!   entanglement entropy, coherence and torus coordinates.
//! * [`measurement`]: expectation values against a Hamiltonian, rank-1
//!   measurement scoring and the classical-mixture baseline.
//! * [`evolution`]: bipartite states, partial trace, the masked rank-1
//!   Hamiltonian update and the evolution loop.
//! * [`qig`]: simplex allocations, best responses, Nash checks and the
//!   seeded superposition search.
//! * [`killweb`]: the ten-capability kill-web scenario.
//!
//! Everything here is `no_std` + `alloc`; file formats and the command line
//! live in the `qiham` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod evolution;
pub mod killweb;
pub mod measurement;
pub mod numkernel;
pub mod qig;
pub mod quantum_state;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use numkernel::{ComplexMatrix, ComplexVector, RandomStream};

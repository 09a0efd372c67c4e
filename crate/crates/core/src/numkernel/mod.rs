//! Dense complex linear algebra and seeded randomness.

mod eigen;
mod matrix;
mod random;

pub use eigen::{
    check_hermitian, dominant_eigenpair, eig_hermitian, general_eigenvalues, hermitian_eigenvalues,
    is_irreducible, operator_norms, spectral_radius, two_norm, DominantEigenpair, HermitianEigen,
    OperatorNorms, DENSE_EIG_LIMIT, HERMITIAN_TOL,
};
pub use matrix::{ComplexMatrix, ComplexVector};
pub use random::{gaussian_state, haar_unitary, RandomStream};

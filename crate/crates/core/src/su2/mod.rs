//! SU(2) machinery: half-integers, spin matrices, Legendre polynomials,
//! Wigner d-matrices and irrep multiplicities of spin ensembles.

mod half;
mod legendre;
mod matrix;
mod multiplicity;
mod oracle;
mod spin;
mod wigner;

pub use half::HalfInt;
pub use legendre::{legendre, legendre_all};
pub use matrix::{kron, max_abs, max_abs_diff, to_complex, ComplexMatrix, RealMatrix};
pub use multiplicity::{multiplicities, MultiplicityTable};
pub use oracle::rotation_oracle;
pub use spin::{spin_matrices, SpinMatrices};
pub use wigner::{wigner_d_element, wigner_d_matrix, EXACT_MATRIX_MAX_TWICE_J};

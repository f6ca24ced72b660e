use num_complex::Complex64;

use super::{spin_matrices, ComplexMatrix, HalfInt};

/// `exp(-i beta Jy)` for spin `j`, by the Padé scaling-and-squaring matrix
/// exponential. Shares no code with the explicit d-matrix sum and serves as
/// its cross-check.
pub fn rotation_oracle(j: HalfInt, beta: f64) -> ComplexMatrix {
    let jy = spin_matrices(j).jy;
    (jy * Complex64::new(0.0, -beta)).exp()
}

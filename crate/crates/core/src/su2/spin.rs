use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ComplexMatrix, HalfInt};

/// Cartesian spin matrices of one spin-`j` multiplet in the basis `m = j, ..., -j`.
#[derive(Clone, Debug)]
pub struct SpinMatrices {
    pub jx: ComplexMatrix,
    pub jy: ComplexMatrix,
    pub jz: ComplexMatrix,
}

impl SpinMatrices {
    /// `n · J` for a real 3-vector `n`.
    pub fn along(&self, n: [f64; 3]) -> ComplexMatrix {
        &self.jx * Complex64::from(n[0]) + &self.jy * Complex64::from(n[1]) + &self.jz * Complex64::from(n[2])
    }
}

/// Builds `Jx`, `Jy`, `Jz` from the ladder operators. `j` must be non-negative.
pub fn spin_matrices(j: HalfInt) -> SpinMatrices {
    let dim = j.multiplet_dim();
    let jj = j.casimir();
    let mut jz = DMatrix::zeros(dim, dim);
    // raising operator: J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>
    let mut raise: ComplexMatrix = DMatrix::zeros(dim, dim);
    for (col, m) in HalfInt::labels(j).enumerate() {
        let mf = m.to_f64();
        jz[(col, col)] = Complex64::from(mf);
        if col > 0 {
            raise[(col - 1, col)] = Complex64::from((jj - mf * (mf + 1.0)).sqrt());
        }
    }
    let lower = raise.adjoint();
    let jx = (&raise + &lower) * Complex64::from(0.5);
    let jy = (&raise - &lower) * Complex64::new(0.0, -0.5);
    SpinMatrices { jx, jy, jz }
}

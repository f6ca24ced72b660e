//! Tensor-product representation on the full `(2s+1)^N` dimensional space.
//!
//! Particle 1 is the most significant tensor factor; each factor uses the
//! single-spin basis `m = s, ..., -s`.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::algebra::{check_same, EnsembleOperator};
use super::{Direction, EnsembleSpec};
use crate::error::Result;
use crate::su2::{kron, rotation_oracle, spin_matrices, ComplexMatrix, HalfInt};

#[derive(Clone, Debug)]
pub struct DenseOperator {
    ensemble: EnsembleSpec,
    matrix: ComplexMatrix,
}

impl DenseOperator {
    /// Wraps a matrix; its dimension must equal the ensemble's dense dimension.
    pub fn from_matrix(ensemble: &EnsembleSpec, matrix: ComplexMatrix) -> Result<Self> {
        let dim = ensemble.dense_dimension()?;
        if matrix.shape() != (dim, dim) {
            return Err(crate::Error::Domain(format!(
                "matrix shape {:?} does not match ensemble dimension {dim}",
                matrix.shape()
            )));
        }
        Ok(DenseOperator { ensemble: ensemble.clone(), matrix })
    }

    pub fn identity(ensemble: &EnsembleSpec) -> Result<Self> {
        let dim = ensemble.dense_dimension()?;
        Ok(DenseOperator { ensemble: ensemble.clone(), matrix: ComplexMatrix::identity(dim, dim) })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// `max |A - A^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        crate::su2::max_abs_diff(&self.matrix, &self.matrix.adjoint())
    }

    /// `U A U^dagger`.
    pub fn conjugate_by(&self, unitary: &DenseOperator) -> Result<DenseOperator> {
        unitary.product(self)?.product(&unitary.adjoint())
    }
}

impl EnsembleOperator for DenseOperator {
    fn ensemble(&self) -> &EnsembleSpec {
        &self.ensemble
    }

    fn product(&self, other: &Self) -> Result<Self> {
        check_same(&self.ensemble, &other.ensemble)?;
        Ok(DenseOperator { ensemble: self.ensemble.clone(), matrix: &self.matrix * &other.matrix })
    }

    fn sum(&self, other: &Self) -> Result<Self> {
        check_same(&self.ensemble, &other.ensemble)?;
        Ok(DenseOperator { ensemble: self.ensemble.clone(), matrix: &self.matrix + &other.matrix })
    }

    fn difference(&self, other: &Self) -> Result<Self> {
        check_same(&self.ensemble, &other.ensemble)?;
        Ok(DenseOperator { ensemble: self.ensemble.clone(), matrix: &self.matrix - &other.matrix })
    }

    fn adjoint(&self) -> Self {
        DenseOperator { ensemble: self.ensemble.clone(), matrix: self.matrix.adjoint() }
    }

    fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn trace(&self) -> f64 {
        self.matrix.diagonal().iter().map(|z| z.re).sum()
    }
}

/// Single-particle rotation taking z to `n`: `exp(-i phi Sz) exp(-i theta Sy)`.
fn single_spin_rotation(s: HalfInt, n: &Direction) -> ComplexMatrix {
    let (theta, phi) = n.polar_angles();
    let mut r = rotation_oracle(s, theta);
    for (row, m) in HalfInt::labels(s).enumerate() {
        let phase = Complex64::from_polar(1.0, -phi * m.to_f64());
        for col in 0..r.ncols() {
            r[(row, col)] *= phase;
        }
    }
    r
}

/// Eigenprojectors `P_k(n)` of `S . n` for one particle, keyed by `k`.
fn single_spin_projectors(s: HalfInt, n: &Direction) -> BTreeMap<HalfInt, ComplexMatrix> {
    let r = single_spin_rotation(s, n);
    HalfInt::labels(s)
        .enumerate()
        .map(|(i, k)| {
            let col = r.column(i);
            (k, col * col.adjoint())
        })
        .collect()
}

/// `J . n = sum_i S_i . n`.
pub fn collective_operator(spec: &EnsembleSpec, n: &Direction) -> Result<DenseOperator> {
    spec.dense_dimension()?;
    let s = spec.single_spin();
    let single = spin_matrices(s).along(n.components());
    let d = single.nrows();
    let mut total = single.clone();
    let mut dim = d;
    for _ in 1..spec.spin_count() {
        total = kron(&total, &ComplexMatrix::identity(d, d)) + kron(&ComplexMatrix::identity(dim, dim), &single);
        dim *= d;
    }
    DenseOperator::from_matrix(spec, total)
}

/// Magnetization projector as the sum over `k_1 + ... + k_N = m` of
/// `P_{k_1}(n) (x) ... (x) P_{k_N}(n)`.
///
/// The sum is organized by partial magnetization: after `i` factors,
/// `Q_i(mu)` holds the sum over all `k_1 + ... + k_i = mu`, and only partial
/// sums that can still reach `m` are kept.
pub fn projector_tensor_sum(spec: &EnsembleSpec, n: &Direction, m: HalfInt) -> Result<DenseOperator> {
    spec.check_outcome(m)?;
    spec.dense_dimension()?;
    let s = spec.single_spin();
    let count = spec.spin_count();
    let single = single_spin_projectors(s, n);

    let reachable = |mu: HalfInt, placed: u32| (m - mu).abs() <= s.times(count - placed);
    let mut partial: BTreeMap<HalfInt, ComplexMatrix> =
        single.iter().filter(|(k, _)| reachable(**k, 1)).map(|(k, p)| (*k, p.clone())).collect();
    for placed in 2..=count {
        let mut next: BTreeMap<HalfInt, ComplexMatrix> = BTreeMap::new();
        for (mu, q) in &partial {
            for (k, p) in &single {
                let total = *mu + *k;
                if !reachable(total, placed) {
                    continue;
                }
                let term = kron(q, p);
                match next.get_mut(&total) {
                    Some(acc) => *acc += term,
                    None => {
                        next.insert(total, term);
                    }
                }
            }
        }
        partial = next;
    }
    let matrix = partial.remove(&m).expect("target magnetization is reachable");
    DenseOperator::from_matrix(spec, matrix)
}

/// Magnetization projector by Lagrange interpolation on the integer-spaced
/// spectrum of `J . n`: `prod_{m' != m} (J.n - m') / (m - m')`. Labels outside
/// the spectrum give the (numerically) zero operator.
pub fn projector_spectral(spec: &EnsembleSpec, n: &Direction, m: HalfInt) -> Result<DenseOperator> {
    let generator = collective_operator(spec, n)?;
    let dim = generator.dimension();
    let identity = ComplexMatrix::identity(dim, dim);
    let mut acc = identity.clone();
    for other in spec.outcomes() {
        if other == m {
            continue;
        }
        let shifted = generator.matrix() - &identity * Complex64::from(other.to_f64());
        acc = acc * shifted / Complex64::from((m - other).to_f64());
    }
    DenseOperator::from_matrix(spec, acc)
}

/// `U(beta)^{(x) N}` with `U(beta) = exp(-i beta Sy)` on every particle.
pub fn dense_rotation(spec: &EnsembleSpec, beta: f64) -> Result<DenseOperator> {
    spec.dense_dimension()?;
    let single = rotation_oracle(spec.single_spin(), beta);
    let mut total = single.clone();
    for _ in 1..spec.spin_count() {
        total = kron(&total, &single);
    }
    DenseOperator::from_matrix(spec, total)
}

//! Direct-sum representation: one `(2j+1)`-dimensional block per total spin
//! `j`, shared by all `lambda_j` copies of that irrep.
//!
//! Magnetization projectors and rotations act identically on every copy, so
//! a single block per `j` carries the operator and the multiplicity only
//! enters traces and norms as a weight.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::algebra::{check_same, EnsembleOperator};
use super::EnsembleSpec;
use crate::error::Result;
use crate::su2::{to_complex, wigner_d_matrix, ComplexMatrix, HalfInt};

/// One irrep block.
#[derive(Clone, Debug)]
pub struct Block {
    pub j: HalfInt,
    pub multiplicity: BigUint,
    pub matrix: ComplexMatrix,
}

impl Block {
    pub fn weight(&self) -> f64 {
        self.multiplicity.to_f64().unwrap_or(f64::INFINITY)
    }
}

#[derive(Clone, Debug)]
pub struct BlockOperator {
    ensemble: EnsembleSpec,
    /// Ascending in `j`, one entry per total spin of the ensemble.
    blocks: Vec<Block>,
}

impl BlockOperator {
    fn from_fn(spec: &EnsembleSpec, build: impl Fn(HalfInt) -> ComplexMatrix + Sync) -> Self {
        let entries: Vec<(HalfInt, BigUint)> =
            spec.table().entries().iter().map(|(j, l)| (*j, l.clone())).collect();
        let blocks = entries
            .into_par_iter()
            .map(|(j, multiplicity)| Block { j, multiplicity, matrix: build(j) })
            .collect();
        BlockOperator { ensemble: spec.clone(), blocks }
    }

    pub fn identity(spec: &EnsembleSpec) -> Self {
        Self::from_fn(spec, |j| ComplexMatrix::identity(j.multiplet_dim(), j.multiplet_dim()))
    }

    pub fn zeros(spec: &EnsembleSpec) -> Self {
        Self::from_fn(spec, |j| ComplexMatrix::zeros(j.multiplet_dim(), j.multiplet_dim()))
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, j: HalfInt) -> Option<&Block> {
        self.blocks.iter().find(|b| b.j == j)
    }

    /// `R A R^dagger`, block by block.
    pub fn conjugate_by(&self, rotation: &BlockOperator) -> Result<BlockOperator> {
        rotation.product(self)?.product(&rotation.adjoint())
    }

    /// Largest entry magnitude over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(|b| crate::su2::max_abs(&b.matrix)).fold(0.0, f64::max)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&ComplexMatrix, &ComplexMatrix) -> ComplexMatrix) -> Result<Self> {
        check_same(&self.ensemble, &other.ensemble)?;
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| Block { j: a.j, multiplicity: a.multiplicity.clone(), matrix: op(&a.matrix, &b.matrix) })
            .collect();
        Ok(BlockOperator { ensemble: self.ensemble.clone(), blocks })
    }
}

impl EnsembleOperator for BlockOperator {
    fn ensemble(&self) -> &EnsembleSpec {
        &self.ensemble
    }

    fn product(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    fn sum(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    fn difference(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn adjoint(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| Block { j: b.j, multiplicity: b.multiplicity.clone(), matrix: b.matrix.adjoint() })
            .collect();
        BlockOperator { ensemble: self.ensemble.clone(), blocks }
    }

    /// `sqrt(sum_j lambda_j ||block_j||_F^2)`, accumulated in ascending `j`.
    fn frobenius_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.weight() * b.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    fn trace(&self) -> f64 {
        self.blocks.iter().map(|b| b.weight() * b.matrix.diagonal().iter().map(|z| z.re).sum::<f64>()).sum()
    }
}

/// `P_m` along z: in block `j` the single diagonal entry at `m` when `|m| <= j`.
pub fn block_projector(spec: &EnsembleSpec, m: HalfInt) -> Result<BlockOperator> {
    spec.check_outcome(m)?;
    Ok(BlockOperator::from_fn(spec, |j| {
        let dim = j.multiplet_dim();
        let mut block = ComplexMatrix::zeros(dim, dim);
        if m.is_label_of(j) {
            let i = m.index_in(j);
            block[(i, i)] = Complex64::from(1.0);
        }
        block
    }))
}

/// Rotation by `beta` about y: `d^j(beta)` in every block.
pub fn block_rotation(spec: &EnsembleSpec, beta: f64) -> Result<BlockOperator> {
    // validates beta once before the parallel fan-out
    wigner_d_matrix(HalfInt::ZERO, beta)?;
    Ok(BlockOperator::from_fn(spec, |j| to_complex(&wigner_d_matrix(j, beta).expect("validated angle"))))
}

/// `P_n` along the XZ-plane direction at polar angle `beta`: `D(beta) P_n D(beta)^dagger`.
pub fn rotated_block_projector(spec: &EnsembleSpec, n: HalfInt, beta: f64) -> Result<BlockOperator> {
    let rotation = block_rotation(spec, beta)?;
    block_projector(spec, n)?.conjugate_by(&rotation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collective::{commutator, projector_tensor_sum, Direction};
    use crate::su2::wigner_d_element;

    fn spec(n: u32, s2: i32) -> EnsembleSpec {
        EnsembleSpec::new(n, HalfInt::from_twice(s2)).unwrap()
    }

    #[test]
    fn projectors_resolve_identity() {
        let sp = spec(5, 1);
        let mut sum = BlockOperator::zeros(&sp);
        for m in sp.outcomes() {
            let p = block_projector(&sp, m).unwrap();
            sum = sum.sum(&p).unwrap();
        }
        let id = BlockOperator::identity(&sp);
        assert_eq!(sum.difference(&id).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn stretched_projector_lives_in_top_block() {
        let sp = spec(4, 2);
        let p = block_projector(&sp, sp.j_max()).unwrap();
        for b in p.blocks() {
            let nonzero = crate::su2::max_abs(&b.matrix) > 0.0;
            assert_eq!(nonzero, b.j == sp.j_max());
        }
    }

    #[test]
    fn weighted_trace_matches_dense_trace() {
        for (n, s2) in [(4, 1), (3, 2), (2, 3)] {
            let sp = spec(n, s2);
            for m in sp.outcomes() {
                let block = block_projector(&sp, m).unwrap().trace();
                let dense = projector_tensor_sum(&sp, &Direction::Z, m).unwrap().trace();
                assert!((block - dense).abs() < 1e-12);
                assert_eq!(block, block.round());
            }
        }
    }

    #[test]
    fn identity_norm() {
        let sp = spec(6, 1);
        assert!((BlockOperator::identity(&sp).frobenius_norm() - 8.0).abs() < 1e-14);
        assert_eq!(BlockOperator::zeros(&sp).frobenius_norm(), 0.0);
    }

    #[test]
    fn rotation_blocks_are_orthogonal() {
        let sp = spec(6, 2);
        let r = block_rotation(&sp, 0.0).unwrap();
        assert_eq!(r.difference(&BlockOperator::identity(&sp)).unwrap().max_abs(), 0.0);
        let r = block_rotation(&sp, 2.2).unwrap();
        let rrt = r.product(&r.adjoint()).unwrap();
        assert!(rrt.difference(&BlockOperator::identity(&sp)).unwrap().max_abs() <= 1e-10);
        assert!(block_rotation(&sp, -0.1).is_err());
    }

    #[test]
    fn rotated_projector_entries() {
        let sp = spec(4, 1);
        let beta = 0.9;
        for n in sp.outcomes() {
            let p = rotated_block_projector(&sp, n, beta).unwrap();
            for b in p.blocks() {
                let j = b.j;
                for (r, mr) in HalfInt::labels(j).enumerate() {
                    for (c, mc) in HalfInt::labels(j).enumerate() {
                        let expect = if n.is_label_of(j) {
                            wigner_d_element(j, mr, n, beta).unwrap() * wigner_d_element(j, mc, n, beta).unwrap()
                        } else {
                            0.0
                        };
                        assert!((b.matrix[(r, c)].re - expect).abs() <= 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn block_commutator_expansion() {
        // [P_m, P~_n] = sum d_{m,n} d_{k,n} (|m><k| - |k><m|)
        let sp = spec(3, 2);
        let beta = 1.1;
        let comm = commutator(&block_projector(&sp, HalfInt::ONE).unwrap(), &rotated_block_projector(&sp, HalfInt::ZERO, beta).unwrap())
            .unwrap();
        let adj = comm.adjoint();
        let sum = comm.sum(&adj).unwrap();
        assert!(sum.max_abs() <= 1e-15);
        let j = HalfInt::from_int(2);
        let block = &comm.block(j).unwrap().matrix;
        let d = |a: i32| wigner_d_element(j, HalfInt::from_int(a), HalfInt::ZERO, beta).unwrap();
        let row = HalfInt::ONE.index_in(j);
        for (col, k) in HalfInt::labels(j).enumerate() {
            let expect = if k == HalfInt::ONE { 0.0 } else { d(1) * d(k.twice() / 2) };
            assert!((block[(row, col)].re - expect).abs() <= 1e-12);
        }
    }

    #[test]
    fn mismatched_ensembles() {
        let a = BlockOperator::identity(&spec(3, 1));
        let b = BlockOperator::identity(&spec(4, 1));
        assert!(matches!(commutator(&a, &b), Err(crate::Error::EnsembleMismatch)));
    }
}

//! Operations shared by the dense and block representations.

use crate::error::{Error, Result};

use super::{BlockOperator, DenseOperator, EnsembleSpec};

/// Operator on an ensemble's Hilbert space in some fixed representation.
pub trait EnsembleOperator: Sized {
    fn ensemble(&self) -> &EnsembleSpec;

    /// `self * other`; errors when the ensembles differ.
    fn product(&self, other: &Self) -> Result<Self>;

    /// `self + other`; errors when the ensembles differ.
    fn sum(&self, other: &Self) -> Result<Self>;

    /// `self - other`; errors when the ensembles differ.
    fn difference(&self, other: &Self) -> Result<Self>;

    fn adjoint(&self) -> Self;

    /// Frobenius norm of the full operator.
    fn frobenius_norm(&self) -> f64;

    /// Trace over the full Hilbert space (real part).
    fn trace(&self) -> f64;
}

/// `[a, b] = ab - ba`.
pub fn commutator<T: EnsembleOperator>(a: &T, b: &T) -> Result<T> {
    a.product(b)?.difference(&b.product(a)?)
}

pub fn frobenius_norm<T: EnsembleOperator>(a: &T) -> f64 {
    a.frobenius_norm()
}

pub(crate) fn check_same(a: &EnsembleSpec, b: &EnsembleSpec) -> Result<()> {
    if a.same_ensemble(b) {
        Ok(())
    } else {
        Err(Error::EnsembleMismatch)
    }
}

/// Either representation, for callers that only learn the kind at run time.
#[derive(Clone, Debug)]
pub enum Operator {
    Dense(DenseOperator),
    Block(BlockOperator),
}

impl Operator {
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        match (self, other) {
            (Operator::Dense(a), Operator::Dense(b)) => commutator(a, b).map(Operator::Dense),
            (Operator::Block(a), Operator::Block(b)) => commutator(a, b).map(Operator::Block),
            _ => Err(Error::RepresentationMismatch),
        }
    }

    pub fn product(&self, other: &Operator) -> Result<Operator> {
        match (self, other) {
            (Operator::Dense(a), Operator::Dense(b)) => a.product(b).map(Operator::Dense),
            (Operator::Block(a), Operator::Block(b)) => a.product(b).map(Operator::Block),
            _ => Err(Error::RepresentationMismatch),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match self {
            Operator::Dense(a) => a.frobenius_norm(),
            Operator::Block(a) => a.frobenius_norm(),
        }
    }

    pub fn trace(&self) -> f64 {
        match self {
            Operator::Dense(a) => a.trace(),
            Operator::Block(a) => a.trace(),
        }
    }

    pub fn ensemble(&self) -> &EnsembleSpec {
        match self {
            Operator::Dense(a) => a.ensemble(),
            Operator::Block(a) => a.ensemble(),
        }
    }
}

impl From<DenseOperator> for Operator {
    fn from(op: DenseOperator) -> Self {
        Operator::Dense(op)
    }
}

impl From<BlockOperator> for Operator {
    fn from(op: BlockOperator) -> Self {
        Operator::Block(op)
    }
}

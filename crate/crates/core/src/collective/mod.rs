//! Collective magnetization observables of an N-particle spin ensemble.
//!
//! Two representations are provided. [`DenseOperator`] lives on the full
//! tensor-product space and is limited by [`EnsembleSpec::dense_dimension`];
//! [`BlockOperator`] keeps one block per total spin and scales to large
//! ensembles. Both implement [`EnsembleOperator`], and representation
//! independent scalars (traces, Frobenius norms) agree between them.

mod algebra;
mod block;
mod dense;
mod ensemble;
mod gamma;

pub use algebra::{commutator, frobenius_norm, EnsembleOperator, Operator};
pub use block::{block_projector, block_rotation, rotated_block_projector, Block, BlockOperator};
pub use dense::{collective_operator, dense_rotation, projector_spectral, projector_tensor_sum, DenseOperator};
pub use ensemble::{Direction, EnsembleSpec, DEFAULT_DENSE_LIMIT, ZERO_TOLERANCE_PER_DIMENSION};
pub use gamma::{gamma_element, witness, GammaElement, Witness, WITNESS_THRESHOLD};

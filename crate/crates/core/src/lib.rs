//! Macroscopic magnetization observables for ensembles of spin-s particles.
//!
//! The crate builds collective magnetization projectors in two
//! representations (the full tensor product space and the direct sum over
//! total angular momentum), evaluates their commutators through Wigner
//! d-matrices, and answers contextuality questions about them: which
//! projector pairs commute, whether any observable admits two incompatible
//! contexts, and whether a set of context marginals has a joint
//! distribution.
//!
//! Quantum numbers are carried exactly as [`HalfInt`] values. Basis order is
//! always `m = j, j-1, ..., -j`.

pub mod cli;
pub mod collective;
pub mod contextuality;
pub mod error;
pub mod su2;

pub use error::{Error, Result};
pub use su2::HalfInt;

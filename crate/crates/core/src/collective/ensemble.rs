use std::fmt;
use std::sync::Arc;

use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::su2::{multiplicities, HalfInt, MultiplicityTable};

/// Default cap on the tensor-product dimension `(2s+1)^N` (N = 12 at s = 1/2).
pub const DEFAULT_DENSE_LIMIT: usize = 4096;

/// A commutator is zero when its Frobenius norm is at most this times the
/// Hilbert space dimension.
pub const ZERO_TOLERANCE_PER_DIMENSION: f64 = 1e-10;

/// N identical spin-`s` particles.
#[derive(Clone)]
pub struct EnsembleSpec {
    spin_count: u32,
    single_spin: HalfInt,
    table: Arc<MultiplicityTable>,
    dense_limit: usize,
}

impl EnsembleSpec {
    pub fn new(spin_count: u32, single_spin: HalfInt) -> Result<Self> {
        let table = multiplicities(spin_count, single_spin)?;
        Ok(EnsembleSpec { spin_count, single_spin, table: Arc::new(table), dense_limit: DEFAULT_DENSE_LIMIT })
    }

    pub fn with_dense_limit(mut self, limit: usize) -> Self {
        self.dense_limit = limit;
        self
    }

    pub fn spin_count(&self) -> u32 {
        self.spin_count
    }

    pub fn single_spin(&self) -> HalfInt {
        self.single_spin
    }

    pub fn table(&self) -> &MultiplicityTable {
        &self.table
    }

    pub fn dense_limit(&self) -> usize {
        self.dense_limit
    }

    /// Largest total spin and magnetization, `N s`.
    pub fn j_max(&self) -> HalfInt {
        self.table.j_max()
    }

    /// Magnetization outcomes `Ns, Ns-1, ..., -Ns`.
    pub fn outcomes(&self) -> Vec<HalfInt> {
        HalfInt::labels(self.j_max()).collect()
    }

    pub fn check_outcome(&self, m: HalfInt) -> Result<()> {
        if m.is_label_of(self.j_max()) {
            Ok(())
        } else {
            Err(Error::InvalidOutcome { m, total: self.j_max() })
        }
    }

    /// `(2s+1)^N` as a float, for scale-aware tolerances.
    pub fn dimension_f64(&self) -> f64 {
        self.table.hilbert_dimension().to_f64().unwrap_or(f64::INFINITY)
    }

    /// Tensor-product dimension, checked against the dense limit.
    pub fn dense_dimension(&self) -> Result<usize> {
        let dim = self.table.hilbert_dimension();
        match dim.to_usize() {
            Some(d) if d <= self.dense_limit => Ok(d),
            _ => Err(Error::DenseLimitExceeded {
                dimension: dim.to_u128().unwrap_or(u128::MAX),
                limit: self.dense_limit,
            }),
        }
    }

    /// Default zero threshold for commutator norms on this ensemble.
    pub fn zero_tolerance(&self) -> f64 {
        ZERO_TOLERANCE_PER_DIMENSION * self.dimension_f64()
    }

    /// Ensembles are interchangeable when particle number and spin agree.
    pub fn same_ensemble(&self, other: &EnsembleSpec) -> bool {
        self.spin_count == other.spin_count && self.single_spin == other.single_spin
    }
}

impl fmt::Debug for EnsembleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EnsembleSpec")
            .field("spin_count", &self.spin_count)
            .field("single_spin", &self.single_spin)
            .field("dense_limit", &self.dense_limit)
            .finish()
    }
}

impl PartialEq for EnsembleSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same_ensemble(other)
    }
}

/// Unit vector in three dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Direction([f64; 3]);

impl Direction {
    pub const X: Direction = Direction([1.0, 0.0, 0.0]);
    pub const Y: Direction = Direction([0.0, 1.0, 0.0]);
    pub const Z: Direction = Direction([0.0, 0.0, 1.0]);

    /// Accepts a vector whose norm is 1 to within 1e-12.
    pub fn new(v: [f64; 3]) -> Result<Self> {
        let norm = norm3(v);
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDirection(format!("{v:?} has norm {norm}")));
        }
        Ok(Direction(v))
    }

    /// Rescales `v` to unit length when its norm is within `tolerance` of 1.
    pub fn normalized_within(v: [f64; 3], tolerance: f64) -> Result<Self> {
        let norm = norm3(v);
        if !norm.is_finite() || (norm - 1.0).abs() > tolerance {
            return Err(Error::InvalidDirection(format!("{v:?} has norm {norm}")));
        }
        Ok(Direction(v.map(|x| x / norm)))
    }

    /// Direction with polar angle `theta` from z and azimuth `phi`.
    pub fn from_polar(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Direction([st * cp, st * sp, ct])
    }

    /// Direction in the XZ plane at polar angle `beta` from z.
    pub fn in_xz_plane(beta: f64) -> Self {
        Direction::from_polar(beta, 0.0)
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    /// Angle between the two directions in `[0, pi]`.
    pub fn angle_to(&self, other: &Direction) -> f64 {
        self.dot(other).clamp(-1.0, 1.0).acos()
    }

    /// `(theta, phi)` with `theta` in `[0, pi]`.
    pub fn polar_angles(&self) -> (f64, f64) {
        let [x, y, z] = self.0;
        let theta = z.clamp(-1.0, 1.0).acos();
        let phi = if x == 0.0 && y == 0.0 { 0.0 } else { y.atan2(x) };
        (theta, phi)
    }
}

fn norm3(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

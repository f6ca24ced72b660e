use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::HalfInt;
use crate::error::{Error, Result};

/// Irrep content `j -> lambda_j` of the N-fold tensor power of a spin-`s` particle.
/// Only total spins with non-zero multiplicity are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityTable {
    spin_count: u32,
    single_spin: HalfInt,
    entries: BTreeMap<HalfInt, BigUint>,
}

impl MultiplicityTable {
    pub fn spin_count(&self) -> u32 {
        self.spin_count
    }

    pub fn single_spin(&self) -> HalfInt {
        self.single_spin
    }

    pub fn entries(&self) -> &BTreeMap<HalfInt, BigUint> {
        &self.entries
    }

    /// `lambda_j`, zero when `j` does not occur.
    pub fn multiplicity(&self, j: HalfInt) -> BigUint {
        self.entries.get(&j).cloned().unwrap_or_default()
    }

    /// Total spins present, ascending.
    pub fn j_values(&self) -> Vec<HalfInt> {
        self.entries.keys().copied().collect()
    }

    /// Largest total spin, `N s`.
    pub fn j_max(&self) -> HalfInt {
        self.single_spin.times(self.spin_count)
    }

    /// `(2s+1)^N`.
    pub fn hilbert_dimension(&self) -> BigUint {
        BigUint::from(self.single_spin.multiplet_dim()).pow(self.spin_count)
    }

    /// `sum_j lambda_j (2j+1)`.
    pub fn weighted_dimension(&self) -> BigUint {
        self.entries.iter().map(|(j, lambda)| lambda * j.multiplet_dim()).sum()
    }

    pub fn dimension_identity_holds(&self) -> bool {
        self.weighted_dimension() == self.hilbert_dimension()
    }

    /// Number of states with magnetization `m`: `sum_{j >= |m|} lambda_j`.
    pub fn degeneracy(&self, m: HalfInt) -> BigUint {
        self.entries
            .iter()
            .filter(|(j, _)| m.is_label_of(**j))
            .map(|(_, lambda)| lambda.clone())
            .sum()
    }

    /// Multiplicity as a float weight for norms and traces.
    pub fn weight(&self, j: HalfInt) -> f64 {
        self.multiplicity(j).to_f64().unwrap_or(f64::INFINITY)
    }
}

/// Multiplicities by repeated coupling of one more spin-`s` particle.
pub fn multiplicities(spin_count: u32, single_spin: HalfInt) -> Result<MultiplicityTable> {
    if spin_count == 0 {
        return Err(Error::Domain("ensemble needs at least one particle".into()));
    }
    let s = single_spin.as_spin()?;
    let mut counts: BTreeMap<HalfInt, BigUint> = BTreeMap::new();
    counts.insert(s, BigUint::one());
    for _ in 1..spin_count {
        let mut next: BTreeMap<HalfInt, BigUint> = BTreeMap::new();
        for (j, lambda) in &counts {
            let lo = (*j - s).abs();
            let hi = *j + s;
            let mut total = lo;
            while total <= hi {
                *next.entry(total).or_insert_with(BigUint::zero) += lambda;
                total = total + HalfInt::ONE;
            }
        }
        counts = next;
    }
    Ok(MultiplicityTable { spin_count, single_spin: s, entries: counts })
}

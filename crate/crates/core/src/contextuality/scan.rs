//! Commutator-norm scans between magnetization projectors along two
//! directions, computed in the block representation.

use rayon::prelude::*;
use serde::Serialize;

use crate::collective::{block_projector, block_rotation, commutator, BlockOperator, EnsembleOperator, EnsembleSpec};
use crate::error::{Error, Result};
use crate::su2::HalfInt;

/// Grid points closer than this to `0` or `pi` count as parallel directions.
pub const ENDPOINT_TOLERANCE: f64 = 1e-12;

fn check_grid(beta_grid: &[f64]) -> Result<()> {
    match beta_grid.iter().find(|b| !(0.0..=std::f64::consts::PI).contains(*b)) {
        Some(b) => Err(Error::Domain(format!("grid angle {b} outside [0, pi]"))),
        None => Ok(()),
    }
}

/// `||[P_m(z), P_{m'}(n)]||_F` for every outcome pair, `n` at angle `beta`
/// from z. Indexed `[m][m']` in descending outcome order.
pub fn commutator_norms(spec: &EnsembleSpec, beta: f64) -> Result<Vec<Vec<f64>>> {
    let rotation = block_rotation(spec, beta)?;
    let outcomes = spec.outcomes();
    let fixed: Vec<BlockOperator> = outcomes.iter().map(|m| block_projector(spec, *m)).collect::<Result<_>>()?;
    let rotated: Vec<BlockOperator> =
        fixed.iter().map(|p| p.conjugate_by(&rotation)).collect::<Result<_>>()?;
    fixed
        .iter()
        .map(|p| rotated.iter().map(|q| Ok(commutator(p, q)?.frobenius_norm())).collect())
        .collect()
}

/// Raw `(beta, norm)` samples of `||[P_m(z), P_{m'}(n(beta))]||_F`.
pub fn theorem_scan(spec: &EnsembleSpec, m: HalfInt, m_prime: HalfInt, beta_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    spec.check_outcome(m)?;
    spec.check_outcome(m_prime)?;
    check_grid(beta_grid)?;
    let p = block_projector(spec, m)?;
    let q = block_projector(spec, m_prime)?;
    beta_grid
        .par_iter()
        .map(|&beta| {
            let rotated = q.conjugate_by(&block_rotation(spec, beta)?)?;
            Ok((beta, commutator(&p, &rotated)?.frobenius_norm()))
        })
        .collect()
}

/// One grid point of [`verify_theorem`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremRow {
    pub beta: f64,
    /// Smallest norm over all `(m, m')` pairs.
    pub min_norm: f64,
    /// Largest norm over all `(m, m')` pairs.
    pub max_norm: f64,
    /// Outcome pair attaining `min_norm`.
    pub min_pair: (HalfInt, HalfInt),
    /// Parallel or antiparallel directions.
    pub endpoint: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub tolerance: f64,
    pub rows: Vec<TheoremRow>,
    pub pass: bool,
}

/// Checks that every projector pair commutes at `beta in {0, pi}` (all norms
/// `<= tolerance`) and that no pair commutes strictly inside (all norms
/// `> tolerance`).
pub fn verify_theorem(spec: &EnsembleSpec, beta_grid: &[f64], tolerance: f64) -> Result<TheoremReport> {
    check_grid(beta_grid)?;
    let outcomes = spec.outcomes();
    let rows = beta_grid
        .par_iter()
        .map(|&beta| {
            let norms = commutator_norms(spec, beta)?;
            let mut min = (f64::INFINITY, (outcomes[0], outcomes[0]));
            let mut max = 0.0_f64;
            for (i, row) in norms.iter().enumerate() {
                for (k, &v) in row.iter().enumerate() {
                    if v < min.0 {
                        min = (v, (outcomes[i], outcomes[k]));
                    }
                    max = max.max(v);
                }
            }
            let endpoint = beta <= ENDPOINT_TOLERANCE || (std::f64::consts::PI - beta) <= ENDPOINT_TOLERANCE;
            let pass = if endpoint { max <= tolerance } else { min.0 > tolerance };
            Ok(TheoremRow { beta, min_norm: min.0, max_norm: max, min_pair: min.1, endpoint, pass })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = rows.iter().all(|r| r.pass);
    Ok(TheoremReport { tolerance, rows, pass })
}

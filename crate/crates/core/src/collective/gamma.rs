//! Closed-form commutator entries and the constructive noncommutation witness.
//!
//! Within any copy of the spin-`j` irrep,
//!
//! ```text
//! Gamma^j_{k,k'} = <j k| [P_m, P~_n] |j k'>
//!                = d^j_{m,n} (delta_{k,m} d^j_{k',n} - delta_{k',m} d^j_{k,n})
//! ```
//!
//! so `[P_m, P~_n]` is non-zero as soon as some `j` present in the ensemble
//! and some `k != m` give `d^j_{m,n} d^j_{k,n} != 0`.

use serde::Serialize;

use crate::error::Result;
use crate::su2::{legendre, wigner_d_element, HalfInt};

/// Products `|d^j_{m,n} d^j_{k,n}|` above this count as non-zero.
pub const WITNESS_THRESHOLD: f64 = 1e-12;

/// `|P_j(cos beta)|` above this counts as non-zero during the `m = n = 0` scan.
const LEGENDRE_SCAN_THRESHOLD: f64 = 1e-12;

/// One evaluated `Gamma^j_{k,k'}` together with its labels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaElement {
    pub j: HalfInt,
    pub k: HalfInt,
    pub k_prime: HalfInt,
    pub m: HalfInt,
    pub n: HalfInt,
    pub beta: f64,
    pub value: f64,
}

impl GammaElement {
    pub fn compute(j: HalfInt, m: HalfInt, n: HalfInt, k: HalfInt, k_prime: HalfInt, beta: f64) -> Result<Self> {
        let value = gamma_element(j, m, n, k, k_prime, beta)?;
        Ok(GammaElement { j, k, k_prime, m, n, beta, value })
    }
}

/// `Gamma^j_{k,k'}` for `[P_m, P~_n]` at rotation angle `beta`.
pub fn gamma_element(j: HalfInt, m: HalfInt, n: HalfInt, k: HalfInt, k_prime: HalfInt, beta: f64) -> Result<f64> {
    j.as_spin()?;
    for label in [m, n, k, k_prime] {
        label.check_label_of(j)?;
    }
    let d_mn = wigner_d_element(j, m, n, beta)?;
    let left = if k == m { wigner_d_element(j, k_prime, n, beta)? } else { 0.0 };
    let right = if k_prime == m { wigner_d_element(j, k, n, beta)? } else { 0.0 };
    Ok(d_mn * (left - right))
}

/// A total spin `j` and row label `k != m` with `d^j_{m,n} d^j_{k,n} != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub j: HalfInt,
    pub k: HalfInt,
    /// `d^j_{m,n}(beta) d^j_{k,n}(beta)`.
    pub product: f64,
}

fn d_product(j: HalfInt, m: HalfInt, n: HalfInt, k: HalfInt, beta: f64) -> Option<f64> {
    let a = wigner_d_element(j, m, n, beta).ok()?;
    let b = wigner_d_element(j, k, n, beta).ok()?;
    Some(a * b)
}

fn accept(j: HalfInt, m: HalfInt, n: HalfInt, k: HalfInt, beta: f64) -> Option<Witness> {
    let product = d_product(j, m, n, k, beta)?;
    (k != m && product.abs() > WITNESS_THRESHOLD).then_some(Witness { j, k, product })
}

/// Labels of `j` other than `m`, ordered by `|k|` with positive before negative.
fn ordered_rows(j: HalfInt, m: HalfInt) -> Vec<HalfInt> {
    let mut rows: Vec<HalfInt> = HalfInt::labels(j).filter(|k| *k != m).collect();
    rows.sort_by_key(|k| (k.abs(), *k < HalfInt::ZERO));
    rows
}

/// Finds `(j, k)` showing that `[P_m, P~_n] != 0` at angle `beta`, using only
/// total spins from `j_values`.
///
/// * `m = n = 0`: the smallest `j >= 1` with `P_j(cos beta) != 0`, and `k = j`.
/// * otherwise `j = max(|m|, |n|)`; if `|m| > |n|` then `k = -m`, else the
///   `k != m` of smallest `|k|` (positive first).
///
/// When the prescribed `j` is not available the remaining `j_values` are
/// searched in ascending order with the same row ordering. `None` means no
/// available `j` produces a non-zero product.
pub fn witness(m: HalfInt, n: HalfInt, beta: f64, j_values: &[HalfInt]) -> Option<Witness> {
    let mut js: Vec<HalfInt> = j_values.iter().copied().filter(|j| *j >= HalfInt::ZERO).collect();
    js.sort();
    js.dedup();
    let available = |j: HalfInt| js.binary_search(&j).is_ok() && m.is_label_of(j) && n.is_label_of(j);

    if m == HalfInt::ZERO && n == HalfInt::ZERO {
        let x = beta.cos();
        for &j in js.iter().filter(|j| j.is_integer() && **j >= HalfInt::ONE) {
            let p = legendre(j.twice() as u32 / 2, x).ok()?;
            if p.abs() > LEGENDRE_SCAN_THRESHOLD {
                if let Some(w) = accept(j, m, n, j, beta) {
                    return Some(w);
                }
            }
        }
    } else {
        let j = m.abs().max(n.abs());
        if available(j) {
            let k = if m.abs() > n.abs() { -m } else { ordered_rows(j, m)[0] };
            if let Some(w) = accept(j, m, n, k, beta) {
                return Some(w);
            }
        }
    }

    js.iter()
        .copied()
        .filter(|j| available(*j))
        .find_map(|j| ordered_rows(j, m).into_iter().find_map(|k| accept(j, m, n, k, beta)))
}

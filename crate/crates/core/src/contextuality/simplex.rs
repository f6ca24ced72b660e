//! Phase-I simplex with Bland's rule for `A x = b, x >= 0` where `A` has 0/1
//! entries. Generic over exact rationals and `f64`.

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic needed by the tableau.
pub(crate) trait Field: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_positive(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_nonzero(&self) -> bool {
        self.is_positive() || self.is_negative()
    }
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn to_f64(&self) -> f64;
}

/// Entries this close to zero are treated as zero in floating point.
const PIVOT_EPS: f64 = 1e-12;

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_positive(&self) -> bool {
        *self > PIVOT_EPS
    }
    fn is_negative(&self) -> bool {
        *self < -PIVOT_EPS
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Optimum of `min 1'a` subject to `A x + a = b`, `x, a >= 0`.
#[derive(Clone, Debug)]
pub(crate) struct PhaseOne<T> {
    /// Optimal total artificial weight; zero exactly when `A x = b` is feasible.
    pub value: T,
    /// Non-zero structural variables `(column, value)`.
    pub primal: Vec<(usize, T)>,
    /// Row multipliers `y` with `y'A <= 0` and `y'b = value`.
    pub dual: Vec<T>,
}

/// `columns[j]` lists the rows where column `j` of `A` equals one. `b` must
/// be non-negative.
pub(crate) fn phase_one<T: Field>(columns: &[Vec<usize>], b: &[T]) -> PhaseOne<T> {
    let rows = b.len();
    let n = columns.len();
    let width = n + rows + 1;
    let rhs = width - 1;
    let mut tab = vec![vec![T::zero(); width]; rows];
    let mut cost = vec![T::zero(); width];
    for (j, column) in columns.iter().enumerate() {
        for &i in column {
            tab[i][j] = T::one();
            cost[j] = cost[j].sub(&T::one());
        }
    }
    let mut total = T::zero();
    for i in 0..rows {
        tab[i][n + i] = T::one();
        tab[i][rhs] = b[i].clone();
        total = total.add(&b[i]);
    }
    // the objective row carries -w in its last slot
    cost[rhs] = T::zero().sub(&total);
    let mut basis: Vec<usize> = (n..n + rows).collect();

    while let Some(enter) = (0..rhs).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, T)> = None;
        for i in 0..rows {
            if !tab[i][enter].is_positive() {
                continue;
            }
            let ratio = tab[i][rhs].div(&tab[i][enter]);
            let better = match &leave {
                None => true,
                Some((r, best)) => {
                    let diff = ratio.sub(best);
                    diff.is_negative() || (!diff.is_positive() && basis[i] < basis[*r])
                }
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // the objective is bounded below by zero, so a leaving row exists
        let Some((r, _)) = leave else { break };
        let pivot = tab[r][enter].clone();
        for v in tab[r].iter_mut() {
            *v = v.div(&pivot);
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || !row[enter].is_nonzero() {
                continue;
            }
            let factor = row[enter].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if p.is_nonzero() {
                    *v = v.sub(&factor.mul(p));
                }
            }
        }
        let factor = cost[enter].clone();
        for (v, p) in cost.iter_mut().zip(&pivot_row) {
            if p.is_nonzero() {
                *v = v.sub(&factor.mul(p));
            }
        }
        basis[r] = enter;
    }

    let value = T::zero().sub(&cost[rhs]);
    let primal = basis
        .iter()
        .zip(&tab)
        .filter(|(j, row)| **j < n && row[rhs].is_nonzero())
        .map(|(j, row)| (*j, row[rhs].clone()))
        .collect();
    let dual = (0..rows).map(|i| T::one().sub(&cost[n + i])).collect();
    PhaseOne { value, primal, dual }
}

//! Wigner small-d matrices `d^j_{m',m}(beta) = <j m'| exp(-i beta Jy) |j m>`.
//!
//! Elements come from the explicit finite sum
//!
//! ```text
//! d^j_{m',m} = sqrt[(j+m')!(j-m')! / ((j+m)!(j-m)!)] (-1)^(j+m')
//!              * sum_v (-1)^v C(j+m, v) C(j-m, j+m'-v) c^(2v-m-m') s^(2j+m+m'-2v)
//! ```
//!
//! with `c = cos(beta/2)`, `s = sin(beta/2)`. Every exponent is non-negative
//! over the summation range `max(0, m+m') <= v <= min(j+m, j+m')`.
//!
//! The sum alternates in sign and cancels catastrophically once `j` grows
//! past ~20 (at `beta = pi/2` the absolute terms for `d^50_{00}` add up to
//! ~1e14). It is therefore accumulated exactly: `c` and `s` are taken as the
//! dyadic rationals their `f64` values represent, the binomials as big
//! integers, and the only rounding happens in the final conversion. The
//! result is the exact d-function evaluated at the rounded `(c, s)`, which
//! is well conditioned.
//!
//! Full matrices above [`EXACT_MATRIX_MAX_TWICE_J`] are grown from the top
//! exact matrix by the spin-½ coupling recursion, which only forms sums of
//! products with non-negative Clebsch-Gordan weights.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{HalfInt, RealMatrix};
use crate::error::{Error, Result};

/// Largest `2j` for which [`wigner_d_matrix`] evaluates every element by the exact sum.
pub const EXACT_MATRIX_MAX_TWICE_J: i32 = 60;

fn check_beta(beta: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::PI).contains(&beta) {
        return Err(Error::Domain(format!("rotation angle {beta} outside [0, pi]")));
    }
    Ok(())
}

/// Single element `d^j_{m_row, m_col}(beta)`.
pub fn wigner_d_element(j: HalfInt, m_row: HalfInt, m_col: HalfInt, beta: f64) -> Result<f64> {
    j.as_spin()?;
    m_row.check_label_of(j)?;
    m_col.check_label_of(j)?;
    check_beta(beta)?;
    let tables = ExactSum::new(j, beta);
    Ok(tables.element(m_row, m_col))
}

/// Full `(2j+1) x (2j+1)` d-matrix, rows and columns ordered `m = j, ..., -j`.
pub fn wigner_d_matrix(j: HalfInt, beta: f64) -> Result<RealMatrix> {
    j.as_spin()?;
    check_beta(beta)?;
    if j.twice() <= EXACT_MATRIX_MAX_TWICE_J {
        return Ok(exact_matrix(j, beta));
    }
    let start = HalfInt::from_twice(EXACT_MATRIX_MAX_TWICE_J);
    let half = half_matrix(beta);
    let mut current = exact_matrix(start, beta);
    let mut jj = start;
    while jj < j {
        jj = jj + HalfInt::HALF;
        current = couple_half(&current, jj, &half);
    }
    Ok(current)
}

fn exact_matrix(j: HalfInt, beta: f64) -> RealMatrix {
    let tables = ExactSum::new(j, beta);
    let dim = j.multiplet_dim();
    let rows: Vec<Vec<f64>> = (0..dim)
        .into_par_iter()
        .map(|r| {
            let m_row = HalfInt::label_at(j, r);
            (0..dim).map(|c| tables.element(m_row, HalfInt::label_at(j, c))).collect()
        })
        .collect();
    RealMatrix::from_fn(dim, dim, |r, c| rows[r][c])
}

fn half_matrix(beta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (beta / 2.0).sin_cos();
    [[c, -s], [s, c]]
}

/// `d^j` from `d^{j-1/2}` via `|j m> = sum_sigma CG |j-1/2, m-sigma> |sigma>`.
fn couple_half(prev: &RealMatrix, j: HalfInt, half: &[[f64; 2]; 2]) -> RealMatrix {
    let jp = j - HalfInt::HALF;
    let dim = j.multiplet_dim();
    let jf = j.to_f64();
    let lookup = |m: HalfInt, mp: HalfInt| -> f64 {
        if m.is_label_of(jp) && mp.is_label_of(jp) {
            prev[(m.index_in(jp), mp.index_in(jp))]
        } else {
            0.0
        }
    };
    RealMatrix::from_fn(dim, dim, |r, c| {
        let m = HalfInt::label_at(j, r);
        let mp = HalfInt::label_at(j, c);
        let (mf, mpf) = (m.to_f64(), mp.to_f64());
        let mut acc = 0.0;
        // sigma, sigma' in {+1/2, -1/2}; weights sqrt(j +- m) / sqrt(2j)
        for (si, sigma) in [HalfInt::HALF, -HalfInt::HALF].into_iter().enumerate() {
            let wa = jf + sigma.to_f64() * 2.0 * mf;
            for (sj, sigma_p) in [HalfInt::HALF, -HalfInt::HALF].into_iter().enumerate() {
                let wb = jf + sigma_p.to_f64() * 2.0 * mpf;
                if wa <= 0.0 || wb <= 0.0 {
                    continue;
                }
                acc += (wa * wb).sqrt() * lookup(m - sigma, mp - sigma_p) * half[si][sj];
            }
        }
        acc / (2.0 * jf)
    })
}

/// Per-`(j, beta)` tables for exact evaluation of the explicit sum.
struct ExactSum {
    j: HalfInt,
    /// `weights[a] = c^a s^(2j-a) / 2^exponent`, exact.
    weights: Vec<BigInt>,
    exponent: i64,
    binomials: Vec<Vec<BigUint>>,
    factorials: Vec<BigUint>,
}

impl ExactSum {
    fn new(j: HalfInt, beta: f64) -> Self {
        let two_j = j.twice() as usize;
        let (s, c) = (beta / 2.0).sin_cos();
        let (cm, ce) = decompose(c);
        let (sm, se) = decompose(s);

        let mut cpow = Vec::with_capacity(two_j + 1);
        let mut spow = Vec::with_capacity(two_j + 1);
        let (mut cp, mut sp) = (BigUint::one(), BigUint::one());
        for _ in 0..=two_j {
            cpow.push(cp.clone());
            spow.push(sp.clone());
            cp *= cm;
            sp *= sm;
        }
        let raw: Vec<(BigUint, i64)> = (0..=two_j)
            .map(|a| {
                let b = two_j - a;
                (&cpow[a] * &spow[b], a as i64 * ce + b as i64 * se)
            })
            .collect();
        let exponent = raw.iter().filter(|(v, _)| !v.is_zero()).map(|(_, e)| *e).min().unwrap_or(0);
        let weights = raw
            .into_iter()
            .map(|(v, e)| {
                if v.is_zero() {
                    BigInt::zero()
                } else {
                    BigInt::from_biguint(Sign::Plus, v << (e - exponent) as usize)
                }
            })
            .collect();

        let mut binomials: Vec<Vec<BigUint>> = Vec::with_capacity(two_j + 1);
        for n in 0..=two_j {
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &binomials[n - 1][k - 1] + &binomials[n - 1][k];
            }
            binomials.push(row);
        }
        let mut factorials = vec![BigUint::one()];
        for n in 1..=two_j {
            let next = &factorials[n - 1] * n;
            factorials.push(next);
        }
        ExactSum { j, weights, exponent, binomials, factorials }
    }

    fn binomial(&self, n: i64, k: i64) -> Option<&BigUint> {
        if n < 0 || k < 0 || k > n {
            None
        } else {
            Some(&self.binomials[n as usize][k as usize])
        }
    }

    fn element(&self, m_row: HalfInt, m_col: HalfInt) -> f64 {
        let j2 = i64::from(self.j.twice());
        let (mp2, m2) = (i64::from(m_row.twice()), i64::from(m_col.twice()));
        // integer quantities j+m, j-m, j+m', m+m'
        let j_plus_m = (j2 + m2) / 2;
        let j_minus_m = (j2 - m2) / 2;
        let j_plus_mp = (j2 + mp2) / 2;
        let j_minus_mp = (j2 - mp2) / 2;
        let m_sum = (m2 + mp2) / 2;

        let lo = m_sum.max(0);
        let hi = j_plus_m.min(j_plus_mp);
        let mut acc = BigInt::zero();
        for v in lo..=hi {
            let (Some(b1), Some(b2)) = (self.binomial(j_plus_m, v), self.binomial(j_minus_m, j_plus_mp - v)) else {
                continue;
            };
            let a = (2 * v - m_sum) as usize;
            let term = &self.weights[a] * BigInt::from_biguint(Sign::Plus, b1 * b2);
            if v % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let sum = scaled_to_f64(&acc, self.exponent);
        let ratio = BigRational::new(
            BigInt::from(&self.factorials[j_plus_mp as usize] * &self.factorials[j_minus_mp as usize]),
            BigInt::from(&self.factorials[j_plus_m as usize] * &self.factorials[j_minus_m as usize]),
        );
        let prefactor = ratio.to_f64().expect("finite factorial ratio").sqrt();
        let sign = if j_plus_mp % 2 == 0 { 1.0 } else { -1.0 };
        sign * prefactor * sum
    }
}

/// `x = mantissa * 2^exponent` with an odd (or zero) mantissa; `x >= 0` finite.
fn decompose(x: f64) -> (u64, i64) {
    debug_assert!(x >= 0.0 && x.is_finite());
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut mant, mut exp) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
    let tz = mant.trailing_zeros();
    mant >>= tz;
    exp += i64::from(tz);
    (mant, exp)
}

/// `value * 2^exponent` rounded to `f64`.
fn scaled_to_f64(value: &BigInt, exponent: i64) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    let magnitude = value.magnitude();
    let bits = magnitude.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = (magnitude >> shift as usize).to_u64().expect("64-bit head") as f64;
    let out = ldexp(top, exponent + shift);
    if value.sign() == Sign::Minus {
        -out
    } else {
        out
    }
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::{legendre, rotation_oracle};
    use std::f64::consts::PI;

    fn orthogonality_error(d: &RealMatrix) -> f64 {
        let n = d.nrows();
        (d * d.transpose() - RealMatrix::identity(n, n)).amax()
    }

    #[test]
    fn decompose_is_exact() {
        for x in [1.0, 0.5, std::f64::consts::FRAC_1_SQRT_2, 1e-310, 3.0e10, 0.1] {
            let (m, e) = decompose(x);
            assert_eq!(ldexp(m as f64, e), x);
            assert_eq!(m % 2, 1);
        }
        assert_eq!(scaled_to_f64(&BigInt::from(-3), -1), -1.5);
        let big = BigInt::from(1u8) << 300usize;
        assert_eq!(scaled_to_f64(&big, -300), 1.0);
    }

    #[test]
    fn identity_at_zero_angle() {
        for twice in 0..=12 {
            let j = HalfInt::from_twice(twice);
            let d = wigner_d_matrix(j, 0.0).unwrap();
            assert_eq!(d, RealMatrix::identity(j.multiplet_dim(), j.multiplet_dim()));
        }
    }

    #[test]
    fn spin_half_at_quarter_turn() {
        let d = wigner_d_matrix(HalfInt::HALF, PI / 2.0).unwrap();
        let (c, s) = ((PI / 4.0).cos(), (PI / 4.0).sin());
        let expect = RealMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        assert!((d - expect).amax() < 1e-15);
    }

    #[test]
    fn spin_one_closed_form() {
        // d^1 in the m = 1, 0, -1 basis
        let beta = 0.8_f64;
        let (c, s) = (beta.cos(), beta.sin());
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = RealMatrix::from_row_slice(
            3,
            3,
            &[(1.0 + c) / 2.0, -s * r, (1.0 - c) / 2.0, s * r, c, -s * r, (1.0 - c) / 2.0, s * r, (1.0 + c) / 2.0],
        );
        let d = wigner_d_matrix(HalfInt::ONE, beta).unwrap();
        assert!((d - expect).amax() < 1e-15);
    }

    #[test]
    fn matches_matrix_exponential() {
        for twice in 0..=20 {
            let j = HalfInt::from_twice(twice);
            for beta in [PI / 7.0, PI / 3.0, 2.0 * PI / 3.0] {
                let d = wigner_d_matrix(j, beta).unwrap();
                let oracle = rotation_oracle(j, beta);
                let err = d.iter().zip(oracle.iter()).fold(0.0_f64, |a, (x, z)| a.max((x - z.re).abs()));
                assert!(err <= 1e-9, "j = {j}, beta = {beta}: {err}");
            }
        }
    }

    #[test]
    fn zero_zero_element_is_legendre() {
        for l in 0..=50 {
            let j = HalfInt::from_int(l);
            for i in 1..20 {
                let beta = PI * i as f64 / 20.0;
                let d = wigner_d_element(j, HalfInt::ZERO, HalfInt::ZERO, beta).unwrap();
                let p = legendre(l as u32, beta.cos()).unwrap();
                assert!((d - p).abs() <= 1e-10, "l = {l}, beta = {beta}: {d} vs {p}");
            }
        }
    }

    #[test]
    fn recursion_agrees_with_exact_sum() {
        for twice in [61, 62, 75, 90] {
            let j = HalfInt::from_twice(twice);
            let beta = 1.3;
            let d = wigner_d_matrix(j, beta).unwrap();
            assert!(orthogonality_error(&d) <= 1e-10);
            for (r, c) in [(0, 0), (3, 7), (twice as usize / 2, twice as usize / 2), (10, 2)] {
                let exact = wigner_d_element(j, HalfInt::label_at(j, r), HalfInt::label_at(j, c), beta).unwrap();
                assert!((d[(r, c)] - exact).abs() <= 1e-11, "j = {j} ({r}, {c})");
            }
        }
    }

    #[test]
    fn large_j_stays_orthogonal() {
        let d = wigner_d_matrix(HalfInt::from_int(200), 2.0).unwrap();
        assert!(orthogonality_error(&d) <= 1e-9);
    }

    #[test]
    fn composition() {
        for twice in 0..=20 {
            let j = HalfInt::from_twice(twice);
            let (b1, b2) = (0.4, 1.7);
            let lhs = wigner_d_matrix(j, b1).unwrap() * wigner_d_matrix(j, b2).unwrap();
            let rhs = wigner_d_matrix(j, b1 + b2).unwrap();
            assert!((lhs - rhs).amax() <= 1e-9);
        }
    }

    #[test]
    fn invalid_inputs() {
        let j = HalfInt::ONE;
        assert!(wigner_d_element(j, HalfInt::HALF, HalfInt::ZERO, 0.3).is_err());
        assert!(wigner_d_element(j, HalfInt::from_int(2), HalfInt::ZERO, 0.3).is_err());
        assert!(wigner_d_element(j, HalfInt::ZERO, HalfInt::ZERO, -0.1).is_err());
        assert!(wigner_d_matrix(HalfInt::from_twice(-1), 0.3).is_err());
        assert!(wigner_d_matrix(j, 3.2).is_err());
    }

    #[test]
    fn endpoints_are_finite() {
        let j = HalfInt::from_twice(9);
        let d = wigner_d_matrix(j, PI).unwrap();
        assert!(orthogonality_error(&d) <= 1e-12);
        // d^j_{m',m}(pi) = (-1)^(j-m) delta_{m',-m}
        for (c, m) in HalfInt::labels(j).enumerate() {
            let r = (-m).index_in(j);
            let sign = if ((j - m).twice() / 2) % 2 == 0 { 1.0 } else { -1.0 };
            assert!((d[(r, c)] - sign).abs() < 1e-15);
        }
    }
}

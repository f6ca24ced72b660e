//! Exact half-integer quantum numbers.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A half-integer stored as twice its value, so `HalfInt::from_twice(3)` is 3/2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt {
    twice: i32,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    #[inline]
    pub const fn from_twice(twice: i32) -> Self {
        HalfInt { twice }
    }

    #[inline]
    pub const fn from_int(value: i32) -> Self {
        HalfInt { twice: 2 * value }
    }

    #[inline]
    pub const fn twice(self) -> i32 {
        self.twice
    }

    #[inline]
    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    #[inline]
    pub const fn abs(self) -> Self {
        HalfInt { twice: self.twice.abs() }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        f64::from(self.twice) / 2.0
    }

    /// Whether `self` and `other` differ by an integer.
    #[inline]
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    /// Dimension `2j + 1` of the spin-`j` irrep.
    #[inline]
    pub fn multiplet_dim(self) -> usize {
        debug_assert!(self.twice >= 0);
        self.twice as usize + 1
    }

    /// Checks that `self` is a valid spin value (`j >= 0`).
    pub fn as_spin(self) -> Result<HalfInt> {
        if self.twice < 0 {
            return Err(Error::InvalidQuantumNumber(format!("spin {self} is negative")));
        }
        Ok(self)
    }

    /// Whether `self` is a magnetic label of spin `j`.
    #[inline]
    pub fn is_label_of(self, j: HalfInt) -> bool {
        j.twice >= 0 && self.twice.abs() <= j.twice && self.same_parity(j)
    }

    pub fn check_label_of(self, j: HalfInt) -> Result<()> {
        if self.is_label_of(j) {
            Ok(())
        } else {
            Err(Error::InvalidQuantumNumber(format!("m = {self} is not a label of j = {j}")))
        }
    }

    /// Row/column position of label `self` in the spin-`j` basis `j, j-1, ..., -j`.
    #[inline]
    pub fn index_in(self, j: HalfInt) -> usize {
        debug_assert!(self.is_label_of(j));
        ((j.twice - self.twice) / 2) as usize
    }

    /// Label at basis position `index` of spin `j`.
    #[inline]
    pub fn label_at(j: HalfInt, index: usize) -> HalfInt {
        HalfInt { twice: j.twice - 2 * index as i32 }
    }

    /// Magnetic labels of spin `j` in descending order.
    pub fn labels(j: HalfInt) -> impl DoubleEndedIterator<Item = HalfInt> + ExactSizeIterator {
        let top = j.twice;
        let count = if top < 0 { 0 } else { top as usize + 1 };
        (0..count).map(move |i| HalfInt { twice: top - 2 * i as i32 })
    }

    /// `j(j+1)` as a float.
    #[inline]
    pub fn casimir(self) -> f64 {
        let j = self.to_f64();
        j * (j + 1.0)
    }

    /// Multiplies by a non-negative integer count.
    #[inline]
    pub fn times(self, count: u32) -> HalfInt {
        HalfInt { twice: self.twice * count as i32 }
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice + rhs.twice }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt { twice: self.twice - rhs.twice }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    #[inline]
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl From<i32> for HalfInt {
    fn from(value: i32) -> Self {
        HalfInt::from_int(value)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts plain integers and fractions `p/q` with value in ½ℤ.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("'{s}' is not an integer or half-integer"));
        match s.split_once('/') {
            None => {
                let v: i32 = s.parse().map_err(|_| bad())?;
                v.checked_mul(2).map(HalfInt::from_twice).ok_or_else(bad)
            }
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                let den: i64 = den.trim().parse().map_err(|_| bad())?;
                if den <= 0 || (2 * num) % den != 0 {
                    return Err(bad());
                }
                i32::try_from(2 * num / den).map(HalfInt::from_twice).map_err(|_| bad())
            }
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i32),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Int(v) => Ok(HalfInt::from_int(v)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

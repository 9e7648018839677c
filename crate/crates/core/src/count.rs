//! Exact nonnegative counts.

use std::fmt;
use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// An arbitrary-precision nonnegative integer.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn pow(&self, e: u32) -> Self {
        BigCount(self.0.pow(e))
    }

    /// `2^e`.
    pub fn power_of_two(e: u64) -> Self {
        BigCount(BigUint::one() << e)
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// Base-2 logarithm from the bit length and the leading 64 bits.
    pub fn log2(&self) -> Option<f64> {
        if self.0.is_zero() {
            return None;
        }
        let bits = self.0.bits();
        if bits <= 64 {
            return Some(f64::log2(self.0.to_u64().unwrap() as f64));
        }
        let top = (&self.0 >> (bits - 64)).to_u64().unwrap();
        // top in [2^63, 2^64)
        Some((bits - 64) as f64 + (top as f64).log2())
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl std::str::FromStr for BigCount {
    type Err = num_bigint::ParseBigIntError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim().parse::<BigUint>().map(BigCount)
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn add(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl AddAssign<&BigCount> for BigCount {
    fn add_assign(&mut self, rhs: &BigCount) {
        self.0 += &rhs.0;
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

impl Serialize for BigCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Pascal's triangle of exact binomial coefficients.
#[derive(Clone, Debug)]
pub struct Binomials {
    rows: Vec<Vec<BigUint>>,
}

impl Binomials {
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let mut row = vec![BigUint::one(); n + 1];
            for k in 1..n {
                row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
            }
            rows.push(row);
        }
        Binomials { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, k)`, zero when `k > n`.
    pub fn get(&self, n: usize, k: usize) -> &BigUint {
        static ZERO: std::sync::OnceLock<BigUint> = std::sync::OnceLock::new();
        if k > n {
            return ZERO.get_or_init(BigUint::zero);
        }
        &self.rows[n][k]
    }
}

/// `C(n, k)` computed directly.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    BigCount(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_matches_direct() {
        let b = Binomials::new(40);
        for n in 0..=40u64 {
            for k in 0..=n {
                assert_eq!(b.get(n as usize, k as usize), &binomial(n, k).0);
            }
        }
        assert!(b.get(3, 5).is_zero());
    }

    #[test]
    fn log2_exact_powers() {
        assert_eq!(BigCount::from(64).log2(), Some(6.0));
        let big = BigCount::power_of_two(200);
        assert!((big.log2().unwrap() - 200.0).abs() < 1e-12);
        assert_eq!(BigCount::zero().log2(), None);
    }

    #[test]
    fn log2_non_power() {
        let v = BigCount::from(3u64).pow(100);
        let want = 100.0 * 3f64.log2();
        assert!((v.log2().unwrap() - want).abs() < 1e-9);
    }
}

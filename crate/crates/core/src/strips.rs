//! Closed recursions for grids of width 1, 2 and 3.
//!
//! Shapes used by the recursions, all with a horizontal base on `y = 0`:
//!
//! * width-1 trapezoid with vertical sides `a`, `b`: `g1(a, b) = C(a+b, a)`;
//! * width-2 trapezoid `(0,0) (2,0) (2,B) (0,A)` with `A + B` odd: `g2(A, B)`;
//! * hook `(0,0) (3,0) (3,D) (2,C) (2,B) (0,A)` with `A + B` odd and `B <= C`:
//!   `h(A, B, C, D)`.
//!
//! Each recursion splits along the highest diagonal of width at least 2.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::count::{BigCount, Binomials};
use crate::error::{Error, Result};

pub fn g1(a: u64, b: u64) -> BigCount {
    crate::count::binomial(a + b, a)
}

/// `f(1, n)`.
pub fn count_width1(n: u32) -> BigCount {
    g1(u64::from(n), u64::from(n))
}

/// Memo tables for `g2` and the hook count, valid for arguments up to `max`.
#[derive(Debug)]
pub struct StripTables {
    max: usize,
    binom: Binomials,
    g2: Vec<Option<BigUint>>,
    hook: Vec<Option<BigUint>>,
}

impl StripTables {
    pub fn new(max: u32) -> Self {
        let max = max as usize;
        let side = max + 1;
        StripTables { max, binom: Binomials::new(4 * max + 4), g2: vec![None; side * side], hook: Vec::new() }
    }

    pub fn max(&self) -> u32 {
        self.max as u32
    }

    /// `C(n, k)` with the convention that negative or out-of-range arguments give 0.
    fn c(&self, n: i64, k: i64) -> &BigUint {
        if n < 0 || k < 0 || k > n {
            return self.binom.get(0, 1);
        }
        self.binom.get(n as usize, k as usize)
    }

    fn check(&self, args: &[u32]) -> Result<()> {
        if args.iter().any(|&v| v as usize > self.max) {
            return Err(Error::Precondition(format!("arguments {args:?} exceed table bound {}", self.max)));
        }
        Ok(())
    }

    pub fn g2(&mut self, a: u32, b: u32) -> Result<BigCount> {
        self.check(&[a, b])?;
        if (a + b).is_multiple_of(2) {
            return Err(Error::Precondition(format!("g2({a},{b}) needs an odd side sum")));
        }
        Ok(BigCount(self.g2_rec(i64::from(a), i64::from(b)).clone()))
    }

    fn g2_slot(&self, a: i64, b: i64) -> usize {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        lo as usize * (self.max + 1) + hi as usize
    }

    fn g2_rec(&mut self, big_a: i64, big_b: i64) -> &BigUint {
        let slot = self.g2_slot(big_a, big_b);
        if self.g2[slot].is_none() {
            let mut total = self.c((3 * big_a + big_b - 1) / 2, big_a) * self.c((big_a + 3 * big_b - 1) / 2, big_b);
            for a in 0..=big_a {
                for b in 0..=big_b {
                    if (a + b) % 2 == 0 || a + b >= big_a + big_b {
                        continue;
                    }
                    let left = self.c((3 * big_a + big_b - 3 * a - b) / 2 - 1, big_a - a);
                    let right = self.c((big_a + 3 * big_b - a - 3 * b) / 2 - 1, big_b - b);
                    if left.is_zero() || right.is_zero() {
                        continue;
                    }
                    let weight = left * right;
                    total += self.g2_rec(a, b) * weight;
                }
            }
            self.g2[slot] = Some(total);
        }
        self.g2[slot].as_ref().unwrap()
    }

    pub fn hook(&mut self, a: u32, b: u32, c: u32, d: u32) -> Result<BigCount> {
        self.check(&[a, b, c, d])?;
        if (a + b).is_multiple_of(2) || b > c {
            return Err(Error::Precondition(format!("hook({a},{b},{c},{d}) needs an odd A+B and B <= C")));
        }
        if self.hook.is_empty() {
            self.hook = vec![None; (self.max + 1).pow(4)];
        }
        Ok(BigCount(self.hook_rec(i64::from(a), i64::from(b), i64::from(c), i64::from(d)).clone()))
    }

    fn hook_slot(&self, a: i64, b: i64, c: i64, d: i64) -> usize {
        let s = self.max + 1;
        ((a as usize * s + b as usize) * s + c as usize) * s + d as usize
    }

    fn hook_rec(&mut self, big_a: i64, big_b: i64, big_c: i64, big_d: i64) -> &BigUint {
        debug_assert!((big_a + big_b) % 2 == 1 && big_b <= big_c);
        let slot = self.hook_slot(big_a, big_b, big_c, big_d);
        if self.hook[slot].is_none() {
            let value = self.hook_value(big_a, big_b, big_c, big_d);
            self.hook[slot] = Some(value);
        }
        self.hook[slot].as_ref().unwrap()
    }

    fn hook_value(&mut self, big_a: i64, big_b: i64, big_c: i64, big_d: i64) -> BigUint {
        let mid = (big_a + big_b - 1) / 2;
        let mut total = self.c((3 * big_a + big_b - 1) / 2, big_a)
            * self.c((big_a + 3 * big_b - 1) / 2, big_b)
            * self.c(big_c + big_d, big_c);

        // highest wide diagonal spans columns 0..2
        for a in 0..=big_a {
            for b in 0..=big_b {
                if (a + b) % 2 == 0 || a + b >= big_a + big_b {
                    continue;
                }
                let left = self.c((3 * big_a + big_b - 3 * a - b) / 2 - 1, big_a - a);
                let right = self.c((big_a + 3 * big_b - a - 3 * b) / 2 - 1, big_b - b);
                if left.is_zero() || right.is_zero() {
                    continue;
                }
                let weight = left * right;
                total += self.hook_rec(a, b, big_c, big_d) * weight;
            }
        }

        // highest wide diagonal spans columns 1..3
        for a in 0..=big_d {
            for b in 0..=mid {
                if (a + b) % 2 == 0 || (a + b + 1) / 2 > big_b {
                    continue;
                }
                let outer = self.c(big_d + big_c - (3 * a + b + 1) / 2, big_d - a);
                let inner = self.c((big_a + 3 * big_b - a - 3 * b) / 2 - 1, big_b - (a + b + 1) / 2);
                if outer.is_zero() || inner.is_zero() {
                    continue;
                }
                let weight = outer * inner;
                total += self.hook_rec(a, b, mid, big_a) * weight;
            }
        }

        // a width-3 diagonal
        let far = 3 * big_b - big_a - 1;
        if far >= 0 && far / 2 <= big_d {
            let weight = self.c(big_c + big_d - (5 * big_b - big_a - 1) / 2, big_c - big_b).clone();
            if !weight.is_zero() {
                total += self.hook_rec(far / 2, mid, mid, big_a) * weight;
            }
        }
        total
    }

    /// `f(2, n)`; requires `n <= max`.
    pub fn count_width2(&mut self, n: u32) -> Result<BigCount> {
        self.check(&[n])?;
        let n = i64::from(n);
        let mut total = self.c(2 * n, n).pow(2);
        let mut sum = BigUint::zero();
        for big_b in 0..=n {
            for big_a in 0..big_b {
                if (big_a + big_b) % 2 == 0 {
                    continue;
                }
                let w = self.c(2 * n - (3 * big_a + big_b + 1) / 2, n - big_a)
                    * self.c(2 * n - (big_a + 3 * big_b + 1) / 2, n - big_b);
                sum += self.g2_rec(big_a, big_b) * w;
            }
        }
        total += sum * 2u32;
        Ok(BigCount(total))
    }

    /// `f(3, n)`; requires `n <= max`.
    pub fn count_width3(&mut self, n: u32) -> Result<BigCount> {
        self.check(&[n])?;
        if self.hook.is_empty() {
            self.hook = vec![None; (self.max + 1).pow(4)];
        }
        let n = i64::from(n);
        let mut total = self.c(2 * n, n).pow(3);
        let mut sum = BigUint::zero();
        for big_a in 0..=n {
            for big_b in 0..=n {
                if (big_a + big_b) % 2 == 0 {
                    continue;
                }
                let w = self.c(2 * n - (3 * big_a + big_b + 1) / 2, n - big_a)
                    * self.c(2 * n - (big_a + 3 * big_b + 1) / 2, n - big_b);
                sum += self.hook_rec(big_a, big_b, n, n) * w;
            }
        }
        total += sum * 2u32;
        Ok(BigCount(total))
    }
}

pub fn g2(a: u32, b: u32) -> Result<BigCount> {
    StripTables::new(a.max(b)).g2(a, b)
}

pub fn hook(a: u32, b: u32, c: u32, d: u32) -> Result<BigCount> {
    StripTables::new(a.max(b).max(c).max(d)).hook(a, b, c, d)
}

pub fn count_width2(n: u32) -> BigCount {
    StripTables::new(n).count_width2(n).expect("table sized for n")
}

pub fn count_width3(n: u32) -> BigCount {
    StripTables::new(n).count_width3(n).expect("table sized for n")
}

/// `f(m, n)` for `m <= 3` (either orientation).
pub fn count_strip(m: u32, n: u32) -> Result<BigCount> {
    match (m.min(n), m.max(n)) {
        (1, k) => Ok(count_width1(k)),
        (2, k) => Ok(count_width2(k)),
        (3, k) => Ok(count_width3(k)),
        _ => Err(Error::Precondition(format!("strip recursions need a side of length 1, 2 or 3, got {m}x{n}"))),
    }
}

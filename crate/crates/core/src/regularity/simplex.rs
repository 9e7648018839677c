//! Phase-one simplex over exact integers.
//!
//! The question is whether `A h > 0` has a solution, where the rows of `A`
//! are the constraints. By Gordan's alternative exactly one of these holds:
//!
//! * some `h` has `A h > 0`;
//! * some `y >= 0`, `y != 0` has `yᵀ A = 0`.
//!
//! We run phase one on `{ y >= 0 : Aᵀ y = 0, Σ y = 1 }` with one artificial
//! variable per equation. A zero optimum yields `y`. Otherwise the simplex
//! multipliers of the final basis give `h` with `A h >= w > 0`, where `w` is
//! the optimum.
//!
//! Tableau rows are integer vectors known only up to a positive factor;
//! a pivot updates just the rows with a nonzero entry in the pivot column and
//! divides each by the gcd of its entries. The entering column is the first
//! with negative reduced cost (Bland). The system is extremely degenerate, so
//! ties in the ratio test are broken lexicographically on the inverse-basis
//! columns; this alone guarantees termination and cuts the pivot count by an
//! order of magnitude compared with breaking ties by index.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub(crate) trait Exact: Clone + Debug + Ord {
    fn from_i64(v: i64) -> Self;
    fn zero_int() -> Self;
    /// `a * b - c * d`, or `None` on overflow.
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self>;
    fn mul(a: &Self, b: &Self) -> Option<Self>;
    fn sub(a: &Self, b: &Self) -> Option<Self>;
    /// Nonnegative gcd.
    fn gcd(a: &Self, b: &Self) -> Self;
    fn div_exact(a: &Self, b: &Self) -> Self;
    fn is_one(&self) -> bool;
    fn to_big(&self) -> BigInt;

    fn signum(&self) -> Ordering {
        self.cmp(&Self::zero_int())
    }
}

macro_rules! machine_exact {
    ($t:ty) => {
        impl Exact for $t {
            fn from_i64(v: i64) -> Self {
                v as $t
            }
            fn zero_int() -> Self {
                0
            }
            #[inline]
            fn cross(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
                a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)
            }
            fn mul(a: &Self, b: &Self) -> Option<Self> {
                a.checked_mul(*b)
            }
            fn sub(a: &Self, b: &Self) -> Option<Self> {
                a.checked_sub(*b)
            }
            #[inline]
            fn gcd(a: &Self, b: &Self) -> Self {
                let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
                while y != 0 {
                    (x, y) = (y, x % y);
                }
                x as $t
            }
            #[inline]
            fn div_exact(a: &Self, b: &Self) -> Self {
                a / b
            }
            fn is_one(&self) -> bool {
                *self == 1
            }
            fn to_big(&self) -> BigInt {
                BigInt::from(*self)
            }
        }
    };
}

machine_exact!(i64);
machine_exact!(i128);

impl Exact for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn zero_int() -> Self {
        <BigInt as Zero>::zero()
    }
    fn cross(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        Some(a * b - c * d)
    }
    fn mul(a: &Self, b: &Self) -> Option<Self> {
        Some(a * b)
    }
    fn sub(a: &Self, b: &Self) -> Option<Self> {
        Some(a - b)
    }
    fn gcd(a: &Self, b: &Self) -> Self {
        num_integer::Integer::gcd(a, b)
    }
    fn div_exact(a: &Self, b: &Self) -> Self {
        a / b
    }
    fn is_one(&self) -> bool {
        num_traits::One::is_one(self)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn signum(&self) -> Ordering {
        if self.is_negative() {
            Ordering::Less
        } else if self.is_zero() {
            Ordering::Equal
        } else {
            Ordering::Greater
        }
    }
}

/// Outcome of the alternative system, in integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Alternative {
    /// `h` per variable with `A h > 0`; variables outside the equation set get 0.
    Lifting(Vec<BigInt>),
    /// Nonnegative row weights with `yᵀ A = 0`, together with their common denominator.
    Certificate(Vec<BigInt>, BigInt),
}

/// Solve with machine integers, widening to `i128` and then big integers on overflow.
///
/// `rows` are dense over `vars` variables; `equations` lists the variables
/// whose equations `Σ y_i a_ik = 0` are imposed (the rest must be implied).
pub(crate) fn solve(rows: &[Vec<i64>], vars: usize, equations: &[usize]) -> Alternative {
    run::<i64>(rows, vars, equations)
        .or_else(|| run::<i128>(rows, vars, equations))
        .unwrap_or_else(|| run::<BigInt>(rows, vars, equations).expect("big integers do not overflow"))
}

fn run<T: Exact>(rows: &[Vec<i64>], vars: usize, equations: &[usize]) -> Option<Alternative> {
    let r = rows.len();
    let e = equations.len() + 1;
    // y columns, artificial columns, the objective marker, right-hand side
    let mark = r + e;
    let rhs = mark + 1;
    let cols = rhs + 1;
    let one = T::from_i64(1);
    let mut t: Vec<Vec<T>> = vec![vec![T::zero_int(); cols]; e + 1];
    for (i, &k) in equations.iter().enumerate() {
        for (j, row) in rows.iter().enumerate() {
            t[i][j] = T::from_i64(row[k]);
        }
        t[i][r + i] = one.clone();
    }
    let sum = e - 1;
    for cell in &mut t[sum][..r] {
        *cell = one.clone();
    }
    t[sum][r + sum] = one.clone();
    t[sum][rhs] = one.clone();
    let obj = e;
    for j in 0..r {
        let s: i64 = 1 + equations.iter().map(|&k| rows[j][k]).sum::<i64>();
        t[obj][j] = T::from_i64(-s);
    }
    t[obj][mark] = one.clone();
    t[obj][rhs] = T::from_i64(-1);

    // rows are kept up to a positive factor; the basic column of row i is basis[i]
    let mut basis: Vec<usize> = (r..r + e).collect();
    // a zero objective cannot improve further
    while t[obj][rhs].signum() != Ordering::Equal {
        let Some(q) = (0..mark).find(|&j| t[obj][j].signum() == Ordering::Less) else { break };
        let mut leave: Option<usize> = None;
        for i in 0..e {
            if t[i][q].signum() != Ordering::Greater {
                continue;
            }
            leave = Some(match leave {
                None => i,
                Some(p) => {
                    let lhs = T::mul(&t[i][rhs], &t[p][q])?;
                    let rhs_v = T::mul(&t[p][rhs], &t[i][q])?;
                    let mut ord = lhs.cmp(&rhs_v);
                    // lexicographic tie-break on the inverse-basis part
                    let mut k = r;
                    while ord == Ordering::Equal && k < r + e {
                        ord = T::mul(&t[i][k], &t[p][q])?.cmp(&T::mul(&t[p][k], &t[i][q])?);
                        k += 1;
                    }
                    if ord == Ordering::Less {
                        i
                    } else {
                        p
                    }
                }
            });
        }
        let p = leave.expect("phase one is bounded below");
        let pivot_row = std::mem::take(&mut t[p]);
        let piv = pivot_row[q].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == p || row[q].signum() == Ordering::Equal {
                continue;
            }
            let f = row[q].clone();
            let mut g = T::zero_int();
            for j in 0..cols {
                let v = T::cross(&piv, &row[j], &f, &pivot_row[j])?;
                if !g.is_one() {
                    g = T::gcd(&g, &v);
                }
                row[j] = v;
            }
            if g.signum() == Ordering::Greater && !g.is_one() {
                for v in row.iter_mut() {
                    *v = T::div_exact(v, &g);
                }
            }
        }
        t[p] = pivot_row;
        basis[p] = q;
    }

    if t[obj][rhs].signum() == Ordering::Equal {
        // y_j = rhs / (entry of its own column) in its row; bring to a common denominator
        let mut y = vec![BigRational::zero(); r];
        for (i, &b) in basis.iter().enumerate() {
            if b < r {
                y[b] = BigRational::new(t[i][rhs].to_big(), t[i][b].to_big());
            }
        }
        let denom = y.iter().fold(BigInt::from(1), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
        let y = y.into_iter().map(|v| (v * BigRational::from_integer(denom.clone())).to_integer()).collect();
        Some(Alternative::Certificate(y, denom))
    } else {
        // reduced costs are t[obj] / scale
        let scale = &t[obj][mark];
        let mut h = vec![BigInt::zero(); vars];
        for (i, &k) in equations.iter().enumerate() {
            h[k] = T::sub(&t[obj][r + i], scale)?.to_big();
        }
        Some(Alternative::Lifting(h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(rows: &[Vec<i64>], vars: usize) -> Alternative {
        let eq: Vec<usize> = (0..vars).collect();
        let a = solve(rows, vars, &eq);
        let b = run::<BigInt>(rows, vars, &eq).unwrap();
        assert_eq!(a, b);
        match &a {
            Alternative::Lifting(h) => {
                for row in rows {
                    let s: BigInt = row.iter().zip(h).map(|(c, x)| x * c).sum();
                    assert!(s > BigInt::zero());
                }
            }
            Alternative::Certificate(y, d) => {
                assert!(y.iter().all(|v| !v.is_negative()));
                assert_eq!(y.iter().sum::<BigInt>(), *d);
                for k in 0..vars {
                    let s: BigInt = rows.iter().zip(y).map(|(row, w)| w * row[k]).sum();
                    assert!(s.is_zero());
                }
            }
        }
        a
    }

    #[test]
    fn feasible_pair() {
        // h0 - h1 > 0 and h0 - h2 > 0
        let a = check(&[vec![1, -1, 0], vec![1, 0, -1]], 3);
        assert!(matches!(a, Alternative::Lifting(_)));
    }

    #[test]
    fn opposite_rows_conflict() {
        let a = check(&[vec![1, -1], vec![-1, 1]], 2);
        assert!(matches!(a, Alternative::Certificate(..)));
    }

    #[test]
    fn three_cycle_conflicts() {
        let a = check(&[vec![1, -1, 0], vec![0, 1, -1], vec![-1, 0, 1]], 3);
        match a {
            Alternative::Certificate(y, d) => assert!(y.iter().all(|v| v * 3 == d)),
            _ => panic!("cycle is infeasible"),
        }
    }

    #[test]
    fn empty_system_is_feasible() {
        assert_eq!(check(&[], 2), Alternative::Lifting(vec![BigInt::from(-1), BigInt::from(-1)]));
    }
}

//! Exact integer and rational linear algebra over edge spaces.
//!
//! Ranks are over the rationals. A rank modulo a large prime is a lower bound
//! for the rational rank, so it doubles as a fast pre-pass: when it already
//! meets the caller's upper bound the rational rank is settled, otherwise
//! fraction-free (Bareiss) elimination decides.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// 2^61 - 1.
const PRIME: u64 = (1u64 << 61) - 1;

fn to_mod(x: i64) -> u64 {
    let r = (x as i128).rem_euclid(PRIME as i128);
    r as u64
}

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

/// Incremental row echelon form modulo `2^61 - 1`.
#[derive(Clone, Debug, Default)]
pub struct ModPBasis {
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModPBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `row` if it is independent of the current rows. Returns whether it was.
    pub fn insert(&mut self, row: &[i64]) -> bool {
        let mut r: Vec<u64> = row.iter().map(|&x| to_mod(x)).collect();
        for (pivot, b) in &self.rows {
            let f = r[*pivot];
            if f != 0 {
                for (x, &y) in r.iter_mut().zip(b) {
                    if y != 0 {
                        *x = (*x + PRIME - mul_mod(f, y)) % PRIME;
                    }
                }
            }
        }
        match r.iter().position(|&x| x != 0) {
            Some(p) => {
                let inv = inv_mod(r[p]);
                for x in r.iter_mut() {
                    *x = mul_mod(*x, inv);
                }
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

pub fn rank_mod_p(rows: &[Vec<i64>]) -> usize {
    let mut basis = ModPBasis::new();
    for r in rows {
        basis.insert(r);
    }
    basis.rank()
}

#[allow(clippy::needless_range_loop)]
fn bareiss_i128(rows: &[Vec<i64>]) -> Option<usize> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut prev: i128 = 1;
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c];
        for i in rank + 1..nrows {
            let f = m[i][c];
            for j in c + 1..ncols {
                let a = pivot.checked_mul(m[i][j])?;
                let b = f.checked_mul(m[rank][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][c] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Some(rank)
}

#[allow(clippy::needless_range_loop)]
fn bareiss_big(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][c].clone();
        for i in rank + 1..nrows {
            let f = m[i][c].clone();
            for j in c + 1..ncols {
                let v = (&pivot * &m[i][j] - &f * &m[rank][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank over the rationals by fraction-free elimination.
pub fn rank_bareiss(rows: &[Vec<i64>]) -> usize {
    bareiss_i128(rows).unwrap_or_else(|| bareiss_big(rows))
}

/// Rational rank, using the mod-p rank as a shortcut when it meets `upper_bound`.
pub fn rational_rank(rows: &[Vec<i64>], upper_bound: Option<usize>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let bound = upper_bound.unwrap_or(usize::MAX).min(rows.len()).min(ncols);
    let lower = rank_mod_p(rows);
    if lower >= bound {
        return lower;
    }
    let exact = rank_bareiss(rows);
    debug_assert!(exact >= lower);
    exact
}

fn content_normalize(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in row.iter_mut() {
        *x = &*x / &g;
    }
}

/// Echelon basis over the integers, rows kept primitive (content 1).
///
/// Each stored row vanishes on the pivots of the rows stored before it, so a
/// single pass in insertion order reduces any vector.
#[derive(Clone, Debug, Default)]
pub struct IntegerBasis {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IntegerBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, row: &[i64]) -> Vec<BigInt> {
        let mut r: Vec<BigInt> = row.iter().map(|&x| BigInt::from(x)).collect();
        for (pivot, b) in &self.rows {
            if r[*pivot].is_zero() {
                continue;
            }
            let f = r[*pivot].clone();
            let p = &b[*pivot];
            for (x, y) in r.iter_mut().zip(b) {
                *x = &*x * p - &f * y;
            }
            content_normalize(&mut r);
        }
        r
    }

    pub fn insert(&mut self, row: &[i64]) -> bool {
        let r = self.reduce(row);
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

/// Primitive integer vector helpers used by the edge-selection loop.
pub(crate) fn eliminate(target: &mut [BigInt], pivot_row: &[BigInt], col: usize) {
    if target[col].is_zero() {
        return;
    }
    let f = target[col].clone();
    let p = pivot_row[col].clone();
    for (x, y) in target.iter_mut().zip(pivot_row) {
        *x = &*x * &p - &f * y;
    }
    content_normalize(target);
}

pub(crate) fn normalize(row: &mut [BigInt]) {
    content_normalize(row);
}

/// Solves the square system `matrix * x = rhs` exactly.
pub fn solve_rational(matrix: &[Vec<BigInt>], rhs: &[BigInt]) -> Result<Vec<BigRational>> {
    let n = matrix.len();
    if rhs.len() != n || matrix.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("system is not square".into()));
    }
    let mut a: Vec<Vec<BigRational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            r.iter()
                .chain(std::iter::once(b))
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .find(|&i| !a[i][c].is_zero())
            .ok_or(Error::Singular)?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == c || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x - &f * y;
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n].clone()).collect())
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Scale down huge numerators and denominators together.
    let shift = x.numer().bits().max(x.denom().bits()).saturating_sub(900);
    let n = (x.numer().abs() >> shift).to_f64().unwrap_or(f64::MAX);
    let d = (x.denom() >> shift).to_f64().unwrap_or(f64::MAX);
    let v = n / d;
    if x.is_negative() {
        -v
    } else {
        v
    }
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_agree_on_small_examples() {
        let rows = vec![vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]];
        assert_eq!(rank_mod_p(&rows), 2);
        assert_eq!(rank_bareiss(&rows), 2);
        assert_eq!(rational_rank(&rows, None), 2);
        let id = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(rational_rank(&id, Some(2)), 2);
        assert_eq!(rank_bareiss(&[]), 0);
    }

    #[test]
    fn gf2_rank_differs_but_rational_does_not() {
        // Rows sum to 2 * (1,1,1): dependent mod 2, independent over Q.
        let rows = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        assert_eq!(rank_bareiss(&rows), 3);
        assert_eq!(rank_mod_p(&rows), 3);
    }

    #[test]
    fn bareiss_falls_back_on_overflow() {
        // Large entries force the big-integer path.
        let big = i64::MAX / 3;
        let rows = vec![vec![big, 1, 7], vec![3, big, 5], vec![big, big, big]];
        assert_eq!(bareiss_i128(&rows), None);
        assert_eq!(rank_bareiss(&rows), 3);
    }

    #[test]
    fn integer_basis_detects_dependence() {
        let mut b = IntegerBasis::new();
        assert!(b.insert(&[1, 1, 0, 0]));
        assert!(b.insert(&[0, 1, 1, 0]));
        assert!(!b.insert(&[1, 2, 1, 0]));
        assert!(b.insert(&[0, 0, 1, 1]));
        assert_eq!(b.rank(), 3);
    }

    #[test]
    fn solves_small_system_exactly() {
        let m = vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(3)],
        ];
        let rhs = vec![BigInt::from(1), BigInt::from(2)];
        let x = solve_rational(&m, &rhs).unwrap();
        assert_eq!(x[0], BigRational::new(1.into(), 5.into()));
        assert_eq!(x[1], BigRational::new(3.into(), 5.into()));
        let singular = vec![
            vec![BigInt::from(1), BigInt::from(2)],
            vec![BigInt::from(2), BigInt::from(4)],
        ];
        assert!(matches!(
            solve_rational(&singular, &rhs),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn rational_conversions() {
        assert_eq!(
            rational_to_f64(&BigRational::new((-3).into(), 4.into())),
            -0.75
        );
        assert_eq!(rational_to_f64(&f64_to_rational(0.1)), 0.1);
    }
}

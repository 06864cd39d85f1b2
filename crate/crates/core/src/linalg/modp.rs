//! Arithmetic in the prime field of order `2^61 - 1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::Scalar;

/// The Mersenne prime `2^61 - 1`.
pub const PRIME: u64 = (1u64 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

#[inline]
pub fn neg(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        PRIME - a
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let p = (a as u128) * (b as u128);
    let lo = (p as u64) & PRIME;
    let hi = (p >> 61) as u64;
    add(lo, hi)
}

pub fn pow(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse; `a` must be nonzero.
pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, PRIME - 2)
}

pub fn from_i64(v: i64) -> u64 {
    let r = v.rem_euclid(PRIME as i64);
    r as u64
}

pub fn from_bigint(v: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    let r = v.mod_floor(&p);
    r.to_u64().expect("reduced residue fits in u64")
}

/// Reduces a rational number; `None` when the denominator vanishes mod p.
pub fn from_scalar(v: &Scalar) -> Option<u64> {
    let den = from_bigint(v.denom());
    if den == 0 {
        return None;
    }
    Some(mul(from_bigint(v.numer()), inv(den)))
}

/// Symmetric lift into `(-p/2, p/2]`.
pub fn lift(v: u64) -> i64 {
    if v > PRIME / 2 {
        -((PRIME - v) as i64)
    } else {
        v as i64
    }
}

/// Result of Gaussian elimination over the prime field.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rank: usize,
    /// Original row index of each pivot, in pivot order.
    pub pivot_rows: Vec<usize>,
    /// Column of each pivot, in pivot order.
    pub pivot_cols: Vec<usize>,
}

/// Row-reduces a dense `rows x cols` matrix in place and reports the pivots.
pub fn echelon(mat: &mut [Vec<u64>]) -> Echelon {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut order: Vec<usize> = (0..rows).collect();
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, p);
        order.swap(r, p);
        let pinv = inv(mat[r][c]);
        for x in mat[r][c..].iter_mut() {
            *x = mul(*x, pinv);
        }
        let (top, rest) = mat.split_at_mut(r + 1);
        let prow = &top[r];
        for row in rest.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in row[c..].iter_mut().zip(&prow[c..]) {
                *x = sub(*x, mul(f, y));
            }
        }
        pivot_rows.push(order[r]);
        pivot_cols.push(c);
        r += 1;
    }
    Echelon {
        rank: r,
        pivot_rows,
        pivot_cols,
    }
}

/// Rank of a matrix over the prime field (the input is left untouched).
pub fn rank(mat: &[Vec<u64>]) -> usize {
    let mut m = mat.to_vec();
    echelon(&mut m).rank
}

/// Solves `a x = b`; returns one solution (free variables set to zero).
pub fn solve(a: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let ech = echelon(&mut aug);
    if ech.pivot_cols.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for k in (0..ech.rank).rev() {
        let c = ech.pivot_cols[k];
        let row = &aug[k];
        let mut v = row[cols];
        for j in c + 1..cols {
            if row[j] != 0 {
                v = sub(v, mul(row[j], x[j]));
            }
        }
        x[c] = v;
    }
    Some(x)
}

/// Basis of the kernel of a `rows x cols` matrix (destroys the input).
/// Each basis vector has a 1 in its free column and 0 in the other free
/// columns.
pub fn nullspace(mat: &mut [Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
    let ech = echelon(mat);
    // Back-substitute to reduced form.
    for k in (0..ech.rank).rev() {
        let c = ech.pivot_cols[k];
        let (top, rest) = mat.split_at_mut(k);
        let prow = &rest[0];
        for row in top.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for (x, &y) in row[c..].iter_mut().zip(&prow[c..]) {
                *x = sub(*x, mul(f, y));
            }
        }
    }
    let mut is_pivot = vec![false; cols];
    for &c in &ech.pivot_cols {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (k, &c) in ech.pivot_cols.iter().enumerate() {
                v[c] = neg(mat[k][free]);
            }
            v
        })
        .collect()
}

/// Reduces an integer matrix entrywise.
pub fn reduce_int_matrix(mat: &[Vec<BigInt>]) -> Vec<Vec<u64>> {
    mat.iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    if v.is_zero() {
                        0
                    } else if let Some(small) = v.to_i64() {
                        from_i64(small)
                    } else if v.is_negative() {
                        neg(from_bigint(&-v))
                    } else {
                        from_bigint(v)
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trips() {
        for a in [1u64, 2, 3, 12345, PRIME - 1, 1 << 40] {
            assert_eq!(mul(a, inv(a)), 1);
        }
    }

    #[test]
    fn signed_reduction_and_lift() {
        assert_eq!(lift(from_i64(-7)), -7);
        assert_eq!(lift(from_i64(42)), 42);
        assert_eq!(from_bigint(&BigInt::from(-1)), PRIME - 1);
    }

    #[test]
    fn echelon_reports_pivots() {
        let mut m = vec![vec![0, 2, 4], vec![0, 1, 2], vec![1, 0, 0]];
        let e = echelon(&mut m);
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivot_cols, vec![0, 1]);
        assert_eq!(e.pivot_rows, vec![2, 1]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = vec![vec![1, 1], vec![2, 2]];
        assert!(solve(&a, &[1, 3]).is_none());
        let x = solve(&a, &[1, 2]).unwrap();
        assert_eq!(add(x[0], x[1]), 1);
    }
}

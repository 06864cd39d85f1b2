//! Exact answers computed through the prime field.
//!
//! A modular computation proposes a candidate (solution, kernel basis or
//! inconsistency vector), rational reconstruction lifts it, and an exact
//! check over the rationals accepts it. When the check fails the routines
//! fall back to plain rational elimination, so results are always exact.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{matrix, modp, Scalar};

/// Smallest `r/s` congruent to `a` modulo the prime with `|r|, |s|` below
/// `sqrt(p/2)`.
pub fn rational_reconstruct(a: u64) -> Option<Scalar> {
    let p = modp::PRIME as i128;
    let bound: i128 = 1 << 30;
    let (mut r0, mut r1) = (p, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 >= bound {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if t1 == 0 || t1.abs() >= bound {
        return None;
    }
    let (num, den) = if t1 < 0 { (-r1, -t1) } else { (r1, t1) };
    Some(Scalar::new(BigInt::from(num), BigInt::from(den)))
}

fn reconstruct_vector(v: &[u64]) -> Option<Vec<Scalar>> {
    v.iter().map(|&x| rational_reconstruct(x)).collect()
}

fn reduce(a: &[Vec<Scalar>]) -> Option<Vec<Vec<u64>>> {
    a.iter()
        .map(|row| row.iter().map(modp::from_scalar).collect::<Option<Vec<u64>>>())
        .collect()
}

fn apply(a: &[Vec<Scalar>], x: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            let mut s = Scalar::zero();
            for (u, v) in row.iter().zip(x) {
                if !u.is_zero() && !v.is_zero() {
                    s += u * v;
                }
            }
            s
        })
        .collect()
}

fn transpose(a: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Outcome of [`solve`], with the evidence that makes it exact.
#[derive(Debug, Clone)]
pub enum Solved {
    Solution(Vec<Scalar>),
    /// `y` with `y^T A = 0` and `y^T b != 0`, or `None` when the
    /// inconsistency was established by rational elimination.
    Inconsistent(Option<Vec<Scalar>>),
}

/// Exact solution of `a x = b` with `cols` unknowns.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar], cols: usize) -> Solved {
    if let Some(res) = solve_fast(a, b, cols) {
        return res;
    }
    match matrix::solve(a, b) {
        Some(x) => Solved::Solution(x),
        None => Solved::Inconsistent(None),
    }
}

fn solve_fast(a: &[Vec<Scalar>], b: &[Scalar], cols: usize) -> Option<Solved> {
    let ap = reduce(a)?;
    let bp: Vec<u64> = b.iter().map(modp::from_scalar).collect::<Option<_>>()?;
    if a.is_empty() {
        return Some(Solved::Solution(vec![Scalar::zero(); cols]));
    }
    match modp::solve(&ap, &bp) {
        Some(xp) => {
            let x = reconstruct_vector(&xp)?;
            (apply(a, &x) == b).then_some(Solved::Solution(x))
        }
        None => {
            // Find y with A^T y = 0 and b . y = 1.
            let mut sys: Vec<Vec<u64>> = (0..cols).map(|j| ap.iter().map(|row| row[j]).collect()).collect();
            sys.push(bp.clone());
            let mut rhs = vec![0u64; cols];
            rhs.push(1);
            let yp = modp::solve(&sys, &rhs)?;
            let y = reconstruct_vector(&yp)?;
            let at = transpose(a, cols);
            let lhs = apply(&at, &y);
            let by: Scalar = b.iter().zip(&y).map(|(u, v)| u * v).sum();
            (lhs.iter().all(Zero::is_zero) && !by.is_zero()).then_some(Solved::Inconsistent(Some(y)))
        }
    }
}

/// Exact rank: the modular rank is a lower bound, and a reconstructed
/// kernel of the complementary dimension that checks exactly is an upper
/// bound.
pub fn rank(a: &[Vec<Scalar>], cols: usize) -> usize {
    if a.is_empty() || cols == 0 {
        return 0;
    }
    if let Some(r) = rank_fast(a, cols) {
        return r;
    }
    matrix::rank(a)
}

fn rank_fast(a: &[Vec<Scalar>], cols: usize) -> Option<usize> {
    let mut ap = reduce(a)?;
    let kernel = modp::nullspace(&mut ap, cols);
    let r = cols - kernel.len();
    for kp in kernel {
        let k = reconstruct_vector(&kp)?;
        if !apply(a, &k).iter().all(Zero::is_zero) {
            return None;
        }
    }
    // The reconstructed vectors keep the unit pattern on the free columns,
    // so they are linearly independent.
    Some(r)
}

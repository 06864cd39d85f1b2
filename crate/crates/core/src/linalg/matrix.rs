//! Dense exact linear algebra over the rationals and over the integers, and
//! generic rank of matrices with polynomial entries.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use super::modp;
use super::poly::Poly;
use super::Scalar;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<Scalar>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pinv = m[r][c].recip();
        for x in m[r][c..].iter_mut() {
            *x *= &pinv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<Scalar>]) -> usize {
    let mut m = a.to_vec();
    rref(&mut m).len()
}

/// One solution of `a x = b`, or `None` if the system is inconsistent.
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(a.len(), b.len(), "row count mismatch");
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (k, &c) in pivots.iter().enumerate() {
        x[c] = aug[k][cols].clone();
    }
    Some(x)
}

/// Basis of `{x : a x = 0}`.
pub fn nullspace(a: &[Vec<Scalar>], cols: usize) -> Vec<Vec<Scalar>> {
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (k, &c) in pivots.iter().enumerate() {
            v[c] = -m[k][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Integer basis of `{x : a x = 0}` (each rational basis vector cleared of
/// denominators and content).
pub fn integer_nullspace(a: &[Vec<Scalar>], cols: usize) -> Vec<Vec<BigInt>> {
    nullspace(a, cols)
        .into_iter()
        .map(|v| clear_denominators(&v))
        .collect()
}

pub fn clear_denominators(v: &[Scalar]) -> Vec<BigInt> {
    use num_integer::Integer;
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Scalar::from(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn int_rank(a: &[Vec<BigInt>]) -> usize {
    let mut m = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Matrix whose entries are integer polynomials in variables `u_0, u_1, ...`.
#[derive(Debug, Clone)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    pub nvars: usize,
    pub entries: Vec<Vec<Poly>>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            nvars,
            entries: vec![vec![Poly::zero(); cols]; rows],
        }
    }

    pub fn eval_modp(&self, point: &[u64]) -> Vec<Vec<u64>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| if p.is_zero() { 0 } else { p.eval_modp(point) }).collect())
            .collect()
    }

    /// Rank at a random point of `F_p^nvars`. This never exceeds the generic
    /// rank, and equals it with high probability.
    pub fn rank_randomized<R: Rng>(&self, rng: &mut R) -> usize {
        let point = random_point(rng, self.nvars);
        modp::rank(&self.eval_modp(&point))
    }

    /// Restriction to the given rows and columns.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        PolyMatrix {
            rows: rows.len(),
            cols: cols.len(),
            nvars: self.nvars,
            entries: rows
                .iter()
                .map(|&i| cols.iter().map(|&j| self.entries[i][j].clone()).collect())
                .collect(),
        }
    }

    /// Maximum matching in the bipartite graph of nonzero entries, an upper
    /// bound for the generic rank.
    pub fn structural_rank(&self) -> usize {
        let adj: Vec<Vec<usize>> = self
            .entries
            .iter()
            .map(|row| (0..self.cols).filter(|&j| !row[j].is_zero()).collect())
            .collect();
        let mut match_col: Vec<Option<usize>> = vec![None; self.cols];
        let mut size = 0;
        for i in 0..self.rows {
            let mut seen = vec![false; self.cols];
            if augment(i, &adj, &mut match_col, &mut seen) {
                size += 1;
            }
        }
        size
    }

    /// Exact rank over the field of rational functions.
    pub fn generic_rank<R: Rng>(&self, rng: &mut R) -> usize {
        let (base, rest) = self.peel_singletons();
        if rest.rows == 0 || rest.cols == 0 {
            return base;
        }
        let upper = rest.structural_rank();
        let lower = rest.rank_randomized(rng);
        if lower == upper {
            return base + lower;
        }
        base + rest.bareiss_rank()
    }

    /// Repeatedly removes a row or column holding a single nonzero entry
    /// together with the line through it; each removal accounts for one unit
    /// of rank. Returns the accumulated rank and the remaining matrix.
    pub fn peel_singletons(&self) -> (usize, PolyMatrix) {
        let mut row_alive = vec![true; self.rows];
        let mut col_alive = vec![true; self.cols];
        let mut row_cnt: Vec<usize> = self
            .entries
            .iter()
            .map(|r| r.iter().filter(|p| !p.is_zero()).count())
            .collect();
        let mut col_cnt: Vec<usize> = (0..self.cols)
            .map(|j| (0..self.rows).filter(|&i| !self.entries[i][j].is_zero()).count())
            .collect();
        let mut peeled = 0;
        loop {
            let mut changed = false;
            for i in 0..self.rows {
                if !row_alive[i] {
                    continue;
                }
                if row_cnt[i] == 0 {
                    row_alive[i] = false;
                    changed = true;
                    continue;
                }
                if row_cnt[i] == 1 {
                    let j = (0..self.cols)
                        .find(|&j| col_alive[j] && !self.entries[i][j].is_zero())
                        .expect("row count tracks live entries");
                    self.kill(i, j, &mut row_alive, &mut col_alive, &mut row_cnt, &mut col_cnt);
                    peeled += 1;
                    changed = true;
                }
            }
            for j in 0..self.cols {
                if !col_alive[j] {
                    continue;
                }
                if col_cnt[j] == 0 {
                    col_alive[j] = false;
                    changed = true;
                    continue;
                }
                if col_cnt[j] == 1 {
                    let i = (0..self.rows)
                        .find(|&i| row_alive[i] && !self.entries[i][j].is_zero())
                        .expect("column count tracks live entries");
                    self.kill(i, j, &mut row_alive, &mut col_alive, &mut row_cnt, &mut col_cnt);
                    peeled += 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let rows: Vec<usize> = (0..self.rows).filter(|&i| row_alive[i]).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| col_alive[j]).collect();
        (peeled, self.submatrix(&rows, &cols))
    }

    fn kill(
        &self,
        i: usize,
        j: usize,
        row_alive: &mut [bool],
        col_alive: &mut [bool],
        row_cnt: &mut [usize],
        col_cnt: &mut [usize],
    ) {
        row_alive[i] = false;
        col_alive[j] = false;
        for jj in 0..self.cols {
            if col_alive[jj] && !self.entries[i][jj].is_zero() {
                col_cnt[jj] -= 1;
            }
        }
        for ii in 0..self.rows {
            if row_alive[ii] && !self.entries[ii][j].is_zero() {
                row_cnt[ii] -= 1;
            }
        }
    }

    /// Fraction-free elimination with complete pivoting, choosing the
    /// sparsest available pivot at every step.
    pub fn bareiss_rank(&self) -> usize {
        let mut m = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = Poly::constant(BigInt::one());
        let mut rank = 0;
        for k in 0..rows.min(cols) {
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(k) {
                for (j, p) in row.iter().enumerate().skip(k) {
                    if p.is_zero() {
                        continue;
                    }
                    let w = p.num_terms();
                    if best.is_none_or(|b| w < b.2) {
                        best = Some((i, j, w));
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break;
            };
            m.swap(k, pi);
            for row in m.iter_mut() {
                row.swap(k, pj);
            }
            let pivot = m[k][k].clone();
            for i in k + 1..rows {
                let lead = m[i][k].clone();
                for j in k + 1..cols {
                    let a = &pivot * &m[i][j];
                    let b = if lead.is_zero() || m[k][j].is_zero() {
                        Poly::zero()
                    } else {
                        &lead * &m[k][j]
                    };
                    let num = &a - &b;
                    m[i][j] = num
                        .exact_div(&prev)
                        .expect("Bareiss quotients are exact");
                }
                m[i][k] = Poly::zero();
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}

fn augment(i: usize, adj: &[Vec<usize>], match_col: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match match_col[j] {
            None => true,
            Some(other) => augment(other, adj, match_col, seen),
        };
        if free {
            match_col[j] = Some(i);
            return true;
        }
    }
    false
}

/// Uniform point of `(F_p^*)^n`.
pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<u64> {
    (0..n).map(|_| rng.gen_range(1..modp::PRIME)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(v: i64) -> Scalar {
        Scalar::from_integer(BigInt::from(v))
    }

    fn qm(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect()
    }

    #[test]
    fn solve_and_nullspace_agree() {
        let a = qm(&[&[1, 2, 3], &[2, 4, 7]]);
        let x = solve(&a, &[q(1), q(3)]).unwrap();
        for (row, b) in a.iter().zip([q(1), q(3)]) {
            let s: Scalar = row.iter().zip(&x).map(|(u, v)| u * v).sum();
            assert_eq!(s, b);
        }
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 1);
        for row in &a {
            let s: Scalar = row.iter().zip(&ns[0]).map(|(u, v)| u * v).sum();
            assert!(s.is_zero());
        }
        assert!(solve(&qm(&[&[1, 1], &[1, 1]]), &[q(0), q(1)]).is_none());
    }

    #[test]
    fn integer_rank_matches_rational_rank() {
        let rows: &[&[i64]] = &[&[2, 4, 6], &[1, 3, 5], &[3, 7, 11]];
        let ints: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        assert_eq!(int_rank(&ints), 2);
        assert_eq!(rank(&qm(rows)), 2);
    }

    #[test]
    fn generic_rank_sees_polynomial_dependency() {
        // [[u0, u1], [u0*u1, u1^2]] has generic rank 1.
        let u0 = Poly::linear([(0, BigInt::one())]);
        let u1 = Poly::linear([(1, BigInt::one())]);
        let mut m = PolyMatrix::zeros(2, 2, 2);
        m.entries[0][0] = u0.clone();
        m.entries[0][1] = u1.clone();
        m.entries[1][0] = &u0 * &u1;
        m.entries[1][1] = &u1 * &u1;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(m.structural_rank(), 2);
        assert_eq!(m.bareiss_rank(), 1);
        assert_eq!(m.generic_rank(&mut rng), 1);
        m.entries[1][1] = &(&u1 * &u1) + &Poly::constant(BigInt::one());
        assert_eq!(m.bareiss_rank(), 2);
    }
}

//! Simple Lie algebras in a Chevalley basis.
//!
//! Basis order: root vectors `x_alpha` in the root order of [`RootSystem`]
//! (index `k` for root `k`), followed by the simple coroots `h_1..h_l`.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::roots::{CartanType, RootSystem};
use crate::linalg::{int, Scalar};

/// Sign choice on extraspecial pairs. Any choice yields a Chevalley basis;
/// closure relations do not depend on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SignConvention {
    #[default]
    Positive,
    Negative,
}

/// Sparse vector over the basis of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Element {
    pub terms: BTreeMap<usize, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(k: usize) -> Self {
        let mut e = Element::zero();
        e.terms.insert(k, Scalar::one());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut e = Element::zero();
        for (k, c) in terms {
            e.add_term(k, c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.terms.get(&k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.keys().copied()
    }

    pub fn add_term(&mut self, k: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Scalar) {
        for (k, v) in &other.terms {
            self.add_term(*k, v * c);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Element {
        let mut out = Element::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(other, &int(-1));
        out
    }
}

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    pub rs: RootSystem,
    pub convention: SignConvention,
    /// `n[a][b] = N_{a,b}` for root indices; zero when `a + b` is not a root.
    n: Vec<Vec<i64>>,
    /// `sum[a][b]` is the index of the root `a + b`.
    sum: Vec<Vec<Option<usize>>>,
    /// Coefficients of `h_alpha = [x_alpha, x_{-alpha}]` over `h_1..h_l`.
    coroot: Vec<Vec<i64>>,
    /// `value[a][i] = alpha_a(h_i)`.
    value: Vec<Vec<i64>>,
}

impl LieAlgebra {
    pub fn new(ty: CartanType) -> Self {
        Self::with_convention(ty, SignConvention::Positive)
    }

    pub fn with_convention(ty: CartanType, convention: SignConvention) -> Self {
        let rs = RootSystem::new(ty);
        let nr = rs.num_roots();
        let l = rs.rank();
        let mut sum = vec![vec![None; nr]; nr];
        for (a, row) in sum.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                *slot = rs.sum_index(a, b);
            }
        }
        let coroot = rs.roots.iter().map(|r| rs.coroot_coeffs(r)).collect();
        let value = rs
            .roots
            .iter()
            .map(|r| (0..l).map(|i| rs.value_on_coroot(r, i)).collect())
            .collect();
        let n = StructureConstants::compute(&rs, &sum, convention);
        LieAlgebra {
            rs,
            convention,
            n,
            sum,
            coroot,
            value,
        }
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn dim(&self) -> usize {
        self.rs.num_roots() + self.rank()
    }

    pub fn num_roots(&self) -> usize {
        self.rs.num_roots()
    }

    /// Basis index of the coroot `h_i`.
    pub fn cartan_index(&self, i: usize) -> usize {
        self.num_roots() + i
    }

    pub fn is_root_index(&self, k: usize) -> bool {
        k < self.num_roots()
    }

    pub fn n(&self, a: usize, b: usize) -> i64 {
        self.n[a][b]
    }

    pub fn root_sum(&self, a: usize, b: usize) -> Option<usize> {
        self.sum[a][b]
    }

    pub fn coroot_coeffs(&self, a: usize) -> &[i64] {
        &self.coroot[a]
    }

    /// `alpha_a(h_i)`.
    pub fn root_value(&self, a: usize, i: usize) -> i64 {
        self.value[a][i]
    }

    /// Bracket of two basis vectors as a sparse integer combination.
    pub fn bracket_basis(&self, a: usize, b: usize) -> Vec<(usize, i64)> {
        let nr = self.num_roots();
        match (a < nr, b < nr) {
            (true, true) => {
                if self.rs.neg[a] == b {
                    self.coroot[a]
                        .iter()
                        .enumerate()
                        .filter(|(_, &c)| c != 0)
                        .map(|(i, &c)| (nr + i, c))
                        .collect()
                } else if let Some(c) = self.sum[a][b] {
                    vec![(c, self.n[a][b])]
                } else {
                    Vec::new()
                }
            }
            (false, true) => {
                let v = self.value[b][a - nr];
                if v == 0 {
                    Vec::new()
                } else {
                    vec![(b, v)]
                }
            }
            (true, false) => {
                let v = self.value[a][b - nr];
                if v == 0 {
                    Vec::new()
                } else {
                    vec![(a, -v)]
                }
            }
            (false, false) => Vec::new(),
        }
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        let mut acc: HashMap<usize, Scalar> = HashMap::new();
        for (a, ca) in &x.terms {
            for (b, cb) in &y.terms {
                let br = self.bracket_basis(*a, *b);
                if br.is_empty() {
                    continue;
                }
                let c = ca * cb;
                for (k, v) in br {
                    *acc.entry(k).or_insert_with(Scalar::zero) += &c * int(v);
                }
            }
        }
        Element::from_terms(acc)
    }

    /// Cartan element whose values on the simple roots are `v`
    /// (`alpha_i(h) = v_i`), expressed over `h_1..h_l`.
    pub fn cartan_from_values(&self, v: &[Scalar]) -> Element {
        // v_i = sum_j y_j alpha_i(h_j) = sum_j y_j A[j][i]
        let l = self.rank();
        let a: Vec<Vec<Scalar>> = (0..l)
            .map(|i| (0..l).map(|j| int(self.rs.cartan[j][i])).collect())
            .collect();
        let y = crate::linalg::solve(&a, v).expect("Cartan matrix is invertible");
        Element::from_terms(y.into_iter().enumerate().map(|(j, c)| (self.cartan_index(j), c)))
    }

    /// Values `alpha_i(h)` of a Cartan element.
    pub fn values_of_cartan(&self, h: &Element) -> Vec<Scalar> {
        let l = self.rank();
        let mut v = vec![Scalar::zero(); l];
        for (k, c) in &h.terms {
            assert!(*k >= self.num_roots(), "not a Cartan element");
            let j = k - self.num_roots();
            for (i, vi) in v.iter_mut().enumerate() {
                *vi += c * int(self.rs.cartan[j][i]);
            }
        }
        v
    }

    /// Value of root `a` on the Cartan element with simple-root values `v`.
    pub fn root_on_values(&self, a: usize, v: &[i64]) -> i64 {
        self.rs.roots[a].iter().zip(v).map(|(c, x)| c * x).sum()
    }

    /// Values on the simple roots of the coroot `h_a`.
    pub fn coroot_values(&self, a: usize) -> Vec<i64> {
        (0..self.rank())
            .map(|i| self.rs.pairing(&self.rs.roots[self.rs.simple[i]], &self.rs.roots[a]))
            .collect()
    }
}

/// Structure constants by the extraspecial pair method.
struct StructureConstants<'a> {
    rs: &'a RootSystem,
    sum: &'a [Vec<Option<usize>>],
    memo: Vec<Vec<Option<i64>>>,
    extraspecial: Vec<Option<(usize, usize)>>,
    sign: i64,
}

impl<'a> StructureConstants<'a> {
    fn compute(
        rs: &'a RootSystem,
        sum: &'a [Vec<Option<usize>>],
        convention: SignConvention,
    ) -> Vec<Vec<i64>> {
        let nr = rs.num_roots();
        // Extraspecial pair of xi: (a, b) positive with a + b = xi and a
        // minimal in the root order.
        let mut extraspecial = vec![None; nr];
        for a in rs.positive_indices() {
            for b in rs.positive_indices() {
                if let Some(c) = sum[a][b] {
                    if a < b && extraspecial[c].is_none() {
                        extraspecial[c] = Some((a, b));
                    }
                }
            }
        }
        let mut sc = StructureConstants {
            rs,
            sum,
            memo: vec![vec![None; nr]; nr],
            extraspecial,
            sign: match convention {
                SignConvention::Positive => 1,
                SignConvention::Negative => -1,
            },
        };
        let mut out = vec![vec![0i64; nr]; nr];
        for a in 0..nr {
            for b in 0..nr {
                if sum[a][b].is_some() {
                    out[a][b] = sc.get(a, b);
                }
            }
        }
        out
    }

    /// Largest `p` with `beta - p alpha` a root.
    fn p(&self, a: usize, b: usize) -> i64 {
        let alpha = &self.rs.roots[a];
        let mut w = self.rs.roots[b].clone();
        let mut p = 0;
        loop {
            for (x, y) in w.iter_mut().zip(alpha) {
                *x -= y;
            }
            if self.rs.index_of(&w).is_some() {
                p += 1;
            } else {
                return p;
            }
        }
    }

    fn norm(&self, k: usize) -> i64 {
        self.rs.norm(k)
    }

    fn get(&mut self, a: usize, b: usize) -> i64 {
        let Some(c) = self.sum[a][b] else {
            return 0;
        };
        if let Some(v) = self.memo[a][b] {
            return v;
        }
        let rs = self.rs;
        let (pa, pb) = (rs.is_positive(a), rs.is_positive(b));
        let v = if pa && pb {
            if a > b {
                -self.get(b, a)
            } else {
                self.positive_pair(a, b, c)
            }
        } else if !pa && !pb {
            -self.get(rs.neg[a], rs.neg[b])
        } else if !pa {
            -self.get(b, a)
        } else {
            // a > 0 > b, c = a + b
            let ratio = if rs.is_positive(c) {
                // N_{a,b} = -(c,c)/(a,a) N_{-b,c}
                -Ratio::new(self.norm(c), self.norm(a)) * self.get(rs.neg[b], c)
            } else {
                // N_{a,b} = (c,c)/(b,b) N_{-c,a}
                Ratio::new(self.norm(c), self.norm(b)) * self.get(rs.neg[c], a)
            };
            assert!(ratio.is_integer(), "non-integral structure constant");
            ratio.to_integer()
        };
        self.memo[a][b] = Some(v);
        v
    }

    fn positive_pair(&mut self, a: usize, b: usize, xi: usize) -> i64 {
        let (a1, b1) = self.extraspecial[xi].expect("every non-simple positive root has one");
        if (a, b) == (a1, b1) {
            return self.sign * (self.p(a, b) + 1);
        }
        let rs = self.rs;
        let n11 = self.get(a1, b1);
        let na1 = rs.neg[a1];
        let nb1 = rs.neg[b1];
        let mut total = Ratio::new(0i64, 1);
        if let Some(d) = self.sum[b][na1] {
            let t = self.get(b, na1) * self.get(a, nb1);
            total += Ratio::new(t, self.norm(d));
        }
        if let Some(d) = self.sum[a][na1] {
            let t = self.get(na1, a) * self.get(b, nb1);
            total += Ratio::new(t, self.norm(d));
        }
        let v = total * Ratio::new(self.norm(xi), n11);
        assert!(v.is_integer(), "non-integral structure constant");
        v.to_integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::roots::Family;

    fn alg(f: Family, l: usize) -> LieAlgebra {
        LieAlgebra::new(CartanType::new(f, l).unwrap())
    }

    #[test]
    fn sl2_relations() {
        let g = alg(Family::A, 1);
        assert_eq!(g.dim(), 3);
        // roots: 0 = -alpha, 1 = alpha; h = index 2
        let (f, e, h) = (0, 1, 2);
        assert_eq!(g.bracket_basis(e, f), vec![(h, 1)]);
        assert_eq!(g.bracket_basis(h, e), vec![(e, 2)]);
        assert_eq!(g.bracket_basis(h, f), vec![(f, -2)]);
    }

    #[test]
    fn magnitudes_are_p_plus_one() {
        for (f, l) in [(Family::B, 3), (Family::C, 3), (Family::G, 2), (Family::F, 4), (Family::E, 6)] {
            let g = alg(f, l);
            let sc_p = |a: usize, b: usize| {
                let mut w = g.rs.roots[b].clone();
                let mut p = 0;
                loop {
                    for (x, y) in w.iter_mut().zip(&g.rs.roots[a]) {
                        *x -= y;
                    }
                    if g.rs.index_of(&w).is_some() {
                        p += 1;
                    } else {
                        return p;
                    }
                }
            };
            for a in 0..g.num_roots() {
                for b in 0..g.num_roots() {
                    if g.root_sum(a, b).is_some() {
                        assert_eq!(g.n(a, b).abs(), sc_p(a, b) + 1, "{f:?}{l} {a} {b}");
                    }
                }
            }
        }
    }
}

//! Action matrices of `z(h)` on `V_2(h)^*` and the rank tests deciding
//! whether a coordinate subspace `U` of `V_2(h)` meets the dense orbit
//! `Z(h) e`.
//!
//! Rows are indexed by a basis `x_1 = h, x_2, ..., x_n` of `z(h)` whose tail
//! spans the Killing-orthogonal complement `z~(h)`; columns by the dual basis
//! `w_j` of the root basis of `V_2(h)`. Entry `(i, j)` is the linear form
//! `v -> w_j([v, x_i])`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::grading::ThetaGroup;
use crate::lie::Element;
use crate::linalg::{certified, int, matrix, modp, Poly, PolyMatrix, Scalar};
use crate::sl2::{Characteristic, HomogeneousTriple};

/// Coordinate subspace of `V_2(h)`, as a bit set over its root basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subspace {
    pub len: usize,
    pub bits: Vec<u64>,
}

impl Subspace {
    pub fn empty(len: usize) -> Subspace {
        Subspace {
            len,
            bits: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Subspace {
        Subspace::from_indices(len, 0..len)
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Subspace {
        let mut s = Subspace::empty(len);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len);
        self.bits[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn dim(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|w| *w == 0)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }

    pub fn is_subset(&self, other: &Subspace) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// A basis vector of `z(h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowVector {
    /// Cartan element given by its simple-root values.
    Cartan(Vec<i64>),
    /// Root vector of a root of `g_0` vanishing on `h`.
    Root(usize),
}

/// One nonzero term `coeff * u_var` of an entry in column `col`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Term {
    col: usize,
    var: usize,
    coeff: i64,
}

#[derive(Debug, Clone)]
pub struct ActionMatrix {
    pub h: Characteristic,
    /// Roots of `V_2(h)`, in root order (the columns and the variables).
    pub v2: Vec<usize>,
    /// `x_1 = h` first, then the complement in the Cartan subalgebra, then
    /// root vectors.
    pub rows: Vec<RowVector>,
    terms: Vec<Vec<Term>>,
}

pub fn action_matrix(tg: &ThetaGroup, h: &Characteristic) -> ActionMatrix {
    let g = &*tg.alg;
    let l = g.rank();
    let v2 = tg.v_space(&h.values, 2);
    let pos = |b: usize| v2.iter().position(|&x| x == b);

    let mut rows = vec![RowVector::Cartan(h.values.clone())];
    let dual: Vec<Scalar> = tg.killing.dual_values(&h.values).into_iter().map(int).collect();
    for v in matrix::integer_nullspace(&[dual], l) {
        rows.push(RowVector::Cartan(
            v.iter().map(|x| x.to_i64().expect("small Cartan complement")).collect(),
        ));
    }
    rows.extend(
        tg.data
            .phi0
            .iter()
            .filter(|&&d| tg.root_value(d, &h.values) == 0)
            .map(|&d| RowVector::Root(d)),
    );

    let terms = rows
        .iter()
        .map(|x| match x {
            RowVector::Cartan(t) => v2
                .iter()
                .enumerate()
                .filter_map(|(j, &b)| {
                    let c = -g.root_on_values(b, t);
                    (c != 0).then_some(Term { col: j, var: j, coeff: c })
                })
                .collect(),
            RowVector::Root(d) => v2
                .iter()
                .enumerate()
                .filter_map(|(k, &b)| {
                    let sum = g.root_sum(b, *d)?;
                    let j = pos(sum).expect("z(h) preserves V_2(h)");
                    Some(Term {
                        col: j,
                        var: k,
                        coeff: g.n(b, *d),
                    })
                })
                .collect(),
        })
        .collect();
    ActionMatrix {
        h: h.clone(),
        v2,
        rows,
        terms,
    }
}

impl ActionMatrix {
    /// `n = dim z(h)`.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// `s = dim V_2(h)`.
    pub fn s(&self) -> usize {
        self.v2.len()
    }

    /// Coordinates of `v` on the basis of `V_2(h)`; `None` if `v` has
    /// components outside it.
    pub fn coordinates(&self, v: &Element) -> Option<Vec<Scalar>> {
        let mut out = vec![Scalar::zero(); self.s()];
        for (k, c) in &v.terms {
            let j = self.v2.iter().position(|b| b == k)?;
            out[j] = c.clone();
        }
        Some(out)
    }

    /// `B_v` for `v` given by its coordinates.
    pub fn eval(&self, v: &[Scalar]) -> Vec<Vec<Scalar>> {
        self.terms
            .iter()
            .map(|row| {
                let mut out = vec![Scalar::zero(); self.s()];
                for t in row {
                    if !v[t.var].is_zero() {
                        out[t.col] += &v[t.var] * int(t.coeff);
                    }
                }
                out
            })
            .collect()
    }

    pub fn eval_modp(&self, v: &[u64]) -> Vec<Vec<u64>> {
        self.terms
            .iter()
            .map(|row| {
                let mut out = vec![0u64; self.s()];
                for t in row {
                    if v[t.var] != 0 {
                        out[t.col] = modp::add(out[t.col], modp::mul(v[t.var], modp::from_i64(t.coeff)));
                    }
                }
                out
            })
            .collect()
    }

    /// `B_U` (or `B~_U` without the first row) as a matrix of linear forms
    /// in `u_0..u_{s-1}`; variables outside `U` are set to zero.
    pub fn restricted(&self, u: &Subspace, with_first_row: bool) -> PolyMatrix {
        let skip = usize::from(!with_first_row);
        let mut m = PolyMatrix::zeros(self.n() - skip, self.s(), self.s());
        for (i, row) in self.terms.iter().enumerate().skip(skip) {
            for t in row {
                if u.contains(t.var) {
                    let p = Poly::linear([(t.var as u32, BigInt::from(t.coeff))]);
                    let e = &mut m.entries[i - skip][t.col];
                    *e = &*e + &p;
                }
            }
        }
        m
    }

    /// The subspace of `V_2(h)` on which `values` is at least 2.
    pub fn subspace_above(&self, tg: &ThetaGroup, values: &[i64]) -> Subspace {
        Subspace::from_indices(
            self.s(),
            self.v2
                .iter()
                .enumerate()
                .filter(|&(_, &b)| tg.root_value(b, values) >= 2)
                .map(|(j, _)| j),
        )
    }
}

/// Point of `U` over the prime field with nonzero coordinates on `U`.
fn random_point_in<R: Rng>(rng: &mut R, u: &Subspace) -> Vec<u64> {
    (0..u.len)
        .map(|j| if u.contains(j) { rng.gen_range(1..modp::PRIME) } else { 0 })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankStrategy {
    /// Certified answers; randomized ranks are used only where they prove
    /// something, exact elimination otherwise.
    #[default]
    Auto,
    /// Always the exact rank of `B_U`.
    Exact,
    /// Rank at random points only; an empty verdict is not certified.
    Randomized,
}

/// Whether to use the row-span test (first row of `B_U` against `B~_U`)
/// instead of comparing `rank B_U` with `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowSpanPolicy {
    /// Full rank when `s - n < s - r`, row span otherwise.
    #[default]
    Heuristic,
    Always,
    Never,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseOptions {
    pub rank: RankStrategy,
    pub row_span: RowSpanPolicy,
    /// Extra random points tried when the row-span test is inconclusive.
    pub resamples: usize,
    /// Random points for [`RankStrategy::Randomized`].
    pub trials: usize,
}

impl Default for DenseOptions {
    fn default() -> Self {
        DenseOptions {
            rank: RankStrategy::Auto,
            row_span: RowSpanPolicy::Heuristic,
            resamples: 3,
            trials: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum DenseEvidence {
    EmptySubspace,
    /// `B_u` has rank `s` at a prime-field point, so `rank B_U = s`.
    FullRankAtPoint { samples: usize },
    /// Rank of `B_U` over the function field.
    GenericRank { rank: usize, s: usize },
    /// The first row of `B_U` lies in the span of the rows `minor_rows` of
    /// `B~_U` (indices into `B~`), certified by vanishing bordered minors.
    RowSpan {
        r: usize,
        minor_rows: Vec<usize>,
        minor_cols: Vec<usize>,
        samples: usize,
    },
    /// Maximal rank seen over random points; not a proof of emptiness.
    Randomized { rank: usize, s: usize, samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DenseOutcome {
    pub nonempty: bool,
    pub evidence: DenseEvidence,
}

/// Decides whether `U` meets the dense orbit `Z(h) e` of `V_2(h)`, which
/// holds iff `rank B_U = s`.
pub fn dense_intersection_nonempty<R: Rng>(
    b: &ActionMatrix,
    u: &Subspace,
    rng: &mut R,
    opts: DenseOptions,
) -> DenseOutcome {
    let s = b.s();
    if u.is_empty() {
        return DenseOutcome {
            nonempty: false,
            evidence: DenseEvidence::EmptySubspace,
        };
    }
    let point = random_point_in(rng, u);
    let bu = b.eval_modp(&point);
    if modp::rank(&bu) == s {
        return full_rank(1);
    }
    match opts.rank {
        RankStrategy::Randomized => {
            let mut best = modp::rank(&bu);
            for k in 1..opts.trials.max(1) {
                let rk = modp::rank(&b.eval_modp(&random_point_in(rng, u)));
                if rk == s {
                    return full_rank(k + 1);
                }
                best = best.max(rk);
            }
            DenseOutcome {
                nonempty: false,
                evidence: DenseEvidence::Randomized {
                    rank: best,
                    s,
                    samples: opts.trials.max(1),
                },
            }
        }
        RankStrategy::Exact => generic(b, u, rng),
        RankStrategy::Auto => {
            let n = b.n();
            let r = modp::rank(&bu[1..]);
            let use_row_span = match opts.row_span {
                RowSpanPolicy::Always => true,
                RowSpanPolicy::Never => false,
                // r <= n - 1, so this always selects the full rank test.
                RowSpanPolicy::Heuristic => !((s as i64) - (n as i64) < (s as i64) - (r as i64)),
            };
            if !use_row_span {
                return generic(b, u, rng);
            }
            let mut bu = bu;
            for attempt in 0..=opts.resamples {
                if attempt > 0 {
                    let p = random_point_in(rng, u);
                    bu = b.eval_modp(&p);
                    if modp::rank(&bu) == s {
                        return full_rank(attempt + 1);
                    }
                }
                if let Some(evidence) = row_span_test(b, u, &bu, attempt + 1) {
                    return DenseOutcome {
                        nonempty: false,
                        evidence,
                    };
                }
            }
            generic(b, u, rng)
        }
    }
}

fn full_rank(samples: usize) -> DenseOutcome {
    DenseOutcome {
        nonempty: true,
        evidence: DenseEvidence::FullRankAtPoint { samples },
    }
}

fn generic<R: Rng>(b: &ActionMatrix, u: &Subspace, rng: &mut R) -> DenseOutcome {
    let rank = b.restricted(u, true).generic_rank(rng);
    DenseOutcome {
        nonempty: rank == b.s(),
        evidence: DenseEvidence::GenericRank { rank, s: b.s() },
    }
}

/// Steps (1)-(3): locate a nonzero `r x r` minor of `B~_u` and check that
/// every bordered minor with the first row of `B_U` vanishes identically.
fn row_span_test(b: &ActionMatrix, u: &Subspace, bu: &[Vec<u64>], samples: usize) -> Option<DenseEvidence> {
    let mut tilde = bu[1..].to_vec();
    let ech = modp::echelon(&mut tilde);
    let r = ech.rank;
    let minor_rows: Vec<usize> = ech.pivot_rows.clone();
    let minor_cols: Vec<usize> = ech.pivot_cols.clone();
    let full = b.restricted(u, true);
    let mut rows: Vec<usize> = vec![0];
    rows.extend(minor_rows.iter().map(|i| i + 1));
    for c in (0..b.s()).filter(|c| !minor_cols.contains(c)) {
        let mut cols = minor_cols.clone();
        cols.push(c);
        if full.submatrix(&rows, &cols).bareiss_rank() == r + 1 {
            return None;
        }
    }
    Some(DenseEvidence::RowSpan {
        r,
        minor_rows,
        minor_cols,
        samples,
    })
}

/// `rank B_e = rank B~_e + 1`: the `Z(h)`-orbit of `e` is strictly larger
/// than its `Z~(h)`-orbit.
pub fn split_identity_check(tg: &ThetaGroup, t: &HomogeneousTriple) -> bool {
    let b = action_matrix(tg, &t.h);
    let Some(v) = b.coordinates(&t.e) else {
        return false;
    };
    let be = b.eval(&v);
    let s = b.s();
    certified::rank(&be, s) == certified::rank(&be[1..], s) + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Grading;
    use crate::lie::{CartanType, Family, LieAlgebra};
    use crate::sl2::complete_triple;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn adjoint(f: Family, l: usize) -> ThetaGroup {
        let g = Arc::new(LieAlgebra::new(CartanType::new(f, l).unwrap()));
        let mut s = vec![0; l + 1];
        s[0] = 1;
        ThetaGroup::new(g.clone(), Grading::from_kac(&g, &s).unwrap())
    }

    #[test]
    fn subspace_bits() {
        let a = Subspace::from_indices(70, [1, 65]);
        let b = Subspace::from_indices(70, [1, 2, 65]);
        assert!(a.is_subset(&b) && !b.is_subset(&a));
        assert_eq!(b.dim(), 3);
        assert_eq!(a.indices().collect::<Vec<_>>(), vec![1, 65]);
        assert!(Subspace::empty(5).is_empty());
    }

    #[test]
    fn sl2_action_matrix() {
        let tg = adjoint(Family::A, 1);
        let t = complete_triple(&tg, &Element::basis(1)).unwrap();
        let b = action_matrix(&tg, &t.h);
        assert_eq!((b.n(), b.s()), (1, 1));
        assert_eq!(b.eval(&[int(1)]), vec![vec![int(-2)]]);
        assert!(split_identity_check(&tg, &t));
    }

    #[test]
    fn sl3_single_root_line_misses_dense_orbit() {
        let tg = adjoint(Family::A, 2);
        let g = &tg.alg;
        let e = Element::from_terms(g.rs.simple.iter().map(|&k| (k, int(1))));
        let t = complete_triple(&tg, &e).unwrap();
        let b = action_matrix(&tg, &t.h);
        assert_eq!(b.s(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let line = Subspace::from_indices(2, [0]);
        for row_span in [RowSpanPolicy::Heuristic, RowSpanPolicy::Always] {
            let opts = DenseOptions {
                row_span,
                ..DenseOptions::default()
            };
            assert!(!dense_intersection_nonempty(&b, &line, &mut rng, opts).nonempty);
            assert!(dense_intersection_nonempty(&b, &Subspace::full(2), &mut rng, opts).nonempty);
            assert!(!dense_intersection_nonempty(&b, &Subspace::empty(2), &mut rng, opts).nonempty);
        }
        assert_eq!(b.restricted(&line, true).generic_rank(&mut rng), 1);
    }

    #[test]
    fn split_check_separates_characteristics() {
        // Every dominant h in a small box with V_2(h) != 0: the split identity
        // holds for generic e exactly when h is a characteristic.
        use crate::sl2::{enumerate_characteristics, SampleOptions};
        for (f, l) in [(Family::A, 3), (Family::B, 3)] {
            let tg = adjoint(f, l);
            let mut rng = ChaCha8Rng::seed_from_u64(9);
            let chars: Vec<Vec<i64>> = enumerate_characteristics(&tg, 2, &mut rng, SampleOptions::default())
                .into_iter()
                .map(|t| t.h.coords)
                .collect();
            let mut coords = vec![0i64; l];
            let mut checked = 0;
            loop {
                let h = Characteristic::from_coords(&tg, &coords, &[]).unwrap();
                let b = action_matrix(&tg, &h);
                if b.s() > 0 {
                    let e = Element::from_terms(
                        b.v2.iter().map(|&k| (k, int(rng.gen_range(1..=7)))),
                    );
                    let t = HomogeneousTriple {
                        h: h.clone(),
                        e,
                        f: Element::zero(),
                    };
                    assert_eq!(split_identity_check(&tg, &t), chars.contains(&coords), "{f:?}{l} {coords:?}");
                    checked += 1;
                }
                let Some(k) = coords.iter().position(|&c| c < 2) else { break };
                coords[k] += 1;
                coords[..k].iter_mut().for_each(|c| *c = 0);
            }
            assert!(checked > 10);
        }
    }
}

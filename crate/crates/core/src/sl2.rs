//! Homogeneous sl2-triples `(h, e, f)` with `e` in `g_1`, `h` in `h_0` and
//! `f` in `g_{-1}`.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grading::ThetaGroup;
use crate::lie::Element;
use crate::linalg::certified::{self, Solved};
use crate::linalg::{int, modp, Scalar};

/// Semisimple element `h` of `h_0`, stored both by its coordinates
/// `delta_j(h)` on the simple roots of `g_0` and by its values `alpha_i(h)`
/// on the simple roots of `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Characteristic {
    pub coords: Vec<i64>,
    pub values: Vec<i64>,
}

impl Characteristic {
    pub fn from_values(tg: &ThetaGroup, values: Vec<i64>) -> Characteristic {
        Characteristic {
            coords: tg.coords_of_values(&values),
            values,
        }
    }

    /// From `g_0` coordinates; `central` fixes the values on the central
    /// coordinate roots and must be empty when `g_0` is semisimple.
    pub fn from_coords(tg: &ThetaGroup, coords: &[i64], central: &[i64]) -> Result<Characteristic> {
        if coords.len() != tg.data.rank() || central.len() != tg.data.center_dim() {
            return Err(Error::Dimension(format!(
                "characteristic needs {} coordinates and {} central values",
                tg.data.rank(),
                tg.data.center_dim()
            )));
        }
        let values = tg
            .values_from_coords(coords, central)
            .ok_or_else(|| Error::NonIntegral(coords.to_vec()))?;
        Ok(Characteristic {
            coords: coords.to_vec(),
            values,
        })
    }

    pub fn is_dominant(&self) -> bool {
        self.coords.iter().all(|a| *a >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|a| *a == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomogeneousTriple {
    pub h: Characteristic,
    pub e: Element,
    pub f: Element,
}

/// Options for [`triple_from_characteristic`].
#[derive(Debug, Clone, Copy)]
pub struct SampleOptions {
    /// Coordinates are drawn from `{-bound..bound} \ {0}`.
    pub coord_bound: i64,
    pub retries: usize,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            coord_bound: 5,
            retries: 8,
        }
    }
}

/// Random element with nonzero integer coordinates on the given roots.
pub fn random_element<R: Rng>(rng: &mut R, roots: &[usize], bound: i64) -> Vec<(usize, i64)> {
    roots
        .iter()
        .map(|&b| {
            let mut c = 0;
            while c == 0 {
                c = rng.gen_range(-bound..=bound);
            }
            (b, c)
        })
        .collect()
}

pub fn element_from_ints(terms: &[(usize, i64)]) -> Element {
    Element::from_terms(terms.iter().map(|&(k, c)| (k, int(c))))
}

/// The linear system for `f` in `g_{-1} ∩ V_{-2}(h)` with `[e, f] = h`:
/// one equation per simple-root value of the Cartan part and one per root
/// of `g_0` vanishing on `h`.
struct FSystem {
    unknowns: Vec<usize>,
    rows: Vec<Vec<(usize, Scalar)>>,
    rhs: Vec<Scalar>,
}

fn f_system(tg: &ThetaGroup, e: &Element, h: &[i64]) -> FSystem {
    let g = &*tg.alg;
    let l = g.rank();
    let unknowns: Vec<usize> = tg
        .gm1
        .iter()
        .copied()
        .filter(|&c| tg.root_value(c, h) == -2)
        .collect();
    let zero_roots: Vec<usize> = tg
        .data
        .phi0
        .iter()
        .copied()
        .filter(|&d| tg.root_value(d, h) == 0)
        .collect();
    let mut row_of: HashMap<usize, usize> = HashMap::new();
    for (k, &d) in zero_roots.iter().enumerate() {
        row_of.insert(d, l + k);
    }
    let mut rows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); l + zero_roots.len()];
    for (col, &c) in unknowns.iter().enumerate() {
        for (&b, eb) in &e.terms {
            if g.rs.neg[b] == c {
                for (i, cv) in g.coroot_values(b).into_iter().enumerate() {
                    if cv != 0 {
                        rows[i].push((col, eb * int(cv)));
                    }
                }
            } else if let Some(d) = g.root_sum(b, c) {
                let r = *row_of.get(&d).expect("bracket lands in z(h)");
                rows[r].push((col, eb * int(g.n(b, c))));
            }
        }
    }
    let mut rhs: Vec<Scalar> = h.iter().map(|&x| int(x)).collect();
    rhs.extend(std::iter::repeat_with(Scalar::zero).take(zero_roots.len()));
    FSystem {
        unknowns,
        rows,
        rhs,
    }
}

impl FSystem {
    fn dense(&self) -> Vec<Vec<Scalar>> {
        let n = self.unknowns.len();
        self.rows
            .iter()
            .map(|r| {
                let mut row = vec![Scalar::zero(); n];
                for (c, v) in r {
                    row[*c] += v;
                }
                row
            })
            .collect()
    }

    fn dense_modp(&self) -> Option<(Vec<Vec<u64>>, Vec<u64>)> {
        let n = self.unknowns.len();
        let mut a = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            let mut row = vec![0u64; n];
            for (c, v) in r {
                row[*c] = modp::add(row[*c], modp::from_scalar(v)?);
            }
            a.push(row);
        }
        let b = self.rhs.iter().map(modp::from_scalar).collect::<Option<Vec<_>>>()?;
        Some((a, b))
    }
}

/// Exact solution `f` of `[e, f] = h` with `f` in `g_{-1} ∩ V_{-2}(h)`.
pub fn solve_f(tg: &ThetaGroup, e: &Element, h: &[i64]) -> Option<Element> {
    let sys = f_system(tg, e, h);
    let n = sys.unknowns.len();
    match certified::solve(&sys.dense(), &sys.rhs, n) {
        Solved::Solution(x) => Some(Element::from_terms(sys.unknowns.iter().copied().zip(x))),
        Solved::Inconsistent(_) => None,
    }
}

/// Fast modular test of the same system. `false` is exact up to an event of
/// probability about `1/p`; `true` answers should be confirmed with
/// [`solve_f`].
pub fn solvable_modp(tg: &ThetaGroup, e: &Element, h: &[i64]) -> bool {
    let sys = f_system(tg, e, h);
    match sys.dense_modp() {
        Some((a, b)) => {
            if a.is_empty() {
                return b.iter().all(|x| *x == 0);
            }
            modp::solve(&a, &b).is_some()
        }
        None => solve_f(tg, e, h).is_some(),
    }
}

/// Checks the three bracket relations exactly.
pub fn verify_triple(tg: &ThetaGroup, t: &HomogeneousTriple) -> bool {
    let g = &*tg.alg;
    let h = g.cartan_from_values(&t.h.values.iter().map(|&x| int(x)).collect::<Vec<_>>());
    let in_degree = |x: &Element, d: i64| {
        x.support()
            .all(|k| g.is_root_index(k) && tg.grading.root_degree[k] == tg.grading.reduce(d))
    };
    in_degree(&t.e, 1)
        && in_degree(&t.f, -1)
        && g.bracket(&h, &t.e) == t.e.scaled(&int(2))
        && g.bracket(&h, &t.f) == t.f.scaled(&int(-2))
        && g.bracket(&t.e, &t.f) == h
}

/// Random `e` in `V_2(h)` completed to a triple; `None` when every attempt
/// fails (in particular when `V_2(h) = 0`).
pub fn triple_from_characteristic<R: Rng>(
    tg: &ThetaGroup,
    h: &Characteristic,
    rng: &mut R,
    opts: SampleOptions,
) -> Option<HomogeneousTriple> {
    let v2 = tg.v_space(&h.values, 2);
    if v2.is_empty() || h.is_zero() {
        return None;
    }
    for _ in 0..opts.retries.max(1) {
        let e = element_from_ints(&random_element(rng, &v2, opts.coord_bound));
        if !solvable_modp(tg, &e, &h.values) {
            continue;
        }
        if let Some(f) = solve_f(tg, &e, &h.values) {
            let t = HomogeneousTriple { h: h.clone(), e, f };
            if verify_triple(tg, &t) {
                return Some(t);
            }
        }
    }
    None
}

/// `Some(f')` with `[e', f'] = h` iff `e'` lies in the orbit of `t.e`.
pub fn orbit_membership(tg: &ThetaGroup, t: &HomogeneousTriple, e2: &Element) -> Result<Option<Element>> {
    let v2 = tg.v_space(&t.h.values, 2);
    if e2.support().any(|k| !v2.contains(&k)) {
        return Err(Error::NotInV2);
    }
    if e2.is_zero() {
        return Ok(None);
    }
    Ok(solve_f(tg, e2, &t.h.values))
}

/// Matrix of `ad e` from `g_j` to `g_{j+1}` (rows: basis of `g_{j+1}`).
fn ad_matrix(tg: &ThetaGroup, e: &Element, j: i64) -> (Vec<Vec<Scalar>>, usize) {
    let g = &*tg.alg;
    let src = tg.grading.component(g, j);
    let dst = tg.grading.component(g, j + 1);
    let pos: HashMap<usize, usize> = dst.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut m = vec![vec![Scalar::zero(); src.len()]; dst.len()];
    for (col, &x) in src.iter().enumerate() {
        for (&b, eb) in &e.terms {
            for (k, c) in g.bracket_basis(b, x) {
                let row = pos[&k];
                m[row][col] += eb * int(c);
            }
        }
    }
    (m, src.len())
}

/// `dim G_0 e = rank(ad e : g_0 -> g_1)`.
pub fn orbit_dimension(tg: &ThetaGroup, t: &HomogeneousTriple) -> usize {
    let (m, cols) = ad_matrix(tg, &t.e, 0);
    certified::rank(&m, cols)
}

/// `(k, dim g_{k,e})` for every degree `k` of the grading.
pub fn centralizer_dims(tg: &ThetaGroup, t: &HomogeneousTriple) -> Vec<(i64, usize)> {
    tg.grading
        .degrees()
        .into_iter()
        .map(|k| {
            let (m, cols) = ad_matrix(tg, &t.e, k);
            (k, cols - certified::rank(&m, cols))
        })
        .collect()
}

/// Highest power of `ad` that can be nonzero on a nilpotent element.
fn nilpotency_bound(tg: &ThetaGroup) -> usize {
    let g = &*tg.alg;
    2 * g.rs.heights[g.rs.highest()] as usize + 1
}

fn is_ad_nilpotent(tg: &ThetaGroup, e: &Element) -> bool {
    let g = &*tg.alg;
    let n = nilpotency_bound(tg);
    (0..g.dim()).all(|k| {
        let mut y = Element::basis(k);
        for _ in 0..n {
            y = g.bracket(e, &y);
            if y.is_zero() {
                return true;
            }
        }
        false
    })
}

/// `exp(t ad x)(y)`.
fn exp_ad(tg: &ThetaGroup, x: &Element, t: &Scalar, y: &Element) -> Element {
    let g = &*tg.alg;
    let mut out = y.clone();
    let mut term = y.clone();
    let mut k = 1i64;
    loop {
        term = g.bracket(x, &term).scaled(&(t / int(k)));
        if term.is_zero() {
            return out;
        }
        out.add_scaled(&term, &Scalar::one());
        k += 1;
    }
}

/// Applies `n_delta = exp(ad x_d) exp(-ad x_{-d}) exp(ad x_d)`, a lift of the
/// reflection `s_d` to `G_0`.
pub fn apply_reflection(tg: &ThetaGroup, d: usize, y: &Element) -> Element {
    let g = &*tg.alg;
    let xp = Element::basis(d);
    let xm = Element::basis(g.rs.neg[d]);
    let one = Scalar::one();
    let a = exp_ad(tg, &xp, &one, y);
    let b = exp_ad(tg, &xm, &-one.clone(), &a);
    exp_ad(tg, &xp, &one, &b)
}

/// Completes a nilpotent `e` in `g_1` to a homogeneous triple with dominant `h`.
pub fn complete_triple(tg: &ThetaGroup, e: &Element) -> Result<HomogeneousTriple> {
    let g = &*tg.alg;
    let l = g.rank();
    if e.is_zero() {
        return Err(Error::ZeroElement);
    }
    if e
        .support()
        .any(|k| !g.is_root_index(k) || tg.grading.root_degree[k] != tg.grading.reduce(1))
    {
        return Err(Error::NotHomogeneous);
    }
    if !is_ad_nilpotent(tg, e) {
        return Err(Error::NotNilpotent);
    }
    // Unknowns: f over g_{-1} and the values v of h. Equations:
    //   root parts of [e, f] vanish, Cartan values of [e, f] equal v,
    //   beta(h) = 2 for beta in supp(e).
    let nf = tg.gm1.len();
    let cols = nf + l;
    let phi0_pos: HashMap<usize, usize> = tg.data.phi0.iter().enumerate().map(|(i, &d)| (d, l + i)).collect();
    let mut a = vec![vec![Scalar::zero(); cols]; l + tg.data.phi0.len()];
    for (col, &c) in tg.gm1.iter().enumerate() {
        for (&b, eb) in &e.terms {
            if g.rs.neg[b] == c {
                for (i, cv) in g.coroot_values(b).into_iter().enumerate() {
                    a[i][col] += eb * int(cv);
                }
            } else if let Some(d) = g.root_sum(b, c) {
                a[phi0_pos[&d]][col] += eb * int(g.n(b, c));
            }
        }
    }
    for (i, row) in a.iter_mut().enumerate().take(l) {
        row[nf + i] = int(-1);
    }
    let mut rhs = vec![Scalar::zero(); a.len()];
    for b in e.support() {
        let mut row = vec![Scalar::zero(); cols];
        for (i, c) in g.rs.roots[b].iter().enumerate() {
            row[nf + i] = int(*c);
        }
        a.push(row);
        rhs.push(int(2));
    }
    let sol = match certified::solve(&a, &rhs, cols) {
        Solved::Solution(x) => x,
        Solved::Inconsistent(_) => return Err(Error::NonToral),
    };
    let mut values = Vec::with_capacity(l);
    for x in &sol[nf..] {
        if !x.is_integer() {
            return Err(Error::NotNilpotent);
        }
        values.push(num_traits::ToPrimitive::to_i64(&x.to_integer()).ok_or(Error::NotNilpotent)?);
    }
    let mut e = e.clone();
    let mut f = solve_f(tg, &e, &values).ok_or(Error::NotNilpotent)?;
    // Move h into the dominant chamber, carrying e and f along.
    loop {
        let coords = tg.coords_of_values(&values);
        let Some(j) = coords.iter().position(|a| *a < 0) else {
            break;
        };
        let d = tg.data.simple[j];
        e = apply_reflection(tg, d, &e);
        f = apply_reflection(tg, d, &f);
        let aj = coords[j];
        for (v, c) in values.iter_mut().zip(&tg.data.coroot_on_simple[j]) {
            *v -= aj * c;
        }
    }
    let t = HomogeneousTriple {
        h: Characteristic::from_values(tg, values),
        e,
        f,
    };
    if !verify_triple(tg, &t) {
        return Err(Error::NotNilpotent);
    }
    Ok(t)
}

/// Necessary conditions on `h` from sl2-representation theory: `ad e` maps
/// `g_j(k)` injectively to `g_{j+1}(k+2)` for `k <= -1` and onto it for
/// `k >= -1`.
pub fn passes_dimension_filter(tg: &ThetaGroup, values: &[i64]) -> bool {
    let g = &*tg.alg;
    let mut count: HashMap<(i64, i64), i64> = HashMap::new();
    for a in 0..g.num_roots() {
        *count
            .entry((tg.grading.root_degree[a], tg.root_value(a, values)))
            .or_insert(0) += 1;
    }
    *count.entry((0, 0)).or_insert(0) += g.rank() as i64;
    for (&(j, k), &n) in &count {
        let target = count
            .get(&(tg.grading.reduce(j + 1), k + 2))
            .copied()
            .unwrap_or(0);
        if k <= -1 && n > target {
            return false;
        }
        if k >= -1 && n < target {
            return false;
        }
    }
    // Targets with no source also violate surjectivity.
    for (&(j, k), &n) in &count {
        if k - 2 >= -1 && n > 0 && !count.contains_key(&(tg.grading.reduce(j - 1), k - 2)) {
            return false;
        }
    }
    true
}

/// Enumerates dominant characteristics with `g_0` coordinates at most
/// `bound` that admit a homogeneous triple. Complete for the adjoint case
/// with bound 2; for other gradings the bound may exclude orbits.
///
/// When `g_0` has a center, the central values range over
/// `|alpha_i(h)| <= 2 ht(theta)`, the range of root values of any sl2 `h`.
pub fn enumerate_characteristics<R: Rng>(
    tg: &ThetaGroup,
    bound: i64,
    rng: &mut R,
    opts: SampleOptions,
) -> Vec<HomogeneousTriple> {
    let r = tg.data.rank();
    let c = tg.data.center_dim();
    let g = &*tg.alg;
    let cb = 2 * g.rs.heights[g.rs.highest()];
    let grading_element: Option<Vec<i64>> = match &tg.grading.spec {
        crate::grading::GradingSpec::Degrees(d) => Some(d.clone()),
        _ => None,
    };
    let mut out = Vec::new();
    let mut coords = vec![0i64; r];
    loop {
        let mut central = vec![-cb; c];
        loop {
            if let Ok(h) = Characteristic::from_coords(tg, &coords, &central) {
                // For a Z-grading with grading element H: kappa(h, H) = kappa(h, h) / 2.
                let kappa_ok = grading_element.as_ref().is_none_or(|hh| {
                    2 * tg.kappa(&h.values, hh) == tg.kappa(&h.values, &h.values)
                });
                if !h.is_zero() && kappa_ok && passes_dimension_filter(tg, &h.values) {
                    if let Some(t) = triple_from_characteristic(tg, &h, rng, opts) {
                        out.push(t);
                    }
                }
            }
            if !advance(&mut central, -cb, cb) {
                break;
            }
        }
        if !advance(&mut coords, 0, bound) {
            break;
        }
    }
    out
}

fn advance(v: &mut [i64], lo: i64, hi: i64) -> bool {
    for x in v.iter_mut() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Grading;
    use crate::lie::{CartanType, Family, LieAlgebra};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn adjoint(f: Family, l: usize) -> ThetaGroup {
        let g = Arc::new(LieAlgebra::new(CartanType::new(f, l).unwrap()));
        let mut s = vec![0; l + 1];
        s[0] = 1;
        let gr = Grading::from_kac(&g, &s).unwrap();
        ThetaGroup::new(g, gr)
    }

    #[test]
    fn sl2_defining_triple() {
        let tg = adjoint(Family::A, 1);
        let e = Element::basis(1);
        let t = complete_triple(&tg, &e).unwrap();
        assert_eq!(t.h.coords, vec![2]);
        assert_eq!(orbit_dimension(&tg, &t), 2);
    }

    #[test]
    fn sl3_regular_element() {
        let tg = adjoint(Family::A, 2);
        let g = &tg.alg;
        let e = Element::from_terms(g.rs.simple.iter().map(|&k| (k, int(1))));
        let t = complete_triple(&tg, &e).unwrap();
        assert_eq!(t.h.coords, vec![2, 2]);
        // A single simple root vector is not in the regular orbit.
        let sub = Element::basis(g.rs.simple[0]);
        assert!(orbit_membership(&tg, &t, &sub).unwrap().is_none());
        assert!(orbit_membership(&tg, &t, &t.e).unwrap().is_some());
        assert!(orbit_membership(&tg, &t, &Element::zero()).unwrap().is_none());
    }

    #[test]
    fn negative_root_vector_is_conjugated_to_dominant() {
        let tg = adjoint(Family::A, 2);
        let g = &tg.alg;
        let e = Element::basis(g.rs.neg[g.rs.simple[1]]);
        let t = complete_triple(&tg, &e).unwrap();
        assert_eq!(t.h.coords, vec![1, 1]);
    }

    #[test]
    fn semisimple_element_is_rejected() {
        let tg = adjoint(Family::A, 1);
        let e = Element::from_terms([(0, int(1)), (1, int(1))]);
        assert!(matches!(complete_triple(&tg, &e), Err(Error::NotNilpotent)));
        assert!(matches!(complete_triple(&tg, &Element::zero()), Err(Error::ZeroElement)));
    }

    #[test]
    fn sl3_enumeration() {
        let tg = adjoint(Family::A, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let found: Vec<Vec<i64>> = enumerate_characteristics(&tg, 2, &mut rng, SampleOptions::default())
            .into_iter()
            .map(|t| t.h.coords)
            .collect();
        assert_eq!(found, vec![vec![1, 1], vec![2, 2]]);
    }

    #[test]
    fn zero_characteristic_has_no_triple() {
        let tg = adjoint(Family::A, 2);
        let h = Characteristic::from_coords(&tg, &[0, 0], &[]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(triple_from_characteristic(&tg, &h, &mut rng, SampleOptions::default()).is_none());
    }
}

//! Gradings of a simple Lie algebra and the data of the group `G_0`.
//!
//! A Kac diagram `(s_0, ..., s_l)` gives the inner automorphism of order
//! `m = sum n_i s_i` multiplying `x_{alpha_i}` by `omega^{s_i}`; root vectors
//! then have degree `sum_{i >= 1} c_i s_i mod m`. A degree vector
//! `(d_1, ..., d_l)` gives the Z-grading with `deg x_alpha = sum c_i d_i`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{KillingForm, LieAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingSpec {
    /// Labels `s_0..s_l` of a Kac diagram (node 0 is the extended node).
    KacLabels(Vec<i64>),
    /// Degrees `d_1..d_l` of the simple root vectors of a Z-grading.
    Degrees(Vec<i64>),
}

#[derive(Debug, Clone)]
pub struct Grading {
    pub spec: GradingSpec,
    /// Order of the automorphism; 0 for a Z-grading.
    pub modulus: i64,
    /// Degree of each root vector, reduced into `0..m` when `m > 0`.
    pub root_degree: Vec<i64>,
}

impl Grading {
    pub fn from_kac(g: &LieAlgebra, labels: &[i64]) -> Result<Grading> {
        let l = g.rank();
        if labels.len() != l + 1 {
            return Err(Error::InvalidGrading(format!(
                "expected {} Kac labels, got {}",
                l + 1,
                labels.len()
            )));
        }
        if labels.iter().any(|s| *s < 0) {
            return Err(Error::InvalidGrading("Kac labels must be non-negative".into()));
        }
        let gcd = labels.iter().fold(0i64, |acc, s| acc.gcd(s));
        if gcd != 1 {
            return Err(Error::InvalidGrading(format!(
                "Kac labels must have gcd 1 (got {gcd})"
            )));
        }
        let m: i64 = g.rs.marks.iter().zip(labels).map(|(n, s)| n * s).sum();
        let root_degree = g
            .rs
            .roots
            .iter()
            .map(|c| {
                let d: i64 = c.iter().zip(&labels[1..]).map(|(a, s)| a * s).sum();
                d.rem_euclid(m)
            })
            .collect();
        Ok(Grading {
            spec: GradingSpec::KacLabels(labels.to_vec()),
            modulus: m,
            root_degree,
        })
    }

    /// Z-grading from non-negative degrees of the simple root vectors. Any
    /// Z-grading is conjugate to one of this form.
    pub fn from_degrees(g: &LieAlgebra, d: &[i64]) -> Result<Grading> {
        if d.len() != g.rank() {
            return Err(Error::InvalidGrading(format!(
                "expected {} degrees, got {}",
                g.rank(),
                d.len()
            )));
        }
        if d.iter().any(|x| *x < 0) {
            return Err(Error::InvalidGrading(
                "degrees of simple root vectors must be non-negative".into(),
            ));
        }
        let root_degree = g
            .rs
            .roots
            .iter()
            .map(|c| c.iter().zip(d).map(|(a, s)| a * s).sum())
            .collect();
        Ok(Grading {
            spec: GradingSpec::Degrees(d.to_vec()),
            modulus: 0,
            root_degree,
        })
    }

    pub fn from_spec(g: &LieAlgebra, spec: &GradingSpec) -> Result<Grading> {
        match spec {
            GradingSpec::KacLabels(s) => Grading::from_kac(g, s),
            GradingSpec::Degrees(d) => Grading::from_degrees(g, d),
        }
    }

    pub fn reduce(&self, i: i64) -> i64 {
        if self.modulus > 0 {
            i.rem_euclid(self.modulus)
        } else {
            i
        }
    }

    /// Degree of a basis vector (Cartan vectors have degree 0).
    pub fn degree_of_basis(&self, g: &LieAlgebra, k: usize) -> i64 {
        if g.is_root_index(k) {
            self.root_degree[k]
        } else {
            0
        }
    }

    /// Root indices of degree `i`, in root order.
    pub fn component_roots(&self, i: i64) -> Vec<usize> {
        let i = self.reduce(i);
        (0..self.root_degree.len())
            .filter(|&k| self.root_degree[k] == i)
            .collect()
    }

    /// Basis of `g_i`: root vectors in root order, Cartan vectors last.
    pub fn component(&self, g: &LieAlgebra, i: i64) -> Vec<usize> {
        let mut out = self.component_roots(i);
        if self.reduce(i) == 0 {
            out.extend((0..g.rank()).map(|j| g.cartan_index(j)));
        }
        out
    }

    /// Degrees carrying a nonzero component: `0..m` for finite order,
    /// `min..=max` for a Z-grading.
    pub fn degrees(&self) -> Vec<i64> {
        if self.modulus > 0 {
            (0..self.modulus).collect()
        } else {
            let lo = self.root_degree.iter().copied().min().unwrap_or(0).min(0);
            let hi = self.root_degree.iter().copied().max().unwrap_or(0).max(0);
            (lo..=hi).collect()
        }
    }
}

/// Root data of `g_0` with respect to the Cartan subalgebra `h_0 = h`.
#[derive(Debug, Clone)]
pub struct Theta0Data {
    /// Roots of degree 0.
    pub phi0: Vec<usize>,
    /// Positive roots of `g_0` with respect to `simple`.
    pub phi0_pos: Vec<usize>,
    /// Simple roots `delta_1..delta_r` of `g_0`, as root indices.
    pub simple: Vec<usize>,
    /// Names of the simple roots (Kac node or simple-root number).
    pub simple_names: Vec<usize>,
    /// `cartan[j][k] = <delta_k, delta_j^vee>`.
    pub cartan: Vec<Vec<i64>>,
    /// `coroot_on_simple[j][i] = <alpha_i, delta_j^vee>`; applying the
    /// reflection `s_j` to a Cartan element with values `v` gives
    /// `v - a_j * coroot_on_simple[j]` where `a_j = delta_j(h)`.
    pub coroot_on_simple: Vec<Vec<i64>>,
    /// Simple-root indices `i` whose values complete the `delta_j(h)` to a
    /// coordinate system on `h` (empty when `g_0` is semisimple).
    pub central_coords: Vec<usize>,
}

impl Theta0Data {
    pub fn new(g: &LieAlgebra, gr: &Grading) -> Theta0Data {
        let names: Vec<usize> = match &gr.spec {
            GradingSpec::KacLabels(s) => (0..s.len()).filter(|&i| s[i] == 0).collect(),
            GradingSpec::Degrees(d) => (0..d.len()).filter(|&i| d[i] == 0).map(|i| i + 1).collect(),
        };
        Self::with_order(g, gr, &names).expect("default simple-root order is valid")
    }

    /// Builds the data with the simple roots of `g_0` listed in the given
    /// order. Names refer to Kac nodes `0..=l` for finite-order gradings and
    /// to simple roots `1..=l` for Z-gradings.
    pub fn with_order(g: &LieAlgebra, gr: &Grading, names: &[usize]) -> Result<Theta0Data> {
        let l = g.rank();
        let phi0 = gr.component_roots(0);
        let mut allowed: BTreeSet<usize> = match &gr.spec {
            GradingSpec::KacLabels(s) => (0..s.len()).filter(|&i| s[i] == 0).collect(),
            GradingSpec::Degrees(d) => (0..d.len()).filter(|&i| d[i] == 0).map(|i| i + 1).collect(),
        };
        for n in names {
            if !allowed.remove(n) {
                return Err(Error::InvalidGrading(format!(
                    "simple root order {names:?} is not a permutation of the degree-0 nodes"
                )));
            }
        }
        if !allowed.is_empty() {
            return Err(Error::InvalidGrading(format!(
                "simple root order {names:?} misses nodes {allowed:?}"
            )));
        }
        let simple: Vec<usize> = names
            .iter()
            .map(|&n| if n == 0 { g.rs.lowest() } else { g.rs.simple[n - 1] })
            .collect();
        let r = simple.len();
        let cartan: Vec<Vec<i64>> = (0..r)
            .map(|j| {
                (0..r)
                    .map(|k| g.rs.pairing(&g.rs.roots[simple[k]], &g.rs.roots[simple[j]]))
                    .collect()
            })
            .collect();
        let coroot_on_simple = simple.iter().map(|&d| g.coroot_values(d)).collect();

        // Positive roots of g_0: close the simple roots under adding simple roots.
        let mut pos: BTreeSet<usize> = simple.iter().copied().collect();
        let mut layer: Vec<usize> = simple.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for &b in &layer {
                for &d in &simple {
                    if let Some(c) = g.root_sum(b, d) {
                        if pos.insert(c) {
                            next.push(c);
                        }
                    }
                }
            }
            layer = next;
        }
        let phi0_pos: Vec<usize> = pos.into_iter().collect();
        debug_assert_eq!(phi0_pos.len() * 2, phi0.len());

        // Complete the rows delta_j to a basis by unit vectors e_i.
        let mut rows: Vec<Vec<crate::linalg::Scalar>> = simple
            .iter()
            .map(|&d| g.rs.roots[d].iter().map(|&x| crate::linalg::int(x)).collect())
            .collect();
        let mut central_coords = Vec::new();
        let mut rank = crate::linalg::rank(&rows);
        for i in 0..l {
            if rank == l {
                break;
            }
            let mut e = vec![crate::linalg::int(0); l];
            e[i] = crate::linalg::int(1);
            rows.push(e);
            let nr = crate::linalg::rank(&rows);
            if nr > rank {
                rank = nr;
                central_coords.push(i);
            } else {
                rows.pop();
            }
        }
        Ok(Theta0Data {
            phi0,
            phi0_pos,
            simple,
            simple_names: names.to_vec(),
            cartan,
            coroot_on_simple,
            central_coords,
        })
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn center_dim(&self) -> usize {
        self.central_coords.len()
    }

    pub fn dim_g0(&self, g: &LieAlgebra) -> usize {
        self.phi0.len() + g.rank()
    }
}

/// A graded simple Lie algebra together with the data of `G_0`; the context
/// for all orbit computations.
#[derive(Debug, Clone)]
pub struct ThetaGroup {
    pub alg: Arc<LieAlgebra>,
    pub killing: KillingForm,
    pub grading: Grading,
    pub data: Theta0Data,
    /// Root indices spanning `g_1` and `g_{-1}`.
    pub g1: Vec<usize>,
    pub gm1: Vec<usize>,
}

impl ThetaGroup {
    pub fn new(alg: Arc<LieAlgebra>, grading: Grading) -> ThetaGroup {
        let data = Theta0Data::new(&alg, &grading);
        Self::from_parts(alg, grading, data)
    }

    pub fn with_simple_order(alg: Arc<LieAlgebra>, grading: Grading, names: &[usize]) -> Result<ThetaGroup> {
        let data = Theta0Data::with_order(&alg, &grading, names)?;
        Ok(Self::from_parts(alg, grading, data))
    }

    fn from_parts(alg: Arc<LieAlgebra>, grading: Grading, data: Theta0Data) -> ThetaGroup {
        let killing = KillingForm::new(&alg);
        let g1 = grading.component_roots(1);
        let gm1 = grading.component_roots(-1);
        ThetaGroup {
            alg,
            killing,
            grading,
            data,
            g1,
            gm1,
        }
    }

    pub fn dim_g0(&self) -> usize {
        self.data.dim_g0(&self.alg)
    }

    pub fn dim_g1(&self) -> usize {
        self.g1.len()
    }

    /// Coordinates `delta_j(h)` of a Cartan element with simple-root values `v`.
    pub fn coords_of_values(&self, v: &[i64]) -> Vec<i64> {
        self.data
            .simple
            .iter()
            .map(|&d| self.alg.root_on_values(d, v))
            .collect()
    }

    /// Solves for simple-root values from `g_0` coordinates plus the values
    /// on the central coordinate roots. `None` if the result is not integral.
    pub fn values_from_coords(&self, coords: &[i64], central: &[i64]) -> Option<Vec<i64>> {
        use crate::linalg::{int, solve};
        let l = self.alg.rank();
        assert_eq!(coords.len(), self.data.rank());
        assert_eq!(central.len(), self.data.center_dim());
        let mut rows: Vec<Vec<crate::linalg::Scalar>> = self
            .data
            .simple
            .iter()
            .map(|&d| self.alg.rs.roots[d].iter().map(|&x| int(x)).collect())
            .collect();
        let mut rhs: Vec<crate::linalg::Scalar> = coords.iter().map(|&x| int(x)).collect();
        for (&i, &t) in self.data.central_coords.iter().zip(central) {
            let mut e = vec![int(0); l];
            e[i] = int(1);
            rows.push(e);
            rhs.push(int(t));
        }
        let v = solve(&rows, &rhs)?;
        v.iter()
            .map(|x| {
                if x.is_integer() {
                    num_traits::ToPrimitive::to_i64(&x.to_integer())
                } else {
                    None
                }
            })
            .collect()
    }

    /// Value of root `a` on the Cartan element with simple-root values `v`.
    pub fn root_value(&self, a: usize, v: &[i64]) -> i64 {
        self.alg.root_on_values(a, v)
    }

    /// `V_k(h)`: roots of `g_1` with value `k` on `h`.
    pub fn v_space(&self, v: &[i64], k: i64) -> Vec<usize> {
        self.g1.iter().copied().filter(|&b| self.root_value(b, v) == k).collect()
    }

    /// Roots of degree `j` with value `k` on `h`.
    pub fn graded_eigenspace(&self, j: i64, v: &[i64], k: i64) -> Vec<usize> {
        self.grading
            .component_roots(j)
            .into_iter()
            .filter(|&b| self.root_value(b, v) == k)
            .collect()
    }

    pub fn kappa(&self, v: &[i64], w: &[i64]) -> i64 {
        self.killing.on_values(v, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{CartanType, Family};

    fn alg(f: Family, l: usize) -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::new(CartanType::new(f, l).unwrap()))
    }

    #[test]
    fn adjoint_grading_is_trivial() {
        let g = alg(Family::B, 3);
        let gr = Grading::from_kac(&g, &[1, 0, 0, 0]).unwrap();
        assert_eq!(gr.modulus, 1);
        assert_eq!(gr.component(&g, 0).len(), g.dim());
        let t = ThetaGroup::new(g.clone(), gr);
        assert_eq!(t.data.phi0.len(), g.num_roots());
        assert_eq!(t.data.rank(), 3);
        assert_eq!(t.data.simple, g.rs.simple);
        assert_eq!(t.g1.len(), g.num_roots());
    }

    #[test]
    fn trivector_grading_of_e8() {
        let g = alg(Family::E, 8);
        let gr = Grading::from_kac(&g, &[0, 0, 1, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(gr.modulus, 3);
        let t = ThetaGroup::new(g, gr);
        assert_eq!(t.dim_g1(), 84);
        assert_eq!(t.dim_g0(), 80);
        assert_eq!(t.data.rank(), 8);
        assert_eq!(t.data.center_dim(), 0);
        // A8 Cartan matrix: a path.
        let edges: usize = (0..8)
            .map(|j| (0..8).filter(|&k| k != j && t.data.cartan[j][k] != 0).count())
            .sum();
        assert_eq!(edges, 2 * 7);
    }

    #[test]
    fn order_five_grading_of_e8() {
        let g = alg(Family::E, 8);
        let gr = Grading::from_kac(&g, &[0, 0, 0, 0, 0, 1, 0, 0, 0]).unwrap();
        assert_eq!(gr.modulus, 5);
        let t = ThetaGroup::new(g, gr);
        assert_eq!(t.dim_g1(), 50);
        assert_eq!(t.dim_g0(), 48);
    }

    #[test]
    fn z_grading_dimensions() {
        let g = alg(Family::A, 2);
        let gr = Grading::from_degrees(&g, &[1, 1]).unwrap();
        let dims: Vec<usize> = (-2..=2).map(|i| gr.component(&g, i).len()).collect();
        assert_eq!(dims, vec![1, 2, 2, 2, 1]);
        let t = ThetaGroup::new(g, gr);
        assert_eq!(t.data.rank(), 0);
        assert_eq!(t.data.center_dim(), 2);
    }

    #[test]
    fn rejects_bad_labels() {
        let g = alg(Family::A, 2);
        assert!(Grading::from_kac(&g, &[0, 0, 0]).is_err());
        assert!(Grading::from_kac(&g, &[2, 0, 2]).is_err());
        assert!(Grading::from_kac(&g, &[1, 0]).is_err());
        assert!(Grading::from_degrees(&g, &[-1, 1]).is_err());
    }
}

//! The Killing form `kappa(x, y) = tr(ad x ad y)`.

use num_traits::Zero;

use super::algebra::{Element, LieAlgebra};
use crate::linalg::{int, Scalar};

/// Gram data of the Killing form in the Chevalley basis. The form pairs
/// `x_alpha` only with `x_{-alpha}` and the Cartan subalgebra with itself.
#[derive(Debug, Clone)]
pub struct KillingForm {
    /// `kappa(h_i, h_j)`.
    pub cartan: Vec<Vec<i64>>,
    /// `kappa(x_alpha, x_{-alpha})` per root index.
    pub root_pair: Vec<i64>,
    /// Gram matrix in value coordinates: if `v_i = alpha_i(h)` and
    /// `w_i = alpha_i(h')` then `kappa(h, h') = v^T G w`.
    pub values: Vec<Vec<i64>>,
}

impl KillingForm {
    pub fn new(g: &LieAlgebra) -> Self {
        let l = g.rank();
        let nr = g.num_roots();
        let mut cartan = vec![vec![0i64; l]; l];
        let mut values = vec![vec![0i64; l]; l];
        for a in 0..nr {
            let root = &g.rs.roots[a];
            for i in 0..l {
                for j in 0..l {
                    cartan[i][j] += g.root_value(a, i) * g.root_value(a, j);
                    values[i][j] += root[i] * root[j];
                }
            }
        }
        let root_pair = (0..nr)
            .map(|a| {
                let c = g.coroot_coeffs(a);
                let mut s = 0;
                for i in 0..l {
                    for j in 0..l {
                        s += c[i] * cartan[i][j] * c[j];
                    }
                }
                debug_assert_eq!(s % 2, 0);
                s / 2
            })
            .collect();
        KillingForm {
            cartan,
            root_pair,
            values,
        }
    }

    pub fn eval(&self, g: &LieAlgebra, x: &Element, y: &Element) -> Scalar {
        let nr = g.num_roots();
        let mut s = Scalar::zero();
        for (a, ca) in &x.terms {
            if *a < nr {
                let b = g.rs.neg[*a];
                if let Some(cb) = y.terms.get(&b) {
                    s += ca * cb * int(self.root_pair[*a]);
                }
            } else {
                for (b, cb) in y.terms.range(nr..) {
                    s += ca * cb * int(self.cartan[a - nr][b - nr]);
                }
            }
        }
        s
    }

    /// `kappa(h, h')` for Cartan elements given by their simple-root values.
    pub fn on_values(&self, v: &[i64], w: &[i64]) -> i64 {
        let mut s = 0;
        for (i, vi) in v.iter().enumerate() {
            if *vi == 0 {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                s += vi * self.values[i][j] * wj;
            }
        }
        s
    }

    /// `G w` so that `kappa(h, h') = v . (G w)`.
    pub fn dual_values(&self, w: &[i64]) -> Vec<i64> {
        self.values
            .iter()
            .map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }
}

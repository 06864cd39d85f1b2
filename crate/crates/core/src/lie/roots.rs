//! Root systems of the simple complex Lie algebras (Bourbaki numbering).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn from_letter(c: &str) -> Result<Family> {
        Ok(match c.trim().to_ascii_uppercase().as_str() {
            "A" => Family::A,
            "B" => Family::B,
            "C" => Family::C,
            "D" => Family::D,
            "E" => Family::E,
            "F" => Family::F,
            "G" => Family::G,
            other => {
                return Err(Error::InvalidType(format!("unknown family {other:?}")));
            }
        })
    }
}

/// A simple Cartan type such as `E8`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::C => rank >= 3,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::InvalidType(format!("{family:?}{rank}")))
        }
    }

    pub fn parse(label: &str, rank: usize) -> Result<Self> {
        CartanType::new(Family::from_letter(label)?, rank)
    }

    /// `A[i][j] = <alpha_i^vee, alpha_j>`, 0-based indices for nodes 1..l.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.rank;
        let mut a = vec![vec![0i64; l]; l];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..l - 1 {
                    link(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..l - 2 {
                    link(i, i + 1);
                }
                link(l - 3, l - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..l - 1 {
                    link(i, i + 1);
                }
            }
            Family::F => {
                link(0, 1);
                link(1, 2);
                link(2, 3);
            }
            Family::G => link(0, 1),
        }
        match self.family {
            // alpha_l short
            Family::B => a[l - 1][l - 2] = -2,
            // alpha_l long
            Family::C => a[l - 2][l - 1] = -2,
            // alpha_1, alpha_2 long
            Family::F => a[2][1] = -2,
            // alpha_1 short
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

/// Root system with roots stored as integer coefficient vectors over the
/// simple roots. Roots are sorted by (height, lexicographic coefficients), so
/// negative roots come first and the lowest root is at index 0.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub ty: CartanType,
    pub cartan: Vec<Vec<i64>>,
    /// `d_i = (alpha_i, alpha_i) / 2`, normalized so short roots have `d = 1`.
    pub sym: Vec<i64>,
    pub roots: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    /// `heights[k]` is the height of `roots[k]`.
    pub heights: Vec<i64>,
    /// `neg[k]` is the index of `-roots[k]`.
    pub neg: Vec<usize>,
    /// Indices of the simple roots `alpha_1..alpha_l`.
    pub simple: Vec<usize>,
    /// `n_0..n_l` with `n_0 = 1` and `alpha_0 = -sum n_i alpha_i`.
    pub marks: Vec<i64>,
}

impl RootSystem {
    pub fn new(ty: CartanType) -> RootSystem {
        let cartan = ty.cartan_matrix();
        let l = ty.rank;
        let sym = symmetrizer(&cartan);
        // Positive roots by height, via root strings through simple roots.
        let mut positive: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                let mut v = vec![0; l];
                v[i] = 1;
                v
            })
            .collect();
        let mut known: HashMap<Vec<i64>, ()> = positive.iter().map(|v| (v.clone(), ())).collect();
        let mut layer = positive.clone();
        while !layer.is_empty() {
            let mut next = Vec::new();
            for beta in &layer {
                for i in 0..l {
                    // p = how far we can go down along alpha_i
                    let mut p = 0;
                    let mut w = beta.clone();
                    loop {
                        w[i] -= 1;
                        if known.contains_key(&w) {
                            p += 1;
                        } else {
                            break;
                        }
                    }
                    let pairing: i64 = (0..l).map(|j| beta[j] * cartan[i][j]).sum();
                    let q = p - pairing;
                    if q > 0 {
                        let mut up = beta.clone();
                        up[i] += 1;
                        if !known.contains_key(&up) {
                            known.insert(up.clone(), ());
                            next.push(up);
                        }
                    }
                }
            }
            positive.extend(next.iter().cloned());
            layer = next;
        }
        let mut roots: Vec<Vec<i64>> = positive.clone();
        roots.extend(positive.iter().map(|v| v.iter().map(|x| -x).collect::<Vec<_>>()));
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| a.cmp(b))
        });
        let index: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(k, v)| (v.clone(), k)).collect();
        let heights = roots.iter().map(|v| v.iter().sum()).collect();
        let neg = roots
            .iter()
            .map(|v| index[&v.iter().map(|x| -x).collect::<Vec<_>>()])
            .collect();
        let simple = (0..l)
            .map(|i| {
                let mut v = vec![0; l];
                v[i] = 1;
                index[&v]
            })
            .collect();
        let highest = roots.last().expect("nonempty").clone();
        let mut marks = vec![1];
        marks.extend(highest);
        RootSystem {
            ty,
            cartan,
            sym,
            roots,
            index,
            heights,
            neg,
            simple,
            marks,
        }
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn num_roots(&self) -> usize {
        self.roots.len()
    }

    pub fn num_positive(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn is_positive(&self, k: usize) -> bool {
        self.heights[k] > 0
    }

    pub fn positive_indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.roots.len()).filter(move |&k| self.heights[k] > 0)
    }

    /// Index of the root `a + b`, if it is a root.
    pub fn sum_index(&self, a: usize, b: usize) -> Option<usize> {
        let v: Vec<i64> = self.roots[a].iter().zip(&self.roots[b]).map(|(x, y)| x + y).collect();
        self.index_of(&v)
    }

    /// Lowest root `alpha_0`.
    pub fn lowest(&self) -> usize {
        0
    }

    pub fn highest(&self) -> usize {
        self.roots.len() - 1
    }

    /// Symmetric form `(x, y)` on coefficient vectors; short roots have norm 2.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let l = self.rank();
        let mut s = 0;
        for i in 0..l {
            if x[i] == 0 {
                continue;
            }
            for j in 0..l {
                s += x[i] * self.sym[i] * self.cartan[i][j] * y[j];
            }
        }
        s
    }

    pub fn norm(&self, k: usize) -> i64 {
        self.inner(&self.roots[k], &self.roots[k])
    }

    /// `<x, beta^vee> = 2 (x, beta) / (beta, beta)` for a root `beta`.
    pub fn pairing(&self, x: &[i64], beta: &[i64]) -> i64 {
        let num = 2 * self.inner(x, beta);
        let den = self.inner(beta, beta);
        debug_assert_eq!(num % den, 0);
        num / den
    }

    /// `alpha(h_i)` where `h_i` is the i-th simple coroot.
    pub fn value_on_coroot(&self, alpha: &[i64], i: usize) -> i64 {
        (0..self.rank()).map(|j| alpha[j] * self.cartan[i][j]).sum()
    }

    /// Coefficients of the coroot `beta^vee` over the simple coroots.
    pub fn coroot_coeffs(&self, beta: &[i64]) -> Vec<i64> {
        let nb = self.inner(beta, beta);
        (0..self.rank())
            .map(|i| {
                let num = beta[i] * 2 * self.sym[i];
                debug_assert_eq!(num % nb, 0);
                num / nb
            })
            .collect()
    }
}

fn symmetrizer(a: &[Vec<i64>]) -> Vec<i64> {
    // Propagate d_j = d_i * a_ij / a_ji along the connected Dynkin diagram
    // using rationals scaled by a common multiple.
    let l = a.len();
    let mut num = vec![0i64; l];
    let mut den = vec![1i64; l];
    num[0] = 1;
    let mut stack = vec![0];
    let mut seen = vec![false; l];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..l {
            if i != j && a[i][j] != 0 && !seen[j] {
                num[j] = num[i] * a[i][j];
                den[j] = den[i] * a[j][i];
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    let common = den.iter().fold(1i64, |acc, &d| lcm(acc, d.abs()));
    let vals: Vec<i64> = (0..l).map(|i| num[i] * (common / den[i])).collect();
    let g = vals.iter().fold(0i64, |acc, &v| gcd(acc, v.abs()));
    vals.iter().map(|v| v.abs() / g).collect()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

//! Duplicate-free enumeration of a Weyl group orbit `W_0 h` as a tree.
//!
//! Every non-dominant point has a unique predecessor: the point `h^` of
//! smaller length with `s_i h^ = h~` such that the coordinates `a_j` of `h~`
//! are non-negative for `j > i`. A depth-first walk of this tree visits each
//! point once while storing only the current path.

use crate::error::{Error, Result};
use crate::grading::{Theta0Data, ThetaGroup};
use crate::sl2::Characteristic;

/// A point `w h` of the orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitNode {
    /// `delta_j(w h)` for the simple roots of `g_0`.
    pub coords: Vec<i64>,
    /// `alpha_i(w h)` for the simple roots of `g`.
    pub values: Vec<i64>,
    /// Simple reflections applied to the root, in order; `w h` is
    /// `s_{word[k-1]} ... s_{word[0]} h`.
    pub word: Vec<usize>,
}

impl OrbitNode {
    pub fn root(h: &Characteristic) -> OrbitNode {
        OrbitNode {
            coords: h.coords.clone(),
            values: h.values.clone(),
            word: Vec::new(),
        }
    }

    /// Length of the shortest `w` with `w h` equal to this point.
    pub fn length(&self) -> usize {
        self.word.len()
    }

    /// Index of the reflection leading here from the predecessor.
    pub fn generator(&self) -> Option<usize> {
        self.word.last().copied()
    }

    /// `s_j` applied to this point, extending the word.
    pub fn reflect(&self, data: &Theta0Data, j: usize) -> OrbitNode {
        let aj = self.coords[j];
        let mut coords = self.coords.clone();
        for (c, d) in coords.iter_mut().zip(&data.cartan[j]) {
            *c -= aj * d;
        }
        let mut values = self.values.clone();
        for (v, d) in values.iter_mut().zip(&data.coroot_on_simple[j]) {
            *v -= aj * d;
        }
        let mut word = self.word.clone();
        word.push(j);
        OrbitNode { coords, values, word }
    }
}

/// Number of positive roots of `g_0` that are negative on `values`.
pub fn inversion_count(tg: &ThetaGroup, values: &[i64]) -> usize {
    tg.data
        .phi0_pos
        .iter()
        .filter(|&&d| tg.root_value(d, values) < 0)
        .count()
}

/// Depth-first iterator over `W_0 h`, parents before children, children in
/// increasing position of the generating reflection.
pub struct OrbitIter<'a, P> {
    data: &'a Theta0Data,
    /// `order[p]` is the simple root at position `p` of the numbering used
    /// for the successor rule.
    order: Vec<usize>,
    prune: P,
    /// Path from the root: each node with the next position to try.
    stack: Vec<(OrbitNode, usize)>,
    pending_root: Option<OrbitNode>,
}

impl<'a, P: FnMut(&OrbitNode) -> bool> OrbitIter<'a, P> {
    fn push_child(&mut self) -> Option<OrbitNode> {
        let OrbitIter {
            data,
            order,
            prune,
            stack,
            ..
        } = self;
        while let Some((node, next)) = stack.last_mut() {
            let mut found = None;
            while *next < order.len() {
                let p = *next;
                *next += 1;
                let i = order[p];
                if node.coords[i] <= 0 {
                    continue;
                }
                let child = node.reflect(data, i);
                if order[p + 1..].iter().all(|&j| child.coords[j] >= 0) && !prune(&child) {
                    found = Some(child);
                    break;
                }
            }
            match found {
                Some(child) => {
                    stack.push((child.clone(), 0));
                    return Some(child);
                }
                None => {
                    stack.pop();
                }
            }
        }
        None
    }
}

impl<'a, P: FnMut(&OrbitNode) -> bool> Iterator for OrbitIter<'a, P> {
    type Item = OrbitNode;

    fn next(&mut self) -> Option<OrbitNode> {
        if let Some(root) = self.pending_root.take() {
            if (self.prune)(&root) {
                return None;
            }
            self.stack.push((root.clone(), 0));
            return Some(root);
        }
        self.push_child()
    }
}

/// Walks `W_0 h` for dominant `h`. A node for which `prune` returns true is
/// neither yielded nor expanded.
pub fn orbit_iter<'a, P: FnMut(&OrbitNode) -> bool>(
    data: &'a Theta0Data,
    h: &Characteristic,
    prune: P,
) -> Result<OrbitIter<'a, P>> {
    orbit_iter_ordered(data, h, (0..data.rank()).collect(), prune)
}

/// As [`orbit_iter`] with the simple roots renumbered: `order[p]` is the
/// root in position `p`. Nodes keep the original numbering.
pub fn orbit_iter_ordered<'a, P: FnMut(&OrbitNode) -> bool>(
    data: &'a Theta0Data,
    h: &Characteristic,
    order: Vec<usize>,
    prune: P,
) -> Result<OrbitIter<'a, P>> {
    if !h.is_dominant() {
        return Err(Error::NotDominant(h.coords.clone()));
    }
    let mut sorted = order.clone();
    sorted.sort_unstable();
    if sorted != (0..data.rank()).collect::<Vec<_>>() {
        return Err(Error::Dimension(format!("{order:?} is not a numbering of the simple roots")));
    }
    Ok(OrbitIter {
        data,
        order,
        prune,
        stack: Vec::new(),
        pending_root: Some(OrbitNode::root(h)),
    })
}

/// Prune predicate dropping nodes with `kappa(w h, h') < threshold`. Since
/// `kappa(., h')` does not increase along tree edges, whole subtrees go.
pub fn kappa_descent_prune<'a>(
    tg: &'a ThetaGroup,
    h_prime: &Characteristic,
    threshold: i64,
) -> impl FnMut(&OrbitNode) -> bool + 'a {
    let dual = tg.killing.dual_values(&h_prime.values);
    move |node: &OrbitNode| {
        let k: i64 = node.values.iter().zip(&dual).map(|(a, b)| a * b).sum();
        k < threshold
    }
}

/// Representatives of `W_{0,h'} \ W_0 / W_{0,h}`: the points of `W_0 h`
/// that are dominant for the stabilizer of `h'`. The simple roots vanishing
/// on `h'` are moved to the end of the numbering, which is returned with
/// the nodes.
pub fn double_coset_reps(
    data: &Theta0Data,
    h: &Characteristic,
    h_prime: &Characteristic,
) -> Result<(Vec<OrbitNode>, Vec<usize>)> {
    if !h_prime.is_dominant() {
        return Err(Error::NotDominant(h_prime.coords.clone()));
    }
    let r = data.rank();
    let mut order: Vec<usize> = (0..r).filter(|&j| h_prime.coords[j] != 0).collect();
    let split = order.len();
    order.extend((0..r).filter(|&j| h_prime.coords[j] == 0));
    let allowed: Vec<usize> = order[..split].to_vec();
    let nodes = orbit_iter_ordered(data, h, order.clone(), |_| false)?
        .filter(|n| n.generator().is_none_or(|i| allowed.contains(&i)))
        .collect();
    Ok((nodes, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::Grading;
    use crate::lie::{CartanType, Family, LieAlgebra};
    use std::collections::HashSet;
    use std::sync::Arc;

    fn adjoint(f: Family, l: usize) -> ThetaGroup {
        let g = Arc::new(LieAlgebra::new(CartanType::new(f, l).unwrap()));
        let mut s = vec![0; l + 1];
        s[0] = 1;
        ThetaGroup::new(g.clone(), Grading::from_kac(&g, &s).unwrap())
    }

    fn ch(tg: &ThetaGroup, coords: &[i64]) -> Characteristic {
        Characteristic::from_coords(tg, coords, &[]).unwrap()
    }

    #[test]
    fn a2_orbit_sizes() {
        let tg = adjoint(Family::A, 2);
        assert_eq!(orbit_iter(&tg.data, &ch(&tg, &[1, 1]), |_| false).unwrap().count(), 6);
        assert_eq!(orbit_iter(&tg.data, &ch(&tg, &[1, 0]), |_| false).unwrap().count(), 3);
    }

    #[test]
    fn a3_regular_orbit_lengths() {
        let tg = adjoint(Family::A, 3);
        let nodes: Vec<OrbitNode> = orbit_iter(&tg.data, &ch(&tg, &[1, 1, 1]), |_| false).unwrap().collect();
        assert_eq!(nodes.len(), 24);
        let distinct: HashSet<&Vec<i64>> = nodes.iter().map(|n| &n.coords).collect();
        assert_eq!(distinct.len(), 24);
        let mut dist = [0usize; 7];
        for n in &nodes {
            assert_eq!(n.length(), inversion_count(&tg, &n.values));
            dist[n.length()] += 1;
        }
        assert_eq!(dist, [1, 3, 5, 6, 5, 3, 1]);
    }

    #[test]
    fn non_dominant_root_is_rejected() {
        let tg = adjoint(Family::A, 2);
        let h = Characteristic::from_values(&tg, vec![-1, 2]);
        assert!(orbit_iter(&tg.data, &h, |_| false).is_err());
    }

    #[test]
    fn kappa_prune_keeps_maximum_only() {
        let tg = adjoint(Family::B, 3);
        let h = ch(&tg, &[1, 0, 1]);
        let hp = ch(&tg, &[0, 1, 0]);
        let top = tg.kappa(&h.values, &hp.values);
        let kept: Vec<OrbitNode> = orbit_iter(&tg.data, &h, kappa_descent_prune(&tg, &hp, top))
            .unwrap()
            .collect();
        assert!(kept.iter().all(|n| tg.kappa(&n.values, &hp.values) == top));
        let all: Vec<OrbitNode> = orbit_iter(&tg.data, &h, |_| false).unwrap().collect();
        let expected = all
            .iter()
            .filter(|n| tg.kappa(&n.values, &hp.values) == top)
            .count();
        assert_eq!(kept.len(), expected);
        let none = orbit_iter(&tg.data, &h, kappa_descent_prune(&tg, &hp, i64::MIN)).unwrap().count();
        assert_eq!(none, all.len());
    }

    #[test]
    fn a2_double_cosets() {
        let tg = adjoint(Family::A, 2);
        let (reps, order) = double_coset_reps(&tg.data, &ch(&tg, &[1, 1]), &ch(&tg, &[1, 0])).unwrap();
        assert_eq!(order, vec![0, 1]);
        assert_eq!(reps.len(), 3);
        let (reps, _) = double_coset_reps(&tg.data, &ch(&tg, &[1, 0]), &ch(&tg, &[1, 0])).unwrap();
        assert_eq!(reps.len(), 2);
        let (reps, _) = double_coset_reps(&tg.data, &ch(&tg, &[1, 1]), &ch(&tg, &[1, 1])).unwrap();
        assert_eq!(reps.len(), 6);
    }
}

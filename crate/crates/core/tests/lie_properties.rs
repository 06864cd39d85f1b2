use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta_closure::lie::{CartanType, Element, Family, KillingForm, LieAlgebra, SignConvention};
use theta_closure::linalg::int;

fn alg(f: Family, l: usize) -> LieAlgebra {
    LieAlgebra::new(CartanType::new(f, l).unwrap())
}

type IntVec = HashMap<usize, i64>;

fn br_vec(g: &LieAlgebra, a: usize, v: &IntVec) -> IntVec {
    let mut out = IntVec::new();
    for (&b, &c) in v {
        for (k, x) in g.bracket_basis(a, b) {
            *out.entry(k).or_insert(0) += c * x;
        }
    }
    out.retain(|_, x| *x != 0);
    out
}

fn jacobi_holds(g: &LieAlgebra, a: usize, b: usize, c: usize) -> bool {
    let single = |x: usize, y: usize| -> IntVec {
        g.bracket_basis(x, y).into_iter().collect()
    };
    let mut total = IntVec::new();
    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
        for (k, v) in br_vec(g, x, &single(y, z)) {
            *total.entry(k).or_insert(0) += v;
        }
    }
    total.values().all(|v| *v == 0)
}

fn small_types() -> Vec<(Family, usize)> {
    vec![
        (Family::A, 1),
        (Family::A, 2),
        (Family::A, 3),
        (Family::A, 4),
        (Family::B, 2),
        (Family::B, 3),
        (Family::B, 4),
        (Family::C, 3),
        (Family::C, 4),
        (Family::D, 4),
        (Family::F, 4),
        (Family::G, 2),
    ]
}

#[test]
fn jacobi_and_antisymmetry_exhaustive_up_to_rank_four() {
    for (f, l) in small_types() {
        for conv in [SignConvention::Positive, SignConvention::Negative] {
            let g = LieAlgebra::with_convention(CartanType::new(f, l).unwrap(), conv);
            let d = g.dim();
            for a in 0..d {
                for b in 0..d {
                    let ab: IntVec = g.bracket_basis(a, b).into_iter().collect();
                    let ba: IntVec = g.bracket_basis(b, a).into_iter().map(|(k, v)| (k, -v)).collect();
                    assert_eq!(ab, ba, "{f:?}{l} antisymmetry {a} {b}");
                }
            }
            for a in 0..d {
                for b in a..d {
                    for c in b..d {
                        assert!(jacobi_holds(&g, a, b, c), "{f:?}{l} {conv:?} Jacobi {a} {b} {c}");
                    }
                }
            }
        }
    }
}

#[test]
fn jacobi_sampled_on_large_exceptional_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (f, l, samples) in [(Family::E, 6, 30_000), (Family::E, 7, 30_000), (Family::E, 8, 100_000)] {
        let g = alg(f, l);
        let d = g.dim();
        for _ in 0..samples {
            let (a, b, c) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
            assert!(jacobi_holds(&g, a, b, c), "{f:?}{l} Jacobi {a} {b} {c}");
        }
    }
}

#[test]
fn root_space_brackets_respect_root_addition() {
    let g = alg(Family::F, 4);
    let nr = g.num_roots();
    for a in 0..nr {
        for b in 0..nr {
            for (k, _) in g.bracket_basis(a, b) {
                if k < nr {
                    assert_eq!(g.root_sum(a, b), Some(k));
                } else {
                    assert_eq!(g.rs.neg[a], b);
                }
            }
        }
    }
}

/// Literal `tr(ad x ad y)` from dense adjoint matrices.
fn trace_form(g: &LieAlgebra) -> Vec<Vec<i64>> {
    let d = g.dim();
    let ad: Vec<Vec<Vec<i64>>> = (0..d)
        .map(|x| {
            let mut m = vec![vec![0i64; d]; d];
            for y in 0..d {
                for (k, v) in g.bracket_basis(x, y) {
                    m[k][y] += v;
                }
            }
            m
        })
        .collect();
    let mut gram = vec![vec![0i64; d]; d];
    for x in 0..d {
        for y in 0..d {
            let mut t = 0;
            for i in 0..d {
                for k in 0..d {
                    t += ad[x][i][k] * ad[y][k][i];
                }
            }
            gram[x][y] = t;
        }
    }
    gram
}

#[test]
fn killing_form_equals_trace_form() {
    for (f, l) in [(Family::A, 1), (Family::A, 2), (Family::B, 2), (Family::G, 2), (Family::C, 3)] {
        let g = alg(f, l);
        let k = KillingForm::new(&g);
        let gram = trace_form(&g);
        for x in 0..g.dim() {
            for y in 0..g.dim() {
                let v = k.eval(&g, &Element::basis(x), &Element::basis(y));
                assert_eq!(v, int(gram[x][y]), "{f:?}{l} ({x},{y})");
            }
        }
    }
}

#[test]
fn killing_form_is_symmetric_and_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (f, l) in [(Family::E, 8), (Family::F, 4), (Family::B, 4)] {
        let g = alg(f, l);
        let k = KillingForm::new(&g);
        let d = g.dim();
        let random_element = |rng: &mut ChaCha8Rng| {
            Element::from_terms((0..4).map(|_| (rng.gen_range(0..d), int(rng.gen_range(-3..=3)))))
        };
        for _ in 0..100 {
            let (x, y, z) = (random_element(&mut rng), random_element(&mut rng), random_element(&mut rng));
            assert_eq!(k.eval(&g, &x, &y), k.eval(&g, &y, &x));
            let lhs = k.eval(&g, &g.bracket(&x, &y), &z);
            let rhs = k.eval(&g, &x, &g.bracket(&y, &z));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn killing_form_positive_on_rational_cartan() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = alg(Family::E, 7);
    let k = KillingForm::new(&g);
    for _ in 0..200 {
        let v: Vec<i64> = (0..7).map(|_| rng.gen_range(-4..=4)).collect();
        if v.iter().all(|x| *x == 0) {
            continue;
        }
        assert!(k.on_values(&v, &v) > 0);
    }
}

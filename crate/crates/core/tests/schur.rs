use std::collections::BTreeMap;

use itertools::Itertools;
use lococo_core::geometry::sample_pointwise_stabilizer;
use lococo_core::schur::{column_group_order, QuadraticSpace, StandardTableau, Tensor};
use lococo_core::weights::{dominant_weights, Partition};
use lococo_core::{ExactScalar, Vector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Dense = BTreeMap<Vec<usize>, ExactScalar>;

fn inversions(p: &[usize]) -> usize {
    p.iter().tuple_combinations().filter(|(a, b)| a > b).count()
}

/// Permutations of `0..d` preserving each block of `blocks`.
fn block_group(blocks: &[Vec<usize>], d: usize) -> Vec<Vec<usize>> {
    (0..d)
        .permutations(d)
        .filter(|p| blocks.iter().all(|b| b.iter().all(|&i| b.contains(&p[i]))))
        .collect()
}

fn average(t: &Dense, group: &[Vec<usize>], signed: bool) -> Dense {
    let w = ExactScalar::from_frac(1, group.len() as i64);
    let mut out = Dense::new();
    for p in group {
        let s = if signed && inversions(p) % 2 == 1 { -&w } else { w.clone() };
        for (idx, c) in t {
            let moved: Vec<usize> = (0..idx.len()).map(|k| idx[p[k]]).collect();
            *out.entry(moved).or_insert_with(ExactScalar::zero) += &(c * &s);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn power_tensor(x: &[Vector], mu: &Partition) -> Dense {
    let mut t: Dense = [(vec![], ExactScalar::one())].into_iter().collect();
    for (v, &b) in x.iter().zip(mu.parts()) {
        for _ in 0..b {
            let mut next = Dense::new();
            for (idx, c) in &t {
                for (a, va) in v.iter().enumerate() {
                    if !va.is_zero() {
                        let mut i = idx.clone();
                        i.push(a);
                        next.insert(i, c * va);
                    }
                }
            }
            t = next;
        }
    }
    t
}

/// Row blocks and column blocks of the row-reading filling.
fn blocks(mu: &Partition) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let mut rows = Vec::new();
    let mut next = 0;
    for &r in mu.parts() {
        rows.push((next..next + r as usize).collect::<Vec<_>>());
        next += r as usize;
    }
    let width = mu.parts().first().copied().unwrap_or(0) as usize;
    let cols = (0..width)
        .map(|j| rows.iter().filter(|r| r.len() > j).map(|r| r[j]).collect())
        .collect();
    (rows, cols)
}

/// `𝒬𝒫` by explicit sums over the row and column groups.
fn brute_symmetrize(x: &[Vector], mu: &Partition) -> Dense {
    let d = mu.size();
    let (rows, cols) = blocks(mu);
    let p = average(&power_tensor(x, mu), &block_group(&rows, d), false);
    average(&p, &block_group(&cols, d), true)
}

fn dense_pair(space: &QuadraticSpace, s: &Dense, t: &Dense) -> ExactScalar {
    let mut acc = ExactScalar::zero();
    for (i, a) in s {
        for (j, b) in t {
            let mut w = a * b;
            for (&x, &y) in i.iter().zip(j) {
                w *= space.gram().get(x, y);
                if w.is_zero() {
                    break;
                }
            }
            acc += &w;
        }
    }
    acc
}

fn to_tensor(dim: usize, d: usize, t: &Dense) -> Tensor {
    Tensor::from_terms(dim, d, t.clone()).unwrap()
}

#[test]
fn pairing_with_isotropic_frame_is_inverse_column_group_order() {
    for n in 3..=6 {
        let space = QuadraticSpace::standard(n);
        let u = space.witt_basis(n).unwrap();
        for w in dominant_weights(n, 4) {
            let mu = w.partition();
            let e = space.standard_frame(mu.support_count());
            let expected = ExactScalar::from_frac(1, column_group_order(&mu) as i64);
            let got = space.pair_invariants(&e, &u, &mu).unwrap();
            assert_eq!(got, expected, "n={n} μ={mu}");
            // τ_u is harmonic, so ℋ drops out of the pairing.
            let qu = brute_symmetrize(&u, &mu);
            assert!(space.is_harmonic(&to_tensor(n + 1, mu.size(), &qu)));
            let oracle = dense_pair(&space, &brute_symmetrize(&e, &mu), &qu);
            assert_eq!(oracle, expected, "oracle n={n} μ={mu}");
        }
    }
}

#[test]
fn tau_of_isotropic_frame_matches_brute_force() {
    for n in [3, 4] {
        let space = QuadraticSpace::standard(n);
        let u = space.witt_basis(n).unwrap();
        for w in dominant_weights(n, 3) {
            let mu = w.partition();
            let tau = space.tau(&u, &mu).unwrap();
            assert_eq!(tau, to_tensor(n + 1, mu.size(), &brute_symmetrize(&u, &mu)), "n={n} μ={mu}");
        }
    }
}

#[test]
fn torus_scales_tau_u_by_its_weight() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in [3, 4, 5, 6] {
        let space = QuadraticSpace::standard(n);
        let u = space.witt_basis(n).unwrap();
        let m = u.len() / 2;
        for w in dominant_weights(n, 3) {
            let mu = w.partition();
            let tau = space.tau(&u, &mu).unwrap();
            for _ in 0..10 {
                let t: Vec<ExactScalar> = (0..m)
                    .map(|_| {
                        let p = rng.random_range(1..=9) * if rng.random() { 1 } else { -1 };
                        ExactScalar::from_frac(p, rng.random_range(1..=9))
                    })
                    .collect();
                let g = space.torus_element(n, &t).unwrap();
                let weight = t.iter().zip(w.entries()).fold(ExactScalar::one(), |acc, (ti, &b)| &acc * &ti.pow(b));
                assert_eq!(tau.act(&g), tau.scale(&weight), "n={n} μ={mu}");
            }
        }
    }
}

#[test]
fn tau_is_equivariant_under_isometries() {
    let space = QuadraticSpace::standard(4);
    let x = vec![
        vec![1, 2, 0, 0, 0],
        vec![0, 1, -1, 0, 0],
    ]
    .into_iter()
    .map(|v| v.into_iter().map(ExactScalar::from_i64).collect::<Vector>())
    .collect::<Vec<_>>();
    let mu = Partition::new(vec![2, 1]).unwrap();
    let tau = space.tau(&x, &mu).unwrap();
    for seed in 0..4 {
        let g = sample_pointwise_stabilizer(&space, &[], seed).unwrap();
        let gx: Vec<Vector> = x.iter().map(|v| g.mul_vec(v).unwrap()).collect();
        assert_eq!(space.tau(&gx, &mu).unwrap(), tau.act(&g));
    }
}

fn small_tensor(dim: usize, degree: usize) -> impl Strategy<Value = Tensor> {
    prop::collection::vec((prop::collection::vec(0..dim, degree), -4i64..=4), 1..6).prop_map(move |terms| {
        let mut t = Tensor::zero(dim, degree);
        for (idx, c) in terms {
            t = t.add(&Tensor::from_terms(dim, degree, [(idx, ExactScalar::from_i64(c))]).unwrap());
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetrizers_are_self_adjoint(s in small_tensor(4, 3), t in small_tensor(4, 3)) {
        let space = QuadraticSpace::standard(3);
        let tableau = StandardTableau::new(Partition::new(vec![2, 1]).unwrap());
        let ps = tableau.row_symmetrize(&s).unwrap();
        let pt = tableau.row_symmetrize(&t).unwrap();
        prop_assert_eq!(space.pair(&ps, &t).unwrap(), space.pair(&s, &pt).unwrap());
        let qs = tableau.col_antisymmetrize(&s).unwrap();
        let qt = tableau.col_antisymmetrize(&t).unwrap();
        prop_assert_eq!(space.pair(&qs, &t).unwrap(), space.pair(&s, &qt).unwrap());
    }

    #[test]
    fn harmonic_projection_is_an_orthogonal_projector(s in small_tensor(4, 3), t in small_tensor(4, 3)) {
        let space = QuadraticSpace::standard(3);
        let hs = space.harmonic_project(&s).unwrap();
        let ht = space.harmonic_project(&t).unwrap();
        prop_assert!(space.is_harmonic(&hs));
        prop_assert_eq!(space.harmonic_project(&hs).unwrap(), hs.clone());
        prop_assert_eq!(space.pair(&hs, &t).unwrap(), space.pair(&s, &ht).unwrap());
    }
}

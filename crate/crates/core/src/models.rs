//! Standard triangulations and coefficient systems used by the tests,
//! benches and CLI examples: circles, the boundary of a tetrahedron, a
//! 7-vertex torus, Freudenthal triangulations of `T^d`, and seeded random
//! complexes and systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::field::{ExactScalar, Field, Vector};
use crate::intersect::DecomposableCycle;
use crate::localsys::{Cochain, LocalSystem};
use crate::matrix::ExactMatrix;

/// The boundary of an `nv`-gon, `nv ≥ 3`, oriented.
pub fn circle(nv: usize) -> SimplicialComplex {
    torus(&[nv])
}

/// The circle with `monodromy` placed on the closing edge `(0, nv−1)`.
pub fn circle_system(nv: usize, monodromy: &ExactMatrix) -> LocalSystem {
    torus_system(&[nv], std::slice::from_ref(monodromy))
}

/// Boundary of the tetrahedron on vertices `0..4`, oriented.
pub fn sphere2() -> SimplicialComplex {
    let facets: Vec<Vec<usize>> = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    SimplicialComplex::from_facets(4, &facets)
        .and_then(SimplicialComplex::oriented)
        .expect("tetrahedron boundary is a closed surface")
}

/// The 7-vertex (Möbius) torus, oriented.
pub fn torus7() -> SimplicialComplex {
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_facets(7, &facets)
        .and_then(SimplicialComplex::oriented)
        .expect("7-vertex torus is a closed surface")
}

/// Coordinates of vertex `v` in the grid `dims`, last axis fastest.
pub fn grid_coords(dims: &[usize], mut v: usize) -> Vec<usize> {
    let mut c = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        c[k] = v % dims[k];
        v /= dims[k];
    }
    c
}

pub fn grid_vertex(dims: &[usize], coords: &[usize]) -> usize {
    coords
        .iter()
        .zip(dims)
        .fold(0, |acc, (&c, &n)| acc * n + c % n)
}

/// Freudenthal triangulation of the torus `Π ℤ/dims[k]`, every side at
/// least 3, oriented. `torus(&[3, 3, 3])` has 27 vertices and 162
/// tetrahedra.
pub fn torus(dims: &[usize]) -> SimplicialComplex {
    assert!(dims.iter().all(|&n| n >= 3), "torus sides must be at least 3");
    let d = dims.len();
    let nv: usize = dims.iter().product();
    let mut facets = Vec::new();
    let axes: Vec<usize> = (0..d).collect();
    for v in 0..nv {
        let base = grid_coords(dims, v);
        for perm in permutations(&axes) {
            let mut cur = base.clone();
            let mut simplex = vec![grid_vertex(dims, &cur)];
            for &k in &perm {
                cur[k] += 1;
                simplex.push(grid_vertex(dims, &cur));
            }
            facets.push(simplex);
        }
    }
    SimplicialComplex::from_facets(nv, &facets)
        .and_then(SimplicialComplex::oriented)
        .expect("Freudenthal torus is a closed manifold")
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    items.iter().copied().permutations(items.len()).collect()
}

/// 2-torus grid `a × b`.
pub fn torus_grid(a: usize, b: usize) -> SimplicialComplex {
    torus(&[a, b])
}

/// Signed step of the edge `u → w` along axis `k`, in `{−1, 0, 1}`, and
/// whether it crosses the seam between `n−1` and `0`.
fn axis_step(dims: &[usize], u: usize, w: usize, k: usize) -> (i64, bool) {
    let (cu, cw) = (grid_coords(dims, u)[k] as i64, grid_coords(dims, w)[k] as i64);
    let n = dims[k] as i64;
    match cw - cu {
        0 => (0, false),
        1 => (1, false),
        -1 => (-1, false),
        d if d == 1 - n => (1, true),
        d if d == n - 1 => (-1, true),
        _ => unreachable!("edges move at most one step per axis"),
    }
}

/// The system on `torus(dims)` whose monodromy around the `k`-th circle
/// is `monodromies[k]`; the matrices must commute. Transport is the
/// identity except across the seams.
pub fn torus_system(dims: &[usize], monodromies: &[ExactMatrix]) -> LocalSystem {
    assert_eq!(dims.len(), monodromies.len());
    let x = torus(dims);
    let r = monodromies[0].rows();
    let inverses: Vec<ExactMatrix> = monodromies.iter().map(|m| m.inverse().expect("invertible monodromy")).collect();
    let transports = x.edges().map(|(u, w)| {
        let mut t = ExactMatrix::identity(r, Field::Rational);
        for k in 0..dims.len() {
            match axis_step(dims, u, w, k) {
                (1, true) => t = monodromies[k].mul(&t).unwrap(),
                (-1, true) => t = inverses[k].mul(&t).unwrap(),
                _ => {}
            }
        }
        ((u, w), t)
    });
    LocalSystem::new(&x, r, transports.collect::<Vec<_>>()).expect("commuting monodromies give a flat system")
}

/// The integral 1-cocycle counting signed crossings of the `k`-th seam;
/// it takes the value 1 on the `k`-th coordinate circle.
pub fn torus_cocycle(x: &SimplicialComplex, dims: &[usize], k: usize) -> Cochain {
    Cochain {
        degree: 1,
        coords: x
            .edges()
            .map(|(u, w)| match axis_step(dims, u, w, k) {
                (s, true) => ExactScalar::from_i64(s),
                _ => ExactScalar::zero(),
            })
            .collect(),
    }
}

/// [`torus_cocycle`] on the 2-torus grid.
pub fn grid_cocycle(x: &SimplicialComplex, a: usize, b: usize, k: usize) -> Cochain {
    torus_cocycle(x, &[a, b], k)
}

/// The vertex loop of the `k`-th coordinate circle through `base`.
pub fn coordinate_circle(dims: &[usize], base: &[usize], k: usize) -> Vec<usize> {
    (0..dims[k])
        .map(|s| {
            let mut c = base.to_vec();
            c[k] = (c[k] + s) % dims[k];
            grid_vertex(dims, &c)
        })
        .collect()
}

/// The `k`-th coordinate circle through `base` as an oriented cycle
/// with `seed` at `base`.
pub fn circle_cycle(dims: &[usize], base: &[usize], k: usize, seed: Vector) -> DecomposableCycle {
    let vertices = coordinate_circle(dims, base, k);
    let mut simplices = Vec::new();
    let mut orientation = Vec::new();
    for (i, &a) in vertices.iter().enumerate() {
        let b = vertices[(i + 1) % vertices.len()];
        simplices.push(vec![a.min(b), a.max(b)]);
        orientation.push(if a < b { 1 } else { -1 });
    }
    DecomposableCycle {
        simplices,
        orientation,
        basepoint: vertices[0],
        seed,
    }
}

/// The coordinate subtorus `{x_k = c}` of `torus(dims)`, oriented, as a
/// cycle with `seed` at the vertex of smallest index.
pub fn slice_cycle(dims: &[usize], k: usize, c: usize, seed: Vector) -> DecomposableCycle {
    let x = torus(dims);
    let d = dims.len() - 1;
    let facets: Vec<Vec<usize>> = x
        .simplices(d)
        .iter()
        .filter(|s| s.iter().all(|&v| grid_coords(dims, v)[k] == c))
        .cloned()
        .collect();
    let verts: Vec<usize> = facets.iter().flatten().copied().collect::<std::collections::BTreeSet<_>>().into_iter().collect();
    let relabel = |v: usize| verts.binary_search(&v).unwrap();
    let local: Vec<Vec<usize>> = facets.iter().map(|s| s.iter().map(|&v| relabel(v)).collect()).collect();
    let slice = SimplicialComplex::from_facets(verts.len(), &local)
        .and_then(SimplicialComplex::oriented)
        .expect("coordinate slice is a closed torus");
    let simplices: Vec<Vec<usize>> = slice.simplices(d).iter().map(|s| s.iter().map(|&i| verts[i]).collect()).collect();
    DecomposableCycle {
        basepoint: simplices[0][0],
        simplices,
        orientation: slice.orientation().unwrap().to_vec(),
        seed,
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random invertible `r×r` matrix with small integer entries.
pub fn random_invertible(r: usize, rng: &mut impl Rng) -> ExactMatrix {
    loop {
        let data = (0..r * r).map(|_| ExactScalar::from_i64(rng.random_range(-2..=2))).collect();
        let m = ExactMatrix::new(r, r, data).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

/// A system isomorphic to `base` through a random change of
/// trivialization at every vertex.
pub fn random_gauge(base: &LocalSystem, vertices: usize, seed: u64) -> LocalSystem {
    let mut rng = rng(seed);
    let g: Vec<ExactMatrix> = (0..vertices).map(|_| random_invertible(base.rank(), &mut rng)).collect();
    base.gauge(&g).expect("gauge matrices are invertible")
}

/// Trivial rank-`r` system in a random trivialization.
pub fn random_system(x: &SimplicialComplex, r: usize, seed: u64) -> LocalSystem {
    random_gauge(&LocalSystem::trivial(x, r), x.vertex_count(), seed)
}

/// Commuting monodromies `P D_k P⁻¹` with random diagonal `D_k` (entries
/// in `{−2, −1, 1, 2, 3}`) and random `P`, then a random gauge.
pub fn random_torus_system(dims: &[usize], r: usize, seed: u64) -> LocalSystem {
    let mut rng = rng(seed);
    let p = random_invertible(r, &mut rng);
    let pinv = p.inverse().unwrap();
    let choices = [-2, -1, 1, 2, 3];
    let monodromies: Vec<ExactMatrix> = dims
        .iter()
        .map(|_| {
            let d: Vec<ExactScalar> = (0..r)
                .map(|_| ExactScalar::from_i64(choices[rng.random_range(0..choices.len())]))
                .collect();
            p.mul(&ExactMatrix::diagonal(&d).unwrap()).unwrap().mul(&pinv).unwrap()
        })
        .collect();
    let base = torus_system(dims, &monodromies);
    let nv = dims.iter().product();
    random_gauge(&base, nv, rng.random())
}

/// A random complex on 3 to 7 vertices generated by random facets of
/// dimension 1 to 3.
pub fn random_complex(seed: u64) -> SimplicialComplex {
    let mut rng = rng(seed);
    let nv = rng.random_range(3..=7);
    let count = rng.random_range(1..=6);
    let facets: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let k = rng.random_range(2..=4.min(nv));
            let mut verts: Vec<usize> = (0..nv).collect();
            for i in 0..k {
                let j = rng.random_range(i..nv);
                verts.swap(i, j);
            }
            verts.truncate(k);
            verts
        })
        .collect();
    SimplicialComplex::from_facets(nv, &facets).expect("distinct in-range vertices")
}

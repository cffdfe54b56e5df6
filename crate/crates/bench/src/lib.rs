//! Fixed inputs shared by the benchmarks.

use lococo_core::complex::SimplicialComplex;
use lococo_core::localsys::LocalSystem;
use lococo_core::{models, ExactMatrix};

/// The 3-torus on a `3×3×3` grid with commuting scalar monodromies.
pub fn twisted_three_torus() -> (SimplicialComplex, LocalSystem) {
    let dims = [3, 3, 3];
    let m = [1, 2, 1].map(|a| ExactMatrix::from_i64(&[&[a]]));
    (models::torus(&dims), models::torus_system(&dims, &m))
}

/// The trivial rank-2 system on the 2-torus, in a random trivialization.
pub fn gauged_torus() -> (SimplicialComplex, LocalSystem) {
    let x = models::torus(&[4, 4]);
    let e = models::random_system(&x, 2, 17);
    (x, e)
}

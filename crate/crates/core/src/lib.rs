//! Exact computations for twisted simplicial (co)homology, intersections of
//! cycles with local coefficients, group homology of finite groups, and the
//! orthogonal-group tensor invariants attached to dominant weights.
//!
//! All arithmetic is exact: scalars live in ℚ, ℚ(i) or ℚ(√m) (see
//! [`field`]), and every rank, kernel and solve goes through the
//! deterministic elimination in [`matrix`].

pub mod barcomplex;
pub mod complex;
pub mod error;
pub mod field;
pub mod formats;
pub mod geometry;
pub mod intersect;
pub mod localsys;
pub mod matrix;
pub mod models;
pub mod schur;
pub mod weights;

pub use error::*;
pub use field::{ExactScalar, Field, Vector};
pub use matrix::ExactMatrix;

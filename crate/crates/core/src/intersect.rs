//! Decomposable cycles `Y ⊗ s` (an oriented closed subcomplex with a
//! parallel section) and their geometric intersection product in
//! complementary dimensions.
//!
//! The sign at an isolated intersection vertex `P` is read off the link
//! `S = Lk(P, X)`, an `(n−1)`-sphere oriented so that the star of `P` is
//! the cone `P * S`. The links `L₁ ⊂ S` of `Y₁` and `L₂ ⊂ S` of `Y₂` are
//! oriented the same way, and the local sign is a linking number of `L₁`
//! and `L₂` in `S`. When one cycle is a curve, `L₂` is a pair of points and
//! the linking number is computed by solving `∂C = L₁` in `S` and reading
//! the coefficient of `C` at those points. Points against top-dimensional
//! cycles reduce to orientation comparisons.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::complex::{faces, sign, SimplicialComplex};
use crate::error::{ComplexError, IntersectError, LocalSystemError};
use crate::field::{ExactScalar, Vector};
use crate::localsys::{Chain, LocalSystem, PairingRule, Twisted};
use crate::matrix::vecops;

/// An oriented closed `p`-dimensional subcomplex with a seed vector at a
/// basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposableCycle {
    /// Top simplices, as increasing vertex lists.
    pub simplices: Vec<Vec<usize>>,
    /// One sign per top simplex.
    pub orientation: Vec<i8>,
    pub basepoint: usize,
    pub seed: Vector,
}

impl DecomposableCycle {
    /// Dimension `p` of the cycle.
    pub fn dim(&self) -> usize {
        self.simplices.first().map_or(0, |s| s.len() - 1)
    }

    /// Builds the cycle from indices into the ambient `p`-simplex list.
    pub fn from_ids(
        x: &SimplicialComplex,
        p: usize,
        ids: &[usize],
        orientation: Vec<i8>,
        basepoint: usize,
        seed: Vector,
    ) -> Result<Self, IntersectError> {
        let list = x.simplices(p);
        let simplices = ids
            .iter()
            .map(|&i| {
                list.get(i)
                    .cloned()
                    .ok_or_else(|| IntersectError::NotClosed(format!("no {p}-simplex with id {i}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(DecomposableCycle {
            simplices,
            orientation,
            basepoint,
            seed,
        })
    }

    /// Checks that the simplices lie in `x`, have one dimension, carry
    /// `±1` signs whose signed sum is an (untwisted) cycle, and that the
    /// basepoint is a vertex of the support.
    pub fn validate(&self, x: &SimplicialComplex) -> Result<(), IntersectError> {
        if self.simplices.is_empty() {
            return Err(IntersectError::NotClosed("empty cycle".into()));
        }
        if self.orientation.len() != self.simplices.len() {
            return Err(ComplexError::OrientationLength {
                expected: self.simplices.len(),
                got: self.orientation.len(),
            }
            .into());
        }
        if self.orientation.iter().any(|&s| s != 1 && s != -1) {
            return Err(ComplexError::OrientationSign.into());
        }
        let p = self.dim();
        let mut seen = BTreeSet::new();
        for s in &self.simplices {
            if s.len() != p + 1 {
                return Err(IntersectError::NotClosed("simplices of mixed dimension".into()));
            }
            if !x.contains(s) {
                return Err(ComplexError::UnknownSimplex(s.clone()).into());
            }
            if !seen.insert(s) {
                return Err(IntersectError::NotClosed(format!("simplex {s:?} listed twice")));
            }
        }
        if p > 0 {
            let mut bd: BTreeMap<Vec<usize>, i32> = BTreeMap::new();
            for (s, &e) in self.simplices.iter().zip(&self.orientation) {
                for (i, f) in faces(s).enumerate() {
                    *bd.entry(f).or_default() += e as i32 * sign(i);
                }
            }
            if let Some((f, _)) = bd.iter().find(|(_, &v)| v != 0) {
                return Err(IntersectError::NotClosed(format!("boundary does not cancel on {f:?}")));
            }
        }
        if !self.simplices.iter().any(|s| s.contains(&self.basepoint)) {
            return Err(IntersectError::BadBasepoint(self.basepoint));
        }
        Ok(())
    }

    /// Closure of the support: every face of every simplex.
    pub fn support(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for s in &self.simplices {
            for mask in 1u32..(1 << s.len()) {
                out.insert(
                    s.iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &v)| v)
                        .collect(),
                );
            }
        }
        out
    }

    /// The parallel section on the vertices of `Y` obtained by
    /// transporting the seed along edges of `Y`.
    pub fn section(&self, x: &SimplicialComplex, e: &LocalSystem) -> Result<BTreeMap<usize, Vector>, IntersectError> {
        self.validate(x)?;
        if self.seed.len() != e.rank() {
            return Err(LocalSystemError::RankMismatch {
                expected: e.rank(),
                got: self.seed.len(),
            }
            .into());
        }
        let support = self.support();
        let edges: Vec<(usize, usize)> = support.iter().filter(|s| s.len() == 2).map(|s| (s[0], s[1])).collect();
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(a, b) in &edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let vertices: BTreeSet<usize> = support.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect();
        let mut values = BTreeMap::from([(self.basepoint, self.seed.clone())]);
        let mut queue = VecDeque::from([self.basepoint]);
        while let Some(v) = queue.pop_front() {
            for &w in adj.get(&v).into_iter().flatten() {
                if !values.contains_key(&w) {
                    let moved = e.transport(v, w).mul_vec(&values[&v]).map_err(LocalSystemError::from)?;
                    values.insert(w, moved);
                    queue.push_back(w);
                }
            }
        }
        if values.len() != vertices.len() {
            return Err(IntersectError::Disconnected(self.basepoint));
        }
        for &(a, b) in &edges {
            let moved = e.transport(a, b).mul_vec(&values[&a]).map_err(LocalSystemError::from)?;
            if vecops::sub(&moved, &values[&b]).iter().any(|x| !x.is_zero()) {
                return Err(IntersectError::MonodromyObstruction(a, b));
            }
        }
        Ok(values)
    }

    /// `Σ ε_i σ_i ⊗ s(v₀(σ_i))`, a cycle of `E`.
    pub fn to_chain(&self, e: Twisted<'_>) -> Result<Chain, IntersectError> {
        let values = self.section(e.complex, e.system)?;
        let terms: Vec<(Vec<usize>, Vector)> = self
            .simplices
            .iter()
            .zip(&self.orientation)
            .map(|(s, &o)| (s.clone(), vecops::scale(&values[&s[0]], &ExactScalar::from_i64(o as i64))))
            .collect();
        Ok(e.chain(self.dim(), &terms)?)
    }
}

/// Simplices shared by two supports, with the general-position bound
/// `dim ≤ p + q − n` satisfied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransverseIntersection {
    pub dims: (usize, usize),
    pub ambient: usize,
    pub common: Vec<Vec<usize>>,
}

impl TransverseIntersection {
    pub fn bound(&self) -> i64 {
        self.dims.0 as i64 + self.dims.1 as i64 - self.ambient as i64
    }

    /// Intersection vertices (complementary case).
    pub fn points(&self) -> Vec<usize> {
        self.common.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect()
    }
}

/// A common simplex whose dimension exceeds `p + q − n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPositionViolation {
    pub simplex: Vec<usize>,
    pub bound: i64,
}

impl fmt::Display for GeneralPositionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "common simplex {:?} has dimension {} > p+q-n = {}",
            self.simplex,
            self.simplex.len() - 1,
            self.bound
        )
    }
}

/// Enumerates the common simplices of the two supports and applies the
/// dimension test.
pub fn check_general_position(
    x: &SimplicialComplex,
    y1: &DecomposableCycle,
    y2: &DecomposableCycle,
) -> Result<TransverseIntersection, GeneralPositionViolation> {
    let s1 = y1.support();
    let s2 = y2.support();
    let common: Vec<Vec<usize>> = s1.intersection(&s2).cloned().collect();
    let data = TransverseIntersection {
        dims: (y1.dim(), y2.dim()),
        ambient: x.dim(),
        common,
    };
    let bound = data.bound();
    if let Some(s) = data.common.iter().find(|s| s.len() as i64 - 1 > bound) {
        return Err(GeneralPositionViolation {
            simplex: s.clone(),
            bound,
        });
    }
    Ok(data)
}

/// Link of `P` in an oriented `k`-cycle given by top simplices and
/// signs: `Σ ε_σ (−1)^{pos(P,σ)} (σ ∖ P)`.
fn link_cycle(simplices: &[Vec<usize>], signs: &[i8], p: usize) -> Vec<(Vec<usize>, i32)> {
    simplices
        .iter()
        .zip(signs)
        .filter_map(|(s, &e)| {
            let pos = s.iter().position(|&v| v == p)?;
            let mut t = s.clone();
            t.remove(pos);
            Some((t, e as i32 * sign(pos)))
        })
        .collect()
}

/// Local sign of the isolated intersection vertex `point` of `Y₁` and
/// `Y₂` in complementary dimensions.
pub fn intersection_sign(
    x: &SimplicialComplex,
    y1: &DecomposableCycle,
    y2: &DecomposableCycle,
    point: usize,
) -> Result<i32, IntersectError> {
    let n = x.dim();
    let (p, q) = (y1.dim(), y2.dim());
    if p + q != n {
        return Err(IntersectError::NotComplementary { p, q, n });
    }
    let xo = x.orientation().ok_or(ComplexError::NoFundamentalClass)?;
    let on = |y: &DecomposableCycle| y.simplices.iter().any(|s| s.contains(&point));
    if !on(y1) || !on(y2) {
        return Err(IntersectError::NotTransverse(point));
    }
    if p == 0 || q == 0 {
        let (pt, top) = if p == 0 { (y1, y2) } else { (y2, y1) };
        let c = pt.orientation[pt.simplices.iter().position(|s| s == &vec![point]).unwrap()] as i32;
        let (s, &e) = top
            .simplices
            .iter()
            .zip(&top.orientation)
            .find(|(s, _)| s.contains(&point))
            .unwrap();
        let ex = xo[x.index_of(s).unwrap()] as i32;
        return Ok(c * e as i32 * ex);
    }
    if q == 1 {
        return linking_sign(x, xo, y1, y2, point);
    }
    if p == 1 {
        let swapped = intersection_sign(x, y2, y1, point)?;
        return Ok(sign(p * q) * swapped);
    }
    Err(IntersectError::UnsupportedLink(point))
}

/// `lk(L₁, L₂)` in `S = Lk(P, X)` when `L₂` is a signed pair of points.
fn linking_sign(
    x: &SimplicialComplex,
    xo: &[i8],
    y1: &DecomposableCycle,
    y2: &DecomposableCycle,
    point: usize,
) -> Result<i32, IntersectError> {
    let n = x.dim();
    let tops = x.simplices(n);
    let s_cycle = link_cycle(tops, xo, point);
    let facets: Vec<Vec<usize>> = s_cycle.iter().map(|(t, _)| t.clone()).collect();
    let s = SimplicialComplex::from_facets(x.vertex_count(), &facets)?;
    let l1 = link_cycle(&y1.simplices, &y1.orientation, point);
    let l2 = link_cycle(&y2.simplices, &y2.orientation, point);
    let triv = LocalSystem::trivial(&s, 1);
    let ts = Twisted::new(&s, &triv)?;
    let l1_terms: Vec<(Vec<usize>, Vector)> = l1
        .iter()
        .map(|(t, c)| (t.clone(), vec![ExactScalar::from_i64(*c as i64)]))
        .collect();
    let rhs = ts.chain(n - 2, &l1_terms)?;
    let c = ts
        .boundary_matrix(n - 1)
        .solve(&rhs.coords)
        .map_err(LocalSystemError::from)?
        .ok_or(IntersectError::NotTransverse(point))?;
    let orient: BTreeMap<&Vec<usize>, i32> = s_cycle.iter().map(|(t, e)| (t, *e)).collect();
    let mut lk = ExactScalar::zero();
    for (b, cb) in &l2 {
        let v = b[0];
        let (i, t) = s
            .simplices(n - 1)
            .iter()
            .enumerate()
            .find(|(_, t)| t.contains(&v))
            .ok_or(IntersectError::NotTransverse(point))?;
        let local = &c[i] * &ExactScalar::from_i64((orient[t] * cb) as i64);
        lk += &local;
    }
    if lk == ExactScalar::one() {
        Ok(1)
    } else if lk == ExactScalar::from_i64(-1) {
        Ok(-1)
    } else {
        Err(IntersectError::NotTransverse(point))
    }
}

/// One term `ε · P ⊗ ν(s₁(P), s₂(P))` of the intersection product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionPoint {
    pub vertex: usize,
    pub sign: i32,
    pub coeff: Vector,
}

/// Geometric product of two transverse decomposable cycles of
/// complementary dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionProduct {
    pub points: Vec<IntersectionPoint>,
    pub chain: Chain,
}

/// `(Y₁⊗s₁)·(Y₂⊗s₂) = Σ_P ε_P P ⊗ ν(s₁(P), s₂(P))`.
pub fn intersect(
    e: Twisted<'_>,
    f: Twisted<'_>,
    g: Twisted<'_>,
    y1: &DecomposableCycle,
    y2: &DecomposableCycle,
    nu: &PairingRule,
) -> Result<IntersectionProduct, IntersectError> {
    let x = e.complex;
    let n = x.dim();
    let (p, q) = (y1.dim(), y2.dim());
    if p + q != n {
        return Err(IntersectError::NotComplementary { p, q, n });
    }
    nu.check_ranks(e.system, f.system, g.system)?;
    let s1 = y1.section(x, e.system)?;
    let s2 = y2.section(x, f.system)?;
    let data = check_general_position(x, y1, y2).map_err(|v| IntersectError::NotGeneralPosition(v.to_string()))?;
    let mut points = Vec::new();
    let mut terms = Vec::new();
    for v in data.points() {
        let sign = intersection_sign(x, y1, y2, v)?;
        let value = nu.apply(&s1[&v], &s2[&v]);
        let coeff = vecops::scale(&value, &ExactScalar::from_i64(sign as i64));
        terms.push((vec![v], coeff.clone()));
        points.push(IntersectionPoint { vertex: v, sign, coeff });
    }
    let chain = g.chain(0, &terms)?;
    Ok(IntersectionProduct { points, chain })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ExactMatrix;
    use crate::models;

    fn q(v: i64) -> ExactScalar {
        ExactScalar::from_i64(v)
    }

    #[test]
    fn zero_seed_gives_zero_chain() {
        let x = models::torus_grid(3, 3);
        let l = LocalSystem::trivial(&x, 1);
        let t = Twisted::new(&x, &l).unwrap();
        let c = models::circle_cycle(&[3, 3], &[0, 0], 0, vec![q(0)]).to_chain(t).unwrap();
        assert!(vecops::is_zero(&c.coords));
        let c = models::circle_cycle(&[3, 3], &[0, 0], 0, vec![q(1)]).to_chain(t).unwrap();
        assert!(t.is_cycle(&c).unwrap());
        assert_eq!(c.coords.iter().filter(|v| !v.is_zero()).count(), 3);
    }

    #[test]
    fn monodromy_obstructs_seed() {
        let m = [ExactMatrix::from_i64(&[&[2]]), ExactMatrix::from_i64(&[&[1]])];
        let l = models::torus_system(&[3, 3], &m);
        let x = models::torus_grid(3, 3);
        let t = Twisted::new(&x, &l).unwrap();
        let err = models::circle_cycle(&[3, 3], &[0, 0], 0, vec![q(1)]).to_chain(t).unwrap_err();
        assert!(matches!(err, IntersectError::MonodromyObstruction(_, _)));
        let ok = models::circle_cycle(&[3, 3], &[0, 0], 1, vec![q(1)]).to_chain(t).unwrap();
        assert!(t.is_cycle(&ok).unwrap());
    }

    #[test]
    fn general_position_examples() {
        let x = models::torus_grid(3, 3);
        let a = models::circle_cycle(&[3, 3], &[0, 0], 0, vec![q(1)]);
        let b = models::circle_cycle(&[3, 3], &[0, 0], 1, vec![q(1)]);
        let data = check_general_position(&x, &a, &b).unwrap();
        assert_eq!(data.points(), vec![0]);
        assert!(check_general_position(&x, &a, &a).is_err());
        let c = models::circle_cycle(&[3, 3], &[0, 1], 0, vec![q(1)]);
        assert!(check_general_position(&x, &a, &c).unwrap().common.is_empty());
    }

    #[test]
    fn torus_circles_meet_once_with_opposite_signs() {
        let x = models::torus_grid(3, 3);
        let a = models::circle_cycle(&[3, 3], &[0, 0], 0, vec![q(1)]);
        let b = models::circle_cycle(&[3, 3], &[0, 0], 1, vec![q(1)]);
        let ab = intersection_sign(&x, &a, &b, 0).unwrap();
        let ba = intersection_sign(&x, &b, &a, 0).unwrap();
        assert_eq!(ab.abs(), 1);
        assert_eq!(ba, -ab);
        let mut rev = a.clone();
        rev.orientation.iter_mut().for_each(|s| *s = -*s);
        assert_eq!(intersection_sign(&x, &rev, &b, 0).unwrap(), -ab);
    }
}

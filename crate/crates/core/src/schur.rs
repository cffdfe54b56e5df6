//! Tensors over an exact quadratic space: contractions `Φ_I`, insertions
//! `Ψ_I`, the harmonic projection `ℋ`, the Young symmetrizers `𝒫`, `𝒬` of
//! the row-by-row standard tableau, and the invariant vectors
//! `τ_x = 𝒬𝒫ℋ(x₁^{⊗b₁} ⊗ ⋯ ⊗ x_k^{⊗b_k})`.
//!
//! Slots and basis indices are 0-based throughout. `𝒫` and `𝒬` are the
//! normalized (idempotent) averages, so `(τ_e, τ_u) = 1/|Q_μ|` where
//! `|Q_μ| = Π_j (μ'_j)!`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::error::TensorError;
use crate::field::{ExactScalar, Field, Vector};
use crate::matrix::ExactMatrix;
use crate::weights::Partition;

/// A finite-dimensional space with a nondegenerate symmetric bilinear form.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticSpace {
    gram: ExactMatrix,
    inverse: ExactMatrix,
    diagonal: bool,
}

impl QuadraticSpace {
    pub fn new(gram: ExactMatrix) -> Result<Self, TensorError> {
        if !gram.is_symmetric() || !gram.is_invertible() {
            return Err(TensorError::BadGram);
        }
        let inverse = gram.inverse()?;
        let n = gram.rows();
        let diagonal = (0..n).all(|r| (0..n).all(|c| r == c || gram.get(r, c).is_zero()));
        Ok(QuadraticSpace { gram, inverse, diagonal })
    }

    /// `ℚ^{n+1}` with `(e_i, e_i) = 1` for `i < n` and `(e_n, e_n) = -1`.
    pub fn standard(n: usize) -> Self {
        let mut d = vec![ExactScalar::one(); n];
        d.push(ExactScalar::from_i64(-1));
        Self::new(ExactMatrix::diagonal(&d).unwrap()).expect("diagonal ±1 gram is nondegenerate")
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn inverse_gram(&self) -> &ExactMatrix {
        &self.inverse
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    /// `(x, y)` for coordinate vectors.
    pub fn form(&self, x: &[ExactScalar], y: &[ExactScalar]) -> ExactScalar {
        let gy = self.gram.mul_vec(y).expect("vector length matches the space");
        crate::matrix::vecops::dot(x, &gy)
    }

    /// Whether `gᵀ G g = G`.
    pub fn is_isometry(&self, g: &ExactMatrix) -> bool {
        g.rows() == self.dim()
            && g.cols() == self.dim()
            && g.transpose()
                .mul(&self.gram)
                .and_then(|m| m.mul(g))
                .and_then(|m| m.sub(&self.gram))
                .is_ok_and(|r| r.is_zero())
    }

    fn check(&self, t: &Tensor) -> Result<(), TensorError> {
        if t.dim != self.dim() {
            return Err(TensorError::DimensionMismatch(t.dim, self.dim()));
        }
        Ok(())
    }

    /// The bilinear extension of the form to `⊗^d V`.
    pub fn pair(&self, s: &Tensor, t: &Tensor) -> Result<ExactScalar, TensorError> {
        self.check(s)?;
        self.check(t)?;
        if s.degree != t.degree {
            return Err(TensorError::DegreeMismatch(s.degree, t.degree));
        }
        let mut acc = ExactScalar::zero();
        if self.diagonal {
            for (idx, a) in &s.coeffs {
                if let Some(b) = t.coeffs.get(idx) {
                    let mut w = a * b;
                    for &i in idx {
                        w *= self.gram.get(i, i);
                    }
                    acc += &w;
                }
            }
            return Ok(acc);
        }
        let gt = t.act(&self.gram);
        for (idx, a) in &s.coeffs {
            if let Some(b) = gt.coeffs.get(idx) {
                acc += &(a * b);
            }
        }
        Ok(acc)
    }

    /// `Φ_I`: pairs slots `i < j` with the form and removes them.
    pub fn contract(&self, t: &Tensor, i: usize, j: usize) -> Result<Tensor, TensorError> {
        self.check(t)?;
        if i >= j || j >= t.degree {
            return Err(TensorError::SlotOutOfRange(i, j, t.degree));
        }
        let mut out = Tensor::zero(t.dim, t.degree - 2);
        for (idx, c) in &t.coeffs {
            let g = self.gram.get(idx[i], idx[j]);
            if g.is_zero() {
                continue;
            }
            let rest: Vec<usize> = idx
                .iter()
                .enumerate()
                .filter(|&(s, _)| s != i && s != j)
                .map(|(_, &a)| a)
                .collect();
            out.add_term(rest, &(c * g));
        }
        Ok(out)
    }

    /// `Ψ_I`: inserts `Σ g^{ab} e_a ⊗ e_b` so that it occupies slots
    /// `i < j` of the result.
    pub fn insert(&self, t: &Tensor, i: usize, j: usize) -> Result<Tensor, TensorError> {
        self.check(t)?;
        let d = t.degree + 2;
        if i >= j || j >= d {
            return Err(TensorError::SlotOutOfRange(i, j, d));
        }
        let n = self.dim();
        let mut out = Tensor::zero(t.dim, d);
        for (idx, c) in &t.coeffs {
            for a in 0..n {
                for b in 0..n {
                    let g = self.inverse.get(a, b);
                    if g.is_zero() {
                        continue;
                    }
                    let mut full = Vec::with_capacity(d);
                    let mut rest = idx.iter();
                    for s in 0..d {
                        full.push(if s == i {
                            a
                        } else if s == j {
                            b
                        } else {
                            *rest.next().unwrap()
                        });
                    }
                    out.add_term(full, &(c * g));
                }
            }
        }
        Ok(out)
    }

    /// `ℋ`: orthogonal projection onto `∩_I ker Φ_I`.
    ///
    /// Solves `Φ_J(t - Σ_I Ψ_I s_I) = 0` for all `J`. The complement of the
    /// harmonic tensors is the span of the `Ψ_I`, so the result is the
    /// orthogonal projection. With a diagonal form the parity of each index
    /// multiplicity is preserved by every `Φ` and `Ψ`, and the system splits
    /// into one small block per parity class.
    pub fn harmonic_project(&self, t: &Tensor) -> Result<Tensor, TensorError> {
        self.check(t)?;
        if t.degree < 2 || t.is_zero() {
            return Ok(t.clone());
        }
        let h = if self.diagonal {
            let mut classes: BTreeMap<Vec<bool>, Tensor> = BTreeMap::new();
            for (idx, c) in &t.coeffs {
                classes
                    .entry(parity(idx, t.dim))
                    .or_insert_with(|| Tensor::zero(t.dim, t.degree))
                    .add_term(idx.clone(), c);
            }
            let mut h = Tensor::zero(t.dim, t.degree);
            for (par, part) in classes {
                h = h.add(&self.project_block(&part, Some(&par)));
            }
            h
        } else {
            self.project_block(t, None)
        };
        debug_assert!(self.is_harmonic(&h));
        Ok(h)
    }

    fn project_block(&self, t: &Tensor, par: Option<&[bool]>) -> Tensor {
        let (n, d) = (self.dim(), t.degree);
        let pairs = slot_pairs(d);
        let lower: Vec<Vec<usize>> = multi_indices(n, d - 2)
            .into_iter()
            .filter(|idx| par.is_none_or(|p| parity(idx, n) == p))
            .collect();
        if lower.is_empty() {
            return t.clone();
        }
        let row_of: BTreeMap<(usize, &Vec<usize>), usize> = pairs
            .iter()
            .enumerate()
            .flat_map(|(jp, _)| lower.iter().map(move |g| (jp, g)))
            .enumerate()
            .map(|(r, k)| (k, r))
            .collect();
        let rows = row_of.len();
        let mut inserted = Vec::with_capacity(rows);
        let mut columns = Vec::with_capacity(rows);
        for &(i, j) in &pairs {
            for beta in &lower {
                let psi = self
                    .insert(&Tensor::basis_term(n, beta.clone()), i, j)
                    .expect("slots are in range");
                columns.push(self.contraction_coordinates(&psi, &pairs, &row_of));
                inserted.push(psi);
            }
        }
        let rhs = self.contraction_coordinates(t, &pairs, &row_of);
        let m = ExactMatrix::from_columns(rows, &columns).expect("square block");
        let s = m
            .solve(&rhs)
            .expect("shapes agree")
            .expect("harmonic decomposition exists for a nondegenerate form");
        let mut h = t.clone();
        for (coef, psi) in s.iter().zip(&inserted) {
            if !coef.is_zero() {
                h = h.sub(&psi.scale(coef));
            }
        }
        h
    }

    fn contraction_coordinates(
        &self,
        t: &Tensor,
        pairs: &[(usize, usize)],
        row_of: &BTreeMap<(usize, &Vec<usize>), usize>,
    ) -> Vector {
        let mut v = vec![ExactScalar::zero(); row_of.len()];
        for (jp, &(i, j)) in pairs.iter().enumerate() {
            let c = self.contract(t, i, j).expect("slots are in range");
            for (idx, x) in c.coeffs {
                let r = row_of[&(jp, &idx)];
                v[r] = x;
            }
        }
        v
    }

    /// Whether every contraction `Φ_I` kills `t`.
    pub fn is_harmonic(&self, t: &Tensor) -> bool {
        slot_pairs(t.degree)
            .into_iter()
            .all(|(i, j)| self.contract(t, i, j).is_ok_and(|c| c.is_zero()))
    }

    /// `τ_x = 𝒬𝒫ℋ(x₁^{⊗b₁} ⊗ ⋯ ⊗ x_k^{⊗b_k})`.
    pub fn tau(&self, x: &[Vector], mu: &Partition) -> Result<Tensor, TensorError> {
        if mu.support_count() > x.len() {
            return Err(TensorError::PartitionTooLong {
                parts: mu.support_count(),
                vectors: x.len(),
            });
        }
        let mut t = Tensor::scalar(self.dim(), ExactScalar::one());
        for (v, &b) in x.iter().zip(mu.parts()) {
            let v = Tensor::vector(v.clone());
            if v.dim != self.dim() {
                return Err(TensorError::DimensionMismatch(v.dim, self.dim()));
            }
            for _ in 0..b {
                t = t.otimes(&v);
            }
        }
        let tableau = StandardTableau::new(mu.clone());
        let h = self.harmonic_project(&t)?;
        Ok(tableau.col_antisymmetrize(&tableau.row_symmetrize(&h)?)?)
    }

    /// `(τ_x, τ_y)`.
    pub fn pair_invariants(&self, x: &[Vector], y: &[Vector], mu: &Partition) -> Result<ExactScalar, TensorError> {
        self.pair(&self.tau(x, mu)?, &self.tau(y, mu)?)
    }

    /// Whether the diagonal action of the isometry `g` fixes `t`.
    pub fn invariance_check(&self, t: &Tensor, g: &ExactMatrix) -> Result<bool, TensorError> {
        self.check(t)?;
        if !self.is_isometry(g) {
            return Err(TensorError::NotIsometry);
        }
        Ok(t.act(g) == *t)
    }

    /// The first `k` standard basis vectors.
    pub fn standard_frame(&self, k: usize) -> Vec<Vector> {
        (0..k).map(|i| unit(self.dim(), i)).collect()
    }

    fn check_standard(&self, n: usize) -> Result<(), TensorError> {
        if let Field::Sqrt(_) = self.field() {
            return Err(TensorError::NeedsGaussian(self.field()));
        }
        if *self != Self::standard(n) {
            return Err(TensorError::NotStandardSpace);
        }
        Ok(())
    }

    /// Isotropic vectors `(u₁, …, u_m, v_m, …, v₁)` over ℚ(i) with
    /// `(u_i, v_i) = 2`, for the standard signature-(n,1) space. For even `n`,
    /// `u_i = e_i − i·e_{m+i}`; for odd `n` the last pair uses the negative
    /// vector, `u_m = e_m − e_{2m}`.
    pub fn witt_basis(&self, n: usize) -> Result<Vec<Vector>, TensorError> {
        self.check_standard(n)?;
        let m = n.div_ceil(2);
        let dim = self.dim();
        let i = ExactScalar::i();
        let mut us = Vec::with_capacity(m);
        let mut vs = Vec::with_capacity(m);
        for k in 0..m {
            let mut u = unit(dim, k);
            let mut v = unit(dim, k);
            if n % 2 == 1 && k == m - 1 {
                u[n] = ExactScalar::from_i64(-1);
                v[n] = ExactScalar::one();
            } else {
                u[m + k] = -&i;
                v[m + k] = i.clone();
            }
            us.push(u);
            vs.push(v);
        }
        us.extend(vs.into_iter().rev());
        Ok(us)
    }

    /// The isometry `u_i ↦ t_i u_i`, `v_i ↦ t_i⁻¹ v_i` fixing the orthogonal
    /// complement of the Witt vectors.
    pub fn torus_element(&self, n: usize, t: &[ExactScalar]) -> Result<ExactMatrix, TensorError> {
        let witt = self.witt_basis(n)?;
        let m = witt.len() / 2;
        if t.len() != m {
            return Err(TensorError::DimensionMismatch(t.len(), m));
        }
        let mut cols = witt.clone();
        let mut scale: Vec<ExactScalar> = t.to_vec();
        for s in t.iter().rev() {
            scale.push(s.inv().map_err(crate::error::MatrixError::from)?);
        }
        if n % 2 == 0 {
            cols.push(unit(self.dim(), n));
            scale.push(ExactScalar::one());
        }
        let w = ExactMatrix::from_columns(self.dim(), &cols)?;
        let d = ExactMatrix::diagonal(&scale)?;
        Ok(w.mul(&d)?.mul(&w.inverse()?)?)
    }
}

/// Whether the harmonic Schur module `S_[μ]U` is nonzero: the first two
/// columns of `μ` have total length at most `dim U`.
pub fn schur_module_nonzero(mu: &Partition, dim: usize) -> bool {
    let c = mu.conjugate();
    let p = c.parts();
    (p.first().copied().unwrap_or(0) + p.get(1).copied().unwrap_or(0)) as usize <= dim
}

/// `|Q_μ| = Π_j (μ'_j)!`.
pub fn column_group_order(mu: &Partition) -> u64 {
    mu.conjugate()
        .parts()
        .iter()
        .map(|&c| (1..=c as u64).product::<u64>())
        .product()
}

fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![ExactScalar::zero(); n];
    v[i] = ExactScalar::one();
    v
}

fn parity(idx: &[usize], n: usize) -> Vec<bool> {
    let mut p = vec![false; n];
    for &a in idx {
        p[a] = !p[a];
    }
    p
}

fn slot_pairs(d: usize) -> Vec<(usize, usize)> {
    (0..d).tuple_combinations().collect()
}

fn multi_indices(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

/// A sparse element of `V^{⊗d}`; absent multi-indices are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    dim: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, ExactScalar>,
}

impl Tensor {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Tensor {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: ExactScalar) -> Self {
        let mut t = Self::zero(dim, 0);
        t.add_term(Vec::new(), &c);
        t
    }

    pub fn vector(v: Vector) -> Self {
        let mut t = Self::zero(v.len(), 1);
        for (a, c) in v.into_iter().enumerate() {
            t.add_term(vec![a], &c);
        }
        t
    }

    /// `e_{a₁} ⊗ ⋯ ⊗ e_{a_d}`.
    pub fn basis_term(dim: usize, idx: Vec<usize>) -> Self {
        let mut t = Self::zero(dim, idx.len());
        t.add_term(idx, &ExactScalar::one());
        t
    }

    /// Builds a tensor from explicit terms; repeated indices accumulate.
    pub fn from_terms(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<usize>, ExactScalar)>,
    ) -> Result<Self, TensorError> {
        let mut t = Self::zero(dim, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(TensorError::DegreeMismatch(idx.len(), degree));
            }
            if let Some(&a) = idx.iter().find(|&&a| a >= dim) {
                return Err(TensorError::DimensionMismatch(a, dim));
            }
            t.add_term(idx, &c);
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &ExactScalar)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, idx: &[usize]) -> ExactScalar {
        self.coeffs.get(idx).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, idx: Vec<usize>, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Panics on degree or dimension mismatch.
    pub fn add(&self, rhs: &Tensor) -> Tensor {
        assert_eq!((self.dim, self.degree), (rhs.dim, rhs.degree), "tensor shape mismatch");
        let mut out = self.clone();
        for (idx, c) in &rhs.coeffs {
            out.add_term(idx.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Tensor) -> Tensor {
        self.add(&rhs.scale(&ExactScalar::from_i64(-1)))
    }

    pub fn scale(&self, s: &ExactScalar) -> Tensor {
        let mut out = Tensor::zero(self.dim, self.degree);
        for (idx, c) in &self.coeffs {
            out.add_term(idx.clone(), &(c * s));
        }
        out
    }

    pub fn otimes(&self, rhs: &Tensor) -> Tensor {
        assert_eq!(self.dim, rhs.dim, "tensor dimension mismatch");
        let mut out = Tensor::zero(self.dim, self.degree + rhs.degree);
        for (a, x) in &self.coeffs {
            for (b, y) in &rhs.coeffs {
                let mut idx = a.clone();
                idx.extend_from_slice(b);
                out.add_term(idx, &(x * y));
            }
        }
        out
    }

    /// Slot permutation: the factor in slot `i` moves to slot `p[i]`.
    pub fn permute(&self, p: &[usize]) -> Tensor {
        assert_eq!(p.len(), self.degree, "permutation length");
        let mut out = Tensor::zero(self.dim, self.degree);
        for (idx, c) in &self.coeffs {
            let mut moved = vec![0; idx.len()];
            for (i, &a) in idx.iter().enumerate() {
                moved[p[i]] = a;
            }
            out.add_term(moved, c);
        }
        out
    }

    /// Diagonal action `g^{⊗d}` on coordinates.
    pub fn act(&self, g: &ExactMatrix) -> Tensor {
        assert_eq!((g.rows(), g.cols()), (self.dim, self.dim), "matrix size");
        let mut cur = self.clone();
        for slot in 0..self.degree {
            let mut next = Tensor::zero(self.dim, self.degree);
            for (idx, c) in &cur.coeffs {
                for b in 0..self.dim {
                    let m = g.get(b, idx[slot]);
                    if !m.is_zero() {
                        let mut j = idx.clone();
                        j[slot] = b;
                        next.add_term(j, &(c * m));
                    }
                }
            }
            cur = next;
        }
        cur
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(idx, c)| {
                if idx.is_empty() {
                    return c.to_string();
                }
                let basis = idx.iter().map(|a| format!("e{}", a + 1)).join("⊗");
                format!("({c})·{basis}")
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Row-by-row standard filling of `μ`: row `r` holds consecutive slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardTableau {
    shape: Partition,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(shape: Partition) -> Self {
        let mut rows = Vec::new();
        let mut next = 0;
        for &b in shape.parts() {
            rows.push((next..next + b as usize).collect::<Vec<_>>());
            next += b as usize;
        }
        let width = shape.parts().first().copied().unwrap_or(0) as usize;
        let cols = (0..width)
            .map(|j| rows.iter().filter(|r| r.len() > j).map(|r| r[j]).collect())
            .collect();
        StandardTableau { shape, rows, cols }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn degree(&self) -> usize {
        self.shape.size()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn columns(&self) -> &[Vec<usize>] {
        &self.cols
    }

    fn check(&self, t: &Tensor) -> Result<(), TensorError> {
        if t.degree != self.degree() {
            return Err(TensorError::DegreeMismatch(t.degree, self.degree()));
        }
        Ok(())
    }

    /// `𝒫 = (1/|P|) Σ_{p∈P} p`, applied one row group at a time.
    pub fn row_symmetrize(&self, t: &Tensor) -> Result<Tensor, TensorError> {
        self.check(t)?;
        Ok(self.rows.iter().fold(t.clone(), |acc, r| average(&acc, r, false)))
    }

    /// `𝒬 = (1/|Q|) Σ_{q∈Q} ε(q) q`, applied one column group at a time.
    pub fn col_antisymmetrize(&self, t: &Tensor) -> Result<Tensor, TensorError> {
        self.check(t)?;
        Ok(self.cols.iter().fold(t.clone(), |acc, c| average(&acc, c, true)))
    }
}

/// Signed or unsigned average over all permutations of the given slots.
fn average(t: &Tensor, slots: &[usize], signed: bool) -> Tensor {
    let k = slots.len();
    if k < 2 {
        return t.clone();
    }
    let count: i64 = (1..=k as i64).product();
    let mut out = Tensor::zero(t.dim, t.degree);
    for perm in (0..k).permutations(k) {
        let sign = if signed && permutation_is_odd(&perm) { -1 } else { 1 };
        let w = ExactScalar::from_frac(sign, count);
        for (idx, c) in &t.coeffs {
            let mut j = idx.clone();
            for (a, &b) in perm.iter().enumerate() {
                j[slots[b]] = idx[slots[a]];
            }
            out.add_term(j, &(c * &w));
        }
    }
    out
}

pub(crate) fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = p[c];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

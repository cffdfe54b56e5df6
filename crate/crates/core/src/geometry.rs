//! Rational quadratic spaces for the standard arithmetic examples: the form
//! `x₁² + ⋯ + xₙ² − √m·x_{n+1}²` over `𝕂 = ℚ(√m)`, its signatures at the two
//! real embeddings, reflections `r_X`, Cayley-transform isometries fixing a
//! subspace pointwise, and randomized searches for rational tuples `y`
//! whose invariants pair nontrivially with those of a fixed frame.
//!
//! The arithmetic-lattice layer (congruence subgroups, neatness, the
//! single-component intersection of totally geodesic cycles) is taken as
//! given. This module only produces and checks the local data: invariant
//! vectors, pairings, spans and signs. Every search result is re-checked by
//! [`verify_complementary`] or [`verify_cup`], which share no code with the
//! search loop beyond the tensor primitives.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GeometryError;
use crate::field::{ExactScalar, Field, Vector};
use crate::matrix::{vecops, ExactMatrix};
use crate::schur::QuadraticSpace;
use crate::weights::Partition;

/// Default trial budget of the tuple searches.
pub const DEFAULT_TRIALS: usize = 10_000;

/// The diagonal form `(1, …, 1, −√m)` on `𝕂^{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalQuadraticForm {
    n: usize,
    m: u64,
    space: QuadraticSpace,
}

impl RationalQuadraticForm {
    pub fn new(n: usize, m: u64) -> Result<Self, GeometryError> {
        let field = Field::sqrt(m)?;
        let mut d = vec![ExactScalar::one().coerce(field)?; n];
        d.push(-&ExactScalar::sqrt(m)?);
        let space = QuadraticSpace::new(ExactMatrix::diagonal(&d)?)?;
        Ok(RationalQuadraticForm { n, m, space })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn space(&self) -> &QuadraticSpace {
        &self.space
    }

    pub fn field(&self) -> Field {
        Field::Sqrt(self.m)
    }

    /// `(positive, negative)` counts of the diagonal at `√m ↦ +√m` and at
    /// `√m ↦ −√m`.
    pub fn signature_at_embeddings(&self) -> ((usize, usize), (usize, usize)) {
        let count = |plus: bool| {
            let g = self.space.gram();
            (0..=self.n).fold((0, 0), |(p, q), i| match g.get(i, i).sign_at(plus) {
                Some(Ordering::Greater) => (p + 1, q),
                Some(Ordering::Less) => (p, q + 1),
                _ => (p, q),
            })
        };
        (count(true), count(false))
    }

    /// Checks that `x` spans a `k`-dimensional subspace on which the form
    /// is positive definite at the `(n,1)` embedding.
    pub fn positive_subspace(&self, x: &[Vector]) -> Result<PositiveSubspace, GeometryError> {
        PositiveSubspace::new(&self.space, x)
    }
}

/// Linearly independent vectors spanning a positive definite subspace.
#[derive(Clone, Debug, PartialEq)]
pub struct PositiveSubspace {
    vectors: Vec<Vector>,
}

impl PositiveSubspace {
    pub fn new(space: &QuadraticSpace, x: &[Vector]) -> Result<Self, GeometryError> {
        let k = x.len();
        let span = span_dim(space.dim(), x)?;
        if span != k {
            return Err(GeometryError::NotIndependent(k, span));
        }
        if !positive_definite_pivots(&gram_of(space, x)) {
            return Err(GeometryError::NotPositive);
        }
        Ok(PositiveSubspace { vectors: x.to_vec() })
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

/// `[(x_i, x_j)]`.
pub fn gram_of(space: &QuadraticSpace, x: &[Vector]) -> ExactMatrix {
    let rows = x.iter().map(|a| x.iter().map(|b| space.form(a, b)).collect()).collect();
    ExactMatrix::from_rows(rows).expect("square gram")
}

fn span_dim(dim: usize, x: &[Vector]) -> Result<usize, GeometryError> {
    if x.is_empty() {
        return Ok(0);
    }
    if x.iter().any(|v| v.len() != dim) {
        return Err(GeometryError::Precondition(format!("vectors must have {dim} coordinates")));
    }
    Ok(ExactMatrix::from_columns(dim, x)?.rank())
}

/// Symmetric elimination without pivoting: a symmetric matrix is positive
/// definite at the `+√m` embedding iff every pivot is positive there.
fn positive_definite_pivots(g: &ExactMatrix) -> bool {
    let n = g.rows();
    let mut a: Vec<Vector> = g.row_vectors();
    for k in 0..n {
        if a[k][k].sign_at(true) != Some(Ordering::Greater) {
            return false;
        }
        let inv = a[k][k].inv().expect("positive pivot");
        for i in k + 1..n {
            let f = &a[i][k] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let d = &f * &a[k][j];
                a[i][j] -= &d;
            }
        }
    }
    true
}

/// Sylvester's criterion: every leading principal minor positive at the
/// `+√m` embedding. Used by the verifiers, independently of the pivots.
fn positive_definite_minors(g: &ExactMatrix) -> bool {
    (1..=g.rows()).all(|k| {
        let rows = (0..k).map(|i| (0..k).map(|j| g.get(i, j).clone()).collect()).collect();
        determinant(&ExactMatrix::from_rows(rows).unwrap()).sign_at(true) == Some(Ordering::Greater)
    })
}

/// Determinant by cofactor-free elimination with row swaps.
fn determinant(m: &ExactMatrix) -> ExactScalar {
    let n = m.rows();
    let mut a = m.row_vectors();
    let mut det = ExactScalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return ExactScalar::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -&det;
        }
        det *= &a[c][c];
        let inv = a[c][c].inv().unwrap();
        for r in c + 1..n {
            let f = &a[r][c] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let d = &f * &a[c][j];
                a[r][j] -= &d;
            }
        }
    }
    det
}

/// `r_X`: `−1` on `X`, `+1` on `X^⊥`, as `I − 2·X·G_X⁻¹·Xᵀ·G`.
pub fn reflection(space: &QuadraticSpace, x: &[Vector]) -> Result<ExactMatrix, GeometryError> {
    let n = space.dim();
    if x.is_empty() {
        return Ok(ExactMatrix::identity(n, space.field()));
    }
    let gx = gram_of(space, x);
    if !gx.is_invertible() {
        return Err(GeometryError::Degenerate);
    }
    let xm = ExactMatrix::from_columns(n, x)?;
    let proj = xm.mul(&gx.inverse()?)?.mul(&xm.transpose())?.mul(space.gram())?;
    let two = ExactScalar::from_i64(2);
    Ok(ExactMatrix::identity(n, space.field()).sub(&proj.scale(&two)?)?)
}

/// The Cayley transform `(I − A)(I + A)⁻¹`; an isometry when `A` is
/// skew for the form.
pub fn cayley(a: &ExactMatrix) -> Result<ExactMatrix, GeometryError> {
    let id = ExactMatrix::identity(a.rows(), a.field());
    let plus = id.add(a)?;
    if !plus.is_invertible() {
        return Err(GeometryError::CayleyRetries);
    }
    Ok(id.sub(a)?.mul(&plus.inverse()?)?)
}

/// A seeded isometry `g` with `g·x_i = x_i`: the Cayley transform of
/// `A = Σ_{a<b} c_ab (y_a (G y_b)ᵀ − y_b (G y_a)ᵀ)` with `y` a basis of `X^⊥`
/// and small random integers `c_ab`. `A` is skew for the form and kills
/// `X`.
pub fn sample_pointwise_stabilizer(space: &QuadraticSpace, x: &[Vector], seed: u64) -> Result<ExactMatrix, GeometryError> {
    let n = space.dim();
    let gx = gram_of(space, x);
    if !x.is_empty() && !gx.is_invertible() {
        return Err(GeometryError::Degenerate);
    }
    let perp = if x.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vecops::zeros(n, space.field());
                v[i] = ExactScalar::one();
                v
            })
            .collect()
    } else {
        ExactMatrix::from_columns(n, x)?.transpose().mul(space.gram())?.kernel_basis()
    };
    let gy: Vec<Vector> = perp.iter().map(|y| space.gram().mul_vec(y)).collect::<Result<_, _>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut a = ExactMatrix::zeros(n, n, space.field());
        for i in 0..perp.len() {
            for j in i + 1..perp.len() {
                let c = ExactScalar::from_i64(rng.random_range(-3..=3));
                if c.is_zero() {
                    continue;
                }
                let term = outer(&perp[i], &gy[j]).sub(&outer(&perp[j], &gy[i]))?;
                a = a.add(&term.scale(&c)?)?;
            }
        }
        match cayley(&a) {
            Ok(g) => return Ok(g),
            Err(GeometryError::CayleyRetries) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GeometryError::CayleyRetries)
}

fn outer(a: &[ExactScalar], b: &[ExactScalar]) -> ExactMatrix {
    let rows = a.iter().map(|x| b.iter().map(|y| x * y).collect()).collect();
    ExactMatrix::from_rows(rows).expect("outer product")
}

/// Random vectors with entries `p/q`, `|p| ≤ h`, `1 ≤ q ≤ h`; the height
/// `h` doubles every 64 rejected samples.
struct Sampler {
    rng: ChaCha8Rng,
    height: i64,
    failures: usize,
}

impl Sampler {
    fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            height: 2,
            failures: 0,
        }
    }

    fn vector(&mut self, dim: usize) -> Vector {
        (0..dim)
            .map(|_| {
                let p = self.rng.random_range(-self.height..=self.height);
                let q = self.rng.random_range(1..=self.height);
                ExactScalar::from_frac(p, q)
            })
            .collect()
    }

    fn reject(&mut self) {
        self.failures += 1;
        if self.failures % 64 == 0 && self.height < 1 << 20 {
            self.height *= 2;
        }
    }
}

/// Outcome of one named exact check.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub value: String,
}

/// The verification transcript of a witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// A witness tuple with the values the search used, the trial on which it
/// was found, and an independent verification.
#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub tuple: Vec<Vector>,
    pub pairings: Vec<ExactScalar>,
    pub trial: usize,
    pub seed: u64,
    pub verification: Verification,
}

fn unit(dim: usize, i: usize) -> Vector {
    let mut v = vec![ExactScalar::zero(); dim];
    v[i] = ExactScalar::one();
    v
}

/// The frame `e₁, …, e_k` of the positive part.
pub fn standard_frame(form: &RationalQuadraticForm, k: usize) -> Vec<Vector> {
    (0..k).map(|i| unit(form.n + 1, i)).collect()
}

fn check_support(mu: &Partition, have: usize, what: &str) -> Result<(), GeometryError> {
    if mu.support_count() > have {
        return Err(GeometryError::Precondition(format!(
            "i(μ) = {} exceeds {what} = {have}; an invariant needs dim(X) ≥ i(μ)",
            mu.support_count()
        )));
    }
    Ok(())
}

/// `P_e(y) = (τ_x, τ_{y′})` with `y′ = (y₁, …, y_k)`, `k = |x|`.
pub fn pairing_polynomial(
    form: &RationalQuadraticForm,
    x: &[Vector],
    y: &[Vector],
    mu: &Partition,
) -> Result<ExactScalar, GeometryError> {
    let k = x.len();
    Ok(form.space.pair_invariants(x, &y[..k.min(y.len())], mu)?)
}

/// Searches for `y = (y₁, …, y_{n−k})` with `(τ_x, τ_{y′}) ≠ 0`,
/// `dim span(x, y) = n` and the form positive definite on that span.
/// Requires `i(μ) ≤ k ≤ ⌊n/2⌋`.
pub fn complementary_tuple_search(
    form: &RationalQuadraticForm,
    x: &[Vector],
    mu: &Partition,
    trials: usize,
    seed: u64,
) -> Result<SearchResult, GeometryError> {
    let (n, k) = (form.n, x.len());
    if mu.support_count() > n / 2 {
        return Err(GeometryError::Precondition(format!(
            "i(μ) = {} > ⌊n/2⌋ = {}: complementary cycles cannot both carry invariants \
             (a positive definite X + Y has dimension at most n)",
            mu.support_count(),
            n / 2
        )));
    }
    check_support(mu, k, "k")?;
    if k > n / 2 {
        return Err(GeometryError::Precondition(format!("k = {k} exceeds ⌊n/2⌋ = {}", n / 2)));
    }
    form.positive_subspace(x)?;
    let mut sampler = Sampler::new(seed);
    for trial in 0..trials {
        let y: Vec<Vector> = (0..n - k).map(|_| sampler.vector(n + 1)).collect();
        let all: Vec<Vector> = x.iter().chain(&y).cloned().collect();
        if span_dim(n + 1, &all)? != n || !positive_definite_pivots(&gram_of(&form.space, &all)) {
            sampler.reject();
            continue;
        }
        let p = pairing_polynomial(form, x, &y, mu)?;
        if p.is_zero() {
            sampler.reject();
            continue;
        }
        let verification = verify_complementary(form, x, &y, mu)?;
        return Ok(SearchResult {
            tuple: y,
            pairings: vec![p],
            trial,
            seed,
            verification,
        });
    }
    Err(GeometryError::TrialsExhausted { trials, seed })
}

/// Re-checks the three conditions for a complementary tuple: the pairing
/// in the opposite order, the span dimension by a transposed rank, and
/// positivity by leading minors.
pub fn verify_complementary(
    form: &RationalQuadraticForm,
    x: &[Vector],
    y: &[Vector],
    mu: &Partition,
) -> Result<Verification, GeometryError> {
    let k = x.len();
    let space = &form.space;
    let ty = space.tau(&y[..k.min(y.len())], mu)?;
    let tx = space.tau(x, mu)?;
    let pairing = space.pair(&ty, &tx)?;
    let all: Vec<Vector> = x.iter().chain(y).cloned().collect();
    let dim = ExactMatrix::from_rows(all.clone())?.rank();
    let pd = positive_definite_minors(&gram_of(space, &all));
    Ok(Verification {
        checks: vec![
            Check {
                name: "pairing nonzero",
                pass: !pairing.is_zero(),
                value: pairing.to_string(),
            },
            Check {
                name: "span has dimension n",
                pass: dim == form.n,
                value: dim.to_string(),
            },
            Check {
                name: "positive definite",
                pass: pd,
                value: pd.to_string(),
            },
        ],
    })
}

/// Parameters of the cup-product search: degrees `q₁, q₂` and weights
/// `μ₁, μ₂` with `i(μ_j) ≤ q_j` and `q₁ + q₂ ≤ ⌊n/2⌋`.
#[derive(Clone, Debug, PartialEq)]
pub struct CupSearch {
    pub q1: usize,
    pub q2: usize,
    pub mu1: Partition,
    pub mu2: Partition,
}

impl CupSearch {
    fn check(&self, n: usize) -> Result<(), GeometryError> {
        let (p1, p2) = (self.mu1.support_count(), self.mu2.support_count());
        if p1 > self.q1 || p2 > self.q2 {
            return Err(GeometryError::Precondition(format!(
                "need i(μ₁) = {p1} ≤ q₁ = {} and i(μ₂) = {p2} ≤ q₂ = {}",
                self.q1, self.q2
            )));
        }
        if 2 * (self.q1 + self.q2) > n {
            return Err(GeometryError::Precondition(format!(
                "q₁ + q₂ = {} exceeds ⌊n/2⌋ = {}",
                self.q1 + self.q2,
                n / 2
            )));
        }
        Ok(())
    }

    /// `x′ = (e₁, …, e_{p₁})` and `x″ = (e_{q₁+1}, …, e_{q₁+p₂})`.
    pub fn frames(&self, form: &RationalQuadraticForm) -> (Vec<Vector>, Vec<Vector>) {
        let dim = form.n + 1;
        let p1 = self.mu1.support_count();
        let p2 = self.mu2.support_count();
        (
            (0..p1).map(|i| unit(dim, i)).collect(),
            (self.q1..self.q1 + p2).map(|i| unit(dim, i)).collect(),
        )
    }

    /// `w′ = (w₁, …, w_{p₁})` and `w″ = (w_{q₁+1}, …, w_{q₁+p₂})`.
    pub fn split<'w>(&self, w: &'w [Vector]) -> (&'w [Vector], &'w [Vector]) {
        let p1 = self.mu1.support_count();
        let p2 = self.mu2.support_count();
        (&w[..p1], &w[self.q1..self.q1 + p2])
    }
}

/// Searches for `w ∈ V^{n−(q₁+q₂)}` with `(τ_{x′}, τ_{w′}) ≠ 0`,
/// `(τ_{x″}, τ_{w″}) ≠ 0`, `dim span(e₁, …, e_{q₁+q₂}, w) = n` and the form
/// positive definite on that span.
pub fn cup_tuple_search(
    form: &RationalQuadraticForm,
    params: &CupSearch,
    trials: usize,
    seed: u64,
) -> Result<SearchResult, GeometryError> {
    let n = form.n;
    params.check(n)?;
    let q = params.q1 + params.q2;
    let base = standard_frame(form, q);
    let (x1, x2) = params.frames(form);
    let mut sampler = Sampler::new(seed);
    for trial in 0..trials {
        let w: Vec<Vector> = (0..n - q).map(|_| sampler.vector(n + 1)).collect();
        let all: Vec<Vector> = base.iter().chain(&w).cloned().collect();
        if span_dim(n + 1, &all)? != n || !positive_definite_pivots(&gram_of(&form.space, &all)) {
            sampler.reject();
            continue;
        }
        let (w1, w2) = params.split(&w);
        let a = form.space.pair_invariants(&x1, w1, &params.mu1)?;
        if a.is_zero() {
            sampler.reject();
            continue;
        }
        let b = form.space.pair_invariants(&x2, w2, &params.mu2)?;
        if b.is_zero() {
            sampler.reject();
            continue;
        }
        let verification = verify_cup(form, params, &w)?;
        return Ok(SearchResult {
            tuple: w,
            pairings: vec![a, b],
            trial,
            seed,
            verification,
        });
    }
    Err(GeometryError::TrialsExhausted { trials, seed })
}

/// Re-checks the four conditions of a cup-product witness.
pub fn verify_cup(form: &RationalQuadraticForm, params: &CupSearch, w: &[Vector]) -> Result<Verification, GeometryError> {
    params.check(form.n)?;
    let space = &form.space;
    let (x1, x2) = params.frames(form);
    let (w1, w2) = params.split(w);
    let a = space.pair(&space.tau(w1, &params.mu1)?, &space.tau(&x1, &params.mu1)?)?;
    let b = space.pair(&space.tau(w2, &params.mu2)?, &space.tau(&x2, &params.mu2)?)?;
    let all: Vec<Vector> = standard_frame(form, params.q1 + params.q2).into_iter().chain(w.iter().cloned()).collect();
    let dim = ExactMatrix::from_rows(all.clone())?.rank();
    let pd = positive_definite_minors(&gram_of(space, &all));
    Ok(Verification {
        checks: vec![
            Check {
                name: "first pairing nonzero",
                pass: !a.is_zero(),
                value: a.to_string(),
            },
            Check {
                name: "second pairing nonzero",
                pass: !b.is_zero(),
                value: b.to_string(),
            },
            Check {
                name: "span has dimension n",
                pass: dim == form.n,
                value: dim.to_string(),
            },
            Check {
                name: "positive definite",
                pass: pd,
                value: pd.to_string(),
            },
        ],
    })
}

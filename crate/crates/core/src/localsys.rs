//! Local coefficient systems on simplicial complexes and the twisted
//! (co)chain complexes they define.
//!
//! A system of rank `r` is given by one invertible `r×r` transport
//! `τ_(a,b)` per edge `a < b` (fiber at `a` to fiber at `b`), compatible on
//! every triangle: `τ_(b,c) τ_(a,b) = τ_(a,c)`. Chains and cochains are flat
//! coordinate vectors: block `i` of a degree-`p` chain is the coefficient of
//! the `i`-th `p`-simplex, a vector in the fiber at its first vertex.
//!
//! Conventions:
//!
//! - `∂(σ⊗c) = σ₀ ⊗ τ_(v₀,v₁)c + Σ_{i≥1} (−1)^i σ_i ⊗ c`.
//! - `δα(σ) = τ_(v₀,v₁)⁻¹ α(σ₀) + Σ_{i≥1} (−1)^i α(σ_i)`, the adjoint of `∂`
//!   under evaluation against chains with coefficients in the dual system.
//! - `(a∪b)(v₀…v_{p+q}) = ν(a(v₀…v_p) ⊗ τ_(v₀,v_p)⁻¹ b(v_p…v_{p+q}))`.
//! - `b∩(σ⊗f) = (v₀…v_{m−q}) ⊗ ν(τ_(v₀,v_{m−q})⁻¹ b(v_{m−q}…v_m) ⊗ f)`.

use std::collections::BTreeMap;

use crate::complex::{faces, sign, SimplicialComplex};
use crate::error::{ComplexError, LocalSystemError};
use crate::field::{ExactScalar, Field, Vector};
use crate::matrix::{vecops, EchelonBasis, ExactMatrix};

#[derive(Clone, Debug, PartialEq)]
struct Transport {
    forward: ExactMatrix,
    backward: ExactMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalSystem {
    rank: usize,
    field: Field,
    vertices: usize,
    edges: BTreeMap<(usize, usize), Transport>,
    identity: ExactMatrix,
}

impl LocalSystem {
    /// Builds and validates a system on `x`. Transports given on `(b, a)`
    /// with `b > a` are inverted onto `(a, b)`.
    pub fn new(
        x: &SimplicialComplex,
        rank: usize,
        transports: impl IntoIterator<Item = ((usize, usize), ExactMatrix)>,
    ) -> Result<Self, LocalSystemError> {
        let mut edges = BTreeMap::new();
        let mut field = Field::Rational;
        for ((a, b), m) in transports {
            let key = (a.min(b), a.max(b));
            if a == b || !x.contains(&[key.0, key.1]) {
                return Err(LocalSystemError::UnknownEdge(a, b));
            }
            if m.rows() != rank || m.cols() != rank || !m.is_invertible() {
                return Err(LocalSystemError::BadTransport(a, b, rank));
            }
            let inv = m.inverse()?;
            let (forward, backward) = if a < b { (m, inv) } else { (inv, m) };
            field = field.join(forward.field()).map_err(crate::error::MatrixError::from)?;
            edges.insert(key, Transport { forward, backward });
        }
        if let Some((a, b)) = x.edges().find(|e| !edges.contains_key(e)) {
            return Err(LocalSystemError::MissingEdge(a, b));
        }
        let sys = LocalSystem {
            rank,
            field,
            vertices: x.vertex_count(),
            edges,
            identity: ExactMatrix::identity(rank, Field::Rational),
        };
        for t in x.simplices(2) {
            let lhs = sys.transport(t[1], t[2]).mul(sys.transport(t[0], t[1]))?;
            if lhs.sub(sys.transport(t[0], t[2]))?.is_zero() {
                continue;
            }
            return Err(LocalSystemError::Incompatible(t.clone()));
        }
        Ok(sys)
    }

    /// All transports the identity.
    pub fn trivial(x: &SimplicialComplex, rank: usize) -> Self {
        let id = ExactMatrix::identity(rank, Field::Rational);
        Self::new(x, rank, x.edges().map(|e| (e, id.clone()))).expect("identity transports are compatible")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Transport from the fiber at `a` to the fiber at `b` along the edge.
    /// Panics when `{a, b}` is not an edge.
    pub fn transport(&self, a: usize, b: usize) -> &ExactMatrix {
        if a == b {
            return &self.identity;
        }
        let t = self
            .edges
            .get(&(a.min(b), a.max(b)))
            .unwrap_or_else(|| panic!("({a},{b}) is not an edge"));
        if a < b {
            &t.forward
        } else {
            &t.backward
        }
    }

    pub fn edge_transports(&self) -> impl Iterator<Item = ((usize, usize), &ExactMatrix)> {
        self.edges.iter().map(|(&k, t)| (k, &t.forward))
    }

    /// Whether every transport is the identity.
    pub fn is_trivial(&self) -> bool {
        self.edges.values().all(|t| t.forward.sub(&self.identity).is_ok_and(|d| d.is_zero()))
    }

    /// The dual system `E*`, with transports `(τ⁻¹)ᵀ`.
    pub fn dual(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|(&k, t)| {
                (
                    k,
                    Transport {
                        forward: t.backward.transpose(),
                        backward: t.forward.transpose(),
                    },
                )
            })
            .collect();
        LocalSystem { edges, ..self.clone() }
    }

    /// Change of trivialization `τ'_(a,b) = g_b τ_(a,b) g_a⁻¹`; the result is
    /// an isomorphic system.
    pub fn gauge(&self, g: &[ExactMatrix]) -> Result<Self, LocalSystemError> {
        if g.len() != self.vertices {
            return Err(LocalSystemError::RankMismatch {
                expected: self.vertices,
                got: g.len(),
            });
        }
        let inv: Vec<ExactMatrix> = g.iter().map(ExactMatrix::inverse).collect::<Result<_, _>>()?;
        let mut edges = BTreeMap::new();
        for (&(a, b), t) in &self.edges {
            let forward = g[b].mul(&t.forward)?.mul(&inv[a])?;
            let backward = g[a].mul(&t.backward)?.mul(&inv[b])?;
            edges.insert((a, b), Transport { forward, backward });
        }
        let field = g
            .iter()
            .try_fold(self.field, |f, m| f.join(m.field()))
            .map_err(crate::error::MatrixError::from)?;
        Ok(LocalSystem {
            edges,
            field,
            ..self.clone()
        })
    }

    /// `P_v`: transport from each vertex to the root of its component along
    /// the breadth-first spanning forest rooted at `root`.
    fn tree_transports(&self, x: &SimplicialComplex, root: usize) -> Vec<ExactMatrix> {
        let parent = x.spanning_forest(root);
        let mut p: Vec<Option<ExactMatrix>> = vec![None; self.vertices];
        for v in 0..self.vertices {
            let mut path = Vec::new();
            let mut cur = v;
            while p[cur].is_none() {
                path.push(cur);
                match parent[cur] {
                    Some(u) => cur = u,
                    None => break,
                }
            }
            for &w in path.iter().rev() {
                p[w] = Some(match parent[w] {
                    None => self.identity.clone(),
                    Some(u) => p[u].as_ref().unwrap().mul(self.transport(w, u)).unwrap(),
                });
            }
        }
        p.into_iter().map(Option::unwrap).collect()
    }
}

/// A bilinear map `ν: E ⊗ F → G` given fiberwise by an `r_G × (r_E·r_F)`
/// matrix acting on Kronecker products (index `i·r_F + j`).
#[derive(Clone, Debug, PartialEq)]
pub struct PairingRule {
    left: usize,
    right: usize,
    matrix: ExactMatrix,
}

impl PairingRule {
    pub fn new(left: usize, right: usize, matrix: ExactMatrix) -> Result<Self, LocalSystemError> {
        if matrix.cols() != left * right {
            return Err(LocalSystemError::RankMismatch {
                expected: left * right,
                got: matrix.cols(),
            });
        }
        Ok(PairingRule { left, right, matrix })
    }

    /// Multiplication `ℚ ⊗ ℚ → ℚ`.
    pub fn scalar() -> Self {
        Self::right_unit(1)
    }

    /// `E ⊗ ℚ → E`, `x ⊗ c ↦ c·x`.
    pub fn right_unit(r: usize) -> Self {
        PairingRule {
            left: r,
            right: 1,
            matrix: ExactMatrix::identity(r, Field::Rational),
        }
    }

    /// `ℚ ⊗ F → F`.
    pub fn left_unit(r: usize) -> Self {
        PairingRule {
            left: 1,
            right: r,
            matrix: ExactMatrix::identity(r, Field::Rational),
        }
    }

    /// Evaluation `E* ⊗ E → ℚ`.
    pub fn evaluation(r: usize) -> Self {
        Self::bilinear_form(&ExactMatrix::identity(r, Field::Rational))
    }

    /// `E ⊗ E → ℚ`, `x ⊗ y ↦ xᵀ B y`.
    pub fn bilinear_form(b: &ExactMatrix) -> Self {
        let r = b.rows();
        let data = b.entries().to_vec();
        PairingRule {
            left: r,
            right: b.cols(),
            matrix: ExactMatrix::new(1, r * b.cols(), data).unwrap(),
        }
    }

    /// `ν'(y ⊗ x) = ν(x ⊗ y)`.
    pub fn swapped(&self) -> Self {
        let (l, r) = (self.left, self.right);
        let mut m = ExactMatrix::zeros(self.target(), l * r, self.matrix.field());
        for row in 0..self.target() {
            for i in 0..l {
                for j in 0..r {
                    m.set(row, j * l + i, self.matrix.get(row, i * r + j).clone());
                }
            }
        }
        PairingRule {
            left: r,
            right: l,
            matrix: m,
        }
    }

    pub fn ranks(&self) -> (usize, usize) {
        (self.left, self.right)
    }

    pub fn target(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[ExactScalar], y: &[ExactScalar]) -> Vector {
        self.matrix.mul_vec(&vecops::kron(x, y)).expect("ranks checked")
    }

    /// Checks `τ^G ν = ν (τ^E ⊗ τ^F)` on every edge.
    pub fn check_parallel(
        &self,
        e: &LocalSystem,
        f: &LocalSystem,
        g: &LocalSystem,
    ) -> Result<(), LocalSystemError> {
        self.check_ranks(e, f, g)?;
        for ((a, b), te) in e.edge_transports() {
            let lhs = g.transport(a, b).mul(&self.matrix)?;
            let rhs = self.matrix.mul(&te.kron(f.transport(a, b))?)?;
            if !lhs.sub(&rhs)?.is_zero() {
                return Err(LocalSystemError::NotParallel(a, b));
            }
        }
        Ok(())
    }

    /// Checks `ν: E ⊗ F → G` against the ranks of the three systems.
    pub fn check_ranks(&self, e: &LocalSystem, f: &LocalSystem, g: &LocalSystem) -> Result<(), LocalSystemError> {
        for (expected, got) in [(self.left, e.rank), (self.right, f.rank), (self.target(), g.rank)] {
            if expected != got {
                return Err(LocalSystemError::RankMismatch { expected, got });
            }
        }
        Ok(())
    }
}

/// A degree-`p` chain: flat coordinates, block per `p`-simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: usize,
    pub coords: Vector,
}

/// A degree-`p` cochain: flat coordinates, block per `p`-simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub coords: Vector,
}

/// Representatives of a basis of `H_p` or `H^p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassBasis {
    pub degree: usize,
    pub representatives: Vec<Vector>,
}

impl ClassBasis {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// A complex together with a system on it.
#[derive(Clone, Copy, Debug)]
pub struct Twisted<'a> {
    pub complex: &'a SimplicialComplex,
    pub system: &'a LocalSystem,
}

impl<'a> Twisted<'a> {
    pub fn new(complex: &'a SimplicialComplex, system: &'a LocalSystem) -> Result<Self, LocalSystemError> {
        if complex.vertex_count() != system.vertices {
            return Err(LocalSystemError::RankMismatch {
                expected: complex.vertex_count(),
                got: system.vertices,
            });
        }
        if let Some((a, b)) = complex.edges().find(|&(a, b)| !system.edges.contains_key(&(a, b))) {
            return Err(LocalSystemError::MissingEdge(a, b));
        }
        Ok(Twisted { complex, system })
    }

    pub fn rank(&self) -> usize {
        self.system.rank
    }

    /// `dim C_p`.
    pub fn chain_dim(&self, p: usize) -> usize {
        self.complex.count(p) * self.rank()
    }

    fn zero(&self, p: usize) -> Vector {
        vec![ExactScalar::zero(); self.chain_dim(p)]
    }

    /// Chain from `(simplex, coefficient)` terms; simplices are vertex lists
    /// in increasing order.
    pub fn chain(&self, p: usize, terms: &[(Vec<usize>, Vector)]) -> Result<Chain, LocalSystemError> {
        Ok(Chain {
            degree: p,
            coords: self.assemble(p, terms)?,
        })
    }

    pub fn cochain(&self, p: usize, terms: &[(Vec<usize>, Vector)]) -> Result<Cochain, LocalSystemError> {
        Ok(Cochain {
            degree: p,
            coords: self.assemble(p, terms)?,
        })
    }

    fn assemble(&self, p: usize, terms: &[(Vec<usize>, Vector)]) -> Result<Vector, LocalSystemError> {
        let r = self.rank();
        let mut v = self.zero(p);
        for (s, c) in terms {
            if s.len() != p + 1 {
                return Err(LocalSystemError::DegreeMismatch {
                    expected: p,
                    got: s.len().saturating_sub(1),
                });
            }
            let i = self
                .complex
                .index_of(s)
                .ok_or_else(|| ComplexError::UnknownSimplex(s.clone()))?;
            if c.len() != r {
                return Err(LocalSystemError::RankMismatch { expected: r, got: c.len() });
            }
            for (k, x) in c.iter().enumerate() {
                v[i * r + k] += x;
            }
        }
        Ok(v)
    }

    /// Nonzero `(simplex, coefficient)` blocks of a coordinate vector.
    pub fn terms(&self, p: usize, coords: &[ExactScalar]) -> Vec<(Vec<usize>, Vector)> {
        let r = self.rank();
        self.complex
            .simplices(p)
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                let block = &coords[i * r..(i + 1) * r];
                (!vecops::is_zero(block)).then(|| (s.clone(), block.to_vec()))
            })
            .collect()
    }

    fn check_len(&self, p: usize, v: &[ExactScalar]) -> Result<(), LocalSystemError> {
        if v.len() != self.chain_dim(p) {
            return Err(LocalSystemError::RankMismatch {
                expected: self.chain_dim(p),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Matrix of `∂_p: C_p → C_{p−1}`; `∂_0` is the `0 × dim C_0` matrix.
    pub fn boundary_matrix(&self, p: usize) -> ExactMatrix {
        let r = self.rank();
        let cols = self.chain_dim(p);
        if p == 0 {
            return ExactMatrix::zeros(0, cols, self.system.field);
        }
        let rows = self.chain_dim(p - 1);
        let mut data = vec![ExactScalar::zero(); rows * cols];
        for (j, s) in self.complex.simplices(p).iter().enumerate() {
            for (i, face) in faces(s).enumerate() {
                let fi = self.complex.index_of(&face).expect("faces are stored");
                if i == 0 {
                    let t = self.system.transport(s[0], s[1]);
                    for a in 0..r {
                        for b in 0..r {
                            data[(fi * r + a) * cols + j * r + b] = t.get(a, b).clone();
                        }
                    }
                } else {
                    for a in 0..r {
                        data[(fi * r + a) * cols + j * r + a] += &ExactScalar::from_i64(sign(i) as i64);
                    }
                }
            }
        }
        ExactMatrix::new(rows, cols, data).expect("sizes agree")
    }

    /// Matrix of `δ_p: C^p → C^{p+1}`.
    pub fn coboundary_matrix(&self, p: usize) -> ExactMatrix {
        let r = self.rank();
        let cols = self.chain_dim(p);
        let rows = self.chain_dim(p + 1);
        let mut data = vec![ExactScalar::zero(); rows * cols];
        for (j, s) in self.complex.simplices(p + 1).iter().enumerate() {
            for (i, face) in faces(s).enumerate() {
                let fi = self.complex.index_of(&face).expect("faces are stored");
                if i == 0 {
                    let t = self.system.transport(s[1], s[0]);
                    for a in 0..r {
                        for b in 0..r {
                            data[(j * r + a) * cols + fi * r + b] = t.get(a, b).clone();
                        }
                    }
                } else {
                    for a in 0..r {
                        data[(j * r + a) * cols + fi * r + a] += &ExactScalar::from_i64(sign(i) as i64);
                    }
                }
            }
        }
        ExactMatrix::new(rows, cols, data).expect("sizes agree")
    }

    pub fn boundary(&self, c: &Chain) -> Result<Chain, LocalSystemError> {
        self.check_len(c.degree, &c.coords)?;
        if c.degree == 0 {
            return Ok(Chain {
                degree: 0,
                coords: Vec::new(),
            });
        }
        Ok(Chain {
            degree: c.degree - 1,
            coords: self.boundary_matrix(c.degree).mul_vec(&c.coords)?,
        })
    }

    pub fn coboundary(&self, a: &Cochain) -> Result<Cochain, LocalSystemError> {
        self.check_len(a.degree, &a.coords)?;
        Ok(Cochain {
            degree: a.degree + 1,
            coords: self.coboundary_matrix(a.degree).mul_vec(&a.coords)?,
        })
    }

    pub fn is_cycle(&self, c: &Chain) -> Result<bool, LocalSystemError> {
        Ok(vecops::is_zero(&self.boundary(c)?.coords))
    }

    pub fn is_cocycle(&self, a: &Cochain) -> Result<bool, LocalSystemError> {
        Ok(vecops::is_zero(&self.coboundary(a)?.coords))
    }

    /// `dim H_p` for every `p` from `0` to the top dimension.
    pub fn homology_dims(&self) -> Vec<usize> {
        let n = self.complex.dim();
        let ranks: Vec<usize> = (0..=n + 1).map(|p| self.boundary_matrix(p).rank()).collect();
        (0..=n).map(|p| self.chain_dim(p) - ranks[p] - ranks[p + 1]).collect()
    }

    /// `dim H^p` for every `p`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        let n = self.complex.dim();
        let ranks: Vec<usize> = (0..=n).map(|p| self.coboundary_matrix(p).rank()).collect();
        (0..=n)
            .map(|p| self.chain_dim(p) - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] })
            .collect()
    }

    /// Basis of `H_p` by representative cycles: the kernel basis of `∂_p`
    /// filtered against the image of `∂_{p+1}`.
    pub fn homology(&self, p: usize) -> ClassBasis {
        let image = self.boundary_matrix(p + 1);
        let kernel = self.boundary_matrix(p).kernel_basis();
        ClassBasis {
            degree: p,
            representatives: complement(&image, kernel),
        }
    }

    pub fn cohomology(&self, p: usize) -> ClassBasis {
        let kernel = self.coboundary_matrix(p).kernel_basis();
        let representatives = if p == 0 {
            kernel
        } else {
            complement(&self.coboundary_matrix(p - 1), kernel)
        };
        ClassBasis {
            degree: p,
            representatives,
        }
    }

    /// Whether the chain lies in the image of `∂_{p+1}`.
    pub fn is_boundary(&self, c: &Chain) -> Result<bool, LocalSystemError> {
        self.check_len(c.degree, &c.coords)?;
        Ok(self.boundary_matrix(c.degree + 1).solve(&c.coords)?.is_some())
    }

    pub fn is_coboundary(&self, a: &Cochain) -> Result<bool, LocalSystemError> {
        self.check_len(a.degree, &a.coords)?;
        if a.degree == 0 {
            return Ok(vecops::is_zero(&a.coords));
        }
        Ok(self.coboundary_matrix(a.degree - 1).solve(&a.coords)?.is_some())
    }

    pub fn homologous(&self, a: &Chain, b: &Chain) -> Result<bool, LocalSystemError> {
        if a.degree != b.degree {
            return Err(LocalSystemError::DegreeMismatch {
                expected: a.degree,
                got: b.degree,
            });
        }
        self.is_boundary(&Chain {
            degree: a.degree,
            coords: vecops::sub(&a.coords, &b.coords),
        })
    }

    /// The fiber vector of block `i`.
    fn block<'v>(&self, v: &'v [ExactScalar], i: usize) -> &'v [ExactScalar] {
        let r = self.rank();
        &v[i * r..(i + 1) * r]
    }
}

/// Basis vectors of `span(candidates)` modulo the column space of `image`,
/// chosen greedily in order.
fn complement(image: &ExactMatrix, candidates: Vec<Vector>) -> Vec<Vector> {
    let mut basis = EchelonBasis::new();
    for c in 0..image.cols() {
        basis.insert(&image.column(c));
    }
    candidates.into_iter().filter(|v| basis.insert(v)).collect()
}

/// `⟨α, c⟩` as a 0-chain of `G`: `Σ_σ v₀(σ) ⊗ ν(α(σ) ⊗ c(σ))`.
pub fn kronecker_chain(
    e: Twisted<'_>,
    f: Twisted<'_>,
    g: Twisted<'_>,
    alpha: &Cochain,
    c: &Chain,
    nu: &PairingRule,
) -> Result<Chain, LocalSystemError> {
    nu.check_ranks(e.system, f.system, g.system)?;
    if alpha.degree != c.degree {
        return Err(LocalSystemError::DegreeMismatch {
            expected: alpha.degree,
            got: c.degree,
        });
    }
    e.check_len(alpha.degree, &alpha.coords)?;
    f.check_len(c.degree, &c.coords)?;
    let rg = g.rank();
    let mut out = g.zero(0);
    for (i, s) in e.complex.simplices(alpha.degree).iter().enumerate() {
        let (x, y) = (e.block(&alpha.coords, i), f.block(&c.coords, i));
        if vecops::is_zero(x) || vecops::is_zero(y) {
            continue;
        }
        let val = nu.apply(x, y);
        vecops::axpy(&mut out[s[0] * rg..(s[0] + 1) * rg], &ExactScalar::one(), &val);
    }
    Ok(Chain { degree: 0, coords: out })
}

/// `H_0(X, G) → G_{x₀}` for a system with trivial monodromy: every vertex
/// value transported to `basepoint` along the spanning forest. Fails when
/// `G` has monodromy or the complex is disconnected from the basepoint.
pub fn collapse_to_basepoint(g: Twisted<'_>, c: &Chain, basepoint: usize) -> Result<Vector, LocalSystemError> {
    g.check_len(0, &c.coords)?;
    let comps = g.complex.components();
    if comps.len() != 1 {
        return Err(LocalSystemError::NontrivialTarget);
    }
    let p = g.system.tree_transports(g.complex, basepoint);
    for (a, b) in g.complex.edges() {
        let lhs = p[b].mul(g.system.transport(a, b))?;
        if !lhs.sub(&p[a])?.is_zero() {
            return Err(LocalSystemError::NontrivialTarget);
        }
    }
    let mut out = vec![ExactScalar::zero(); g.rank()];
    for v in 0..g.complex.vertex_count() {
        let block = g.block(&c.coords, v);
        if !vecops::is_zero(block) {
            out = vecops::add(&out, &p[v].mul_vec(block)?);
        }
    }
    Ok(out)
}

/// `⟨α, c⟩ ∈ G_{x₀}`.
pub fn kronecker(
    e: Twisted<'_>,
    f: Twisted<'_>,
    g: Twisted<'_>,
    alpha: &Cochain,
    c: &Chain,
    nu: &PairingRule,
    basepoint: usize,
) -> Result<Vector, LocalSystemError> {
    collapse_to_basepoint(g, &kronecker_chain(e, f, g, alpha, c, nu)?, basepoint)
}

/// Front-face/back-face cup product.
pub fn cup(
    e: Twisted<'_>,
    f: Twisted<'_>,
    g: Twisted<'_>,
    a: &Cochain,
    b: &Cochain,
    nu: &PairingRule,
) -> Result<Cochain, LocalSystemError> {
    nu.check_ranks(e.system, f.system, g.system)?;
    e.check_len(a.degree, &a.coords)?;
    f.check_len(b.degree, &b.coords)?;
    let (p, q) = (a.degree, b.degree);
    let x = g.complex;
    let rg = g.rank();
    let mut out = g.zero(p + q);
    for (i, s) in x.simplices(p + q).iter().enumerate() {
        let front = x.index_of(&s[..=p]).expect("faces are stored");
        let back = x.index_of(&s[p..]).expect("faces are stored");
        let (fa, fb) = (e.block(&a.coords, front), f.block(&b.coords, back));
        if vecops::is_zero(fa) || vecops::is_zero(fb) {
            continue;
        }
        let moved = f.system.transport(s[p], s[0]).mul_vec(fb)?;
        out[i * rg..(i + 1) * rg].clone_from_slice(&nu.apply(fa, &moved));
    }
    Ok(Cochain {
        degree: p + q,
        coords: out,
    })
}

/// Cap product `b ∩ c` of a `q`-cochain of `E` with an `m`-chain of `F`.
pub fn cap(
    e: Twisted<'_>,
    f: Twisted<'_>,
    g: Twisted<'_>,
    b: &Cochain,
    c: &Chain,
    nu: &PairingRule,
) -> Result<Chain, LocalSystemError> {
    nu.check_ranks(e.system, f.system, g.system)?;
    e.check_len(b.degree, &b.coords)?;
    f.check_len(c.degree, &c.coords)?;
    let (q, m) = (b.degree, c.degree);
    if q > m {
        return Err(LocalSystemError::DegreeMismatch { expected: m, got: q });
    }
    let x = g.complex;
    let rg = g.rank();
    let mut out = g.zero(m - q);
    for (i, s) in x.simplices(m).iter().enumerate() {
        let fc = f.block(&c.coords, i);
        if vecops::is_zero(fc) {
            continue;
        }
        let back = x.index_of(&s[m - q..]).expect("faces are stored");
        let bb = e.block(&b.coords, back);
        if vecops::is_zero(bb) {
            continue;
        }
        let moved = e.system.transport(s[m - q], s[0]).mul_vec(bb)?;
        let front = x.index_of(&s[..=m - q]).expect("faces are stored");
        let val = nu.apply(&moved, fc);
        vecops::axpy(&mut out[front * rg..(front + 1) * rg], &ExactScalar::one(), &val);
    }
    Ok(Chain {
        degree: m - q,
        coords: out,
    })
}

/// The fundamental cycle `[X] = Σ ε_T T ⊗ 1` in the trivial rank-1 system.
pub fn fundamental_chain(x: &SimplicialComplex) -> Result<Chain, LocalSystemError> {
    let signs = x.orientation().ok_or(ComplexError::NoFundamentalClass)?;
    Ok(Chain {
        degree: x.dim(),
        coords: signs.iter().map(|&s| ExactScalar::from_i64(s as i64)).collect(),
    })
}

/// `𝒟(α) = α ∩ [X]`.
pub fn duality_map(e: Twisted<'_>, alpha: &Cochain) -> Result<Chain, LocalSystemError> {
    let fundamental = fundamental_chain(e.complex)?;
    let trivial = LocalSystem::trivial(e.complex, 1);
    let one = Twisted::new(e.complex, &trivial)?;
    cap(e, one, e, alpha, &fundamental, &PairingRule::right_unit(e.rank()))
}

/// `PD(c)`: a cocycle whose cap with `[X]` is homologous to the cycle `c`,
/// found by an exact solve against cohomology representatives and
/// boundaries.
pub fn poincare_dual(e: Twisted<'_>, c: &Chain) -> Result<Cochain, LocalSystemError> {
    let n = e.complex.dim();
    fundamental_chain(e.complex)?;
    if c.degree > n {
        return Err(LocalSystemError::DegreeMismatch { expected: n, got: c.degree });
    }
    if !e.is_cycle(c)? {
        return Err(LocalSystemError::NotACycle);
    }
    let p = n - c.degree;
    let reps = e.cohomology(p).representatives;
    let mut columns = Vec::new();
    for r in &reps {
        let a = Cochain {
            degree: p,
            coords: r.clone(),
        };
        columns.push(duality_map(e, &a)?.coords);
    }
    let bd = e.boundary_matrix(c.degree + 1);
    for j in 0..bd.cols() {
        columns.push(bd.column(j));
    }
    let m = ExactMatrix::from_columns(e.chain_dim(c.degree), &columns)?;
    let x = m.solve(&c.coords)?.ok_or(LocalSystemError::DualityFailed)?;
    let mut coords = e.zero(p);
    for (coef, r) in x.iter().zip(&reps) {
        vecops::axpy(&mut coords, coef, r);
    }
    Ok(Cochain { degree: p, coords })
}

/// The intersection class `[a]·[b] = 𝒟(PD(b) ∪ PD(a))` of a cycle of `E`
/// and a cycle of `F`, with values in `G` through `ν: E⊗F → G`.
pub fn intersection_class(
    e: Twisted<'_>,
    f: Twisted<'_>,
    g: Twisted<'_>,
    a: &Chain,
    b: &Chain,
    nu: &PairingRule,
) -> Result<Chain, LocalSystemError> {
    let n = e.complex.dim();
    if a.degree + b.degree < n {
        return Err(LocalSystemError::DegreeMismatch {
            expected: n,
            got: a.degree + b.degree,
        });
    }
    let pa = poincare_dual(e, a)?;
    let pb = poincare_dual(f, b)?;
    let product = cup(f, e, g, &pb, &pa, &nu.swapped())?;
    duality_map(g, &product)
}

//! The bar (Eilenberg–MacLane) complex `C_•(Γ) ⊗ V` of a finite group with
//! coefficients in a representation, decomposable 1-cycles `γ ⊗ v`, and
//! pushforward along homomorphisms.
//!
//! Group elements are indices into the multiplication table. A `p`-chain
//! basis element is a `p`-tuple of elements; tuples are ordered as base
//! `|Γ|` numerals, most significant entry first, and each carries a block of
//! `rank` coordinates.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::BarError;
use crate::field::{ExactScalar, Field, Vector};
use crate::matrix::{vecops, ExactMatrix};

/// Default highest chain degree the complex will build.
pub const DEFAULT_DEGREE_CAP: usize = 4;

/// Default bound on `|Γ|^p · rank` for a single chain group.
pub const DEFAULT_SIZE_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses of a
    /// multiplication table `table[g][h] = gh`.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, BarError> {
        let n = table.len();
        if n == 0 {
            return Err(BarError::BadGroup("empty table".into()));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(BarError::BadGroup("table is not a square array of elements".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| BarError::BadGroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(n);
        for g in 0..n {
            let inv = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| BarError::BadGroup(format!("element {g} has no inverse")))?;
            inverses.push(inv);
        }
        for (a, b, c) in (0..n).cartesian_product(0..n).cartesian_product(0..n).map(|((a, b), c)| (a, b, c)) {
            if table[table[a][b]][c] != table[a][table[b][c]] {
                return Err(BarError::BadGroup(format!("({a}·{b})·{c} ≠ {a}·({b}·{c})")));
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
        })
    }

    /// `ℤ/n` with elements `0..n` under addition.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new(table).expect("cyclic group table")
    }

    /// Permutations of three letters, listed in lexicographic order of
    /// their images; element `g` acts by `i ↦ perm[g][i]`, and `gh = g∘h`.
    pub fn symmetric3() -> Self {
        let perms = Self::s3_perms();
        let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
        let table = perms
            .iter()
            .map(|g| {
                perms
                    .iter()
                    .map(|h| index(&h.iter().map(|&i| g[i]).collect::<Vec<_>>()))
                    .collect()
            })
            .collect();
        FiniteGroup::new(table).expect("S3 table")
    }

    /// The images of `0, 1, 2` for each element of [`FiniteGroup::symmetric3`].
    pub fn s3_perms() -> Vec<Vec<usize>> {
        (0..3).permutations(3).collect()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// A homomorphism `Γ → Φ` given by the images of the elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    map: Vec<usize>,
}

impl GroupHom {
    pub fn new(source: &FiniteGroup, target: &FiniteGroup, map: Vec<usize>) -> Result<Self, BarError> {
        if map.len() != source.order() || map.iter().any(|&x| x >= target.order()) {
            return Err(BarError::NotHomomorphism("map has the wrong length or range".into()));
        }
        for g in 0..source.order() {
            for h in 0..source.order() {
                if map[source.mul(g, h)] != target.mul(map[g], map[h]) {
                    return Err(BarError::NotHomomorphism(format!("f({g}·{h}) ≠ f({g})·f({h})")));
                }
            }
        }
        Ok(GroupHom { map })
    }

    pub fn identity(group: &FiniteGroup) -> Self {
        GroupHom {
            map: (0..group.order()).collect(),
        }
    }

    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }
}

/// A representation `ρ: Γ → GL(V)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRep {
    group: FiniteGroup,
    rank: usize,
    matrices: Vec<ExactMatrix>,
}

impl GroupRep {
    /// Checks `ρ(e) = 1` and `ρ(gh) = ρ(g)ρ(h)` for every pair.
    pub fn new(group: FiniteGroup, matrices: Vec<ExactMatrix>) -> Result<Self, BarError> {
        if matrices.len() != group.order() {
            return Err(BarError::BadRep(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                group.order()
            )));
        }
        let rank = matrices[0].rows();
        if matrices.iter().any(|m| m.rows() != rank || m.cols() != rank) {
            return Err(BarError::BadRep("matrices are not all square of one size".into()));
        }
        let field = matrices.iter().try_fold(Field::Rational, |f, m| f.join(m.field()));
        let field = field.map_err(|e| BarError::BadRep(e.to_string()))?;
        if matrices[group.identity()] != ExactMatrix::identity(rank, field) {
            return Err(BarError::BadRep("identity element does not act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                if matrices[g].mul(&matrices[h])? != matrices[group.mul(g, h)] {
                    return Err(BarError::BadRep(format!("ρ({g}·{h}) ≠ ρ({g})ρ({h})")));
                }
            }
        }
        Ok(GroupRep { group, rank, matrices })
    }

    pub fn trivial(group: &FiniteGroup, rank: usize) -> Self {
        let matrices = vec![ExactMatrix::identity(rank, Field::Rational); group.order()];
        GroupRep::new(group.clone(), matrices).expect("trivial representation")
    }

    /// A one-dimensional representation from a character with values `±1`.
    pub fn character(group: &FiniteGroup, values: &[i64]) -> Result<Self, BarError> {
        let matrices = values.iter().map(|&v| ExactMatrix::from_i64(&[&[v]])).collect();
        GroupRep::new(group.clone(), matrices)
    }

    /// The two-dimensional irreducible representation of
    /// [`FiniteGroup::symmetric3`] on the sum-zero plane of `ℚ³`, in the
    /// basis `e₀ − e₁, e₁ − e₂`.
    pub fn s3_standard() -> Self {
        let group = FiniteGroup::symmetric3();
        let matrices = FiniteGroup::s3_perms()
            .iter()
            .map(|g| {
                let column = |i: usize, j: usize| {
                    let mut a = [0i64; 3];
                    a[g[i]] += 1;
                    a[g[j]] -= 1;
                    [a[0], a[0] + a[1]]
                };
                let (c0, c1) = (column(0, 1), column(1, 2));
                ExactMatrix::from_i64(&[&[c0[0], c1[0]], &[c0[1], c1[1]]])
            })
            .collect();
        GroupRep::new(group, matrices).expect("standard representation of S3")
    }

    /// The sign character of [`FiniteGroup::symmetric3`].
    pub fn s3_sign() -> Self {
        let values: Vec<i64> = FiniteGroup::s3_perms()
            .iter()
            .map(|p| {
                let inversions = (0..3).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
                if inversions % 2 == 0 { 1 } else { -1 }
            })
            .collect();
        GroupRep::character(&FiniteGroup::symmetric3(), &values).expect("sign character")
    }

    /// `ℤ/n` acting on `ℚ^rank` through the powers of `generator`.
    pub fn cyclic(n: usize, generator: &ExactMatrix) -> Result<Self, BarError> {
        let r = generator.rows();
        let mut matrices = vec![ExactMatrix::identity(r, generator.field())];
        for k in 1..n {
            matrices.push(generator.mul(&matrices[k - 1])?);
        }
        GroupRep::new(FiniteGroup::cyclic(n), matrices)
    }

    /// Restriction along `f: Γ → Φ` of a representation of `Φ`.
    pub fn restrict(&self, source: &FiniteGroup, f: &GroupHom) -> Result<Self, BarError> {
        let matrices = (0..source.order()).map(|g| self.matrices[f.apply(g)].clone()).collect();
        GroupRep::new(source.clone(), matrices)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self, g: usize) -> &ExactMatrix {
        &self.matrices[g]
    }

    pub fn act(&self, g: usize, v: &[ExactScalar]) -> Result<Vector, BarError> {
        self.check_len(v)?;
        Ok(self.matrices[g].mul_vec(v)?)
    }

    /// `v·g = ρ(g⁻¹)v`.
    pub fn right_act(&self, g: usize, v: &[ExactScalar]) -> Result<Vector, BarError> {
        self.act(self.group.inverse(g), v)
    }

    /// `dim V_Γ = rank − rank[ρ(g) − 1]_g`.
    pub fn coinvariant_dim(&self) -> usize {
        let id = ExactMatrix::identity(self.rank, Field::Rational);
        let blocks: Vec<ExactMatrix> = self.matrices.iter().map(|m| m.sub(&id).unwrap()).collect();
        let refs: Vec<&ExactMatrix> = blocks.iter().collect();
        let stacked = ExactMatrix::stack(&refs).unwrap().transpose();
        self.rank - stacked.rank()
    }

    fn check_len(&self, v: &[ExactScalar]) -> Result<(), BarError> {
        if v.len() != self.rank {
            return Err(BarError::RankMismatch {
                rank: self.rank,
                got: v.len(),
            });
        }
        Ok(())
    }
}

/// A formal sum of `(γ₁,…,γ_p) ⊗ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarChain {
    pub degree: usize,
    pub terms: BTreeMap<Vec<usize>, Vector>,
}

impl BarChain {
    pub fn zero(degree: usize) -> Self {
        BarChain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(tuple: Vec<usize>, v: Vector) -> Self {
        let mut c = BarChain::zero(tuple.len());
        c.add_term(tuple, &v);
        c
    }

    /// Adds `tuple ⊗ v`, dropping terms that cancel.
    pub fn add_term(&mut self, tuple: Vec<usize>, v: &[ExactScalar]) {
        debug_assert_eq!(tuple.len(), self.degree);
        if vecops::is_zero(v) {
            return;
        }
        match self.terms.get_mut(&tuple) {
            Some(acc) => {
                vecops::axpy(acc, &ExactScalar::one(), v);
                if vecops::is_zero(acc) {
                    self.terms.remove(&tuple);
                }
            }
            None => {
                self.terms.insert(tuple, v.to_vec());
            }
        }
    }

    pub fn add(&self, other: &BarChain) -> BarChain {
        let mut out = self.clone();
        for (t, v) in &other.terms {
            out.add_term(t.clone(), v);
        }
        out
    }

    pub fn scale(&self, s: &ExactScalar) -> BarChain {
        let mut out = BarChain::zero(self.degree);
        for (t, v) in &self.terms {
            out.add_term(t.clone(), &vecops::scale(v, s));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// `∂(γ₁,…,γ_p)⊗v = (γ₂,…,γ_p)⊗v·γ₁ + Σ_{i<p} (−1)^i (…,γ_iγ_{i+1},…)⊗v
/// + (−1)^p (γ₁,…,γ_{p−1})⊗v`, where `v·γ = ρ(γ)⁻¹v` is the right module
/// structure of `V`. With the left action in the first term `∂²` fails for
/// nonabelian groups.
pub fn bar_boundary(rep: &GroupRep, c: &BarChain) -> Result<BarChain, BarError> {
    let p = c.degree;
    let mut out = BarChain::zero(p.saturating_sub(1));
    if p == 0 {
        return Ok(out);
    }
    let group = rep.group();
    for (t, v) in &c.terms {
        rep.check_len(v)?;
        if t.len() != p || t.iter().any(|&g| g >= group.order()) {
            return Err(BarError::BadGroup(format!("{t:?} is not a {p}-tuple of elements")));
        }
        out.add_term(t[1..].to_vec(), &rep.right_act(t[0], v)?);
        for i in 1..p {
            let mut merged = t[..i - 1].to_vec();
            merged.push(group.mul(t[i - 1], t[i]));
            merged.extend_from_slice(&t[i + 1..]);
            out.add_term(merged, &signed(v, i));
        }
        out.add_term(t[..p - 1].to_vec(), &signed(v, p));
    }
    Ok(out)
}

fn signed(v: &[ExactScalar], k: usize) -> Vector {
    if k % 2 == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| -x).collect()
    }
}

/// Relabels every group element through `f`.
pub fn pushforward(f: &GroupHom, c: &BarChain) -> BarChain {
    let mut out = BarChain::zero(c.degree);
    for (t, v) in &c.terms {
        out.add_term(t.iter().map(|&g| f.apply(g)).collect(), v);
    }
    out
}

/// Rejection of `γ ⊗ v` when `γ·v ≠ v`, carrying `γ·v − v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotFixed {
    pub residual: Vector,
}

/// The 1-cycle `γ ⊗ v`, accepted iff `ρ(γ)v = v`. The residual reported on
/// rejection is `ρ(γ)v − v`.
pub fn decomposable_cycle(rep: &GroupRep, g: usize, v: &[ExactScalar]) -> Result<Result<BarChain, NotFixed>, BarError> {
    let residual = vecops::sub(&rep.act(g, v)?, v);
    if vecops::is_zero(&residual) {
        Ok(Ok(BarChain::term(vec![g], v.to_vec())))
    } else {
        Ok(Err(NotFixed { residual }))
    }
}

/// Matrices of the bar complex in degrees up to a cap.
#[derive(Clone, Debug)]
pub struct BarComplex<'a> {
    rep: &'a GroupRep,
    cap: usize,
    size_limit: usize,
}

impl<'a> BarComplex<'a> {
    pub fn new(rep: &'a GroupRep) -> Self {
        BarComplex {
            rep,
            cap: DEFAULT_DEGREE_CAP,
            size_limit: DEFAULT_SIZE_LIMIT,
        }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_size_limit(mut self, limit: usize) -> Self {
        self.size_limit = limit;
        self
    }

    /// `|Γ|^p · rank`.
    pub fn chain_dim(&self, p: usize) -> Result<usize, BarError> {
        if p > self.cap {
            return Err(BarError::DegreeCap {
                degree: p,
                cap: self.cap,
            });
        }
        let size = self
            .rep
            .group()
            .order()
            .checked_pow(p as u32)
            .and_then(|n| n.checked_mul(self.rep.rank()))
            .unwrap_or(usize::MAX);
        if size > self.size_limit {
            return Err(BarError::SizeLimit {
                degree: p,
                size,
                limit: self.size_limit,
            });
        }
        Ok(size)
    }

    fn tuple(&self, p: usize, mut index: usize) -> Vec<usize> {
        let n = self.rep.group().order();
        let mut t = vec![0; p];
        for slot in t.iter_mut().rev() {
            *slot = index % n;
            index /= n;
        }
        t
    }

    fn index(&self, t: &[usize]) -> usize {
        let n = self.rep.group().order();
        t.iter().fold(0, |acc, &g| acc * n + g)
    }

    pub fn to_coords(&self, c: &BarChain) -> Result<Vector, BarError> {
        let r = self.rep.rank();
        let mut out = vec![ExactScalar::zero(); self.chain_dim(c.degree)?];
        for (t, v) in &c.terms {
            self.rep.check_len(v)?;
            let i = self.index(t);
            out[i * r..(i + 1) * r].clone_from_slice(v);
        }
        Ok(out)
    }

    pub fn from_coords(&self, p: usize, coords: &[ExactScalar]) -> BarChain {
        let r = self.rep.rank();
        let mut out = BarChain::zero(p);
        for (i, block) in coords.chunks(r).enumerate() {
            out.add_term(self.tuple(p, i), block);
        }
        out
    }

    /// Matrix of `∂_p: C_p ⊗ V → C_{p−1} ⊗ V`, built column block by
    /// column block from [`bar_boundary`].
    pub fn boundary_matrix(&self, p: usize) -> Result<ExactMatrix, BarError> {
        let cols = self.chain_dim(p)?;
        let rows = if p == 0 { 0 } else { self.chain_dim(p - 1)? };
        let r = self.rep.rank();
        let mut m = ExactMatrix::zeros(rows, cols, Field::Rational);
        if p == 0 {
            return Ok(m);
        }
        for j in 0..cols / r {
            let t = self.tuple(p, j);
            for k in 0..r {
                let mut e = vec![ExactScalar::zero(); r];
                e[k] = ExactScalar::one();
                let image = bar_boundary(self.rep, &BarChain::term(t.clone(), e))?;
                for (s, v) in &image.terms {
                    let i = self.index(s);
                    for (a, x) in v.iter().enumerate() {
                        if !x.is_zero() {
                            m.set(i * r + a, j * r + k, x.clone());
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    /// `dim H_p = dim C_p − rank ∂_p − rank ∂_{p+1}`.
    pub fn homology_dim(&self, p: usize) -> Result<usize, BarError> {
        let dim = self.chain_dim(p)?;
        let out = if p == 0 { 0 } else { self.boundary_matrix(p)?.rank() };
        let inc = self.boundary_matrix(p + 1)?.rank();
        Ok(dim - out - inc)
    }
}

/// `H_p(Γ, V)` with the default cap and size limit.
pub fn group_homology(rep: &GroupRep, p: usize) -> Result<usize, BarError> {
    BarComplex::new(rep).homology_dim(p)
}

//! Finite simplicial complexes with sorted-vertex simplices and optional
//! top-dimensional orientation signs.

use std::collections::{BTreeSet, HashMap, VecDeque};

use itertools::Itertools;

use crate::error::ComplexError;

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    vertices: usize,
    simplices: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    orientation: Option<Vec<i8>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
            && self.simplices == other.simplices
            && self.orientation == other.orientation
    }
}

impl SimplicialComplex {
    /// The complex generated by `facets` and all their faces.
    pub fn from_facets(vertices: usize, facets: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut all: Vec<BTreeSet<Vec<usize>>> = vec![(0..vertices).map(|v| vec![v]).collect()];
        for f in facets {
            let f = normalize(vertices, f)?;
            for k in 1..=f.len() {
                if all.len() < k {
                    all.resize(k, BTreeSet::new());
                }
                all[k - 1].extend(f.iter().copied().combinations(k));
            }
        }
        Ok(Self::build(vertices, all))
    }

    /// Validated constructor from explicit per-dimension simplex lists; every
    /// face of every simplex must be listed. Vertices `0..vertices` are
    /// always present.
    pub fn from_simplices(vertices: usize, by_dim: &[Vec<Vec<usize>>]) -> Result<Self, ComplexError> {
        let mut all: Vec<BTreeSet<Vec<usize>>> = vec![(0..vertices).map(|v| vec![v]).collect()];
        for list in by_dim {
            for s in list {
                let s = normalize(vertices, s)?;
                if all.len() < s.len() {
                    all.resize(s.len(), BTreeSet::new());
                }
                all[s.len() - 1].insert(s);
            }
        }
        for k in 1..all.len() {
            for s in &all[k] {
                for i in 0..s.len() {
                    let face = drop_vertex(s, i);
                    if !all[k - 1].contains(&face) {
                        return Err(ComplexError::MissingFace { simplex: s.clone(), face });
                    }
                }
            }
        }
        Ok(Self::build(vertices, all))
    }

    fn build(vertices: usize, mut all: Vec<BTreeSet<Vec<usize>>>) -> Self {
        while all.len() > 1 && all.last().is_some_and(BTreeSet::is_empty) {
            all.pop();
        }
        let simplices: Vec<Vec<Vec<usize>>> = all.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        SimplicialComplex {
            vertices,
            simplices,
            index,
            orientation: None,
        }
    }

    /// Attaches top-simplex signs, validating that they define a fundamental
    /// cycle: pure, every codimension-one face in exactly two top simplices,
    /// and induced orientations cancelling on every such face.
    pub fn with_orientation(mut self, signs: Vec<i8>) -> Result<Self, ComplexError> {
        let n = self.dim();
        if signs.len() != self.count(n) {
            return Err(ComplexError::OrientationLength {
                expected: self.count(n),
                got: signs.len(),
            });
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(ComplexError::OrientationSign);
        }
        self.check_pseudomanifold()?;
        let mut induced: HashMap<&[usize], i32> = HashMap::new();
        for (t, s) in self.simplices[n].iter().zip(&signs) {
            for (i, face) in faces(t).enumerate() {
                *induced.entry(self.simplex_ref(n - 1, &face)).or_default() += *s as i32 * sign(i);
            }
        }
        if let Some((face, _)) = induced.iter().find(|(_, &v)| v != 0) {
            return Err(ComplexError::OrientationMismatch(face.to_vec()));
        }
        self.orientation = Some(signs);
        Ok(self)
    }

    /// Finds a coherent orientation (first top simplex of each component
    /// positive) and attaches it.
    pub fn oriented(self) -> Result<Self, ComplexError> {
        let signs = self.find_orientation()?;
        self.with_orientation(signs)
    }

    fn check_pseudomanifold(&self) -> Result<(), ComplexError> {
        let n = self.dim();
        if n == 0 {
            return Err(ComplexError::NoFundamentalClass);
        }
        for (fi, c) in self.top_cofaces().iter().enumerate() {
            if c.len() != 2 {
                return Err(ComplexError::NotPseudomanifold(self.simplices[n - 1][fi].clone()));
            }
        }
        for k in 0..n {
            for s in &self.simplices[k] {
                let covered = self.simplices[n].iter().any(|t| is_subset(s, t));
                if !covered {
                    return Err(ComplexError::NotPure(n));
                }
            }
        }
        Ok(())
    }

    fn simplex_ref(&self, k: usize, s: &[usize]) -> &[usize] {
        &self.simplices[k][self.index[k][s]]
    }

    /// For each codimension-one simplex, the top simplices containing it
    /// together with the position of the omitted vertex.
    fn top_cofaces(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.dim();
        let mut out = vec![Vec::new(); self.count(n - 1)];
        for (ti, t) in self.simplices[n].iter().enumerate() {
            for (i, face) in faces(t).enumerate() {
                out[self.index[n - 1][&face]].push((ti, i));
            }
        }
        out
    }

    fn find_orientation(&self) -> Result<Vec<i8>, ComplexError> {
        self.check_pseudomanifold()?;
        let n = self.dim();
        let cofaces = self.top_cofaces();
        let mut signs = vec![0i8; self.count(n)];
        for start in 0..signs.len() {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                for (i, face) in faces(&self.simplices[n][t]).enumerate() {
                    for &(u, j) in &cofaces[self.index[n - 1][&face]] {
                        if u == t {
                            continue;
                        }
                        let want = (-(signs[t] as i32) * sign(i) * sign(j)) as i8;
                        if signs[u] == 0 {
                            signs[u] = want;
                            queue.push_back(u);
                        } else if signs[u] != want {
                            return Err(ComplexError::OrientationMismatch(face.clone()));
                        }
                    }
                }
            }
        }
        Ok(signs)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    /// Top dimension.
    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    /// Number of `k`-simplices (zero above the top dimension).
    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let k = s.len().checked_sub(1)?;
        self.index.get(k)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn orientation(&self) -> Option<&[i8]> {
        self.orientation.as_deref()
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim()).map(|k| sign(k) as i64 * self.count(k) as i64).sum()
    }

    /// `(a, b)` with `a < b`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.simplices(1).iter().map(|e| (e[0], e[1]))
    }

    /// Neighbours of every vertex.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Connected components as vertex lists, each sorted, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut out = Vec::new();
        for s in 0..self.vertices {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Breadth-first spanning forest: `parent[v]` is `None` exactly at the
    /// root of each component, the root being its smallest vertex, or
    /// `root` for the component containing it.
    pub fn spanning_forest(&self, root: usize) -> Vec<Option<usize>> {
        let adj = self.adjacency();
        let mut parent = vec![None; self.vertices];
        let mut seen = vec![false; self.vertices];
        let order = std::iter::once(root).chain(0..self.vertices);
        for s in order {
            if s >= self.vertices || seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(v);
                        queue.push_back(w);
                    }
                }
            }
        }
        parent
    }

    /// Simplices `τ` with `P ∉ τ` and `τ ∪ {P}` in the complex.
    pub fn link(&self, p: usize) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
        for k in 1..=self.dim() {
            let mut level = Vec::new();
            for s in &self.simplices[k] {
                if let Ok(pos) = s.binary_search(&p) {
                    level.push(drop_vertex(s, pos));
                }
            }
            if level.is_empty() {
                break;
            }
            out.push(level);
        }
        out
    }
}

fn normalize(vertices: usize, s: &[usize]) -> Result<Vec<usize>, ComplexError> {
    if let Some(&v) = s.iter().find(|&&v| v >= vertices) {
        return Err(ComplexError::VertexOutOfRange { vertex: v, count: vertices });
    }
    let mut t = s.to_vec();
    t.sort_unstable();
    if t.is_empty() || t.windows(2).any(|w| w[0] == w[1]) {
        return Err(ComplexError::DegenerateSimplex(s.to_vec()));
    }
    Ok(t)
}

/// `(−1)^i`.
pub fn sign(i: usize) -> i32 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn drop_vertex(s: &[usize], i: usize) -> Vec<usize> {
    let mut f = s.to_vec();
    f.remove(i);
    f
}

/// Faces in the order `σ₀, σ₁, …` (face `i` omits vertex `i`).
pub fn faces(s: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..s.len()).map(move |i| drop_vertex(s, i))
}

pub fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

//! JSON file formats shared by the command-line front end.
//!
//! Scalars are strings such as `"3/2"`, `"1+2*i"` or `"1-1/2*sqrt(5)"`
//! (bare JSON integers are also accepted on input). Matrices are arrays
//! of rows.
//!
//! - complex: `{vertices, simplices_by_dim, orientation?}`
//! - system: `{rank, field?, edges?: [{from, to, matrix}]}`; omitting
//!   `edges` gives the trivial system
//! - cycle: `{subcomplex, dim?, orientation, basepoint, seed}` where
//!   `subcomplex` lists ids of `dim`-simplices or explicit vertex lists
//! - cochain: `{degree, terms: [{simplex, value}]}`
//! - pairing: `{left, right, matrix}` or one of `"scalar"`,
//!   `"evaluation"`, `"left_unit"`, `"right_unit"`
//! - group: `{order, table}`; rep: `{rank, field?, matrices}`
//! - vectors: `[[scalars]]` or `{vectors: [[scalars]]}`

use serde::{Deserialize, Serialize};

use crate::barcomplex::{FiniteGroup, GroupRep};
use crate::complex::SimplicialComplex;
use crate::error::FormatError;
use crate::field::{ExactScalar, Field, Vector};
use crate::intersect::DecomposableCycle;
use crate::localsys::{Cochain, LocalSystem, PairingRule, Twisted};
use crate::matrix::ExactMatrix;

pub type MatrixRows = Vec<Vec<ExactScalar>>;

fn matrix(rows: &MatrixRows, field: Option<Field>) -> Result<ExactMatrix, FormatError> {
    let m = ExactMatrix::from_rows(rows.clone())?;
    match field {
        Some(f) => {
            let tagged = m.with_field(f)?;
            if tagged.field() != f {
                return Err(FormatError::Invalid(format!("entries outside the declared field {f}")));
            }
            Ok(tagged)
        }
        None => Ok(m),
    }
}

pub fn matrix_rows(m: &ExactMatrix) -> MatrixRows {
    m.row_vectors()
}

fn parse_field(f: &Option<String>) -> Result<Option<Field>, FormatError> {
    f.as_deref().map(|s| s.parse::<Field>()).transpose().map_err(FormatError::from)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub vertices: usize,
    pub simplices_by_dim: Vec<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i8>>,
}

impl ComplexFile {
    /// Builds the complex; without an explicit orientation one is searched
    /// for and attached when the complex is a closed orientable
    /// pseudomanifold.
    pub fn build(&self) -> Result<SimplicialComplex, FormatError> {
        let x = SimplicialComplex::from_simplices(self.vertices, &self.simplices_by_dim)?;
        match &self.orientation {
            Some(signs) => Ok(x.with_orientation(signs.clone())?),
            None => Ok(x.clone().oriented().unwrap_or(x)),
        }
    }

    pub fn from_complex(x: &SimplicialComplex) -> Self {
        ComplexFile {
            vertices: x.vertex_count(),
            simplices_by_dim: (1..=x.dim()).map(|k| x.simplices(k).to_vec()).collect(),
            orientation: x.orientation().map(<[i8]>::to_vec),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeFile {
    pub from: usize,
    pub to: usize,
    pub matrix: MatrixRows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeFile>>,
}

impl SystemFile {
    pub fn build(&self, x: &SimplicialComplex) -> Result<LocalSystem, FormatError> {
        let field = parse_field(&self.field)?;
        let Some(edges) = &self.edges else {
            return Ok(LocalSystem::trivial(x, self.rank));
        };
        let transports = edges
            .iter()
            .map(|e| Ok(((e.from, e.to), matrix(&e.matrix, field)?)))
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(LocalSystem::new(x, self.rank, transports)?)
    }

    pub fn from_system(e: &LocalSystem) -> Self {
        SystemFile {
            rank: e.rank(),
            field: Some(e.field().to_string()),
            edges: Some(
                e.edge_transports()
                    .map(|((a, b), m)| EdgeFile {
                        from: a,
                        to: b,
                        matrix: matrix_rows(m),
                    })
                    .collect(),
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SimplexRef {
    Id(usize),
    Vertices(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleFile {
    pub subcomplex: Vec<SimplexRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub orientation: Vec<i8>,
    pub basepoint: usize,
    pub seed: Vec<ExactScalar>,
}

impl CycleFile {
    pub fn build(&self, x: &SimplicialComplex) -> Result<DecomposableCycle, FormatError> {
        let simplices = self
            .subcomplex
            .iter()
            .map(|s| match s {
                SimplexRef::Vertices(v) => {
                    let mut v = v.clone();
                    v.sort_unstable();
                    Ok(v)
                }
                SimplexRef::Id(i) => {
                    let p = self
                        .dim
                        .ok_or_else(|| FormatError::Invalid("simplex ids need the cycle dimension `dim`".into()))?;
                    x.simplices(p)
                        .get(*i)
                        .cloned()
                        .ok_or_else(|| FormatError::Invalid(format!("no {p}-simplex with id {i}")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(p) = self.dim {
            if let Some(s) = simplices.iter().find(|s| s.len() != p + 1) {
                return Err(FormatError::Invalid(format!("simplex {s:?} is not {p}-dimensional")));
            }
        }
        Ok(DecomposableCycle {
            simplices,
            orientation: self.orientation.clone(),
            basepoint: self.basepoint,
            seed: self.seed.clone(),
        })
    }

    pub fn from_cycle(y: &DecomposableCycle) -> Self {
        CycleFile {
            subcomplex: y.simplices.iter().cloned().map(SimplexRef::Vertices).collect(),
            dim: Some(y.dim()),
            orientation: y.orientation.clone(),
            basepoint: y.basepoint,
            seed: y.seed.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainTerm {
    pub simplex: Vec<usize>,
    pub value: Vec<ExactScalar>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CochainFile {
    pub degree: usize,
    pub terms: Vec<CochainTerm>,
}

impl CochainFile {
    pub fn build(&self, t: Twisted<'_>) -> Result<Cochain, FormatError> {
        let terms: Vec<(Vec<usize>, Vector)> = self
            .terms
            .iter()
            .map(|c| {
                let mut s = c.simplex.clone();
                s.sort_unstable();
                (s, c.value.clone())
            })
            .collect();
        Ok(t.cochain(self.degree, &terms)?)
    }

    pub fn from_coords(t: Twisted<'_>, degree: usize, coords: &[ExactScalar]) -> Self {
        CochainFile {
            degree,
            terms: t
                .terms(degree, coords)
                .into_iter()
                .map(|(simplex, value)| CochainTerm { simplex, value })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairingMatrix {
    pub left: usize,
    pub right: usize,
    pub matrix: MatrixRows,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PairingFile {
    Named(String),
    Explicit(PairingMatrix),
}

impl PairingFile {
    /// Named rules take the rank of the second system (`evaluation`,
    /// `left_unit`) or the first (`right_unit`).
    pub fn build(&self, e: &LocalSystem, f: &LocalSystem) -> Result<PairingRule, FormatError> {
        match self {
            PairingFile::Explicit(p) => Ok(PairingRule::new(p.left, p.right, matrix(&p.matrix, None)?)?),
            PairingFile::Named(name) => match name.as_str() {
                "scalar" => Ok(PairingRule::scalar()),
                "evaluation" => Ok(PairingRule::evaluation(f.rank())),
                "left_unit" => Ok(PairingRule::left_unit(f.rank())),
                "right_unit" => Ok(PairingRule::right_unit(e.rank())),
                other => Err(FormatError::Invalid(format!("unknown pairing `{other}`"))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn build(&self) -> Result<FiniteGroup, FormatError> {
        if self.table.len() != self.order {
            return Err(FormatError::Invalid(format!(
                "order {} but the table has {} rows",
                self.order,
                self.table.len()
            )));
        }
        Ok(FiniteGroup::new(self.table.clone())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepFile {
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub matrices: Vec<MatrixRows>,
}

impl RepFile {
    pub fn build(&self, group: FiniteGroup) -> Result<GroupRep, FormatError> {
        let field = parse_field(&self.field)?;
        let matrices = self
            .matrices
            .iter()
            .map(|m| {
                let m = matrix(m, field)?;
                if m.rows() != self.rank || m.cols() != self.rank {
                    return Err(FormatError::Invalid(format!("matrices must be {0}x{0}", self.rank)));
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupRep::new(group, matrices)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VectorsFile {
    Bare(Vec<Vector>),
    Wrapped { vectors: Vec<Vector> },
}

impl VectorsFile {
    pub fn into_vectors(self) -> Vec<Vector> {
        match self {
            VectorsFile::Bare(v) | VectorsFile::Wrapped { vectors: v } => v,
        }
    }
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

use thiserror::Error;

use crate::field::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("cannot combine elements of {0} and {1}")]
    Incompatible(Field, Field),
    #[error("{0} has no adjoined generator")]
    NoGenerator(Field),
    #[error("sqrt({0}) does not define a quadratic field (need square-free m > 1)")]
    NotSquareFree(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse exact scalar or field name {0:?}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight entries must be weakly decreasing and nonnegative: {0:?}")]
    NotDominant(Vec<i64>),
    #[error("SO({n},1) weights have {expected} entries, got {got}")]
    WrongLength { n: usize, expected: usize, got: usize },
    #[error("no compatible theta-stable parabolic: n = {n} is odd and all {m} entries are nonzero")]
    NoCompatibleParabolic { n: usize, m: usize },
    #[error("cannot parse weight {0:?}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("slot pair ({0},{1}) invalid for degree {2}")]
    SlotOutOfRange(usize, usize, usize),
    #[error("gram matrix must be square, symmetric and nondegenerate")]
    BadGram,
    #[error("partition has {parts} nonzero parts but only {vectors} vectors were given")]
    PartitionTooLong { parts: usize, vectors: usize },
    #[error("matrix is not an isometry of the form")]
    NotIsometry,
    #[error("Witt basis needs the imaginary unit; space is over {0}")]
    NeedsGaussian(Field),
    #[error("space is not the standard signature (n,1) space")]
    NotStandardSpace,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("vertex {vertex} out of range (complex has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("simplex {0:?} has repeated vertices")]
    DegenerateSimplex(Vec<usize>),
    #[error("face {face:?} of simplex {simplex:?} is missing")]
    MissingFace { simplex: Vec<usize>, face: Vec<usize> },
    #[error("simplex {0:?} is not in the complex")]
    UnknownSimplex(Vec<usize>),
    #[error("complex is not pure of dimension {0}")]
    NotPure(usize),
    #[error("orientation has {got} signs for {expected} top simplices")]
    OrientationLength { expected: usize, got: usize },
    #[error("orientation signs must be +1 or -1")]
    OrientationSign,
    #[error("codimension-one face {0:?} does not lie in exactly two top simplices")]
    NotPseudomanifold(Vec<usize>),
    #[error("top orientations do not cancel on face {0:?}")]
    OrientationMismatch(Vec<usize>),
    #[error("complex carries no fundamental class")]
    NoFundamentalClass,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalSystemError {
    #[error("edge ({0},{1}) has no transport")]
    MissingEdge(usize, usize),
    #[error("({0},{1}) is not an edge of the complex")]
    UnknownEdge(usize, usize),
    #[error("transport on edge ({0},{1}) is not an invertible {2}x{2} matrix")]
    BadTransport(usize, usize, usize),
    #[error("triangle {0:?} violates transport compatibility")]
    Incompatible(Vec<usize>),
    #[error("pairing is not parallel along edge ({0},{1})")]
    NotParallel(usize, usize),
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("cycle is not in the image of the duality map")]
    DualityFailed,
    #[error("target system has nontrivial monodromy; no canonical scalar value")]
    NontrivialTarget,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntersectError {
    #[error("seed is not fixed by the monodromy of the cycle (residual along edge ({0},{1}))")]
    MonodromyObstruction(usize, usize),
    #[error("cycle support is disconnected; basepoint {0} does not reach every simplex")]
    Disconnected(usize),
    #[error("cycle is not closed and oriented: {0}")]
    NotClosed(String),
    #[error("basepoint {0} is not a vertex of the cycle")]
    BadBasepoint(usize),
    #[error("cycles are not in general position")]
    NotGeneralPosition(String),
    #[error("only complementary dimensions are intersected geometrically (p={p}, q={q}, n={n})")]
    NotComplementary { p: usize, q: usize, n: usize },
    #[error("intersection at vertex {0} is not isolated/transverse")]
    NotTransverse(usize),
    #[error("local sign at vertex {0} needs linking of spheres of dimension >= 1 on both sides")]
    UnsupportedLink(usize),
    #[error(transparent)]
    LocalSystem(#[from] LocalSystemError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarError {
    #[error("group table is invalid: {0}")]
    BadGroup(String),
    #[error("representation is invalid: {0}")]
    BadRep(String),
    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("bar complex in degree {degree} needs {size} columns, over the limit {limit}")]
    SizeLimit { degree: usize, size: usize, limit: usize },
    #[error("degree {degree} exceeds the configured cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("vector has length {got}, rep has rank {rank}")]
    RankMismatch { rank: usize, got: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("subspace is degenerate for the form")]
    Degenerate,
    #[error("subspace spanned by {0} vectors has dimension {1}")]
    NotIndependent(usize, usize),
    #[error("subspace is not positive definite at the (n,1) embedding")]
    NotPositive,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no witness after {trials} trials (seed {seed})")]
    TrialsExhausted { trials: usize, seed: u64 },
    #[error("could not sample a Cayley transform (I + A kept singular)")]
    CayleyRetries,
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    LocalSystem(#[from] LocalSystemError),
    #[error(transparent)]
    Bar(#[from] BarError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

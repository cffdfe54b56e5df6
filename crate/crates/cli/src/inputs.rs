use std::fs;

use lococo_core::barcomplex::{FiniteGroup, GroupRep};
use lococo_core::complex::SimplicialComplex;
use lococo_core::formats::{
    from_json, ComplexFile, CycleFile, GroupFile, PairingFile, RepFile, SystemFile, VectorsFile,
};
use lococo_core::geometry::RationalQuadraticForm;
use lococo_core::intersect::DecomposableCycle;
use lococo_core::localsys::{LocalSystem, PairingRule};
use lococo_core::schur::QuadraticSpace;
use lococo_core::weights::{DominantWeight, Partition};
use lococo_core::{
    BarError, FormatError, GeometryError, IntersectError, LocalSystemError, TensorError, Vector, WeightError,
};
use serde_json::json;

use crate::CliError;

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::invalid(e)
    }
}

impl From<WeightError> for CliError {
    fn from(e: WeightError) -> Self {
        CliError::invalid(e)
    }
}

impl From<LocalSystemError> for CliError {
    fn from(e: LocalSystemError) -> Self {
        CliError::invalid(e)
    }
}

impl From<BarError> for CliError {
    fn from(e: BarError) -> Self {
        match e {
            BarError::SizeLimit { .. } | BarError::DegreeCap { .. } => CliError::infeasible(e),
            _ => CliError::invalid(e),
        }
    }
}

impl From<TensorError> for CliError {
    fn from(e: TensorError) -> Self {
        match e {
            TensorError::PartitionTooLong { parts, vectors } => CliError::invalid(format!(
                "inadmissible frame: i(μ) = {parts} but only {vectors} vectors; a nonzero invariant needs dim(X) ≥ i(μ)"
            )),
            e => CliError::invalid(e),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Precondition(_) => CliError::infeasible(e),
            GeometryError::TrialsExhausted { trials, seed } => CliError {
                code: 4,
                message: e.to_string(),
                detail: Some(json!({"seed": seed, "trials": trials})),
            },
            GeometryError::Tensor(t) => t.into(),
            e => CliError::invalid(e),
        }
    }
}

impl From<IntersectError> for CliError {
    fn from(e: IntersectError) -> Self {
        match &e {
            IntersectError::NotGeneralPosition(report) => {
                CliError::infeasible(&e).with_detail(json!({"violation": report}))
            }
            IntersectError::NotTransverse(_) | IntersectError::UnsupportedLink(_) => CliError::infeasible(e),
            _ => CliError::invalid(e),
        }
    }
}

pub fn read(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::invalid(format!("cannot read {path}: {e}")))
}

pub fn complex(path: &str) -> Result<SimplicialComplex, CliError> {
    Ok(from_json::<ComplexFile>(&read(path)?)?.build()?)
}

/// The system in `path`, or the trivial rank-1 system.
pub fn system(x: &SimplicialComplex, path: Option<&str>) -> Result<LocalSystem, CliError> {
    match path {
        Some(p) => Ok(from_json::<SystemFile>(&read(p)?)?.build(x)?),
        None => Ok(LocalSystem::trivial(x, 1)),
    }
}

pub fn cycle(x: &SimplicialComplex, path: &str) -> Result<DecomposableCycle, CliError> {
    Ok(from_json::<CycleFile>(&read(path)?)?.build(x)?)
}

const PAIRING_NAMES: [&str; 4] = ["scalar", "evaluation", "left_unit", "right_unit"];

pub fn pairing(arg: &str, e: &LocalSystem, f: &LocalSystem) -> Result<PairingRule, CliError> {
    let file = if PAIRING_NAMES.contains(&arg) {
        PairingFile::Named(arg.to_string())
    } else {
        from_json(&read(arg)?)?
    };
    Ok(file.build(e, f)?)
}

/// Parses a weight for `SO(n,1)`, padding omitted trailing zeros.
pub fn weight(n: usize, s: &str) -> Result<DominantWeight, CliError> {
    let m = n.div_ceil(2);
    let mut entries = Vec::new();
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    if !t.is_empty() {
        for x in t.split(',') {
            entries.push(
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| CliError::invalid(WeightError::Parse(s.to_string())))?,
            );
        }
    }
    if entries.len() < m {
        entries.resize(m, 0);
    }
    while entries.len() > m && entries.last() == Some(&0) {
        entries.pop();
    }
    Ok(DominantWeight::new(n, entries)?)
}

pub fn partition(s: &str) -> Result<Partition, CliError> {
    Ok(Partition::parse(s)?)
}

pub fn quadratic_space(n: usize, sqrt: Option<u64>) -> Result<QuadraticSpace, CliError> {
    match sqrt {
        None => Ok(QuadraticSpace::standard(n)),
        Some(m) => Ok(RationalQuadraticForm::new(n, m)?.space().clone()),
    }
}

/// `e` (standard frame of length `k`), `u` (isotropic frame) or a vectors
/// file.
pub fn frame(space: &QuadraticSpace, n: usize, k: usize, arg: &str) -> Result<Vec<Vector>, CliError> {
    match arg {
        "e" => Ok(space.standard_frame(k)),
        "u" => space
            .witt_basis(n)
            .map_err(|e| CliError::invalid(format!("isotropic frame unavailable: {e}"))),
        path => {
            let v = from_json::<VectorsFile>(&read(path)?)?.into_vectors();
            if let Some(bad) = v.iter().find(|x| x.len() != space.dim()) {
                return Err(CliError::invalid(format!(
                    "vectors must have {} coordinates, got {}",
                    space.dim(),
                    bad.len()
                )));
            }
            Ok(v)
        }
    }
}

enum BuiltinGroup {
    Cyclic(usize),
    S3,
}

pub fn group_and_rep(group: &str, rep: &str) -> Result<GroupRep, CliError> {
    let (g, builtin) = if let Some(n) = group.strip_prefix("Z/") {
        let n: usize = n
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::invalid(format!("bad cyclic group {group}")))?;
        (FiniteGroup::cyclic(n), Some(BuiltinGroup::Cyclic(n)))
    } else if group == "S3" {
        (FiniteGroup::symmetric3(), Some(BuiltinGroup::S3))
    } else {
        (from_json::<GroupFile>(&read(group)?)?.build()?, None)
    };
    if let Some(r) = rep.strip_prefix("trivial") {
        let rank = match r.strip_prefix(':') {
            Some(k) => k.parse().map_err(|_| CliError::invalid(format!("bad rank in {rep}")))?,
            None if r.is_empty() => 1,
            None => return Err(CliError::invalid(format!("unknown rep {rep}"))),
        };
        return Ok(GroupRep::trivial(&g, rank));
    }
    match (rep, &builtin) {
        ("sign", Some(BuiltinGroup::S3)) => Ok(GroupRep::s3_sign()),
        ("standard", Some(BuiltinGroup::S3)) => Ok(GroupRep::s3_standard()),
        ("sign", Some(BuiltinGroup::Cyclic(n))) if n % 2 == 0 => {
            let values: Vec<i64> = (0..*n).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect();
            Ok(GroupRep::character(&g, &values)?)
        }
        ("sign" | "standard", _) => Err(CliError::invalid(format!("no builtin `{rep}` rep for {group}"))),
        (path, _) => Ok(from_json::<RepFile>(&read(path)?)?.build(g)?),
    }
}

use lococo_core::barcomplex::BarComplex;
use lococo_core::geometry::{
    complementary_tuple_search, cup_tuple_search, standard_frame, CupSearch, RationalQuadraticForm, SearchResult,
};
use lococo_core::intersect::intersect;
use lococo_core::localsys::{
    collapse_to_basepoint, cup, duality_map, intersection_class, poincare_dual, Twisted,
};
use lococo_core::schur::{QuadraticSpace, Tensor};
use lococo_core::weights::{dominant_weights, DominantWeight};
use lococo_core::{ExactScalar, Vector};
use lococo_core::formats::{from_json, CochainFile};
use serde_json::{json, Map, Value};

use crate::inputs;
use crate::{CliError, Command, ComplexArgs, SearchCommon, SearchKind, SpaceArgs, TripleArgs};

/// Runs a parsed command and returns its JSON output.
pub fn execute(cmd: &Command) -> Result<Value, CliError> {
    match cmd {
        Command::Ranges(a) => ranges(a.n, a.mu.as_deref(), a.max_size),
        Command::Branch(a) => branch(&a.mu),
        Command::Invariant(a) => invariant(&a.space, &a.x),
        Command::Pair(a) => pair(&a.space, &a.x, &a.y),
        Command::Homology(a) => homology(a, false),
        Command::Cohomology(a) => homology(a, true),
        Command::Cup(a) => cup_cmd(&a.systems, &a.a, &a.b),
        Command::Dual(a) => dual(&a.complex, a.system.as_deref(), a.cochain.as_deref(), a.cycle.as_deref()),
        Command::Intersect(a) => intersect_cmd(&a.systems, &a.cycle1, &a.cycle2, a.check),
        Command::GroupHomology(a) => group_homology(&a.group, &a.rep, a.deg, a.max_degree),
        Command::Search(a) => search(&a.kind),
    }
}

fn range_json(w: &DominantWeight) -> Value {
    let r = w.nonvanishing_range();
    json!({
        "i": w.support_count(),
        "degrees": r.degrees(),
        "vanishes": r.is_empty(),
    })
}

fn ranges(n: usize, mu: Option<&str>, max_size: usize) -> Result<Value, CliError> {
    if n < 2 {
        return Err(CliError::invalid("n must be at least 2"));
    }
    if let Some(mu) = mu {
        return Ok(range_json(&inputs::weight(n, mu)?));
    }
    let rows: Vec<Value> = dominant_weights(n, max_size)
        .iter()
        .map(|w| {
            let mut row = json!({"mu": w.to_string()});
            row.as_object_mut().unwrap().extend(range_json(w).as_object().unwrap().clone());
            row
        })
        .collect();
    Ok(json!({"n": n, "weights": rows}))
}

fn branch(mu: &str) -> Result<Value, CliError> {
    let mu = inputs::partition(mu)?;
    let nus: Vec<Value> = mu
        .branch()
        .iter()
        .map(|nu| json!({"nu": nu.to_string(), "i": nu.support_count()}))
        .collect();
    Ok(json!({"mu": mu.to_string(), "i": mu.support_count(), "branches": nus}))
}

fn tensor_json(t: &Tensor) -> Value {
    let terms: Vec<Value> = t.terms().map(|(idx, c)| json!({"index": idx, "coeff": c})).collect();
    json!({"degree": t.degree(), "terms": terms})
}

fn space_and_weight(a: &SpaceArgs) -> Result<(QuadraticSpace, DominantWeight), CliError> {
    let w = inputs::weight(a.n, &a.mu)?;
    Ok((inputs::quadratic_space(a.n, a.sqrt)?, w))
}

fn invariant(a: &SpaceArgs, x: &str) -> Result<Value, CliError> {
    let (space, w) = space_and_weight(a)?;
    let mu = w.partition();
    let x = inputs::frame(&space, a.n, mu.support_count(), x)?;
    let tau = space.tau(&x, &mu)?;
    let mut out = tensor_json(&tau);
    let map = out.as_object_mut().unwrap();
    map.insert("mu".into(), json!(w.to_string()));
    map.insert("nonzero".into(), json!(!tau.is_zero()));
    Ok(out)
}

fn pair(a: &SpaceArgs, x: &str, y: &str) -> Result<Value, CliError> {
    let (space, w) = space_and_weight(a)?;
    let mu = w.partition();
    let k = mu.support_count();
    let x = inputs::frame(&space, a.n, k, x)?;
    let y = inputs::frame(&space, a.n, k, y)?;
    let value = space.pair_invariants(&x, &y, &mu)?;
    Ok(json!({"mu": w.to_string(), "pairing": value}))
}

fn terms_json(t: Twisted<'_>, degree: usize, coords: &[ExactScalar]) -> Value {
    json!(CochainFile::from_coords(t, degree, coords)
        .terms
        .iter()
        .map(|c| json!({"simplex": c.simplex, "value": c.value}))
        .collect::<Vec<_>>())
}

fn homology(a: &ComplexArgs, co: bool) -> Result<Value, CliError> {
    let x = inputs::complex(&a.complex)?;
    let e = inputs::system(&x, a.system.as_deref())?;
    let t = Twisted::new(&x, &e)?;
    let dims = if co { t.cohomology_dims() } else { t.homology_dims() };
    let prefix = if co { "H^" } else { "H" };
    let mut out = Map::new();
    match a.deg {
        Some(p) => {
            if p > x.dim() {
                return Err(CliError::invalid(format!("degree {p} exceeds the dimension {}", x.dim())));
            }
            out.insert(format!("{prefix}{p}"), json!(dims[p]));
            let basis = if co { t.cohomology(p) } else { t.homology(p) };
            let reps: Vec<Value> = basis.representatives.iter().map(|r| terms_json(t, p, r)).collect();
            out.insert("representatives".into(), json!(reps));
        }
        None => {
            for (p, d) in dims.iter().enumerate() {
                out.insert(format!("{prefix}{p}"), json!(d));
            }
        }
    }
    Ok(Value::Object(out))
}

struct Triple {
    x: lococo_core::complex::SimplicialComplex,
    e: lococo_core::localsys::LocalSystem,
    f: lococo_core::localsys::LocalSystem,
    g: lococo_core::localsys::LocalSystem,
    nu: lococo_core::localsys::PairingRule,
}

fn triple(a: &TripleArgs) -> Result<Triple, CliError> {
    let x = inputs::complex(&a.complex)?;
    let e = inputs::system(&x, a.e.as_deref())?;
    let f = inputs::system(&x, a.f.as_deref())?;
    let g = inputs::system(&x, a.g.as_deref())?;
    let nu = inputs::pairing(&a.pairing, &e, &f)?;
    nu.check_ranks(&e, &f, &g)?;
    Ok(Triple { x, e, f, g, nu })
}

fn cup_cmd(a: &TripleArgs, fa: &str, fb: &str) -> Result<Value, CliError> {
    let s = triple(a)?;
    let (te, tf, tg) = (Twisted::new(&s.x, &s.e)?, Twisted::new(&s.x, &s.f)?, Twisted::new(&s.x, &s.g)?);
    let alpha = from_json::<CochainFile>(&inputs::read(fa)?)?.build(te)?;
    let beta = from_json::<CochainFile>(&inputs::read(fb)?)?.build(tf)?;
    let product = cup(te, tf, tg, &alpha, &beta, &s.nu)?;
    Ok(json!({
        "degree": product.degree,
        "terms": terms_json(tg, product.degree, &product.coords),
        "cocycle": tg.is_cocycle(&product)?,
    }))
}

fn dual(complex: &str, system: Option<&str>, cochain: Option<&str>, cycle: Option<&str>) -> Result<Value, CliError> {
    let x = inputs::complex(complex)?;
    let e = inputs::system(&x, system)?;
    let t = Twisted::new(&x, &e)?;
    if let Some(path) = cochain {
        let alpha = from_json::<CochainFile>(&inputs::read(path)?)?.build(t)?;
        let c = duality_map(t, &alpha)?;
        return Ok(json!({
            "kind": "chain",
            "degree": c.degree,
            "terms": terms_json(t, c.degree, &c.coords),
            "cycle": t.is_cycle(&c)?,
        }));
    }
    let y = inputs::cycle(&x, cycle.expect("clap requires a cochain or a cycle"))?;
    let c = y.to_chain(t)?;
    let pd = poincare_dual(t, &c)?;
    Ok(json!({
        "kind": "cochain",
        "degree": pd.degree,
        "terms": terms_json(t, pd.degree, &pd.coords),
    }))
}

fn coeff_json(v: &Vector) -> Value {
    if v.len() == 1 {
        json!(v[0])
    } else {
        json!(v)
    }
}

fn intersect_cmd(a: &TripleArgs, c1: &str, c2: &str, check: bool) -> Result<Value, CliError> {
    let s = triple(a)?;
    let (te, tf, tg) = (Twisted::new(&s.x, &s.e)?, Twisted::new(&s.x, &s.f)?, Twisted::new(&s.x, &s.g)?);
    let y1 = inputs::cycle(&s.x, c1)?;
    let y2 = inputs::cycle(&s.x, c2)?;
    let product = intersect(te, tf, tg, &y1, &y2, &s.nu)?;
    let points: Vec<Value> = product
        .points
        .iter()
        .map(|p| json!({"vertex": p.vertex, "sign": p.sign, "coeff": coeff_json(&p.coeff)}))
        .collect();
    let mut out = json!({
        "points": points,
        "chain": terms_json(tg, 0, &product.chain.coords),
        "evaluation": collapse_to_basepoint(tg, &product.chain, y1.basepoint).ok().map(|v| coeff_json(&v)),
    });
    if check {
        let a = y1.to_chain(te)?;
        let b = y2.to_chain(tf)?;
        let class = intersection_class(te, tf, tg, &a, &b, &s.nu)?;
        let agrees = tg.homologous(&product.chain, &class)?;
        out.as_object_mut().unwrap().insert("agrees_with_cup_product".into(), json!(agrees));
    }
    Ok(out)
}

fn group_homology(group: &str, rep: &str, deg: Option<usize>, max_degree: usize) -> Result<Value, CliError> {
    let rep = inputs::group_and_rep(group, rep)?;
    let bar = BarComplex::new(&rep);
    let mut out = Map::new();
    out.insert("order".into(), json!(rep.group().order()));
    out.insert("rank".into(), json!(rep.rank()));
    let degrees: Vec<usize> = match deg {
        Some(p) => vec![p],
        None => (0..=max_degree).collect(),
    };
    for p in degrees {
        out.insert(format!("H{p}"), json!(bar.homology_dim(p)?));
    }
    Ok(Value::Object(out))
}

fn search_json(kind: &str, r: &SearchResult, trials: usize) -> Value {
    let checks: Vec<Value> = r
        .verification
        .checks
        .iter()
        .map(|c| json!({"check": c.name, "result": if c.pass { "pass" } else { "fail" }, "value": c.value}))
        .collect();
    json!({
        "kind": kind,
        "seed": r.seed,
        "trials": trials,
        "found_at_trial": r.trial,
        "tuple": r.tuple,
        "pairings": r.pairings,
        "verification": checks,
        "verified": r.verification.passed(),
    })
}

fn seed_of(c: &SearchCommon) -> u64 {
    c.seed.unwrap_or_else(rand::random)
}

fn search(kind: &SearchKind) -> Result<Value, CliError> {
    match kind {
        SearchKind::Complementary { common, k, mu, x } => {
            let form = RationalQuadraticForm::new(common.n, common.sqrt)?;
            let w = inputs::weight(common.n, mu)?;
            let x = match x {
                Some(path) => inputs::frame(form.space(), common.n, *k, path)?,
                None => standard_frame(&form, *k),
            };
            let seed = seed_of(common);
            let r = complementary_tuple_search(&form, &x, &w.partition(), common.trials, seed)?;
            Ok(search_json("complementary", &r, common.trials))
        }
        SearchKind::Cup {
            common,
            q1,
            q2,
            mu1,
            mu2,
        } => {
            let form = RationalQuadraticForm::new(common.n, common.sqrt)?;
            let params = CupSearch {
                q1: *q1,
                q2: *q2,
                mu1: inputs::weight(common.n, mu1)?.partition(),
                mu2: inputs::weight(common.n, mu2)?.partition(),
            };
            let seed = seed_of(common);
            let r = cup_tuple_search(&form, &params, common.trials, seed)?;
            Ok(search_json("cup", &r, common.trials))
        }
    }
}

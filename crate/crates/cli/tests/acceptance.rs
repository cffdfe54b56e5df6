//! End-to-end acceptance run: one PASS/FAIL line per criterion, each with
//! its time budget. Exits nonzero when any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{lococo, Workspace};
use itertools::Itertools;
use lococo_core::barcomplex::{bar_boundary, decomposable_cycle, BarChain, BarComplex, FiniteGroup, GroupRep};
use lococo_core::complex::SimplicialComplex;
use lococo_core::geometry::{
    sample_pointwise_stabilizer, standard_frame, verify_complementary, RationalQuadraticForm,
};
use lococo_core::intersect::{intersect, DecomposableCycle};
use lococo_core::localsys::{
    intersection_class, kronecker, Chain, Cochain, LocalSystem, PairingRule, Twisted,
};
use lococo_core::schur::QuadraticSpace;
use lococo_core::weights::{dominant_weights, partitions_of, Partition};
use lococo_core::{models, ExactMatrix, ExactScalar, GeometryError, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(v: i64) -> ExactScalar {
    ExactScalar::from_i64(v)
}

fn weight_arg(entries: &[u32]) -> String {
    entries.iter().join(",")
}

fn ranges() -> Result<String, String> {
    let mut count = 0;
    for n in 2..=7usize {
        let m = n.div_ceil(2);
        for w in dominant_weights(n, 4) {
            let i = w.entries().iter().filter(|&&b| b != 0).count();
            let expected: Vec<usize> = if n % 2 == 1 && i == m { vec![] } else { (i..=n - i).collect() };
            let out = lococo(&["ranges", "--n", &n.to_string(), "--mu", &weight_arg(w.entries())]);
            let want = json!({"i": i, "degrees": expected, "vanishes": expected.is_empty()});
            ensure(out.json() == want, || format!("n={n} μ={w}: got {}", out.stdout.trim()))?;
            count += 1;
        }
    }
    let e = lococo(&["ranges", "--n", "6", "--mu", "1,1,1"]).json();
    ensure(e["degrees"] == json!([3]), || "n=6 μ=(1,1,1) should give {3}".into())?;
    Ok(format!("{count} weights"))
}

fn inversions(p: &[usize]) -> usize {
    p.iter().tuple_combinations().filter(|(a, b)| a > b).count()
}

/// `𝒬𝒫(x₁^{b₁} ⊗ ⋯)` by explicit sums over row and column groups of the
/// row-reading tableau.
fn brute_symmetrize(x: &[Vector], mu: &Partition) -> BTreeMap<Vec<usize>, ExactScalar> {
    let d = mu.size();
    let mut t: BTreeMap<Vec<usize>, ExactScalar> = [(vec![], ExactScalar::one())].into_iter().collect();
    for (v, &b) in x.iter().zip(mu.parts()) {
        for _ in 0..b {
            t = t
                .iter()
                .flat_map(|(idx, c)| {
                    v.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(move |(k, a)| {
                        let mut i = idx.clone();
                        i.push(k);
                        (i, c * a)
                    })
                })
                .collect();
        }
    }
    let mut rows = Vec::new();
    let mut next = 0;
    for &r in mu.parts() {
        rows.push((next..next + r as usize).collect::<Vec<_>>());
        next += r as usize;
    }
    let width = mu.parts().first().copied().unwrap_or(0) as usize;
    let cols: Vec<Vec<usize>> = (0..width)
        .map(|j| rows.iter().filter(|r| r.len() > j).map(|r| r[j]).collect())
        .collect();
    let average = |t: &BTreeMap<Vec<usize>, ExactScalar>, blocks: &[Vec<usize>], signed: bool| {
        let group: Vec<Vec<usize>> = (0..d)
            .permutations(d)
            .filter(|p| blocks.iter().all(|b| b.iter().all(|&i| b.contains(&p[i]))))
            .collect();
        let w = ExactScalar::from_frac(1, group.len() as i64);
        let mut out: BTreeMap<Vec<usize>, ExactScalar> = BTreeMap::new();
        for p in &group {
            let s = if signed && inversions(p) % 2 == 1 { -&w } else { w.clone() };
            for (idx, c) in t {
                let moved: Vec<usize> = (0..d).map(|k| idx[p[k]]).collect();
                *out.entry(moved).or_insert_with(ExactScalar::zero) += &(c * &s);
            }
        }
        out
    };
    average(&average(&t, &rows, false), &cols, true)
}

fn invariant_pairing() -> Result<String, String> {
    let mut count = 0;
    for n in 3..=6usize {
        let space = QuadraticSpace::standard(n);
        let u = space.witt_basis(n).map_err(|e| e.to_string())?;
        for w in dominant_weights(n, 4) {
            let mu = w.partition();
            let col_order: i64 = mu.conjugate().parts().iter().map(|&c| (1..=c as i64).product::<i64>()).product();
            let expected = ExactScalar::from_frac(1, col_order);
            let out = lococo(&["pair", "--n", &n.to_string(), "--mu", &weight_arg(w.entries()), "--x", "e", "--y", "u"]);
            ensure(out.json()["pairing"] == json!(expected.to_string()), || {
                format!("n={n} μ={w}: got {}", out.stdout.trim())
            })?;
            let e = space.standard_frame(mu.support_count());
            let (se, su) = (brute_symmetrize(&e, &mu), brute_symmetrize(&u, &mu));
            let mut oracle = ExactScalar::zero();
            for (idx, a) in &se {
                if let Some(b) = su.get(idx) {
                    let mut t = a * b;
                    for &i in idx {
                        t *= space.gram().get(i, i);
                    }
                    oracle += &t;
                }
            }
            ensure(oracle == expected, || format!("oracle n={n} μ={w}: {oracle}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (n, μ) pairs equal 1/|Q_μ|"))
}

fn branching() -> Result<String, String> {
    let mut count = 0;
    for d in 1..=5 {
        for mu in partitions_of(d, d) {
            let out = lococo(&["branch", "--mu", &weight_arg(mu.parts())]).json();
            let i = out["i"].as_u64().ok_or("missing i")?;
            let seen: Vec<u64> = out["branches"]
                .as_array()
                .ok_or("missing branches")?
                .iter()
                .map(|b| b["i"].as_u64().unwrap())
                .unique()
                .sorted()
                .collect();
            ensure(seen == vec![i - 1, i], || format!("μ={mu}: support counts {seen:?}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} partitions"))
}

fn euler(dims: &[usize]) -> i64 {
    dims.iter().enumerate().map(|(p, &d)| if p % 2 == 0 { d as i64 } else { -(d as i64) }).sum()
}

fn twisted_homology() -> Result<String, String> {
    let ws = Workspace::new();
    let circle = ws.complex("circle.json", &models::circle(4));
    for lambda in [-2, -1, 1, 2, 3] {
        let sys = ws.system("l.json", &models::circle_system(4, &ExactMatrix::from_i64(&[&[lambda]])));
        let got = lococo(&["homology", "--complex", &circle, "--system", &sys]).json();
        let want = if lambda == 1 { json!({"H0": 1, "H1": 1}) } else { json!({"H0": 0, "H1": 0}) };
        ensure(got == want, || format!("λ={lambda}: {got}"))?;
    }
    let dims = [3, 3];
    let torus = ws.complex("torus.json", &models::torus(&dims));
    let sys = ws.system(
        "t.json",
        &models::torus_system(&dims, &[ExactMatrix::from_i64(&[&[2]]), ExactMatrix::from_i64(&[&[1]])]),
    );
    let got = lococo(&["homology", "--complex", &torus, "--system", &sys]).json();
    ensure(got == json!({"H0": 0, "H1": 0, "H2": 0}), || format!("torus (2,1): {got}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for seed in 0..50u64 {
        let r = rng.random_range(1..=2);
        let (x, e) = match seed % 3 {
            0 => {
                let x = models::random_complex(seed);
                let e = models::random_system(&x, r, seed);
                (x, e)
            }
            1 => {
                let nv = rng.random_range(3..=6);
                let m = models::random_invertible(r, &mut rng);
                (models::circle(nv), models::random_gauge(&models::circle_system(nv, &m), nv, seed))
            }
            _ => {
                let d = [3, rng.random_range(3..=4)];
                (models::torus(&d), models::random_torus_system(&d, r, seed))
            }
        };
        let t = Twisted::new(&x, &e).map_err(|e| e.to_string())?;
        let chi = euler(&t.homology_dims());
        ensure(chi == x.euler_characteristic() * r as i64, || format!("seed {seed}: χ mismatch"))?;
    }
    Ok("circle, torus and 50 random pairs".into())
}

fn duality_and_pairing() -> Result<String, String> {
    let mut checked = 0;
    for seed in [11u64, 12] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.random_range(1..=2);
        let m = models::random_invertible(r, &mut rng);
        let s2 = models::sphere2();
        let cases: Vec<(&str, SimplicialComplex, LocalSystem)> = vec![
            ("S1", models::circle(4), models::random_gauge(&models::circle_system(4, &m), 4, seed)),
            ("S2", s2.clone(), models::random_system(&s2, r, seed)),
            ("T2", models::torus(&[3, 3]), models::random_torus_system(&[3, 3], r, seed)),
            ("T3", models::torus(&[3, 3, 3]), models::random_torus_system(&[3, 3, 3], r, seed)),
        ];
        let untwisted: Vec<(&str, SimplicialComplex, LocalSystem)> = ["S1", "T2", "T3"]
            .into_iter()
            .zip([models::circle(4), models::torus(&[3, 3]), models::torus(&[3, 3, 3])])
            .map(|(name, x)| {
                let e = models::random_system(&x, r, seed);
                (name, x, e)
            })
            .collect();
        let cases = cases.into_iter().chain(untwisted);
        for (name, x, e) in cases {
            let dual = e.dual();
            let one = LocalSystem::trivial(&x, 1);
            let te = Twisted::new(&x, &e).map_err(|e| e.to_string())?;
            let td = Twisted::new(&x, &dual).map_err(|e| e.to_string())?;
            let t1 = Twisted::new(&x, &one).map_err(|e| e.to_string())?;
            let n = x.dim();
            let (hom, coh) = (te.homology_dims(), te.cohomology_dims());
            for p in 0..=n {
                ensure(coh[p] == hom[n - p], || format!("{name}: dim H^{p} ≠ dim H_{}", n - p))?;
                let classes = te.homology(p).representatives;
                let coclasses = td.cohomology(p).representatives;
                ensure(classes.len() == coclasses.len(), || format!("{name}: H^{p}(E*) vs H_{p}(E)"))?;
                if classes.is_empty() {
                    continue;
                }
                let rows: Vec<Vec<ExactScalar>> = coclasses
                    .iter()
                    .map(|a| {
                        let a = Cochain { degree: p, coords: a.clone() };
                        classes
                            .iter()
                            .map(|c| {
                                let c = Chain { degree: p, coords: c.clone() };
                                kronecker(td, te, t1, &a, &c, &PairingRule::evaluation(e.rank()), 0).unwrap()[0].clone()
                            })
                            .collect()
                    })
                    .collect();
                let mat = ExactMatrix::from_rows(rows).map_err(|e| e.to_string())?;
                ensure(mat.is_invertible(), || format!("{name}: pairing in degree {p} is degenerate"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} nonzero pairing matrices invertible"))
}

fn intersection_oracle() -> Result<String, String> {
    let mut pairs = 0;
    let agree = |x: &SimplicialComplex,
                 e: &LocalSystem,
                 f: &LocalSystem,
                 g: &LocalSystem,
                 y1: &DecomposableCycle,
                 y2: &DecomposableCycle,
                 nu: &PairingRule|
     -> Result<(), String> {
        let (te, tf, tg) = (
            Twisted::new(x, e).map_err(|e| e.to_string())?,
            Twisted::new(x, f).map_err(|e| e.to_string())?,
            Twisted::new(x, g).map_err(|e| e.to_string())?,
        );
        let geo = intersect(te, tf, tg, y1, y2, nu).map_err(|e| e.to_string())?;
        let a = y1.to_chain(te).map_err(|e| e.to_string())?;
        let b = y2.to_chain(tf).map_err(|e| e.to_string())?;
        let class = intersection_class(te, tf, tg, &a, &b, nu).map_err(|e| e.to_string())?;
        ensure(tg.homologous(&geo.chain, &class).unwrap(), || "geometric product ≠ 𝒟(PD(b) ∪ PD(a))".into())
    };
    for dims in [[3, 3], [4, 3]] {
        let x = models::torus(&dims);
        let l = LocalSystem::trivial(&x, 1);
        let m = |a: i64, b: i64| models::torus_system(&dims, &[ExactMatrix::from_i64(&[&[a]]), ExactMatrix::from_i64(&[&[b]])]);
        let (e, f, g) = (m(1, 2), m(3, 1), m(3, 2));
        for base in [[0, 0], [1, 2], [2, 1]] {
            let a = models::circle_cycle(&dims, &base, 0, vec![q(1)]);
            let b = models::circle_cycle(&dims, &[(base[0] + 1) % 3, base[1]], 1, vec![q(2)]);
            agree(&x, &l, &l, &l, &a, &b, &PairingRule::scalar())?;
            agree(&x, &l, &l, &l, &b, &a, &PairingRule::scalar())?;
            agree(&x, &e, &f, &g, &a, &b, &PairingRule::scalar())?;
            agree(&x, &f, &e, &g, &b, &a, &PairingRule::scalar())?;
            pairs += 4;
        }
    }
    let s = models::sphere2();
    let l = LocalSystem::trivial(&s, 1);
    let top = DecomposableCycle {
        simplices: s.simplices(2).to_vec(),
        orientation: s.orientation().unwrap().to_vec(),
        basepoint: 0,
        seed: vec![q(3)],
    };
    let pt = DecomposableCycle {
        simplices: vec![vec![2]],
        orientation: vec![1],
        basepoint: 2,
        seed: vec![q(2)],
    };
    agree(&s, &l, &l, &l, &pt, &top, &PairingRule::scalar())?;
    pairs += 1;
    let ws = Workspace::new();
    let dims = [3, 3];
    let torus = ws.complex("torus.json", &models::torus(&dims));
    let a = ws.cycle("a.json", &models::circle_cycle(&dims, &[0, 0], 0, vec![q(1)]));
    let b = ws.cycle("b.json", &models::circle_cycle(&dims, &[0, 0], 1, vec![q(1)]));
    let out = lococo(&["intersect", "--complex", &torus, "--cycle1", &a, "--cycle2", &b, "--check"]).json();
    ensure(out["agrees_with_cup_product"] == json!(true), || format!("cli: {out}"))?;
    ensure(out["points"] == json!([{"vertex": 0, "sign": 1, "coeff": "1"}]), || format!("cli: {out}"))?;
    Ok(format!("{} transverse pairs", pairs + 1))
}

fn bar_complex() -> Result<String, String> {
    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);
    let s3 = FiniteGroup::symmetric3();
    let reps = vec![
        ("Z/2 trivial", GroupRep::trivial(&z2, 1)),
        ("Z/2 sign", GroupRep::character(&z2, &[1, -1]).unwrap()),
        ("Z/3 trivial", GroupRep::trivial(&z3, 2)),
        ("Z/3 rotation", GroupRep::cyclic(3, &ExactMatrix::from_i64(&[&[0, -1], &[1, -1]])).unwrap()),
        ("S3 trivial", GroupRep::trivial(&s3, 1)),
        ("S3 sign", GroupRep::s3_sign()),
        ("S3 standard", GroupRep::s3_standard()),
    ];
    for (name, rep) in &reps {
        let bar = BarComplex::new(rep);
        for p in 1..4 {
            let dd = bar.boundary_matrix(p).unwrap().mul(&bar.boundary_matrix(p + 1).unwrap()).unwrap();
            ensure(dd.is_zero(), || format!("{name}: ∂{p}∂{} ≠ 0", p + 1))?;
        }
        for p in 1..=3 {
            ensure(bar.homology_dim(p).unwrap() == 0, || format!("{name}: H_{p} ≠ 0"))?;
        }
        let v: Vector = (0..rep.rank()).map(|i| q(i as i64 + 2)).collect();
        for g in 0..rep.group().order() {
            let d = bar_boundary(rep, &BarChain::term(vec![g], v.clone())).unwrap();
            let moved = rep.right_act(g, &v).unwrap();
            let expected: Vector = moved.iter().zip(&v).map(|(a, b)| a - b).collect();
            let got = d.terms.get(&vec![]).cloned().unwrap_or_else(|| vec![q(0); rep.rank()]);
            ensure(got == expected, || format!("{name}: ∂₁ on generator {g}"))?;
            let fixed = rep.act(g, &v).unwrap() == v;
            let accepted = decomposable_cycle(rep, g, &v).unwrap().is_ok();
            ensure(fixed == accepted, || format!("{name}: decomposable acceptance for {g}"))?;
        }
    }
    let cli = lococo(&["group-homology", "--group", "S3", "--rep", "standard"]).json();
    ensure(cli == json!({"order": 6, "rank": 2, "H0": 0, "H1": 0, "H2": 0, "H3": 0}), || format!("cli: {cli}"))?;
    Ok(format!("{} representations", reps.len()))
}

fn invariance() -> Result<String, String> {
    let mut total = 0;
    for (n, parts, k) in [(4, vec![1], 1), (4, vec![1, 1], 2), (6, vec![2, 1], 2)] {
        let space = QuadraticSpace::standard(n);
        let mu = Partition::new(parts).unwrap();
        let x = space.standard_frame(k);
        let tau = space.tau(&x, &mu).map_err(|e| e.to_string())?;
        ensure(!tau.is_zero(), || format!("τ_e vanishes for n={n} μ={mu}"))?;
        for seed in 0..20 {
            let g = sample_pointwise_stabilizer(&space, &x, seed).map_err(|e| e.to_string())?;
            ensure(x.iter().all(|v| &g.mul_vec(v).unwrap() == v), || format!("seed {seed} moves E_k"))?;
            ensure(space.invariance_check(&tau, &g).unwrap(), || format!("n={n} μ={mu} seed {seed}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} isometries"))
}

fn tuple_searches() -> Result<String, String> {
    let mut found = Vec::new();
    for n in 2..=6usize {
        let form = RationalQuadraticForm::new(n, 2).map_err(|e| e.to_string())?;
        for k in 1..=(n / 2).min(3) {
            for d in 0..=3 {
                for mu in partitions_of(d, k) {
                    let seed = 1000 + (100 * n + 10 * k + d) as u64;
                    let mut padded = mu.parts().to_vec();
                    padded.resize(n.div_ceil(2), 0);
                    let out = lococo(&[
                        "search", "complementary", "--n", &n.to_string(), "--k", &k.to_string(), "--mu",
                        &weight_arg(&padded), "--seed", &seed.to_string(),
                    ]);
                    ensure(out.code == 0, || format!("n={n} k={k} μ={mu}: {}", out.stderr.trim()))?;
                    let v = out.json();
                    ensure(v["verified"] == json!(true), || format!("n={n} k={k} μ={mu}: {v}"))?;
                    let tuple: Vec<Vector> = serde_json::from_value(v["tuple"].clone()).map_err(|e| e.to_string())?;
                    let x = standard_frame(&form, k);
                    let check = verify_complementary(&form, &x, &tuple, &mu).map_err(|e| e.to_string())?;
                    ensure(check.passed() && check.checks.len() == 3, || format!("re-verification n={n} k={k} μ={mu}"))?;
                    found.push(v["found_at_trial"].as_u64().unwrap_or(u64::MAX));
                }
            }
        }
    }
    let form = RationalQuadraticForm::new(5, 2).unwrap();
    let five = lococo(&["search", "complementary", "--n", "5", "--k", "2", "--mu", "1,1,1", "--seed", "1"]);
    ensure(five.code == 3, || format!("n=5 μ=(1,1,1) exit {}", five.code))?;
    let direct = lococo_core::geometry::complementary_tuple_search(
        &form,
        &standard_frame(&form, 2),
        &Partition::new(vec![1, 1, 1]).unwrap(),
        10_000,
        1,
    );
    ensure(matches!(direct, Err(GeometryError::Precondition(_))), || "n=5 not rejected".into())?;
    Ok(format!(
        "{} searches (seeds 1000+100n+10k+|μ|), latest witness at trial {}",
        found.len(),
        found.iter().max().unwrap()
    ))
}

fn torus_scaling() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut count = 0;
    for n in 3..=6usize {
        let space = QuadraticSpace::standard(n);
        let u = space.witt_basis(n).map_err(|e| e.to_string())?;
        let m = u.len() / 2;
        for w in dominant_weights(n, 3) {
            let tau = space.tau(&u, &w.partition()).map_err(|e| e.to_string())?;
            for _ in 0..10 {
                let t: Vec<ExactScalar> = (0..m)
                    .map(|_| {
                        let num = rng.random_range(1..=12) * if rng.random() { 1 } else { -1 };
                        ExactScalar::from_frac(num, rng.random_range(1..=12))
                    })
                    .collect();
                let g = space.torus_element(n, &t).map_err(|e| e.to_string())?;
                let weight = t.iter().zip(w.entries()).fold(ExactScalar::one(), |acc, (ti, &b)| &acc * &ti.pow(b));
                ensure(tau.act(&g) == tau.scale(&weight), || format!("n={n} μ={w}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} torus elements"))
}

fn main() {
    let criteria: [(&str, Check, u64); 10] = [
        ("range tables", ranges, 1),
        ("invariant pairing", invariant_pairing, 120),
        ("branching bound", branching, 1),
        ("twisted homology", twisted_homology, 60),
        ("duality and pairing", duality_and_pairing, 120),
        ("intersection oracle", intersection_oracle, 120),
        ("bar complex", bar_complex, 60),
        ("invariance", invariance, 60),
        ("tuple searches", tuple_searches, 300),
        ("torus-weight scaling", torus_scaling, 60),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*budget);
        let (status, detail) = match result {
            Ok(d) if !over => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {budget} s budget")),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name}: {detail} ({:.2} s / {budget} s)", i + 1, elapsed.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}

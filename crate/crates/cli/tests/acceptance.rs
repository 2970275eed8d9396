//! End-to-end acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! Values are checked against oracles written here from first principles (raw face
//! lists, vertex tuples, naive big-integer powers, brute force enumeration) rather than
//! against the library's own helpers.

#![allow(clippy::needless_range_loop)]

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use fillvol::affine::{AffineChain, AffineSimplex};
use fillvol::complex::{
    build_circle, build_genus_surface, build_grid_torus, build_klein_bottle, build_one_vertex_torus,
    fundamental_cycle, mapping_torus, prism_chain, CellChain, DeltaComplex, SimplicialAutomorphism,
};
use fillvol::fillvolume::{fv_lower, fv_report, fv_report_complex, fv_upper, length_axiom_probe, FvParams, Refine};
use fillvol::l1opt::{fill_ilp, fill_lp, FillProblem, IlpConfig, Objective};
use fillvol::linalg::{IntMatrix, Mat2};
use fillvol::rational::{format_rat, int_rat, rat};
use fillvol::torus::{power_test, torsion_row, trace_power, word_filling};
use fillvol::{Chain, CoeffMode, Error, Int, Rat};
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------------------------------
// oracles

/// `∂` of a chain computed directly from the face lists.
fn raw_boundary(x: &DeltaComplex, k: usize, c: &BTreeMap<usize, Rat>) -> BTreeMap<usize, Rat> {
    let mut out: BTreeMap<usize, Rat> = BTreeMap::new();
    if k == 0 {
        return out;
    }
    for (&cell, v) in c {
        for (i, &f) in x.cells()[k][cell].iter().enumerate() {
            let s = if i % 2 == 0 { v.clone() } else { -v.clone() };
            *out.entry(f).or_insert_with(Rat::zero) += s;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn to_map(c: &CellChain) -> BTreeMap<usize, Rat> {
    c.iter().map(|(&k, v)| (k, v.clone())).collect()
}

fn dd_zero(x: &DeltaComplex) -> bool {
    (2..=x.dimension()).all(|k| {
        (0..x.num_cells(k)).all(|cell| {
            let one = BTreeMap::from([(cell, Rat::one())]);
            raw_boundary(x, k - 1, &raw_boundary(x, k, &one)).is_empty()
        })
    })
}

type Point = (Rat, Rat);

/// An affine simplex as its vertex tuple, translated so the first vertex lies in `[0,1)²`.
fn vertex_key(vs: &[Point]) -> Vec<Point> {
    let (fx, fy) = (vs[0].0.floor(), vs[0].1.floor());
    vs.iter().map(|(x, y)| (x - &fx, y - &fy)).collect()
}

fn vertices_of(s: &AffineSimplex) -> Vec<Point> {
    s.vertices().into_iter().map(|[x, y]| (x, y)).collect()
}

type VertexChain = BTreeMap<Vec<Point>, Rat>;

fn add_to(c: &mut VertexChain, key: Vec<Point>, v: Rat) {
    let e = c.entry(key).or_insert_with(Rat::zero);
    *e += v;
    if e.is_zero() {
        let k: Vec<Point> = c.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
        c.remove(&k);
    }
}

fn vertex_chain(c: &AffineChain) -> VertexChain {
    let mut out = VertexChain::new();
    for (s, v) in c.iter() {
        add_to(&mut out, vertex_key(&vertices_of(s)), v.clone());
    }
    out
}

fn vertex_boundary(c: &VertexChain) -> VertexChain {
    let mut out = VertexChain::new();
    for (vs, v) in c {
        for i in 0..vs.len() {
            let mut face = vs.clone();
            face.remove(i);
            let s = if i % 2 == 0 { v.clone() } else { -v.clone() };
            add_to(&mut out, vertex_key(&face), s);
        }
    }
    out
}

fn vertex_linear(a: &[[i64; 2]; 2], c: &VertexChain) -> VertexChain {
    let mut out = VertexChain::new();
    for (vs, v) in c {
        let image: Vec<Point> = vs
            .iter()
            .map(|(x, y)| {
                (
                    x * int_rat(a[0][0]) + y * int_rat(a[0][1]),
                    x * int_rat(a[1][0]) + y * int_rat(a[1][1]),
                )
            })
            .collect();
        add_to(&mut out, vertex_key(&image), v.clone());
    }
    out
}

fn big_pow(a: [[i64; 2]; 2], m: u64) -> [[BigInt; 2]; 2] {
    let mut r = [[BigInt::one(), BigInt::zero()], [BigInt::zero(), BigInt::one()]];
    for _ in 0..m {
        let n = [
            [
                &r[0][0] * a[0][0] + &r[0][1] * a[1][0],
                &r[0][0] * a[0][1] + &r[0][1] * a[1][1],
            ],
            [
                &r[1][0] * a[0][0] + &r[1][1] * a[1][0],
                &r[1][0] * a[0][1] + &r[1][1] * a[1][1],
            ],
        ];
        r = n;
    }
    r
}

/// `T^v ≥ 2^{12·m·u}` for `q = u/v`, by plain big-integer powers.
fn naive_power_test(t: &BigInt, m: u64, q: &Rat) -> bool {
    let u = q.numer().to_u64().unwrap();
    let v = q.denom().to_u64().unwrap();
    Pow::pow(t, v) >= Pow::pow(BigInt::from(2), 12 * m * u)
}

/// Minimum ℓ¹ norm of an integral `v` with `Av = b` and every `|v_j| ≤ 3`, by meet in the
/// middle over the two halves of the columns.
fn brute_force_box(a: &[Vec<i64>], b: &[i64]) -> Option<i64> {
    let n = a[0].len();
    let half = n / 2;
    let enumerate = |cols: std::ops::Range<usize>| {
        let mut best: HashMap<Vec<i64>, i64> = HashMap::new();
        let len = cols.len();
        let mut v = vec![-3i64; len];
        loop {
            let image: Vec<i64> = a
                .iter()
                .map(|row| cols.clone().zip(&v).map(|(j, x)| row[j] * x).sum())
                .collect();
            let norm: i64 = v.iter().map(|x| x.abs()).sum();
            let e = best.entry(image).or_insert(i64::MAX);
            *e = (*e).min(norm);
            let mut i = 0;
            loop {
                if i == len {
                    return best;
                }
                v[i] += 1;
                if v[i] <= 3 {
                    break;
                }
                v[i] = -3;
                i += 1;
            }
        }
    };
    let left = enumerate(0..half);
    let right = enumerate(half..n);
    left.iter()
        .filter_map(|(img, nl)| {
            let rest: Vec<i64> = b.iter().zip(img).map(|(b, x)| b - x).collect();
            right.get(&rest).map(|nr| nl + nr)
        })
        .min()
}

fn problem(a: &[Vec<i64>], b: &[i64], mode: CoeffMode) -> FillProblem {
    let rows: Vec<&[i64]> = a.iter().map(|r| r.as_slice()).collect();
    FillProblem::new(
        IntMatrix::from_i64_rows(&rows),
        b.iter().map(|&v| int_rat(v)).collect(),
        mode,
        Objective::L1,
    )
    .unwrap()
}

fn mat_vec(a: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    a.iter().map(|r| r.iter().zip(x).map(|(u, v)| u * v).sum()).collect()
}

// ---------------------------------------------------------------------------------------
// shared fixtures

fn surfaces() -> Vec<(String, DeltaComplex)> {
    let mut v = vec![("one-vertex torus".to_string(), build_one_vertex_torus())];
    for q in 1..=4 {
        v.push((format!("grid torus {q}"), build_grid_torus(q)));
    }
    for g in 1..=3 {
        v.push((format!("genus {g}"), build_genus_surface(g)));
    }
    v.push(("Klein bottle".into(), build_klein_bottle()));
    v
}

fn mapping_tori() -> Vec<(String, DeltaComplex)> {
    let mut out = Vec::new();
    let x = build_one_vertex_torus();
    out.push(("T(id)".into(), mapping_torus(&x, &SimplicialAutomorphism::identity(&x)).unwrap()));
    let grid = [
        (2, Mat2::new(-1, 0, 0, -1), [0, 0]),
        (3, Mat2::new(0, -1, 1, -1), [0, 0]),
        (2, Mat2::new(1, -1, 1, 0), [1, 0]),
        (3, Mat2::identity(), [1, 2]),
        (1, Mat2::new(0, -1, 1, -1), [0, 0]),
    ];
    for (q, a, shift) in grid {
        let (x, phi) = SimplicialAutomorphism::grid_affine(q, &a, shift).unwrap();
        out.push((format!("T({a} on grid {q})"), mapping_torus(&x, &phi).unwrap()));
    }
    for (q, shift) in [(3, 1), (4, 3)] {
        let (x, phi) = SimplicialAutomorphism::circle_affine(q, 1, shift).unwrap();
        out.push((format!("T(rotation of circle {q})"), mapping_torus(&x, &phi).unwrap()));
    }
    out
}

// ---------------------------------------------------------------------------------------
// criteria

fn chain_complex_soundness() -> Check {
    let mut all = surfaces();
    all.push(("circle 3".into(), build_circle(3)));
    all.push(("circle 1".into(), build_circle(1)));
    all.extend(mapping_tori());
    for (name, x) in &all {
        ensure!(dd_zero(x), "∂∂ ≠ 0 on {name}");
        let p = fillvol::complex::Prism::product(x);
        ensure!(dd_zero(&p.complex), "∂∂ ≠ 0 on {name} × I");
        // the library's boundary matrices agree with the face lists
        for k in 1..=x.dimension() {
            let d = x.boundary_matrix(k);
            for j in 0..x.num_cells(k) {
                let col = raw_boundary(x, k, &BTreeMap::from([(j, Rat::one())]));
                for i in 0..x.num_cells(k - 1) {
                    let want = col.get(&i).cloned().unwrap_or_else(Rat::zero);
                    ensure!(int_rat(d.get(i, j).clone()) == want, "{name}: ∂_{k} entry ({i},{j})");
                }
            }
        }
    }
    Ok(format!("{} complexes and their products", all.len()))
}

fn fundamental_cycles() -> Check {
    let mut cases: Vec<(String, DeltaComplex, i64)> = vec![("one-vertex torus".into(), build_one_vertex_torus(), 2)];
    for q in 1..=4i64 {
        cases.push((format!("grid {q}"), build_grid_torus(q as usize), 2 * q * q));
    }
    for g in 1..=3i64 {
        cases.push((format!("genus {g}"), build_genus_surface(g as usize), 4 * g - 2));
    }
    for (name, x, norm) in &cases {
        let z = fundamental_cycle(x).map_err(|e| format!("{name}: {e}"))?;
        ensure!(z.l1_norm() == int_rat(*norm), "{name}: norm {} ≠ {norm}", format_rat(&z.l1_norm()));
        let top = x.dimension();
        ensure!(z.degree() == top && z.len() == x.num_cells(top), "{name}: not supported on every top cell");
        ensure!(z.iter().all(|(_, v)| v.abs() == Rat::one()), "{name}: coefficient other than ±1");
        ensure!(raw_boundary(x, top, &to_map(&z)).is_empty(), "{name}: ∂z ≠ 0");
    }
    match fundamental_cycle(&build_klein_bottle()) {
        Err(Error::NonOrientable) => {}
        other => return Err(format!("Klein bottle gave {other:?}")),
    }
    Ok("norms 2, 2q², 4g−2; Klein bottle NonOrientable".into())
}

fn torsion_formula() -> Check {
    // tr(Aᵐ) − 2 for the cat map, as listed for m = 1..10
    const LISTED: [i64; 10] = [1, 5, 16, 45, 121, 320, 841, 2205, 5776, 15125];
    let a = Mat2::new(2, 1, 1, 1);
    for (i, &want) in LISTED.iter().enumerate() {
        let m = i as u64 + 1;
        let p = big_pow([[2, 1], [1, 1]], m);
        let trace = &p[0][0] + &p[1][1];
        let one = BigInt::one();
        let det: BigInt = ((&p[0][0] - &one) * (&p[1][1] - &one) - &p[0][1] * &p[1][0]).abs();
        ensure!(trace.clone() - 2 == BigInt::from(want), "oracle trace at m={m}");
        ensure!(det == BigInt::from(want), "oracle det at m={m}");
        let row = torsion_row(&a, m).map_err(|e| e.to_string())?;
        ensure!(row.trace_minus_two == Some(Int::from(want)), "tr−2 at m={m}: {:?}", row.trace_minus_two);
        ensure!(row.det_abs == Int::from(want), "|det| by SNF at m={m}: {}", row.det_abs);
        ensure!(row.matches == Some(true), "mismatch flag at m={m}");
        let order: Int = row.torsion.iter().product();
        ensure!(order == Int::from(want), "torsion subgroup order at m={m}");
    }
    Ok("1, 5, 16, 45, 121, 320, 841, 2205, 5776, 15125".into())
}

fn word_filling_identity() -> Check {
    let a = Mat2::new(2, 1, 1, 1);
    for m in 1..=20u64 {
        let f = word_filling(&a, m).map_err(|e| e.to_string())?;
        let c = vertex_chain(&f.chain);
        let z = vertex_chain(&f.cycle);
        let am = big_pow([[2, 1], [1, 1]], m);
        let am = [
            [am[0][0].to_i64().unwrap(), am[0][1].to_i64().unwrap()],
            [am[1][0].to_i64().unwrap(), am[1][1].to_i64().unwrap()],
        ];
        let mut target = vertex_linear(&am, &z);
        for (k, v) in &z {
            add_to(&mut target, k.clone(), -v.clone());
        }
        ensure!(vertex_boundary(&c) == target, "∂c ≠ Aᵐz − z at m={m}");
        ensure!(vertex_boundary(&z).is_empty(), "z is not a cycle");
        ensure!(f.chain.l1_norm() == int_rat(2 * m as i64), "‖c_{m}‖₁ = {}", format_rat(&f.chain.l1_norm()));
        ensure!(f.bound == f.chain.l1_norm(), "reported bound differs from the chain norm");
    }
    Ok("m = 1..20, ‖c_m‖₁ = 2m".into())
}

fn certified_interval() -> Check {
    let a = Mat2::new(2, 1, 1, 1);
    let params = FvParams {
        m_max: 100,
        ..FvParams::default()
    };
    let r = fv_report(&a, CoeffMode::Z, &params).map_err(|e| e.to_string())?;
    let upper = r.upper.clone().ok_or("no upper bound")?;
    ensure!(r.lower >= rat(1, 10), "lower {} < 1/10", format_rat(&r.lower));
    ensure!(upper <= int_rat(2), "upper {} > 2", format_rat(&upper));
    let j = r.to_json();
    for row in j["rows"].as_array().unwrap() {
        let Some(cert) = row.get("certificate") else { continue };
        let m = cert["m"].as_u64().unwrap();
        let q = fillvol::rational::parse_rat(cert["q"].as_str().unwrap()).unwrap();
        let t: BigInt = cert["trace_minus_two"].as_str().unwrap().parse().unwrap();
        let p = big_pow([[2, 1], [1, 1]], m);
        ensure!(t == &p[0][0] + &p[1][1] - 2, "certificate trace at m={m}");
        ensure!(naive_power_test(&t, m, &q), "certificate q={} fails at m={m}", format_rat(&q));
        ensure!(cert["test"] == "pass", "certificate not marked pass at m={m}");
    }
    // the headline certificate: (tr A¹⁰⁰ − 2)¹⁰ ≥ 2¹²⁰⁰
    let p = big_pow([[2, 1], [1, 1]], 100);
    let t100 = &p[0][0] + &p[1][1] - 2;
    ensure!(naive_power_test(&t100, 100, &rat(1, 10)), "1/10 not certified at m=100");
    ensure!(power_test(&t100, 100, &rat(1, 10)), "library power test rejects 1/10 at m=100");
    let row100 = r.rows.iter().find(|row| row.m == 100).ok_or("no row for m=100")?;
    ensure!(row100.lower.clone().unwrap() >= rat(1, 10), "m=100 certificate below 1/10");
    Ok(format!("interval {}", r.interval_string()))
}

struct Instance {
    a: Vec<Vec<i64>>,
    b: Vec<i64>,
}

fn random_instance(rng: &mut ChaCha8Rng, rows: usize, cols: usize, range: i64) -> Instance {
    let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-range..=range)).collect()).collect();
    let x: Vec<i64> = (0..cols).map(|_| rng.gen_range(-2..=2)).collect();
    let b = mat_vec(&a, &x);
    Instance { a, b }
}

fn graph_instance(rng: &mut ChaCha8Rng) -> Instance {
    let v = rng.gen_range(3..=7);
    let e = rng.gen_range(v..=12);
    let mut a = vec![vec![0i64; e]; v];
    for j in 0..e {
        let s = rng.gen_range(0..v);
        let t = (s + rng.gen_range(1..v)) % v;
        a[s][j] -= 1;
        a[t][j] += 1;
    }
    let x: Vec<i64> = (0..e).map(|_| rng.gen_range(-3..=3)).collect();
    let b = mat_vec(&a, &x);
    Instance { a, b }
}

/// Fill instances taken from boundaries on the model surfaces, all with at most 12 columns.
fn complex_instances(rng: &mut ChaCha8Rng) -> Vec<Instance> {
    let mut out = Vec::new();
    let models = [
        build_circle(3),
        build_circle(5),
        build_one_vertex_torus(),
        build_grid_torus(2),
        build_genus_surface(2),
        build_genus_surface(3),
        build_klein_bottle(),
    ];
    for x in &models {
        for k in 1..=x.dimension() {
            let n = x.num_cells(k);
            if n > 12 {
                continue;
            }
            let d = x.boundary_matrix(k);
            let a: Vec<Vec<i64>> = (0..d.rows()).map(|i| d.row(i).iter().map(|v| v.to_i64().unwrap()).collect()).collect();
            for _ in 0..3 {
                let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
                out.push(Instance { b: mat_vec(&a, &c), a: a.clone() });
            }
        }
    }
    out
}

/// LP and ILP values of every instance run in both modes, shared with mode dominance.
fn lp_ilp_correctness(pairs: &mut Vec<(Rat, Rat)>) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let cfg = IlpConfig::default();
    let mut small = complex_instances(&mut rng);
    for i in 0..40 {
        let cols = 3 + i % 10;
        let rows = rng.gen_range(1..=3);
        small.push(random_instance(&mut rng, rows, cols, 2));
    }
    let mut equal_in_box = 0;
    for (idx, inst) in small.iter().enumerate() {
        let ilp = fill_ilp(&problem(&inst.a, &inst.b, CoeffMode::Z), &cfg).map_err(|e| format!("instance {idx}: {e}"))?;
        let lp = fill_lp(&problem(&inst.a, &inst.b, CoeffMode::Q)).map_err(|e| format!("instance {idx}: {e}"))?;
        pairs.push((lp.value.clone(), ilp.value.clone()));
        let witness: Vec<i64> = ilp.witness.iter().map(|v| v.to_integer().to_i64().unwrap()).collect();
        ensure!(mat_vec(&inst.a, &witness) == inst.b, "instance {idx}: ILP witness infeasible");
        let brute = brute_force_box(&inst.a, &inst.b);
        let in_box = witness.iter().all(|v| v.abs() <= 3);
        match brute {
            Some(bv) => {
                ensure!(ilp.value <= int_rat(bv), "instance {idx}: ILP {} above brute force {bv}", format_rat(&ilp.value));
                if in_box {
                    ensure!(ilp.value == int_rat(bv), "instance {idx}: ILP {} ≠ brute force {bv}", format_rat(&ilp.value));
                    equal_in_box += 1;
                }
            }
            None => ensure!(!in_box, "instance {idx}: brute force missed a feasible box point"),
        }
    }
    for idx in 0..200 {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(2..=8);
        let inst = random_instance(&mut rng, rows, cols, 3);
        let lp = fill_lp(&problem(&inst.a, &inst.b, CoeffMode::Q)).map_err(|e| format!("random {idx}: {e}"))?;
        let ilp = fill_ilp(&problem(&inst.a, &inst.b, CoeffMode::Z), &cfg).map_err(|e| format!("random {idx}: {e}"))?;
        ensure!(lp.value <= ilp.value, "random {idx}: LP {} > ILP {}", format_rat(&lp.value), format_rat(&ilp.value));
        pairs.push((lp.value, ilp.value));
    }
    for idx in 0..50 {
        let inst = graph_instance(&mut rng);
        let lp = fill_lp(&problem(&inst.a, &inst.b, CoeffMode::Q)).map_err(|e| format!("graph {idx}: {e}"))?;
        let ilp = fill_ilp(&problem(&inst.a, &inst.b, CoeffMode::Z), &cfg).map_err(|e| format!("graph {idx}: {e}"))?;
        ensure!(lp.value == ilp.value, "graph {idx}: LP {} ≠ ILP {}", format_rat(&lp.value), format_rat(&ilp.value));
        pairs.push((lp.value, ilp.value));
    }
    Ok(format!(
        "{} small instances ({equal_in_box} matched by brute force), 200 random, 50 graph",
        small.len()
    ))
}

/// A closed edge walk: a random walk followed by a shortest path back to the start.
fn random_loop(x: &DeltaComplex, rng: &mut ChaCha8Rng, steps: usize) -> CellChain {
    let nv = x.num_cells(0);
    let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); nv];
    for (e, f) in x.cells()[1].iter().enumerate() {
        // edge e runs from f[1] to f[0]
        adj[f[1]].push((f[0], e, 1));
        adj[f[0]].push((f[1], e, -1));
    }
    let start = rng.gen_range(0..nv);
    let mut at = start;
    let mut c = CellChain::zero(1, CoeffMode::Z);
    for _ in 0..steps {
        let (to, e, s) = adj[at][rng.gen_range(0..adj[at].len())];
        c.add_int_term(e, s);
        at = to;
    }
    // breadth-first path back
    let mut prev: Vec<Option<(usize, usize, i64)>> = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[at] = true;
    let mut queue = VecDeque::from([at]);
    while let Some(u) = queue.pop_front() {
        for &(w, e, s) in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((u, e, s));
                queue.push_back(w);
            }
        }
    }
    let mut cur = start;
    let mut back = Vec::new();
    while cur != at {
        let (u, e, s) = prev[cur].unwrap();
        back.push((e, s));
        cur = u;
    }
    for (e, s) in back {
        c.add_int_term(e, s);
    }
    c
}

fn random_chain(x: &DeltaComplex, k: usize, rng: &mut ChaCha8Rng) -> CellChain {
    let mut c = CellChain::zero(k, CoeffMode::Z);
    for _ in 0..rng.gen_range(1..=6) {
        c.add_int_term(rng.gen_range(0..x.num_cells(k)), rng.gen_range(-3..=3));
    }
    c
}

fn prism_operator() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for (name, x) in surfaces() {
        let fundamental = fundamental_cycle(&x).ok();
        for i in 0..100 {
            let k = i % 3;
            let z = match k {
                0 => random_chain(&x, 0, &mut rng),
                1 => {
                    let steps = rng.gen_range(1..=8);
                    random_loop(&x, &mut rng, steps)
                }
                _ => match &fundamental {
                    Some(f) => f.scale(&int_rat(rng.gen_range(-3..=3i64))).unwrap(),
                    None => random_chain(&x, 2, &mut rng),
                },
            };
            let zmap = to_map(&z);
            let (p, w) = prism_chain(&x, &z).map_err(|e| format!("{name}: {e}"))?;
            let dw = raw_boundary(&p.complex, k + 1, &to_map(&w));
            let mut want = to_map(&p.top(&z));
            for (c, v) in to_map(&p.bottom(&z)) {
                *want.entry(c).or_insert_with(Rat::zero) -= v;
            }
            let dz = raw_boundary(&x, k, &zmap);
            if !dz.is_empty() {
                // general chains: ∂w = i₁z − i₀z − P(∂z)
                let dz_chain = Chain::from_terms(k - 1, CoeffMode::Z, dz).unwrap();
                for (c, v) in to_map(&p.prism_operator(&dz_chain)) {
                    *want.entry(c).or_insert_with(Rat::zero) -= v;
                }
            }
            want.retain(|_, v| !v.is_zero());
            ensure!(dw == want, "{name}: prism identity fails for {z:?}");
            ensure!(
                w.l1_norm() <= int_rat(k as i64 + 1) * z.l1_norm(),
                "{name}: ‖w‖₁ = {} > ({}+1)·{}",
                format_rat(&w.l1_norm()),
                k,
                format_rat(&z.l1_norm())
            );
            checked += 1;
        }
    }
    Ok(format!("{checked} chains on {} surfaces", surfaces().len()))
}

fn random_conjugator(rng: &mut ChaCha8Rng) -> Mat2 {
    let gens = [Mat2::r(), Mat2::l(), Mat2::new(1, -1, 0, 1), Mat2::new(1, 0, -1, 1)];
    (0..rng.gen_range(1..=8)).fold(Mat2::identity(), |m, _| m.mul(&gens[rng.gen_range(0..4)]))
}

fn length_function_shadows() -> Check {
    let a = Mat2::new(2, 1, 1, 1);
    let params = FvParams {
        m_max: 12,
        ..FvParams::default()
    };
    let base = fv_report(&a, CoeffMode::Z, &params).map_err(|e| e.to_string())?;
    let base_upper = base.upper.clone().unwrap();
    for k in 1..=4u64 {
        let ak = a.pow(k);
        let rep = fv_report(&ak, CoeffMode::Z, &params).map_err(|e| e.to_string())?;
        ensure!(rep.upper.clone().unwrap() <= int_rat(k) * &base_upper, "upper(A^{k}) > {k}·upper(A)");
        for m in 1..=5u64 {
            let wk = fv_upper(&ak, CoeffMode::Z, &[m], &params).map_err(|e| e.to_string())?;
            let w1 = fv_upper(&a, CoeffMode::Z, &[k * m], &params).map_err(|e| e.to_string())?;
            ensure!(wk[0].bound == w1[0].bound, "word bound of A^{k} at {m} ≠ A at {}", k * m);
        }
        for m in 1..=10u64 {
            let t = trace_power(&ak, m);
            ensure!(t == trace_power(&a, k * m), "tr((A^{k})^{m}) ≠ tr(A^{})", k * m);
            let rk = torsion_row(&ak, m).unwrap();
            let r1 = torsion_row(&a, k * m).unwrap();
            ensure!((rk.trace_minus_two, rk.det_abs) == (r1.trace_minus_two, r1.det_abs), "torsion rows differ");
            let qk = fv_lower(&ak, &[m], 1000).unwrap()[0].q.clone().unwrap();
            let q1 = fv_lower(&a, &[k * m], 1000).unwrap()[0].q.clone().unwrap();
            let tm2 = t - 2;
            // a certificate for A at km scales to one for A^k at m and back
            ensure!(power_test(&tm2, m, &(&q1 * int_rat(k))), "k·q(A, km) not certified for A^{k} at {m}");
            ensure!(power_test(&tm2, k * m, &(&qk / int_rat(k))), "q(A^{k}, m)/k not certified for A at {}", k * m);
            ensure!(qk >= &q1 * int_rat(k), "q(A^{k}, {m}) < k·q(A, {})", k * m);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in 0..20 {
        let c = random_conjugator(&mut rng);
        let b = a.conjugate_by(&c).unwrap();
        for m in 1..=10 {
            let (rb, ra) = (torsion_row(&b, m).unwrap(), torsion_row(&a, m).unwrap());
            ensure!((rb.trace_minus_two, rb.det_abs) == (ra.trace_minus_two, ra.det_abs), "conjugate {i}: torsion table");
        }
        let rep = fv_report(&b, CoeffMode::Z, &params).map_err(|e| e.to_string())?;
        ensure!(
            rep.interval_string() == base.interval_string(),
            "conjugate {i} by {c}: {} vs {}",
            rep.interval_string(),
            base.interval_string()
        );
    }
    let probe = length_axiom_probe(&a, 4, 8, 20, 5).map_err(|e| e.to_string())?;
    ensure!(probe.iter().all(|r| r.pass), "probe row failed: {:?}", probe.iter().find(|r| !r.pass));
    Ok(format!("k ≤ 4, 20 conjugates, interval {}", base.interval_string()))
}

fn finite_order_vanishing() -> Check {
    let params = FvParams::default();
    for a in [
        Mat2::new(0, -1, 1, 0),
        Mat2::new(0, -1, 1, -1),
        Mat2::new(1, -1, 1, 0),
        Mat2::new(-1, 0, 0, -1),
        Mat2::identity(),
    ] {
        let r = fv_report(&a, CoeffMode::Z, &params).map_err(|e| e.to_string())?;
        ensure!(r.interval_string() == "[0, 0]", "{a}: {}", r.interval_string());
        let r = fv_report(&a, CoeffMode::Q, &params).map_err(|e| e.to_string())?;
        ensure!(r.interval_string() == "[0, 0]", "{a} real mode: {}", r.interval_string());
    }
    let mut autos = vec![{
        let x = build_genus_surface(2);
        ("identity on genus 2".to_string(), SimplicialAutomorphism::identity(&x), x)
    }];
    for (q, a) in [(3, Mat2::new(0, -1, 1, -1)), (2, Mat2::new(-1, 0, 0, -1)), (2, Mat2::new(1, -1, 1, 0))] {
        let (x, phi) = SimplicialAutomorphism::grid_affine(q, &a, [0, 0]).unwrap();
        autos.push((format!("{a} on grid {q}"), phi, x));
    }
    let (x, phi) = SimplicialAutomorphism::circle_affine(5, 1, 2).unwrap();
    autos.push(("rotation of circle 5".into(), phi, x));
    for (name, phi, x) in &autos {
        let r = fv_report_complex(name, x, phi, CoeffMode::Z, &params).map_err(|e| e.to_string())?;
        ensure!(r.interval_string() == "[0, 0]", "{name}: {}", r.interval_string());
    }
    Ok(format!("5 elliptic or central matrices, {} simplicial automorphisms", autos.len()))
}

fn mode_dominance(pairs: &[(Rat, Rat)]) -> Check {
    ensure!(!pairs.is_empty(), "no instances recorded");
    for (i, (lp, ilp)) in pairs.iter().enumerate() {
        ensure!(lp <= ilp, "instance {i}: LP {} > ILP {}", format_rat(lp), format_rat(ilp));
    }
    let mut reports = 0;
    for a in [
        Mat2::new(2, 1, 1, 1),
        Mat2::new(3, 2, 1, 1),
        Mat2::new(5, 2, 2, 1),
        Mat2::new(1, 2, 0, 1),
        Mat2::new(-2, -1, -1, -1),
        Mat2::new(0, -1, 1, 0),
    ] {
        let params = FvParams {
            m_max: 20,
            ..FvParams::default()
        };
        let z = fv_report(&a, CoeffMode::Z, &params).map_err(|e| e.to_string())?;
        let q = fv_report(&a, CoeffMode::Q, &params).map_err(|e| e.to_string())?;
        if let Some(zu) = &z.upper {
            let qu = q.upper.clone().ok_or(format!("{a}: real mode lost its upper bound"))?;
            ensure!(&qu <= zu, "{a}: real upper {} > integral upper {}", format_rat(&qu), format_rat(zu));
        }
        ensure!(q.lower <= z.lower, "{a}: real lower above integral lower");
        reports += 1;
    }
    // dictionary refinement restricted to the word support, in both modes
    let a = Mat2::new(2, 1, 1, 1);
    let refined = |refine, mode| {
        let params = FvParams {
            m_max: 2,
            refine,
            dict_r: 0,
            refine_m_max: 2,
            ..FvParams::default()
        };
        fv_report(&a, mode, &params).map(|r| r.upper.unwrap())
    };
    let zu = refined(Refine::Ilp, CoeffMode::Z).map_err(|e| e.to_string())?;
    let qu = refined(Refine::Lp, CoeffMode::Q).map_err(|e| e.to_string())?;
    ensure!(qu <= zu, "refined real upper {} > refined integral upper {}", format_rat(&qu), format_rat(&zu));
    Ok(format!("{} LP/ILP pairs, {reports} report pairs, refined {} ≤ {}", pairs.len(), format_rat(&qu), format_rat(&zu)))
}

fn determinism() -> Check {
    let args = ["fv", "--matrix", "2,1,1,1", "--mode", "z", "--m-max", "50", "--format", "json"];
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_fillvol"))
            .args(args)
            .env_remove("FILLVOL_NODE_LIMIT")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    ensure!(a.status.success() && b.status.success(), "fv exited with failure");
    ensure!(a.stdout == b.stdout, "fv outputs differ");
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    ensure!(v["config"]["args"]["m_max"] == 50, "run configuration not embedded");
    ensure!(v["version"].is_string(), "version not embedded");
    let params = FvParams {
        m_max: 50,
        ..FvParams::default()
    };
    let m = Mat2::new(2, 1, 1, 1);
    let x = fv_report(&m, CoeffMode::Z, &params).unwrap().to_json().to_string();
    let y = fv_report(&m, CoeffMode::Z, &params).unwrap().to_json().to_string();
    ensure!(x == y, "library reports differ");
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn main() {
    let mut pairs = Vec::new();
    type Criterion<'a> = (&'a str, Duration, Box<dyn FnOnce() -> Check + 'a>);
    let pairs_ref = &mut pairs;
    let first: Vec<Criterion> = vec![
        ("chain-complex soundness", Duration::from_secs(10), Box::new(chain_complex_soundness)),
        ("fundamental cycles", Duration::from_secs(10), Box::new(fundamental_cycles)),
        ("torsion formula", Duration::from_secs(1), Box::new(torsion_formula)),
        ("word-filling identity", Duration::from_secs(30), Box::new(word_filling_identity)),
        ("certified FV interval", Duration::from_secs(60), Box::new(certified_interval)),
        ("LP/ILP correctness", Duration::from_secs(300), Box::new(move || lp_ilp_correctness(pairs_ref))),
        ("prism operator", Duration::from_secs(60), Box::new(prism_operator)),
        ("length-function shadows", Duration::from_secs(120), Box::new(length_function_shadows)),
        ("finite-order vanishing", Duration::from_secs(60), Box::new(finite_order_vanishing)),
    ];
    let mut failed = 0;
    let mut index = 0;
    let mut report = |name: &str, limit: Duration, f: Box<dyn FnOnce() -> Check + '_>| {
        index += 1;
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > limit => Err(format!("{detail}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match &outcome {
            Ok(detail) => println!("criterion {index:>2} {name}: PASS ({elapsed:.2?}) {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {index:>2} {name}: FAIL ({elapsed:.2?}) {why}");
            }
        }
    };
    for (name, limit, f) in first {
        report(name, limit, f);
    }
    let pairs_done = pairs;
    report("mode dominance", Duration::from_secs(120), Box::new(|| mode_dominance(&pairs_done)));
    report("determinism", Duration::from_secs(60), Box::new(determinism));
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

use std::fmt::Write as _;
use std::path::Path;

use fillvol::complex::{
    build_circle, build_genus_surface, build_grid_torus, build_klein_bottle, build_one_vertex_torus,
    fundamental_cycle, mapping_torus, parse_chain_expr, CellChain, ChainJson, ComplexJson, DeltaComplex,
    SimplicialAutomorphism,
};
use fillvol::fillvolume::{fv_report, length_axiom_probe, FvParams};
use fillvol::l1opt::{
    fill as solve_fill, fill_ilp, fill_lp, min_cycle_in_class, ubc_probe, weightless_min_support, FillProblem,
    FillSolution, IlpConfig, Objective, ProblemJson, SolutionJson,
};
use fillvol::linalg::{homology, homology_all, Mat2};
use fillvol::rational::{format_rat, Rat};
use fillvol::torus::torsion_row;
use fillvol::{CoeffMode, Error, Result};
use serde_json::{json, Value};

use crate::output::Report;
use crate::{BuildArgs, ComplexCmd, CycleArgs, FillArgs, FillCmd, FvArgs, ObjectiveArg, ProbeArgs, TorsionArgs};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// Loads a complex from a bare interchange document or from the `result` of a previous run.
fn load_complex(path: &Path) -> Result<DeltaComplex> {
    let v: Value = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()))?;
    let v = match v.get("result") {
        Some(inner) => inner.clone(),
        None => v,
    };
    serde_json::from_value::<ComplexJson>(v)
        .map_err(|e| Error::Parse(e.to_string()))?
        .into_complex()
}

fn load_problem(path: &Path) -> Result<FillProblem> {
    ProblemJson::parse(&read(path)?)
}

/// `2 t0 - t3 + e1`, using labels and `#k.i` for unlabelled cells.
fn chain_expr(x: &DeltaComplex, c: &CellChain) -> String {
    let mut out = String::new();
    for (i, (&cell, v)) in c.iter().enumerate() {
        let name = x
            .label(c.degree(), cell)
            .map(str::to_string)
            .unwrap_or_else(|| format!("#{}.{cell}", c.degree()));
        let neg = v < &Rat::from_integer(0.into());
        let abs = if neg { -v.clone() } else { v.clone() };
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        if abs != Rat::from_integer(1.into()) {
            write!(out, "{}*", format_rat(&abs)).expect("writing to a string");
        }
        out.push_str(&name);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn parse_pair(s: &str) -> Result<[i64; 2]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => Ok([
            a.parse().map_err(|_| Error::Parse(format!("bad shift {s:?}")))?,
            b.parse().map_err(|_| Error::Parse(format!("bad shift {s:?}")))?,
        ]),
        _ => Err(Error::Parse(format!("expected x,y, got {s:?}"))),
    }
}

fn build(a: &BuildArgs) -> Result<(String, DeltaComplex)> {
    if let (Some(q), Some(m)) = (a.grid_torus, &a.monodromy) {
        let mat = Mat2::parse(m)?;
        let (x, phi) = SimplicialAutomorphism::grid_affine(q, &mat, parse_pair(&a.shift)?)?;
        return Ok((format!("mapping torus of {m} on grid {q}"), mapping_torus(&x, &phi)?));
    }
    let positive = |n: usize, what: &str| {
        if n == 0 {
            Err(Error::InvalidComplex(format!("{what} must be positive")))
        } else {
            Ok(n)
        }
    };
    Ok(if let Some(g) = a.genus {
        (format!("genus {g} surface"), build_genus_surface(positive(g, "genus")?))
    } else if let Some(q) = a.grid_torus {
        (format!("grid torus {q}"), build_grid_torus(positive(q, "grid size")?))
    } else if let Some(q) = a.circle {
        (format!("circle {q}"), build_circle(positive(q, "circle size")?))
    } else if a.klein_bottle {
        ("Klein bottle".into(), build_klein_bottle())
    } else {
        ("one-vertex torus".into(), build_one_vertex_torus())
    })
}

pub fn complex(cmd: &ComplexCmd) -> Result<Report> {
    match cmd {
        ComplexCmd::Build(a) => {
            let (name, x) = build(a)?;
            let body = serde_json::to_value(ComplexJson::from_complex(&x)).expect("complex serializes");
            let text = ComplexJson::render(&x);
            let counts = x.cell_counts();
            Ok(Report::new(body, text).with_csv(format!(
                "name,dimension,cells\n{name},{},{}\n",
                x.dimension(),
                counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            )))
        }
        ComplexCmd::Validate(a) => {
            let x = load_complex(&a.input)?;
            let r = x.validate();
            let mut text = format!(
                "complex: {}\nclosed pseudo-manifold: {}\ncells: {:?}\neuler characteristic: {}\n",
                r.is_complex,
                r.is_closed_pseudo_manifold,
                x.cell_counts(),
                x.euler_characteristic()
            );
            for f in &r.failures {
                writeln!(text, "failure: {f}").expect("writing to a string");
            }
            let mut body = serde_json::to_value(&r).expect("report serializes");
            body["cells"] = json!(x.cell_counts());
            body["euler_characteristic"] = json!(x.euler_characteristic());
            Ok(Report::new(body, text))
        }
        ComplexCmd::Homology(a) => {
            let x = load_complex(&a.input)?;
            match a.degree {
                Some(k) => {
                    let h = homology(&x, k);
                    let body = serde_json::to_value(&h).expect("homology serializes");
                    let mut body = body;
                    body["group"] = json!(h.to_string());
                    Ok(Report::new(body, h.to_string()))
                }
                None => {
                    let hs = homology_all(&x);
                    let text: String = hs.iter().map(|h| format!("H{} = {h}\n", h.degree)).collect();
                    let csv: String = std::iter::once("degree,betti,torsion,group\n".to_string())
                        .chain(hs.iter().map(|h| {
                            let tors: Vec<String> = h.torsion.iter().map(|t| t.to_string()).collect();
                            format!("{},{},{},{}\n", h.degree, h.betti, tors.join(" "), h)
                        }))
                        .collect();
                    let groups: Vec<Value> = hs
                        .iter()
                        .map(|h| {
                            let mut v = serde_json::to_value(h).expect("homology serializes");
                            v["group"] = json!(h.to_string());
                            v
                        })
                        .collect();
                    Ok(Report::new(json!({ "groups": groups }), text).with_csv(csv))
                }
            }
        }
        ComplexCmd::FundamentalCycle(a) => {
            let x = load_complex(&a.input)?;
            let z = fundamental_cycle(&x)?;
            let norm = format_rat(&z.l1_norm());
            let body = json!({
                "chain": ChainJson::from_chain(&z),
                "expression": chain_expr(&x, &z),
                "norm": norm,
            });
            let text = format!("{}\nnorm {norm}", chain_expr(&x, &z));
            Ok(Report::new(body, text))
        }
    }
}

fn solution_report(s: &FillSolution, x: Option<&DeltaComplex>, degree: usize) -> Report {
    let mut body = serde_json::to_value(SolutionJson::from_solution(s)).expect("solution serializes");
    let mut text = format_rat(&s.value);
    if let Some(x) = x {
        let witness = x.vec_to_chain(degree + 1, s.mode, &s.witness);
        body["witness_expression"] = json!(chain_expr(x, &witness));
        if let Some(cyc) = &s.cycle {
            let cycle = x.vec_to_chain(degree, s.mode, cyc);
            body["cycle_expression"] = json!(chain_expr(x, &cycle));
            write!(text, "\ncycle {}", chain_expr(x, &cycle)).expect("writing to a string");
        }
    }
    Report::new(body, text)
}

fn objective(o: ObjectiveArg) -> Objective {
    match o {
        ObjectiveArg::L1 => Objective::L1,
        ObjectiveArg::Support => Objective::Support,
    }
}

fn fill_instance(a: &FillArgs, mode: CoeffMode) -> Result<(FillProblem, Option<(DeltaComplex, usize)>)> {
    if let Some(path) = &a.problem {
        let mut p = load_problem(path)?;
        p.mode = mode;
        p.objective = objective(a.objective);
        return Ok((p, None));
    }
    let path = a.complex.as_ref().expect("clap requires --complex or --problem");
    let x = load_complex(path)?;
    let expr = a
        .target
        .as_deref()
        .ok_or_else(|| Error::Parse("--target is required with --complex".into()))?;
    let b = parse_chain_expr(&x, expr, a.degree, mode)?;
    let degree = b.degree();
    let p = FillProblem::for_chain(&x, &b, objective(a.objective))?;
    Ok((FillProblem { mode, ..p }, Some((x, degree))))
}

fn cycle_instance(a: &CycleArgs) -> Result<(DeltaComplex, CellChain)> {
    let x = load_complex(&a.complex)?;
    let z = parse_chain_expr(&x, &a.cycle, 0, a.mode)?;
    if !x.boundary(&z).is_zero() {
        return Err(Error::Parse(format!("{:?} is not a cycle", a.cycle)));
    }
    Ok((x, z))
}

pub fn fill(cmd: &FillCmd, node_limit: usize) -> Result<Report> {
    let cfg = IlpConfig { node_limit };
    match cmd {
        FillCmd::Lp(a) | FillCmd::Ilp(a) => {
            let mode = if matches!(cmd, FillCmd::Lp(_)) { CoeffMode::Q } else { CoeffMode::Z };
            let (p, x) = fill_instance(a, mode)?;
            let s = match (mode, p.objective) {
                (CoeffMode::Q, Objective::L1) => fill_lp(&p)?,
                (CoeffMode::Z, Objective::L1) => fill_ilp(&p, &cfg)?,
                _ => solve_fill(&p, &cfg)?,
            };
            Ok(match &x {
                Some((x, k)) => solution_report(&s, Some(x), *k),
                None => solution_report(&s, None, 0),
            })
        }
        FillCmd::MinCycle(a) | FillCmd::Weightless(a) => {
            let (x, z) = cycle_instance(a)?;
            let k = z.degree();
            let zv = x.chain_to_vec(&z)?;
            let d = x.boundary_matrix(k + 1);
            let s = if matches!(cmd, FillCmd::MinCycle(_)) {
                min_cycle_in_class(&zv, &d, a.mode, &cfg)?
            } else {
                weightless_min_support(&zv, &d, &cfg)?
            };
            Ok(solution_report(&s, Some(&x), k))
        }
        FillCmd::UbcProbe(a) => {
            let x = load_complex(&a.complex)?;
            let r = ubc_probe(&x, a.degree, a.samples, a.seed, a.mode, &cfg)?;
            let max = r.max_ratio.as_ref().map(format_rat);
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|s| {
                    json!({
                        "boundary_norm": format_rat(&s.boundary_norm),
                        "fill": format_rat(&s.fill),
                        "ratio": format_rat(&s.ratio),
                    })
                })
                .collect();
            let mut csv = String::from("sample,boundary_norm,fill,ratio\n");
            for (i, s) in r.rows.iter().enumerate() {
                writeln!(
                    csv,
                    "{i},{},{},{}",
                    format_rat(&s.boundary_norm),
                    format_rat(&s.fill),
                    format_rat(&s.ratio)
                )
                .expect("writing to a string");
            }
            let body = json!({
                "degree": r.degree,
                "seed": r.seed,
                "mode": r.mode,
                "samples": rows,
                "skipped_zero": r.skipped_zero,
                "max_ratio": max,
            });
            let text = format!(
                "max ratio {} over {} samples ({} zero boundaries skipped)",
                max.as_deref().unwrap_or("none"),
                r.rows.len(),
                r.skipped_zero
            );
            Ok(Report::new(body, text).with_csv(csv))
        }
    }
}

pub fn fv(a: &FvArgs, node_limit: usize) -> Result<Report> {
    let m = Mat2::parse(&a.matrix)?;
    let params = FvParams {
        m_max: a.m_max,
        refine: a.refine,
        dict_q: a.dict_q,
        dict_r: a.dict_r,
        refine_m_max: a.refine_m_max,
        node_limit,
        denominator_limit: a.denominator_limit,
    };
    let r = fv_report(&m, a.mode, &params)?;
    let mut text = format!("interval {}\n", r.interval_string());
    for note in &r.notes {
        writeln!(text, "note: {note}").expect("writing to a string");
    }
    text.push_str("m\tupper\tlower\n");
    for row in &r.rows {
        let f = |x: &Option<Rat>| x.as_ref().map(format_rat).unwrap_or_else(|| "-".into());
        writeln!(text, "{}\t{}\t{}", row.m, f(&row.upper), f(&row.lower)).expect("writing to a string");
    }
    Ok(Report::new(r.to_json(), text).with_csv(r.to_csv()))
}

pub fn torsion(a: &TorsionArgs) -> Result<Report> {
    let m = Mat2::parse(&a.matrix)?;
    let mut rows = Vec::new();
    let mut text = String::from("m\ttr-2\t|det(A^m-I)|\tmatch\n");
    let mut csv = String::from("m,trace_minus_two,det_abs,match\n");
    for k in 1..=a.m_max {
        let r = torsion_row(&m, k)?;
        let t = r.trace_minus_two.as_ref().map(|t| t.to_string());
        let flag = match r.matches {
            Some(true) => "match",
            Some(false) => "MISMATCH",
            None => "TraceTooSmall",
        };
        writeln!(text, "{k}\t{}\t{}\t{flag}", t.as_deref().unwrap_or("-"), r.det_abs).expect("writing to a string");
        writeln!(csv, "{k},{},{},{flag}", t.as_deref().unwrap_or(""), r.det_abs).expect("writing to a string");
        rows.push(json!({
            "m": k,
            "trace": r.trace.to_string(),
            "trace_minus_two": t,
            "det_abs": r.det_abs.to_string(),
            "torsion": r.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "match": flag,
        }));
    }
    Ok(Report::new(json!({ "matrix": m, "rows": rows }), text).with_csv(csv))
}

pub fn probe(a: &ProbeArgs) -> Result<Report> {
    let m = Mat2::parse(&a.matrix)?;
    let rows = length_axiom_probe(&m, a.k_max, a.m_max, a.conjugates, a.seed)?;
    let all = rows.iter().all(|r| r.pass);
    let mut text = String::new();
    let mut csv = String::from("check,pass,detail\n");
    for r in &rows {
        writeln!(text, "{} {} {}", if r.pass { "pass" } else { "FAIL" }, r.check, r.detail).expect("writing to a string");
        writeln!(csv, "{:?},{},{:?}", r.check, r.pass, r.detail).expect("writing to a string");
    }
    let body = json!({
        "matrix": m,
        "pass": all,
        "rows": rows.iter().map(|r| json!({ "check": r.check, "pass": r.pass, "detail": r.detail })).collect::<Vec<_>>(),
    });
    Ok(Report::new(body, text).with_csv(csv))
}

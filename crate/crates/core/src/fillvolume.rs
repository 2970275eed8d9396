//! Certified intervals for filling volumes of mapping classes.
//!
//! Upper bounds come from explicit fillings: `FV = inf_m fill(m)/m`, so every
//! `bound(m) ≥ fill(m)` gives `FV ≤ bound(m)/m`. Lower bounds for torus classes come from
//! torsion growth through the integer power test in [`crate::torus::power_test`]; the
//! real-coefficient lower bound is always reported as 0.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::affine::{build_dictionary, Dictionary, DictionaryParams};
use crate::chain::CoeffMode;
use crate::complex::{fundamental_cycle, DeltaComplex, SimplicialAutomorphism};
use crate::error::{Error, Result};
use crate::l1opt::{fill, FillProblem, IlpConfig, Objective};
use crate::linalg::Mat2;
use crate::rational::{format_rat, int_rat, Int, Rat};
use crate::torus::{classify, power_test, rl_word, trace_power, word_filling, Classification, MappingClass2T};

pub const DEFAULT_DENOMINATOR_LIMIT: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Refine {
    /// Flip-word fillings only.
    Word,
    /// Integral optimum over a dictionary containing the word filling's support.
    Ilp,
    /// Rational optimum over the same dictionary (real coefficients only).
    Lp,
}

impl std::str::FromStr for Refine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "word" => Ok(Refine::Word),
            "ilp" => Ok(Refine::Ilp),
            "lp" => Ok(Refine::Lp),
            _ => Err(Error::Parse(format!("unknown refinement {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FvParams {
    pub m_max: u64,
    pub refine: Refine,
    /// Dictionary grid for `ilp`/`lp` refinement; `dict_r = 0` restricts the search to the
    /// simplices of the word filling itself.
    pub dict_q: usize,
    pub dict_r: usize,
    /// Refinement is only attempted for `m` up to this value.
    pub refine_m_max: u64,
    pub node_limit: usize,
    pub denominator_limit: u64,
}

impl Default for FvParams {
    fn default() -> Self {
        FvParams {
            m_max: 20,
            refine: Refine::Word,
            dict_q: 1,
            dict_r: 1,
            refine_m_max: 2,
            node_limit: crate::l1opt::DEFAULT_NODE_LIMIT,
            denominator_limit: DEFAULT_DENOMINATOR_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperRow {
    pub m: u64,
    /// Norm of an explicit filling of `fᵐ_#(z) − z`, if one was produced.
    pub bound: Option<Rat>,
    pub source: &'static str,
}

/// Upper evidence for a torus class: `bound(m)` for each requested `m`.
pub fn fv_upper(a: &Mat2, mode: CoeffMode, m_list: &[u64], params: &FvParams) -> Result<Vec<UpperRow>> {
    a.check_sl2()?;
    if params.refine == Refine::Lp && mode == CoeffMode::Z {
        return Err(Error::CoefficientMode("LP refinement bounds only the real filling norm".into()));
    }
    let mut rows = Vec::with_capacity(m_list.len());
    for &m in m_list {
        if a.pow(m).is_identity() {
            rows.push(UpperRow {
                m,
                bound: Some(Rat::zero()),
                source: "identity",
            });
            continue;
        }
        let filling = match word_filling(a, m) {
            Ok(f) => f,
            Err(Error::NoFilling(_)) => {
                rows.push(UpperRow { m, bound: None, source: "none" });
                continue;
            }
            Err(e) => return Err(e),
        };
        let mut row = UpperRow {
            m,
            bound: Some(filling.bound.clone()),
            source: "word",
        };
        if params.refine != Refine::Word && m <= params.refine_m_max {
            let refined = refine_bound(a, &filling, mode, params)?;
            if refined < filling.bound {
                row.bound = Some(refined);
                row.source = if params.refine == Refine::Ilp { "ilp" } else { "lp" };
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

fn refine_bound(a: &Mat2, filling: &crate::torus::WordFilling, mode: CoeffMode, params: &FvParams) -> Result<Rat> {
    let support = filling.chain.keys().cloned();
    let dict = if params.dict_r == 0 {
        Dictionary::from_simplices(DictionaryParams::new(params.dict_q, 0, 3), support)
    } else {
        build_dictionary(&DictionaryParams::new(params.dict_q, params.dict_r, 3))?.extended(support)
    };
    let target = filling.target(a);
    let b = dict
        .rows_from_chain(&target)
        .expect("every target simplex is a face of the word filling");
    let solve_mode = match params.refine {
        Refine::Lp => CoeffMode::Q,
        _ => mode,
    };
    let p = FillProblem::new(dict.boundary_matrix(), b, solve_mode, Objective::L1)?;
    let cfg = IlpConfig {
        node_limit: params.node_limit,
    };
    Ok(fill(&p, &cfg)?.value)
}

/// Upper evidence for a simplicial automorphism: `φᵐ_# z = z` gives the zero filling; the
/// finite model has no cells of higher degree, so no other filling exists there.
pub fn fv_upper_complex(x: &DeltaComplex, phi: &SimplicialAutomorphism, m_list: &[u64]) -> Result<Vec<UpperRow>> {
    phi.check(x)?;
    let z = fundamental_cycle(x)?;
    Ok(m_list
        .iter()
        .map(|&m| {
            let fixed = phi.pow(m as usize).apply_chain(&z) == z;
            UpperRow {
                m,
                bound: fixed.then(Rat::zero),
                source: if fixed { "identity" } else { "none" },
            }
        })
        .collect())
}

/// Largest `q` with denominator at most `limit` for which `pass(q)` holds, assuming `pass`
/// is downward closed on `q ≥ 0`. Walks the Stern–Brocot tree with galloping run lengths.
pub fn largest_passing(limit: u64, pass: impl Fn(&Rat) -> bool) -> Rat {
    let (mut lo_p, mut lo_q) = (Int::zero(), Int::one());
    let (mut hi_p, mut hi_q) = (Int::one(), Int::zero());
    let lim = Int::from(limit);
    let frac = |p: &Int, q: &Int| Rat::new(p.clone(), q.clone());
    loop {
        // advance lo towards hi while mediants pass
        let k_lo = gallop(|k| {
            let q = &lo_q + &hi_q * k;
            q <= lim && pass(&frac(&(&lo_p + &hi_p * k), &q))
        });
        lo_p += &hi_p * &k_lo;
        lo_q += &hi_q * &k_lo;
        let k_hi = gallop(|k| {
            let q = &hi_q + &lo_q * k;
            q <= lim && !pass(&frac(&(&hi_p + &lo_p * k), &q))
        });
        hi_p += &lo_p * &k_hi;
        hi_q += &lo_q * &k_hi;
        if k_lo.is_zero() && k_hi.is_zero() {
            return frac(&lo_p, &lo_q);
        }
    }
}

/// Largest `k ≥ 0` with `ok(k)` for a predicate that holds on an initial segment.
fn gallop(ok: impl Fn(&Int) -> bool) -> Int {
    if !ok(&Int::one()) {
        return Int::zero();
    }
    let mut good = Int::one();
    let mut step = Int::from(2);
    while ok(&step) {
        good = step.clone();
        step *= 2;
    }
    // ok(good), !ok(step)
    while &step - &good > Int::one() {
        let mid: Int = (&good + &step) / 2;
        if ok(&mid) {
            good = mid;
        } else {
            step = mid;
        }
    }
    good
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerRow {
    pub m: u64,
    pub trace_minus_two: Option<Int>,
    /// Largest certified `q` on the denominator grid at this `m`.
    pub q: Option<Rat>,
}

/// Certified lower bounds for `FV_ℤ` of a torus class, one per `m`; the best is the maximum.
pub fn fv_lower(a: &Mat2, m_list: &[u64], denominator_limit: u64) -> Result<Vec<LowerRow>> {
    a.check_sl2()?;
    let anosov = matches!(classify(a)?.class, Classification::Anosov { .. });
    Ok(m_list
        .iter()
        .map(|&m| {
            let t = trace_power(a, m);
            if !anosov || t <= Int::from(2) {
                return LowerRow {
                    m,
                    trace_minus_two: None,
                    q: None,
                };
            }
            let tm2 = t - Int::from(2);
            let q = largest_passing(denominator_limit, |q| power_test(&tm2, m, q));
            LowerRow {
                m,
                trace_minus_two: Some(tm2),
                q: Some(q),
            }
        })
        .collect())
}

pub fn best_lower(rows: &[LowerRow]) -> Rat {
    rows.iter().filter_map(|r| r.q.clone()).max().unwrap_or_else(Rat::zero)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassDescriptor {
    Torus(MappingClass2T),
    Complex { name: String, order: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvidenceRow {
    pub m: u64,
    pub upper: Option<Rat>,
    pub upper_source: &'static str,
    pub lower: Option<Rat>,
    pub trace_minus_two: Option<Int>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FvReport {
    pub class: ClassDescriptor,
    pub mode: CoeffMode,
    pub params: FvParams,
    pub rows: Vec<EvidenceRow>,
    pub lower: Rat,
    /// `None` when no filling was found for any `m`.
    pub upper: Option<Rat>,
    pub notes: Vec<String>,
}

fn m_list(m_max: u64, extra: Option<u64>) -> Vec<u64> {
    let mut v: Vec<u64> = (1..=m_max).collect();
    if let Some(o) = extra {
        if o > m_max {
            v.push(o);
        }
    }
    v
}

fn summary_upper(rows: &[EvidenceRow]) -> Option<Rat> {
    rows.iter()
        .filter_map(|r| r.upper.as_ref().map(|b| b / int_rat(r.m)))
        .min()
}

/// Report for a torus class `A ∈ SL₂(ℤ)`.
pub fn fv_report(a: &Mat2, mode: CoeffMode, params: &FvParams) -> Result<FvReport> {
    let class = classify(a)?;
    let order = class.finite_order().map(u64::from);
    let ms = m_list(params.m_max, order);
    let upper_rows = fv_upper(a, mode, &ms, params)?;
    let mut notes = Vec::new();
    let lower_rows = match mode {
        CoeffMode::Z => fv_lower(a, &ms, params.denominator_limit)?,
        CoeffMode::Q => {
            notes.push("real lower bound fixed at 0: torsion certificates bound only the integral norm".into());
            ms.iter()
                .map(|&m| LowerRow {
                    m,
                    trace_minus_two: None,
                    q: None,
                })
                .collect()
        }
    };
    if let Classification::Parabolic = class.class {
        notes.push("parabolic class: interval [0, word bound], vanishing is not claimed".into());
    }
    if a.trace().is_negative() && !matches!(class.class, Classification::Elliptic { .. }) {
        notes.push("negative trace: fillings use the word of A², odd m carry no upper evidence".into());
    }
    let rows: Vec<EvidenceRow> = upper_rows
        .into_iter()
        .zip(lower_rows)
        .map(|(u, l)| EvidenceRow {
            m: u.m,
            upper: u.bound,
            upper_source: u.source,
            lower: l.q,
            trace_minus_two: l.trace_minus_two,
        })
        .collect();
    let lower = rows.iter().filter_map(|r| r.lower.clone()).max().unwrap_or_else(Rat::zero);
    let upper = summary_upper(&rows);
    if let Some(u) = &upper {
        assert!(&lower <= u, "certified lower bound exceeds an explicit filling");
    }
    Ok(FvReport {
        class: ClassDescriptor::Torus(class),
        mode,
        params: params.clone(),
        rows,
        lower,
        upper,
        notes,
    })
}

/// Report for a simplicial automorphism of a closed orientable Δ-complex.
pub fn fv_report_complex(
    name: &str,
    x: &DeltaComplex,
    phi: &SimplicialAutomorphism,
    mode: CoeffMode,
    params: &FvParams,
) -> Result<FvReport> {
    let order = phi.order();
    let ms = m_list(params.m_max, Some(order as u64));
    let rows: Vec<EvidenceRow> = fv_upper_complex(x, phi, &ms)?
        .into_iter()
        .map(|u| EvidenceRow {
            m: u.m,
            upper: u.bound,
            upper_source: u.source,
            lower: None,
            trace_minus_two: None,
        })
        .collect();
    Ok(FvReport {
        class: ClassDescriptor::Complex {
            name: name.to_string(),
            order,
        },
        mode,
        params: params.clone(),
        upper: summary_upper(&rows),
        lower: Rat::zero(),
        rows,
        notes: vec!["simplicial automorphisms carry no torsion certificate; lower bound 0".into()],
    })
}

fn opt(r: &Option<Rat>) -> serde_json::Value {
    match r {
        Some(r) => serde_json::Value::String(format_rat(r)),
        None => serde_json::Value::Null,
    }
}

impl FvReport {
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut row = serde_json::json!({
                    "m": r.m,
                    "upper": opt(&r.upper),
                    "upper_per_m": opt(&r.upper.as_ref().map(|b| b / int_rat(r.m))),
                    "upper_source": r.upper_source,
                    "lower": opt(&r.lower),
                });
                if let (Some(t), Some(q)) = (&r.trace_minus_two, &r.lower) {
                    row["certificate"] = serde_json::json!({
                        "m": r.m,
                        "q": format_rat(q),
                        "trace_minus_two": t.to_string(),
                        "test": if power_test(t, r.m, q) { "pass" } else { "fail" },
                    });
                }
                row
            })
            .collect();
        serde_json::json!({
            "class": self.class,
            "mode": self.mode,
            "params": self.params,
            "interval": {
                "lower": format_rat(&self.lower),
                "upper": opt(&self.upper),
            },
            "rows": rows,
            "notes": self.notes,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,upper,lower\n");
        for r in &self.rows {
            let f = |x: &Option<Rat>| x.as_ref().map(format_rat).unwrap_or_default();
            writeln!(out, "{},{},{}", r.m, f(&r.upper), f(&r.lower)).expect("writing to a string");
        }
        out
    }

    /// `[lower, upper]` with `∞` for a missing upper bound.
    pub fn interval_string(&self) -> String {
        format!(
            "[{}, {}]",
            format_rat(&self.lower),
            self.upper.as_ref().map(format_rat).unwrap_or_else(|| "inf".into())
        )
    }
}

/// A finite prefix `a₁, …, a_M` of a sequence expected to be subadditive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubadditiveSeq {
    pub values: Vec<Rat>,
    pub provenance: Vec<String>,
}

impl SubadditiveSeq {
    pub fn new(values: Vec<Rat>) -> Self {
        let provenance = vec![String::new(); values.len()];
        SubadditiveSeq { values, provenance }
    }

    /// First pair `(i, j)` (1-based, `i ≤ j`) with `a_{i+j} > a_i + a_j`.
    pub fn check(&self) -> Result<()> {
        let n = self.values.len();
        for s in 2..=n {
            for i in 1..=s / 2 {
                let j = s - i;
                if self.values[s - 1] > &self.values[i - 1] + &self.values[j - 1] {
                    return Err(Error::NotSubadditive(i, j));
                }
            }
        }
        Ok(())
    }
}

/// `min_m a_m/m` over the prefix, with the minimising `m`; an upper bound for `lim a_m/m`.
pub fn fekete_inf(s: &SubadditiveSeq) -> Result<(Rat, usize)> {
    s.check()?;
    s.values
        .iter()
        .enumerate()
        .map(|(i, a)| (a / int_rat(i as u64 + 1), i + 1))
        .min_by(|x, y| x.0.cmp(&y.0).then(x.1.cmp(&y.1)))
        .ok_or_else(|| Error::Parse("empty sequence".into()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeRow {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

fn random_sl2(rng: &mut ChaCha8Rng, len: usize) -> Mat2 {
    (0..len).fold(Mat2::identity(), |m, _| {
        let g = match rng.gen_range(0..4) {
            0 => Mat2::r(),
            1 => Mat2::l(),
            2 => Mat2::new(1, -1, 0, 1),
            _ => Mat2::new(1, 0, -1, 1),
        };
        m.mul(&g)
    })
}

/// Consistency table for the length-function properties of filling volume: homogeneity on
/// powers (word concatenation and the trace identity `tr((Aᵏ)ᵐ) = tr(A^{km})`) and
/// invariance under conjugation.
pub fn length_axiom_probe(a: &Mat2, k_max: u64, m_max: u64, conjugates: usize, seed: u64) -> Result<Vec<ProbeRow>> {
    let params = FvParams {
        m_max,
        ..FvParams::default()
    };
    let base = fv_report(a, CoeffMode::Z, &params)?;
    let word = rl_word(a)?;
    let mut rows = Vec::new();
    let base_upper = base.upper.clone().ok_or_else(|| Error::NoFilling("no upper bound for A".into()))?;
    for k in 1..=k_max {
        let ak = a.pow(k);
        let rep = fv_report(&ak, CoeffMode::Z, &params)?;
        let upper_k = rep.upper.clone().ok_or_else(|| Error::NoFilling("no upper bound for A^k".into()))?;
        rows.push(ProbeRow {
            check: format!("upper(A^{k}) <= {k}*upper(A)"),
            pass: upper_k <= int_rat(k) * &base_upper,
            detail: format!("{} vs {}", format_rat(&upper_k), format_rat(&(int_rat(k) * &base_upper))),
        });
        let wk = rl_word(&ak)?;
        let mut repeated = word.clone();
        repeated.letters = word.letters.iter().cycle().take(word.len() * k as usize).copied().collect();
        rows.push(ProbeRow {
            check: format!("word(A^{k}) ~ word(A)^{k}"),
            pass: wk.squared == word.squared && wk.cyclically_equal(&repeated),
            detail: wk.exponent_form(),
        });
        let mut traces_ok = true;
        let mut certs_ok = true;
        for m in 1..=m_max {
            let t_k = trace_power(&ak, m);
            let t = trace_power(a, k * m);
            traces_ok &= t_k == t;
            if t > Int::from(2) {
                let tm2 = t - Int::from(2);
                let q_a = largest_passing(params.denominator_limit, |q| power_test(&tm2, k * m, q));
                let scaled = &q_a * int_rat(k);
                certs_ok &= power_test(&tm2, m, &scaled);
            }
        }
        rows.push(ProbeRow {
            check: format!("tr((A^{k})^m) = tr(A^({k}m)), m <= {m_max}"),
            pass: traces_ok,
            detail: String::new(),
        });
        rows.push(ProbeRow {
            check: format!("certificate for A^{k} at m covers {k} x certificate for A at {k}m"),
            pass: certs_ok,
            detail: String::new(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..conjugates {
        let c = random_sl2(&mut rng, 6);
        let b = a.conjugate_by(&c)?;
        let same_traces = (1..=m_max).all(|m| trace_power(&b, m) == trace_power(a, m));
        let wb = rl_word(&b)?;
        let rep = fv_report(&b, CoeffMode::Z, &params)?;
        rows.push(ProbeRow {
            check: format!("conjugate #{i} by {c}"),
            pass: same_traces && wb.cyclically_equal(&word) && rep.lower == base.lower && rep.upper == base.upper,
            detail: format!("{} {}", wb.exponent_form(), rep.interval_string()),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::build_genus_surface;
    use crate::rational::rat;

    #[test]
    fn stern_brocot_search() {
        let target = rat(355, 113);
        assert_eq!(largest_passing(1000, |q| q <= &target), target);
        assert_eq!(largest_passing(100, |q| q <= &target), rat(311, 99));
        assert_eq!(largest_passing(1000, |q| q.is_zero()), Rat::zero());
        assert_eq!(largest_passing(10, |q| q <= &rat(3, 1)), rat(3, 1));
    }

    #[test]
    fn cat_map_report() {
        let params = FvParams {
            m_max: 100,
            ..FvParams::default()
        };
        let r = fv_report(&Mat2::new(2, 1, 1, 1), CoeffMode::Z, &params).unwrap();
        assert!(r.lower >= rat(1, 10));
        assert!(r.upper.clone().unwrap() <= int_rat(2));
        let j = r.to_json();
        assert_eq!(j["interval"]["upper"], "2");
    }

    #[test]
    fn finite_order_vanishes() {
        for a in [Mat2::new(0, -1, 1, 0), Mat2::new(0, -1, 1, -1), Mat2::identity()] {
            let r = fv_report(&a, CoeffMode::Z, &FvParams::default()).unwrap();
            assert_eq!((r.lower.clone(), r.upper.clone()), (Rat::zero(), Some(Rat::zero())));
        }
        let x = build_genus_surface(2);
        let r = fv_report_complex("genus-2", &x, &SimplicialAutomorphism::identity(&x), CoeffMode::Z, &FvParams::default()).unwrap();
        assert_eq!(r.interval_string(), "[0, 0]");
    }

    #[test]
    fn fekete() {
        let s = SubadditiveSeq::new((1..=5).map(int_rat).collect());
        assert_eq!(fekete_inf(&s).unwrap().0, int_rat(1));
        let s = SubadditiveSeq::new((1..=6).map(|m| int_rat(m + 1)).collect());
        assert_eq!(fekete_inf(&s).unwrap(), (rat(7, 6), 6));
        let s = SubadditiveSeq::new(vec![int_rat(1), int_rat(3)]);
        assert_eq!(fekete_inf(&s), Err(Error::NotSubadditive(1, 1)));
    }

    #[test]
    fn probe() {
        let rows = length_axiom_probe(&Mat2::new(2, 1, 1, 1), 2, 6, 2, 1).unwrap();
        assert!(rows.iter().all(|r| r.pass), "{rows:?}");
    }

    #[test]
    fn refined_bounds_do_not_exceed_word_bounds() {
        let a = Mat2::new(2, 1, 1, 1);
        let params = FvParams {
            m_max: 1,
            refine: Refine::Lp,
            dict_r: 0,
            refine_m_max: 1,
            ..FvParams::default()
        };
        let lp = fv_upper(&a, CoeffMode::Q, &[1], &params).unwrap();
        assert!(lp[0].bound.clone().unwrap() <= int_rat(2));
        assert!(fv_upper(&a, CoeffMode::Z, &[1], &params).is_err());
        let ilp = FvParams {
            refine: Refine::Ilp,
            ..params
        };
        let z = fv_upper(&a, CoeffMode::Z, &[1, 2], &ilp).unwrap();
        assert!(z[0].bound.clone().unwrap() <= int_rat(2));
        assert!(z[1].bound.clone().unwrap() <= int_rat(4));
    }
}

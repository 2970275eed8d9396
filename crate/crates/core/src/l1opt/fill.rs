use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ilp::{solve_ilp, IlpConfig};
use super::problem::{L1Problem, Objective};
use crate::chain::CoeffMode;
use crate::complex::{CellChain, DeltaComplex};
use crate::error::{Budget, Error, Result};
use crate::linalg::{solve_integer, IntMatrix};
use crate::rational::{int_rat, Int, Rat};

/// `min ‖c‖₁` (or support of `c`) subject to `∂c = b` over the chosen coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillProblem {
    pub boundary: IntMatrix,
    pub target: Vec<Rat>,
    pub mode: CoeffMode,
    pub objective: Objective,
}

impl FillProblem {
    pub fn new(boundary: IntMatrix, target: Vec<Rat>, mode: CoeffMode, objective: Objective) -> Result<Self> {
        if boundary.rows() != target.len() {
            return Err(Error::DegreeMismatch {
                expected: boundary.rows(),
                found: target.len(),
            });
        }
        Ok(FillProblem {
            boundary,
            target,
            mode,
            objective,
        })
    }

    /// Filling problem for a cellular `k`-chain by `(k+1)`-cells of `x`.
    pub fn for_chain(x: &DeltaComplex, b: &CellChain, objective: Objective) -> Result<Self> {
        let target = x.chain_to_vec(b)?;
        FillProblem::new(x.boundary_matrix(b.degree() + 1), target, b.mode(), objective)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FillSolution {
    pub mode: CoeffMode,
    pub objective: Objective,
    pub value: Rat,
    /// Coefficients over the candidate columns, with `A·witness = b` exactly.
    pub witness: Vec<Rat>,
    /// For homology-class problems: the optimal representative `z + ∂c`.
    pub cycle: Option<Vec<Rat>>,
    /// LP dual `y` with `|A_jᵀy| ≤ w_j` and `b·y = value`.
    pub dual: Option<Vec<Rat>>,
    /// Proven lower bound; equal to `value` for every returned solution.
    pub bound: Rat,
    pub nodes: usize,
}

fn solve_l1(p: &L1Problem, mode: CoeffMode, objective: Objective, cfg: &IlpConfig) -> Result<FillSolution> {
    p.check_feasible(mode)?;
    match (objective, mode) {
        (Objective::L1, CoeffMode::Q) => {
            let rel = p.relax(&[]).ok_or(Error::Infeasible)?;
            Ok(FillSolution {
                mode,
                objective,
                bound: rel.value.clone(),
                value: rel.value,
                witness: rel.v,
                cycle: None,
                dual: Some(rel.dual),
                nodes: 1,
            })
        }
        (Objective::L1, CoeffMode::Z) => {
            let r = solve_ilp(p, cfg)?;
            Ok(FillSolution {
                mode,
                objective,
                value: r.value,
                witness: r.v.into_iter().map(int_rat).collect(),
                cycle: None,
                dual: None,
                bound: r.bound,
                nodes: r.nodes,
            })
        }
        (Objective::Support, _) => min_support(p, mode, cfg),
    }
}

/// A point of `{v : A_S v = b}` restricted to `cols`, if one exists.
fn restricted_point(p: &L1Problem, cols: &[usize], mode: CoeffMode) -> Option<Vec<Rat>> {
    let sub = p.a.select_cols(cols);
    let local: Vec<Rat> = match mode {
        CoeffMode::Z => solve_integer(&sub, &p.integral_target()?)?.into_iter().map(int_rat).collect(),
        CoeffMode::Q => {
            let weights = cols.iter().map(|&j| p.weighted[j]).collect();
            L1Problem::new(sub, p.b.clone(), weights).ok()?.relax(&[])?.v
        }
    };
    let mut v = vec![Rat::zero(); p.cols()];
    for (k, &j) in cols.iter().enumerate() {
        v[j] = local[k].clone();
    }
    Some(v)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for t in i + 1..k {
                c[t] = c[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimal number of weighted columns in a solution, by increasing support size; each
/// candidate support is tested exactly (lattice solvability over ℤ, LP feasibility over ℚ).
fn min_support(p: &L1Problem, mode: CoeffMode, cfg: &IlpConfig) -> Result<FillSolution> {
    let weighted: Vec<usize> = (0..p.cols()).filter(|&j| p.weighted[j]).collect();
    let free: Vec<usize> = (0..p.cols()).filter(|&j| !p.weighted[j]).collect();
    let all: Vec<usize> = (0..p.cols()).collect();
    let start = restricted_point(p, &all, mode).ok_or(Error::Infeasible)?;
    let upper = p.support(&start);
    let mut nodes = 0;
    for size in 0..upper {
        let mut comb: Vec<usize> = (0..size).collect();
        loop {
            if nodes >= cfg.node_limit {
                return Err(Error::BudgetExceeded(Box::new(Budget {
                    nodes,
                    lower: int_rat(size),
                    upper: Some(int_rat(upper)),
                })));
            }
            nodes += 1;
            let mut cols: Vec<usize> = comb.iter().map(|&i| weighted[i]).chain(free.iter().copied()).collect();
            cols.sort_unstable();
            if let Some(v) = restricted_point(p, &cols, mode) {
                return Ok(support_solution(p, mode, v, nodes));
            }
            if size == 0 || !next_combination(&mut comb, weighted.len()) {
                break;
            }
        }
    }
    Ok(support_solution(p, mode, start, nodes))
}

fn support_solution(p: &L1Problem, mode: CoeffMode, v: Vec<Rat>, nodes: usize) -> FillSolution {
    let value = int_rat(p.support(&v));
    FillSolution {
        mode,
        objective: Objective::Support,
        bound: value.clone(),
        value,
        witness: v,
        cycle: None,
        dual: None,
        nodes,
    }
}

/// Real filling norm by exact LP (the problem's mode is ignored).
pub fn fill_lp(p: &FillProblem) -> Result<FillSolution> {
    let l1 = L1Problem::fill(p.boundary.clone(), p.target.clone())?;
    solve_l1(&l1, CoeffMode::Q, p.objective, &IlpConfig::default())
}

/// Integral filling norm by branch-and-bound (the problem's mode is ignored).
pub fn fill_ilp(p: &FillProblem, cfg: &IlpConfig) -> Result<FillSolution> {
    let l1 = L1Problem::fill(p.boundary.clone(), p.target.clone())?;
    solve_l1(&l1, CoeffMode::Z, p.objective, cfg)
}

/// Dispatches on the problem's coefficient mode.
pub fn fill(p: &FillProblem, cfg: &IlpConfig) -> Result<FillSolution> {
    match p.mode {
        CoeffMode::Q => fill_lp(p),
        CoeffMode::Z => fill_ilp(p, cfg),
    }
}

/// `[I | −∂]·(x, c) = z`: `x = z + ∂c` ranges over the homology class of `z`.
fn class_problem(z: &[Rat], boundary: &IntMatrix) -> Result<L1Problem> {
    let n = boundary.rows();
    if z.len() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: z.len(),
        });
    }
    let mut neg = boundary.clone();
    for i in 0..n {
        for j in 0..boundary.cols() {
            let v = -boundary.get(i, j);
            neg.set(i, j, v);
        }
    }
    let a = IntMatrix::identity(n).hstack(&neg);
    let weighted = (0..a.cols()).map(|j| j < n).collect();
    L1Problem::new(a, z.to_vec(), weighted)
}

fn with_cycle(mut s: FillSolution, n: usize) -> FillSolution {
    s.cycle = Some(s.witness[..n].to_vec());
    s
}

/// Minimal ℓ¹ norm of `z + ∂c` over `(k+1)`-chains `c`, where `boundary` is `∂_{k+1}`.
pub fn min_cycle_in_class(z: &[Rat], boundary: &IntMatrix, mode: CoeffMode, cfg: &IlpConfig) -> Result<FillSolution> {
    let p = class_problem(z, boundary)?;
    Ok(with_cycle(solve_l1(&p, mode, Objective::L1, cfg)?, z.len()))
}

/// Minimal number of cells with nonzero coefficient in an integral representative `z + ∂c`.
pub fn weightless_min_support(z: &[Rat], boundary: &IntMatrix, cfg: &IlpConfig) -> Result<FillSolution> {
    let p = class_problem(z, boundary)?;
    Ok(with_cycle(solve_l1(&p, CoeffMode::Z, Objective::Support, cfg)?, z.len()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UbcSample {
    pub boundary_norm: Rat,
    pub fill: Rat,
    pub ratio: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UbcReport {
    pub degree: usize,
    pub seed: u64,
    pub mode: CoeffMode,
    pub rows: Vec<UbcSample>,
    pub skipped_zero: usize,
    pub max_ratio: Option<Rat>,
}

/// Samples boundaries `b = ∂c` of random `(k+1)`-chains with coefficients in `{−1,0,1}` and
/// reports the largest `fill(b)/‖b‖₁`. Zero boundaries are skipped.
pub fn ubc_probe(
    x: &DeltaComplex,
    k: usize,
    samples: usize,
    seed: u64,
    mode: CoeffMode,
    cfg: &IlpConfig,
) -> Result<UbcReport> {
    if k >= x.dimension() || x.num_cells(k + 1) == 0 {
        return Err(Error::InvalidComplex(format!("no cells of degree {}", k + 1)));
    }
    let d = x.boundary_matrix(k + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut skipped_zero = 0;
    for _ in 0..samples {
        let c: Vec<Int> = (0..d.cols()).map(|_| Int::from(rng.gen_range(-1i64..=1))).collect();
        let b: Vec<Rat> = d.mul_vec(&c).into_iter().map(int_rat).collect();
        let norm: Rat = b.iter().map(|v| v.abs()).sum();
        if norm.is_zero() {
            skipped_zero += 1;
            continue;
        }
        let p = FillProblem::new(d.clone(), b, mode, Objective::L1)?;
        let f = fill(&p, cfg)?.value;
        rows.push(UbcSample {
            ratio: &f / &norm,
            boundary_norm: norm,
            fill: f,
        });
    }
    let max_ratio = rows.iter().map(|r| r.ratio.clone()).max();
    Ok(UbcReport {
        degree: k,
        seed,
        mode,
        rows,
        skipped_zero,
        max_ratio,
    })
}

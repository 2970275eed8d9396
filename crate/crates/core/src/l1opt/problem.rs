use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::simplex::{self, LpOutcome, StandardLp};
use crate::chain::CoeffMode;
use crate::error::{Error, Result};
use crate::linalg::{solve_integer, IntMatrix};
use crate::rational::{int_rat, is_integral, Int, Rat};

/// `min Σ_{j weighted} |v_j|` subject to `A·v = b`, `v` free. Unweighted columns carry
/// no cost; they express "up to a boundary" in homology-class problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct L1Problem {
    pub a: IntMatrix,
    pub b: Vec<Rat>,
    pub weighted: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    L1,
    Support,
}

/// A bound `v_j ≤ value` (`upper`) or `v_j ≥ value` added during branching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bound {
    pub column: usize,
    pub upper: bool,
    pub value: Int,
}

#[derive(Clone)]
pub(crate) struct Relaxation {
    pub v: Vec<Rat>,
    pub value: Rat,
    pub dual: Vec<Rat>,
}

impl L1Problem {
    pub fn new(a: IntMatrix, b: Vec<Rat>, weighted: Vec<bool>) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DegreeMismatch {
                expected: a.rows(),
                found: b.len(),
            });
        }
        if a.cols() != weighted.len() {
            return Err(Error::DegreeMismatch {
                expected: a.cols(),
                found: weighted.len(),
            });
        }
        Ok(L1Problem { a, b, weighted })
    }

    /// All columns weighted: the plain filling problem `min ‖c‖₁, ∂c = b`.
    pub fn fill(a: IntMatrix, b: Vec<Rat>) -> Result<Self> {
        let n = a.cols();
        L1Problem::new(a, b, vec![true; n])
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn objective(&self, v: &[Rat]) -> Rat {
        v.iter()
            .zip(&self.weighted)
            .filter(|(_, &w)| w)
            .map(|(x, _)| x.abs())
            .sum()
    }

    pub fn support(&self, v: &[Rat]) -> usize {
        v.iter()
            .zip(&self.weighted)
            .filter(|(x, &w)| w && !x.is_zero())
            .count()
    }

    pub fn is_feasible_point(&self, v: &[Rat]) -> bool {
        v.len() == self.cols() && self.a.mul_rat_vec(v) == self.b
    }

    /// Integral target, or `None` if some entry is fractional.
    pub(crate) fn integral_target(&self) -> Option<Vec<Int>> {
        self.b
            .iter()
            .map(|x| is_integral(x).then(|| x.to_integer()))
            .collect()
    }

    /// Exact feasibility over the coefficient ring: rank test over ℚ, lattice test over ℤ.
    pub fn check_feasible(&self, mode: CoeffMode) -> Result<()> {
        let ok = match mode {
            CoeffMode::Q => {
                let scale = self.b.iter().fold(Int::from(1), |acc, x| num_integer::lcm(acc, x.denom().clone()));
                let col: Vec<Int> = self.b.iter().map(|x| (x * int_rat(scale.clone())).to_integer()).collect();
                let augmented = self.a.hstack(&IntMatrix::from_rows(col.len(), 1, col.into_iter().map(|x| vec![x]).collect())?);
                self.a.rank() == augmented.rank()
            }
            CoeffMode::Z => match self.integral_target() {
                Some(b) => solve_integer(&self.a, &b).is_some(),
                None => false,
            },
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Infeasible)
        }
    }

    /// LP relaxation with extra bounds, solved over the split `v = p − n`.
    pub(crate) fn relax(&self, bounds: &[Bound]) -> Option<Relaxation> {
        let n = self.cols();
        let m = self.a.rows();
        let bounds = tightest(n, bounds)?;
        let width = 2 * n + bounds.len();
        let mut a = Vec::with_capacity(m + bounds.len());
        for i in 0..m {
            let mut row = vec![Rat::zero(); width];
            for j in 0..n {
                let x = self.a.get(i, j);
                if !x.is_zero() {
                    row[j] = int_rat(x.clone());
                    row[n + j] = -int_rat(x.clone());
                }
            }
            a.push(row);
        }
        let mut b = self.b.clone();
        for (k, bd) in bounds.iter().enumerate() {
            let mut row = vec![Rat::zero(); width];
            row[bd.column] = int_rat(1);
            row[n + bd.column] = int_rat(-1);
            row[2 * n + k] = int_rat(if bd.upper { 1 } else { -1 });
            a.push(row);
            b.push(int_rat(bd.value.clone()));
        }
        let mut c = vec![Rat::zero(); width];
        for j in 0..n {
            if self.weighted[j] {
                c[j] = int_rat(1);
                c[n + j] = int_rat(1);
            }
        }
        let lp = StandardLp { a, b, c };
        match simplex::solve(&lp) {
            LpOutcome::Optimal(o) => {
                debug_assert!(simplex::verify(&lp, &o));
                let v = (0..n).map(|j| &o.x[j] - &o.x[n + j]).collect();
                let mut dual = o.dual;
                dual.truncate(m);
                Some(Relaxation {
                    v,
                    value: o.value,
                    dual,
                })
            }
            LpOutcome::Infeasible => None,
            LpOutcome::Unbounded => unreachable!("objective is bounded below by zero"),
        }
    }

    /// Checks that `y` certifies `value` as a lower bound: `|A_jᵀ y| ≤ w_j` and `b·y = value`.
    pub fn verify_dual(&self, y: &[Rat], value: &Rat) -> bool {
        if y.len() != self.a.rows() {
            return false;
        }
        for j in 0..self.cols() {
            let s: Rat = (0..self.a.rows()).map(|i| int_rat(self.a.get(i, j).clone()) * &y[i]).sum();
            let limit = if self.weighted[j] { int_rat(1) } else { Rat::zero() };
            if s.abs() > limit {
                return false;
            }
        }
        let by: Rat = self.b.iter().zip(y).map(|(b, y)| b * y).sum();
        &by == value
    }
}

/// Keeps only the tightest upper and lower bound of each column; `None` when they cross.
fn tightest(n: usize, bounds: &[Bound]) -> Option<Vec<Bound>> {
    let mut upper: Vec<Option<&Int>> = vec![None; n];
    let mut lower: Vec<Option<&Int>> = vec![None; n];
    for bd in bounds {
        let slot = if bd.upper { &mut upper[bd.column] } else { &mut lower[bd.column] };
        *slot = Some(match *slot {
            Some(old) if bd.upper == (old <= &bd.value) => old,
            _ => &bd.value,
        });
    }
    let mut out = Vec::new();
    for j in 0..n {
        if let (Some(lo), Some(hi)) = (lower[j], upper[j]) {
            if lo > hi {
                return None;
            }
        }
        for (bound, upper) in [(lower[j], false), (upper[j], true)] {
            if let Some(value) = bound {
                out.push(Bound {
                    column: j,
                    upper,
                    value: value.clone(),
                });
            }
        }
    }
    Some(out)
}

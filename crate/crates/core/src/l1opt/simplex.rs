//! Exact two-phase primal simplex on a dense rational tableau with Bland's rule.

#![allow(clippy::needless_range_loop)]

use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

/// `min c·x` subject to `A·x = b`, `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct StandardLp {
    pub a: Vec<Vec<Rat>>,
    pub b: Vec<Rat>,
    pub c: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpOptimum {
    pub x: Vec<Rat>,
    pub value: Rat,
    /// Dual solution `y` with `Aᵀy ≤ c` and `b·y = value`.
    pub dual: Vec<Rat>,
    pub basis: Vec<usize>,
    pub pivots: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpOptimum),
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    rhs: Vec<Rat>,
    cost: Vec<Rat>,
    neg_value: Rat,
    basis: Vec<usize>,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        let support: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for &j in &support {
                self.rows[i][j] -= &f * &pivot_row[j];
            }
            self.rhs[i] -= &f * &pivot_rhs;
        }
        let f = self.cost[c].clone();
        if !f.is_zero() {
            for &j in &support {
                self.cost[j] -= &f * &pivot_row[j];
            }
            self.neg_value -= &f * &pivot_rhs;
        }
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Runs Bland's rule over columns `0..allowed`. Returns `false` if unbounded.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(c) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rat)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn set_costs(&mut self, c: &[Rat]) {
        self.cost = c.to_vec();
        self.neg_value = Rat::zero();
        for (i, &bj) in self.basis.iter().enumerate() {
            let cb = c[bj].clone();
            if cb.is_zero() {
                continue;
            }
            for (j, v) in self.rows[i].iter().enumerate() {
                if !v.is_zero() {
                    self.cost[j] -= &cb * v;
                }
            }
            self.neg_value -= &cb * &self.rhs[i];
        }
    }
}

/// Solves a square nonsingular rational system `M·y = r` by Gauss–Jordan elimination.
pub fn solve_square(mut m: Vec<Vec<Rat>>, mut r: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = r.len();
    for col in 0..n {
        let p = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, p);
        r.swap(col, p);
        let pv = m[col][col].clone();
        for j in col..n {
            m[col][j] = &m[col][j] / &pv;
        }
        r[col] = &r[col] / &pv;
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let f = m[i][col].clone();
            for j in col..n {
                let t = &f * &m[col][j];
                m[i][j] -= t;
            }
            let t = &f * &r[col];
            r[i] -= t;
        }
    }
    Some(r)
}

pub fn solve(lp: &StandardLp) -> LpOutcome {
    let m = lp.b.len();
    let n = lp.c.len();
    assert!(lp.a.len() == m && lp.a.iter().all(|r| r.len() == n), "inconsistent LP shape");
    let signs: Vec<bool> = lp.b.iter().map(|v| v.is_negative()).collect();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let mut row: Vec<Rat> = if signs[i] {
            lp.a[i].iter().map(|v| -v).collect()
        } else {
            lp.a[i].clone()
        };
        row.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
        rows.push(row);
        rhs.push(if signs[i] { -&lp.b[i] } else { lp.b[i].clone() });
    }
    let mut t = Tableau {
        rows,
        rhs,
        cost: Vec::new(),
        neg_value: Rat::zero(),
        basis: (n..n + m).collect(),
        pivots: 0,
    };
    let phase1: Vec<Rat> = (0..n + m).map(|j| if j < n { Rat::zero() } else { Rat::one() }).collect();
    t.set_costs(&phase1);
    t.optimize(n + m);
    if !t.neg_value.is_zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificial variables out of the basis, dropping redundant rows
    let mut kept: Vec<usize> = (0..m).collect();
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    // the original row owning this artificial depends on the kept ones
                    let owner = t.basis[i] - n;
                    kept.retain(|&r| r != owner);
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut phase2: Vec<Rat> = lp.c.clone();
    phase2.extend((0..m).map(|_| Rat::zero()));
    t.set_costs(&phase2);
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rat::zero(); n];
    for (i, &bj) in t.basis.iter().enumerate() {
        x[bj] = t.rhs[i].clone();
    }
    let value = -t.neg_value.clone();
    // dual from Bᵀ y = c_B on the kept (sign-corrected) rows
    let k = t.basis.len();
    let bt: Vec<Vec<Rat>> = t
        .basis
        .iter()
        .map(|&bj| {
            kept.iter()
                .map(|&r| if signs[r] { -&lp.a[r][bj] } else { lp.a[r][bj].clone() })
                .collect()
        })
        .collect();
    let cb: Vec<Rat> = t.basis.iter().map(|&bj| lp.c[bj].clone()).collect();
    let y_kept = if k == 0 { Vec::new() } else { solve_square(bt, cb).expect("basis is nonsingular") };
    let mut dual = vec![Rat::zero(); m];
    for (pos, &r) in kept.iter().enumerate() {
        dual[r] = if signs[r] { -&y_kept[pos] } else { y_kept[pos].clone() };
    }
    let mut basis = t.basis.clone();
    basis.sort_unstable();
    LpOutcome::Optimal(LpOptimum {
        x,
        value,
        dual,
        basis,
        pivots: t.pivots,
    })
}

/// Checks primal feasibility, dual feasibility and equality of objective values exactly.
pub fn verify(lp: &StandardLp, opt: &LpOptimum) -> bool {
    let n = lp.c.len();
    if opt.x.len() != n || opt.dual.len() != lp.b.len() || opt.x.iter().any(|v| v.is_negative()) {
        return false;
    }
    for (row, bi) in lp.a.iter().zip(&lp.b) {
        let s: Rat = row.iter().zip(&opt.x).map(|(a, x)| a * x).sum();
        if &s != bi {
            return false;
        }
    }
    for j in 0..n {
        let s: Rat = lp.a.iter().zip(&opt.dual).map(|(row, y)| &row[j] * y).sum();
        if s > lp.c[j] {
            return false;
        }
    }
    let primal: Rat = lp.c.iter().zip(&opt.x).map(|(c, x)| c * x).sum();
    let dual: Rat = lp.b.iter().zip(&opt.dual).map(|(b, y)| b * y).sum();
    primal == opt.value && dual == opt.value
}

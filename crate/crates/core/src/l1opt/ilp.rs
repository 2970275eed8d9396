//! Best-first branch-and-bound for integral ℓ¹ minimisation.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use std::collections::BinaryHeap;

use super::problem::{Bound, L1Problem, Relaxation};
use crate::error::{Budget, Error, Result};
use crate::linalg::{snf, snf_solve, SmithDecomposition};
#[cfg(test)]
use crate::linalg::IntMatrix;
use crate::rational::{fractionality, int_rat, is_integral, Int, Rat};

pub const DEFAULT_NODE_LIMIT: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IlpConfig {
    pub node_limit: usize,
}

impl Default for IlpConfig {
    fn default() -> Self {
        IlpConfig {
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpResult {
    pub v: Vec<Int>,
    pub value: Rat,
    /// Proven lower bound; equals `value` when the search completed.
    pub bound: Rat,
    pub nodes: usize,
    /// Value of the root relaxation.
    pub root_relaxation: Rat,
}

fn ceil(r: &Rat) -> Rat {
    int_rat(r.ceil().to_integer())
}

/// Integral point with `A_free x = b − A_weighted v_weighted` when one exists, completing
/// the integral weighted part of a relaxation to a feasible integral solution.
fn lattice_completion(p: &L1Problem, free_snf: &Option<(Vec<usize>, SmithDecomposition)>, v: &[Rat]) -> Option<Vec<Int>> {
    let mut out: Vec<Int> = vec![Int::zero(); v.len()];
    let mut rhs: Vec<Int> = p.integral_target()?;
    for j in 0..v.len() {
        if p.weighted[j] {
            let x = v[j].to_integer();
            for (i, r) in rhs.iter_mut().enumerate() {
                *r -= p.a.get(i, j) * &x;
            }
            out[j] = x;
        }
    }
    match free_snf {
        None => rhs.iter().all(|r| r.is_zero()).then_some(out),
        Some((cols, s)) => {
            let x = snf_solve(s, &rhs)?;
            for (k, &j) in cols.iter().enumerate() {
                out[j] = x[k].clone();
            }
            Some(out)
        }
    }
}

/// An open node: branching bounds plus the relaxation solved when the node was created.
struct Node {
    bounds: Vec<Bound>,
    relaxation: Relaxation,
    lower: Rat,
    seq: usize,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    /// Max-heap order: smallest bound first, then deepest, then most recent.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .lower
            .cmp(&self.lower)
            .then(self.bounds.len().cmp(&other.bounds.len()))
            .then(self.seq.cmp(&other.seq))
    }
}

/// Minimises `Σ_weighted |v_j|` over integral `v` with `A·v = b`.
///
/// Starts from a lattice solution as incumbent and explores nodes best bound first (ties go
/// to the deepest, then most recent node). Children are solved when created; a node is
/// dropped once the ceiling of its relaxation is not below the incumbent. Branching uses the
/// most fractional weighted coordinate with the lowest index.
pub fn solve_ilp(p: &L1Problem, cfg: &IlpConfig) -> Result<IlpResult> {
    let b = p.integral_target().ok_or(Error::Infeasible)?;
    let lattice = snf(&p.a);
    let start = snf_solve(&lattice, &b).ok_or(Error::Infeasible)?;
    let to_rat = |v: &[Int]| v.iter().cloned().map(int_rat).collect::<Vec<_>>();
    let mut best_v = start;
    let mut best = p.objective(&to_rat(&best_v));

    let free_cols: Vec<usize> = (0..p.cols()).filter(|&j| !p.weighted[j]).collect();
    let free_snf = if free_cols.is_empty() {
        None
    } else {
        Some((free_cols.clone(), snf(&p.a.select_cols(&free_cols))))
    };

    let root = p.relax(&[]).ok_or(Error::Infeasible)?;
    let root_value = root.value.clone();
    let mut heap = BinaryHeap::new();
    heap.push(Node {
        bounds: Vec::new(),
        lower: ceil(&root.value),
        relaxation: root,
        seq: 0,
    });
    let mut nodes = 1usize;
    while let Some(node) = heap.pop() {
        if node.lower >= best {
            break;
        }
        let rel = &node.relaxation;
        let branch = (0..p.cols())
            .filter(|&j| p.weighted[j] && !is_integral(&rel.v[j]))
            .max_by(|&i, &j| fractionality(&rel.v[i]).cmp(&fractionality(&rel.v[j])).then(j.cmp(&i)));
        let j = match branch {
            Some(j) => j,
            None => {
                if let Some(v) = lattice_completion(p, &free_snf, &rel.v) {
                    let value = p.objective(&to_rat(&v));
                    if value < best {
                        best = value;
                        best_v = v;
                    }
                    continue;
                }
                // weighted part integral but not completable: branch on a free coordinate
                match free_cols.iter().copied().find(|&j| !is_integral(&rel.v[j])) {
                    Some(j) => j,
                    None => continue,
                }
            }
        };
        if let Some(v) = rounding(p, &free_snf, &rel.v) {
            let value = p.objective(&to_rat(&v));
            if value < best {
                best = value;
                best_v = v;
            }
        }
        for bound in children(j, &rel.v[j]) {
            if nodes >= cfg.node_limit {
                let open = heap.iter().map(|n| n.lower.clone()).chain(std::iter::once(node.lower.clone())).min();
                return Err(Error::BudgetExceeded(Box::new(Budget {
                    nodes,
                    lower: open.unwrap_or_else(|| best.clone()).min(best.clone()),
                    upper: Some(best),
                })));
            }
            nodes += 1;
            let mut bounds = node.bounds.clone();
            bounds.push(bound);
            if let Some(relaxation) = p.relax(&bounds) {
                let lower = ceil(&relaxation.value);
                if lower < best {
                    heap.push(Node {
                        bounds,
                        relaxation,
                        lower,
                        seq: nodes,
                    });
                }
            }
        }
    }
    Ok(IlpResult {
        v: best_v,
        bound: best.clone(),
        value: best,
        nodes,
        root_relaxation: root_value,
    })
}

/// Rounds the weighted coordinates to the nearest integers and completes the free ones.
fn rounding(p: &L1Problem, free_snf: &Option<(Vec<usize>, SmithDecomposition)>, v: &[Rat]) -> Option<Vec<Int>> {
    let rounded: Vec<Rat> = v
        .iter()
        .enumerate()
        .map(|(j, x)| if p.weighted[j] { x.round() } else { x.clone() })
        .collect();
    lattice_completion(p, free_snf, &rounded)
}

/// Down branch `v_j ≤ ⌊x⌋` and up branch `v_j ≥ ⌊x⌋ + 1`.
fn children(j: usize, x: &Rat) -> [Bound; 2] {
    let floor = x.floor().to_integer();
    [
        Bound {
            column: j,
            upper: true,
            value: floor.clone(),
        },
        Bound {
            column: j,
            upper: false,
            value: floor + 1,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn integrality_gap() {
        // 2v₀ + 2v₁ = 1 has no integral solution; 2v₀ + 3v₁ = 1 has optimum |−1| + |1| = 2
        let p = L1Problem::fill(m(&[&[2, 2]]), vec![int_rat(1)]).unwrap();
        assert_eq!(solve_ilp(&p, &IlpConfig::default()), Err(Error::Infeasible));
        let p = L1Problem::fill(m(&[&[2, 3]]), vec![int_rat(1)]).unwrap();
        let r = solve_ilp(&p, &IlpConfig::default()).unwrap();
        assert_eq!(r.value, int_rat(2));
        assert_eq!(r.root_relaxation, rat(1, 3));
        assert_eq!(r.bound, r.value);
    }

    #[test]
    fn budget_reports_bounds() {
        let p = L1Problem::fill(m(&[&[7, 11, 13]]), vec![int_rat(1)]).unwrap();
        match solve_ilp(&p, &IlpConfig { node_limit: 1 }) {
            Err(Error::BudgetExceeded(b)) => assert!(b.lower <= b.upper.unwrap()),
            Ok(r) => assert_eq!(r.value, r.bound),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn long_kernel_line() {
        // the integral points lie on a line with step (183, −2553, 178); optimum (73, −1018, 71)
        let p = L1Problem::fill(m(&[&[1, 3, 42], &[61, 5, 9]]), vec![int_rat(1), int_rat(2)]).unwrap();
        let r = solve_ilp(&p, &IlpConfig { node_limit: 5_000 }).unwrap();
        assert_eq!(r.value, int_rat(1162));
        assert_eq!(r.v, vec![Int::from(73), Int::from(-1018), Int::from(71)]);
    }
}

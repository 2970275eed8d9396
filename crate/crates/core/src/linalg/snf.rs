use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::IntMatrix;
use crate::rational::Int;

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal with `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `D`, length `min(rows, cols)`; trailing entries may be zero.
    #[serde(with = "int_vec")]
    pub diagonal: Vec<Int>,
}

mod int_vec {
    use crate::rational::{parse_int, Int};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| parse_int(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<Int> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }

    /// The full diagonal matrix `D`.
    pub fn d_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.u.rows(), self.v.rows());
        for (i, x) in self.diagonal.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }

    /// Re-checks `U·M·V = D`, unimodularity and the divisibility chain.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let lhs = self.u.mul(m).mul(&self.v);
        let chain_ok = self.diagonal.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        });
        lhs == self.d_matrix()
            && self.u.det().abs().is_one()
            && self.v.det().abs().is_one()
            && self.diagonal.iter().all(|d| !d.is_negative())
            && chain_ok
    }
}

fn min_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, Int)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| av < *b) {
                best = Some((i, j, av));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Smith normal form with transforms. Pivots on an entry of least absolute value, which
/// keeps intermediate growth moderate; the result is deterministic.
pub fn snf(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let n = rows.min(cols);
    for t in 0..n {
        while let Some((pi, pj)) = min_nonzero(&a, t) {
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..rows {
                let x = a.get(i, t).clone();
                if x.is_zero() {
                    continue;
                }
                let q = -(&x / &pivot);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let x = a.get(t, j).clone();
                if x.is_zero() {
                    continue;
                }
                let q = -(&x / &pivot);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    let one = Int::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    let diagonal = (0..n).map(|i| a.get(i, i).clone()).collect();
    SmithDecomposition { u, v, diagonal }
}

/// Solves `A·x = b` over ℤ, returning one solution if the system is solvable.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.rows(), b.len());
    let s = snf(a);
    solve_with(&s, b)
}

pub(crate) fn solve_with(s: &SmithDecomposition, b: &[Int]) -> Option<Vec<Int>> {
    let ub = s.u.mul_vec(b);
    let cols = s.v.rows();
    let mut y = vec![Int::zero(); cols];
    for (i, r) in ub.iter().enumerate() {
        let d = s.diagonal.get(i).cloned().unwrap_or_default();
        if d.is_zero() {
            if !r.is_zero() {
                return None;
            }
        } else {
            let (q, rem) = r.div_rem(&d);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(s.v.mul_vec(&y))
}

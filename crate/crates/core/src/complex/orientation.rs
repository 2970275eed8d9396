use std::collections::VecDeque;

use super::{CellChain, DeltaComplex};
use crate::chain::Chain;
use crate::error::{Error, Result};

/// Integral fundamental cycle `Σ εᵢ σᵢ` with `εᵢ = ±1` over the top cells, normalised so
/// that the first top cell of every connected component gets `+1`.
///
/// Signs are propagated across codimension-one cells: each such cell sits in exactly two
/// top-cell slots, and the two slot contributions must cancel.
pub fn fundamental_cycle(x: &DeltaComplex) -> Result<CellChain> {
    let report = x.validate();
    if !report.is_complex || !report.is_closed_pseudo_manifold {
        return Err(Error::NotClosed(report.failures.join("; ")));
    }
    let n = x.dimension();
    let tops = x.num_cells(n);
    if n == 0 {
        return Ok(Chain::from_int_terms(0, (0..tops).map(|i| (i, 1))));
    }
    // incidences[f] = [(top cell, slot sign)] for each codimension-one cell f.
    let mut incidences: Vec<Vec<(usize, i64)>> = vec![Vec::new(); x.num_cells(n - 1)];
    for t in 0..tops {
        for (slot, &f) in x.faces(n, t).iter().enumerate() {
            incidences[f].push((t, if slot % 2 == 0 { 1 } else { -1 }));
        }
    }
    // Self-glued faces must cancel on their own.
    for inc in &incidences {
        if inc[0].0 == inc[1].0 && inc[0].1 + inc[1].1 != 0 {
            return Err(Error::NonOrientable);
        }
    }
    let mut adjacency: Vec<Vec<(usize, i64)>> = vec![Vec::new(); tops];
    for inc in &incidences {
        let ((a, sa), (b, sb)) = (inc[0], inc[1]);
        if a != b {
            // εa·sa + εb·sb = 0  ⇒  εb = −εa·sa·sb
            adjacency[a].push((b, -sa * sb));
            adjacency[b].push((a, -sa * sb));
        }
    }
    let mut sign = vec![0i64; tops];
    let mut queue = VecDeque::new();
    for root in 0..tops {
        if sign[root] != 0 {
            continue;
        }
        sign[root] = 1;
        queue.push_back(root);
        while let Some(a) = queue.pop_front() {
            for &(b, rel) in &adjacency[a] {
                let want = sign[a] * rel;
                if sign[b] == 0 {
                    sign[b] = want;
                    queue.push_back(b);
                } else if sign[b] != want {
                    return Err(Error::NonOrientable);
                }
            }
        }
    }
    let z = Chain::from_int_terms(n, sign.into_iter().enumerate());
    debug_assert!(x.boundary(&z).is_zero());
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::*;
    use crate::rational::int_rat;

    #[test]
    fn one_vertex_torus_has_norm_two() {
        let x = build_one_vertex_torus();
        let z = fundamental_cycle(&x).unwrap();
        assert_eq!(z.l1_norm(), int_rat(2));
        assert!(x.boundary(&z).is_zero());
        assert_eq!(z.get(&0), Some(&int_rat(1)));
    }

    #[test]
    fn grid_and_genus_norms() {
        for q in 1..=4 {
            let z = fundamental_cycle(&build_grid_torus(q)).unwrap();
            assert_eq!(z.l1_norm(), int_rat(2 * q * q));
        }
        for g in 1..=3usize {
            let z = fundamental_cycle(&build_genus_surface(g)).unwrap();
            assert_eq!(z.l1_norm(), int_rat(4 * g - 2));
        }
    }

    #[test]
    fn klein_bottle_is_rejected() {
        assert_eq!(
            fundamental_cycle(&build_klein_bottle()),
            Err(Error::NonOrientable)
        );
    }

    #[test]
    fn open_complex_is_rejected() {
        let x = DeltaComplex::new(vec![
            vec![vec![], vec![], vec![]],
            vec![vec![1, 0], vec![2, 0], vec![2, 1]],
            vec![vec![2, 1, 0]],
        ])
        .unwrap();
        assert!(matches!(fundamental_cycle(&x), Err(Error::NotClosed(_))));
    }

    #[test]
    fn circle_cycle() {
        let x = build_circle(3);
        let z = fundamental_cycle(&x).unwrap();
        assert_eq!(z.l1_norm(), int_rat(3));
        assert!(x.boundary(&z).is_zero());
    }
}

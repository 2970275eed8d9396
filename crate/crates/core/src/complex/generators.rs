use std::collections::{BTreeMap, BTreeSet};

use super::DeltaComplex;

/// Lattice simplex given by its ordered vertices in the universal cover `ℤᵈ`.
pub(crate) type LatticeSimplex = Vec<Vec<i64>>;

/// Key of a lattice simplex modulo translations by `period·ℤᵈ`: first vertex reduced into
/// `[0, period)ᵈ`, the rest translated along with it.
pub(crate) fn lattice_key(points: &[Vec<i64>], period: i64) -> Vec<i64> {
    let first = &points[0];
    let shift: Vec<i64> = first
        .iter()
        .map(|&x| x.rem_euclid(period) - x)
        .collect();
    points
        .iter()
        .flat_map(|p| p.iter().zip(&shift).map(|(x, s)| x + s))
        .collect()
}

/// A Δ-complex obtained from lattice simplices in `ℤᵈ` modulo `period·ℤᵈ`, together with
/// a representative vertex list for every cell.
pub(crate) struct LatticeComplex {
    pub complex: DeltaComplex,
    pub period: i64,
    pub reps: Vec<Vec<LatticeSimplex>>,
    pub index: Vec<BTreeMap<Vec<i64>, usize>>,
}

impl LatticeComplex {
    pub fn lookup(&self, points: &[Vec<i64>]) -> Option<usize> {
        let k = points.len() - 1;
        self.index.get(k)?.get(&lattice_key(points, self.period)).copied()
    }
}

pub(crate) fn lattice_complex(period: i64, tops: Vec<LatticeSimplex>) -> LatticeComplex {
    let top_dim = tops[0].len() - 1;
    let mut layers: Vec<BTreeMap<Vec<i64>, LatticeSimplex>> = vec![BTreeMap::new(); top_dim + 1];
    let mut frontier: BTreeSet<Vec<i64>> = BTreeSet::new();
    for t in tops {
        let key = lattice_key(&t, period);
        layers[top_dim].entry(key).or_insert(t);
    }
    for k in (1..=top_dim).rev() {
        frontier.clear();
        let reps: Vec<LatticeSimplex> = layers[k].values().cloned().collect();
        for s in reps {
            for i in 0..=k {
                let mut f = s.clone();
                f.remove(i);
                let key = lattice_key(&f, period);
                layers[k - 1].entry(key).or_insert(f);
            }
        }
    }
    let index: Vec<BTreeMap<Vec<i64>, usize>> = layers
        .iter()
        .map(|l| l.keys().enumerate().map(|(i, k)| (k.clone(), i)).collect())
        .collect();
    let cells = layers
        .iter()
        .enumerate()
        .map(|(k, layer)| {
            layer
                .values()
                .map(|s| {
                    if k == 0 {
                        return Vec::new();
                    }
                    (0..=k)
                        .map(|i| {
                            let mut f = s.clone();
                            f.remove(i);
                            index[k - 1][&lattice_key(&f, period)]
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let complex = DeltaComplex::new(cells)
        .expect("lattice faces are consistent")
        .with_default_labels();
    let reps = layers.into_iter().map(|l| l.into_values().collect()).collect();
    LatticeComplex {
        complex,
        period,
        reps,
        index,
    }
}

pub(crate) fn grid_torus_lattice(q: usize) -> LatticeComplex {
    assert!(q >= 1, "grid torus needs q >= 1");
    let q = q as i64;
    let mut tops = Vec::new();
    for i in 0..q {
        for j in 0..q {
            tops.push(vec![vec![i, j], vec![i + 1, j], vec![i + 1, j + 1]]);
            tops.push(vec![vec![i, j], vec![i, j + 1], vec![i + 1, j + 1]]);
        }
    }
    lattice_complex(q, tops)
}

pub(crate) fn circle_lattice(q: usize) -> LatticeComplex {
    assert!(q >= 1, "circle needs q >= 1");
    let q = q as i64;
    lattice_complex(q, (0..q).map(|i| vec![vec![i], vec![i + 1]]).collect())
}

/// The torus as a `q × q` grid of unit squares cut along the `(1,1)` diagonal:
/// `q²` vertices, `3q²` edges, `2q²` triangles.
pub fn build_grid_torus(q: usize) -> DeltaComplex {
    grid_torus_lattice(q).complex
}

/// One vertex, three edges, two triangles.
pub fn build_one_vertex_torus() -> DeltaComplex {
    build_grid_torus(1)
}

/// The circle subdivided into `q` edges; vertex `vᵢ` sits at `i/q`.
pub fn build_circle(q: usize) -> DeltaComplex {
    circle_lattice(q).complex
}

/// Closed orientable surface of genus `g` from the `4g`-gon `a₁b₁a₁⁻¹b₁⁻¹⋯` triangulated
/// by the fan at polygon vertex 0. All polygon vertices are identified, so the complex has
/// one vertex, `6g − 3` edges and `4g − 2` triangles.
pub fn build_genus_surface(g: usize) -> DeltaComplex {
    assert!(g >= 1, "genus must be at least 1");
    let n = 4 * g;
    // Side i joins polygon vertices i and i+1. Returns (edge id, oriented forward?).
    let side = |i: usize| -> (usize, bool) {
        let (j, r) = (i / 4, i % 4);
        match r {
            0 => (2 * j, true),
            1 => (2 * j + 1, true),
            2 => (2 * j, false),
            _ => (2 * j + 1, false),
        }
    };
    // Diagonal 0 -> i for 2 <= i <= n-2, always oriented away from vertex 0.
    let diagonal = |i: usize| 2 * g + (i - 2);
    let num_edges = 2 * g + (n - 3);
    // Edge between polygon vertex 0 and polygon vertex i, oriented 0 -> i.
    let spoke = |i: usize| -> usize {
        if i == 1 {
            side(0).0
        } else if i == n - 1 {
            side(n - 1).0
        } else {
            diagonal(i)
        }
    };
    let mut triangles = Vec::with_capacity(n - 2);
    for i in 1..=n - 2 {
        let (e, forward) = side(i);
        // Vertex 0 is first; the side's orientation orders the remaining two.
        let (x, y) = if forward { (i, i + 1) } else { (i + 1, i) };
        triangles.push(vec![e, spoke(y), spoke(x)]);
    }
    let mut labels = BTreeMap::new();
    labels.insert((0, 0), "v0".to_string());
    for j in 0..g {
        labels.insert((1, 2 * j), format!("a{}", j + 1));
        labels.insert((1, 2 * j + 1), format!("b{}", j + 1));
    }
    for i in 2..=n - 2 {
        labels.insert((1, diagonal(i)), format!("d{i}"));
    }
    for t in 0..n - 2 {
        labels.insert((2, t), format!("t{t}"));
    }
    DeltaComplex::new(vec![
        vec![vec![]],
        vec![vec![0, 0]; num_edges],
        triangles,
    ])
    .and_then(|x| x.with_labels(labels))
    .expect("genus surface is well formed")
}

/// Klein bottle: unit square with top and bottom identified straight and the vertical
/// sides identified with a flip, cut along the diagonal. One vertex, edges `a, b, c`.
pub fn build_klein_bottle() -> DeltaComplex {
    let labels = [
        ((0, 0), "v0"),
        ((1, 0), "a"),
        ((1, 1), "b"),
        ((1, 2), "c"),
        ((2, 0), "t0"),
        ((2, 1), "t1"),
    ]
    .into_iter()
    .map(|(k, v)| (k, v.to_string()))
    .collect();
    DeltaComplex::new(vec![
        vec![vec![]],
        vec![vec![0, 0]; 3],
        vec![vec![0, 2, 1], vec![1, 0, 2]],
    ])
    .and_then(|x| x.with_labels(labels))
    .expect("Klein bottle is well formed")
}

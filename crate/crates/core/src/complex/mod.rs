//! Finite Δ-complexes: ordered cells whose faces are listed by the vertex they omit.
//!
//! Cell `c` of degree `k ≥ 1` stores `k + 1` face ids of degree `k - 1`; face `i` is the
//! face opposite vertex `i`, so `∂c = Σᵢ (−1)ⁱ faceᵢ(c)`. Generators build the model
//! surfaces, the circle, products with an interval and mapping tori.

mod automorphism;
mod generators;
mod io;
mod orientation;
mod product;

use std::collections::BTreeMap;

use num_traits::Zero;

pub use automorphism::{CellImage, SimplicialAutomorphism};
pub use generators::{
    build_circle, build_genus_surface, build_grid_torus, build_klein_bottle,
    build_one_vertex_torus,
};
pub use io::{parse_chain_expr, ChainJson, ComplexJson};
pub use orientation::fundamental_cycle;
pub use product::{mapping_torus, prism_chain, Prism, ProductCell};

use crate::chain::{Chain, CoeffMode};
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::rational::Rat;

/// Chain on the cells of a Δ-complex, keyed by cell index within its degree.
pub type CellChain = Chain<usize>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    cells: Vec<Vec<Vec<usize>>>,
    labels: BTreeMap<(usize, usize), String>,
}

/// Outcome of [`DeltaComplex::validate`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub is_complex: bool,
    pub is_closed_pseudo_manifold: bool,
    pub failures: Vec<String>,
}

impl DeltaComplex {
    /// Builds a complex from per-degree face lists, checking arity and face references.
    /// `∂∂ = 0` is not required here; [`validate`](Self::validate) reports it.
    pub fn new(cells: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidComplex("no cells of degree 0".into()));
        }
        for (k, layer) in cells.iter().enumerate() {
            for (i, faces) in layer.iter().enumerate() {
                let arity = if k == 0 { 0 } else { k + 1 };
                if faces.len() != arity {
                    return Err(Error::InvalidComplex(format!(
                        "cell {k}:{i} has {} faces, expected {arity}",
                        faces.len()
                    )));
                }
                if k > 0 {
                    let below = cells[k - 1].len();
                    if let Some(&f) = faces.iter().find(|&&f| f >= below) {
                        return Err(Error::InvalidComplex(format!(
                            "cell {k}:{i} references missing face {}:{f}",
                            k - 1
                        )));
                    }
                }
            }
        }
        Ok(DeltaComplex {
            cells,
            labels: BTreeMap::new(),
        })
    }

    pub fn with_labels(mut self, labels: BTreeMap<(usize, usize), String>) -> Result<Self> {
        for &(k, i) in labels.keys() {
            if k >= self.cells.len() || i >= self.cells[k].len() {
                return Err(Error::InvalidComplex(format!(
                    "label refers to missing cell {k}:{i}"
                )));
            }
        }
        self.labels = labels;
        Ok(self)
    }

    /// Labels cells `v0, v1, …`, `e0, …`, `t0, …`, `s0, …` and `c{k}_{i}` above degree 3.
    pub(crate) fn with_default_labels(mut self) -> Self {
        const PREFIX: [&str; 4] = ["v", "e", "t", "s"];
        for (k, layer) in self.cells.iter().enumerate() {
            for i in 0..layer.len() {
                let name = match PREFIX.get(k) {
                    Some(p) => format!("{p}{i}"),
                    None => format!("c{k}_{i}"),
                };
                self.labels.insert((k, i), name);
            }
        }
        self
    }

    pub fn dimension(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn num_cells(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn faces(&self, k: usize, i: usize) -> &[usize] {
        &self.cells[k][i]
    }

    pub fn cells(&self) -> &[Vec<Vec<usize>>] {
        &self.cells
    }

    pub fn labels(&self) -> &BTreeMap<(usize, usize), String> {
        &self.labels
    }

    pub fn label(&self, k: usize, i: usize) -> Option<&str> {
        self.labels.get(&(k, i)).map(String::as_str)
    }

    pub fn find_label(&self, name: &str) -> Option<(usize, usize)> {
        self.labels
            .iter()
            .find(|(_, v)| v.as_str() == name)
            .map(|(&k, _)| k)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, l)| if k % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// `∂_k` as a matrix with rows indexed by `(k−1)`-cells and columns by `k`-cells.
    /// `∂_0` and `∂_{dim+1}` are zero matrices of the appropriate shape.
    pub fn boundary_matrix(&self, k: usize) -> IntMatrix {
        if k == 0 {
            return IntMatrix::zeros(0, self.num_cells(0));
        }
        let mut m = IntMatrix::zeros(self.num_cells(k - 1), self.num_cells(k));
        if k > self.dimension() {
            return m;
        }
        for (j, faces) in self.cells[k].iter().enumerate() {
            for (slot, &f) in faces.iter().enumerate() {
                let s = if slot % 2 == 0 { 1 } else { -1 };
                m.add_to(f, j, &s.into());
            }
        }
        m
    }

    /// Boundary of a cellular chain.
    pub fn boundary(&self, c: &CellChain) -> CellChain {
        let k = c.degree();
        if k == 0 || k > self.dimension() {
            return Chain::zero(k.saturating_sub(1), c.mode());
        }
        c.map_terms(k - 1, |&cell| {
            self.cells[k][cell]
                .iter()
                .enumerate()
                .map(|(slot, &f)| {
                    let s = if slot % 2 == 0 { 1 } else { -1 };
                    (f, Rat::from_integer(s.into()))
                })
                .collect()
        })
    }

    /// Dense coefficient vector of a chain over the cells of its degree.
    pub fn chain_to_vec(&self, c: &CellChain) -> Result<Vec<Rat>> {
        let n = self.num_cells(c.degree());
        let mut v = vec![Rat::zero(); n];
        for (&i, x) in c.iter() {
            if i >= n {
                return Err(Error::InvalidComplex(format!(
                    "chain refers to missing cell {}:{i}",
                    c.degree()
                )));
            }
            v[i] = x.clone();
        }
        Ok(v)
    }

    pub fn vec_to_chain(&self, degree: usize, mode: CoeffMode, v: &[Rat]) -> CellChain {
        let mut c = Chain::zero(degree, mode);
        for (i, x) in v.iter().enumerate() {
            c.add_term(i, x.clone());
        }
        c
    }

    /// Checks `∂∂ = 0` and whether every codimension-one cell has exactly two top cofaces.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        for k in 2..=self.dimension() {
            let dd = self.boundary_matrix(k - 1).mul(&self.boundary_matrix(k));
            if !dd.is_zero() {
                failures.push(format!("boundary of boundary is nonzero in degree {k}"));
            }
        }
        let is_complex = failures.is_empty();
        let n = self.dimension();
        let mut closed = true;
        if n >= 1 {
            let mut incidence = vec![0usize; self.num_cells(n - 1)];
            for faces in &self.cells[n] {
                for &f in faces {
                    incidence[f] += 1;
                }
            }
            for (f, &count) in incidence.iter().enumerate() {
                if count != 2 {
                    closed = false;
                    failures.push(format!(
                        "cell {}:{f} lies in {count} top cells, expected 2",
                        n - 1
                    ));
                }
            }
        }
        if self.num_cells(n) == 0 {
            closed = false;
            failures.push("no top-dimensional cells".into());
        }
        ValidationReport {
            is_complex,
            is_closed_pseudo_manifold: closed,
            failures,
        }
    }
}

use super::generators::{circle_lattice, grid_torus_lattice, LatticeComplex};
use super::{CellChain, DeltaComplex};
use crate::error::{Error, Result};
use crate::linalg::Mat2;
use crate::rational::Rat;

/// Image of one cell: vertex position `p` of the source lands on position `perm[p]` of
/// `target`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellImage {
    pub target: usize,
    pub perm: Vec<usize>,
}

impl CellImage {
    /// Sign of the vertex permutation, i.e. of the induced map on oriented cells.
    pub fn sign(&self) -> i64 {
        permutation_sign(&self.perm)
    }
}

pub(crate) fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Drops position `p` from `perm` and renumbers the remaining targets by rank.
pub(crate) fn compress(perm: &[usize], p: usize) -> Vec<usize> {
    let hole = perm[p];
    perm.iter()
        .enumerate()
        .filter(|&(i, _)| i != p)
        .map(|(_, &t)| if t > hole { t - 1 } else { t })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

/// A cellular automorphism of a Δ-complex that may reorder the vertices of a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialAutomorphism {
    images: Vec<Vec<CellImage>>,
}

impl SimplicialAutomorphism {
    pub fn new(x: &DeltaComplex, images: Vec<Vec<CellImage>>) -> Result<Self> {
        let phi = SimplicialAutomorphism { images };
        phi.check(x)?;
        Ok(phi)
    }

    pub fn identity(x: &DeltaComplex) -> Self {
        SimplicialAutomorphism {
            images: x
                .cells()
                .iter()
                .enumerate()
                .map(|(k, layer)| {
                    (0..layer.len())
                        .map(|i| CellImage {
                            target: i,
                            perm: (0..=k).collect(),
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// Checks bijectivity and compatibility with every face map.
    pub fn check(&self, x: &DeltaComplex) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidAutomorphism(msg));
        if self.images.len() != x.cells().len() {
            return bad("degree count differs from the complex".into());
        }
        for (k, layer) in self.images.iter().enumerate() {
            if layer.len() != x.num_cells(k) {
                return bad(format!("degree {k} has {} images", layer.len()));
            }
            let mut hit = vec![false; layer.len()];
            for (i, img) in layer.iter().enumerate() {
                if img.target >= layer.len() || hit[img.target] {
                    return bad(format!("cell {k}:{i} breaks bijectivity"));
                }
                hit[img.target] = true;
                let mut seen = vec![false; k + 1];
                if img.perm.len() != k + 1
                    || img.perm.iter().any(|&p| p > k || std::mem::replace(&mut seen[p], true))
                {
                    return bad(format!("cell {k}:{i} has an invalid vertex permutation"));
                }
                if k == 0 {
                    continue;
                }
                for p in 0..=k {
                    let face = x.faces(k, i)[p];
                    let want = CellImage {
                        target: x.faces(k, img.target)[img.perm[p]],
                        perm: compress(&img.perm, p),
                    };
                    if self.images[k - 1][face] != want {
                        return bad(format!("face {p} of cell {k}:{i} is not mapped compatibly"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn image(&self, k: usize, i: usize) -> &CellImage {
        &self.images[k][i]
    }

    pub fn images(&self) -> &[Vec<CellImage>] {
        &self.images
    }

    pub fn vertex_map(&self) -> Vec<usize> {
        self.images[0].iter().map(|c| c.target).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SimplicialAutomorphism) -> SimplicialAutomorphism {
        let images = other
            .images
            .iter()
            .enumerate()
            .map(|(k, layer)| {
                layer
                    .iter()
                    .map(|first| {
                        let second = &self.images[k][first.target];
                        CellImage {
                            target: second.target,
                            perm: first.perm.iter().map(|&p| second.perm[p]).collect(),
                        }
                    })
                    .collect()
            })
            .collect();
        SimplicialAutomorphism { images }
    }

    pub fn inverse(&self) -> SimplicialAutomorphism {
        let images = self
            .images
            .iter()
            .map(|layer| {
                let mut inv = vec![
                    CellImage {
                        target: 0,
                        perm: Vec::new()
                    };
                    layer.len()
                ];
                for (i, img) in layer.iter().enumerate() {
                    let mut perm = vec![0; img.perm.len()];
                    for (p, &t) in img.perm.iter().enumerate() {
                        perm[t] = p;
                    }
                    inv[img.target] = CellImage { target: i, perm };
                }
                inv
            })
            .collect();
        SimplicialAutomorphism { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().all(|layer| {
            layer.iter().enumerate().all(|(i, img)| {
                img.target == i && img.perm.iter().enumerate().all(|(p, &t)| p == t)
            })
        })
    }

    pub fn pow(&self, n: usize) -> SimplicialAutomorphism {
        let mut acc = SimplicialAutomorphism {
            images: self
                .images
                .iter()
                .enumerate()
                .map(|(k, layer)| {
                    (0..layer.len())
                        .map(|i| CellImage {
                            target: i,
                            perm: (0..=k).collect(),
                        })
                        .collect()
                })
                .collect(),
        };
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Order in the automorphism group; finite because the cell sets are finite.
    pub fn order(&self) -> usize {
        let mut acc = self.clone();
        let mut n = 1;
        while !acc.is_identity() {
            acc = self.compose(&acc);
            n += 1;
        }
        n
    }

    /// Induced chain map: `σ ↦ sign(perm)·target`.
    pub fn apply_chain(&self, c: &CellChain) -> CellChain {
        let k = c.degree();
        c.map_terms(k, |&i| {
            let img = &self.images[k][i];
            vec![(img.target, Rat::from_integer(img.sign().into()))]
        })
    }

    /// The automorphism of the `q × q` grid torus induced by `v ↦ A·v + shift`, for
    /// `A ∈ GL₂(ℤ)` mapping the triangulation to itself.
    pub fn grid_affine(q: usize, a: &Mat2, shift: [i64; 2]) -> Result<(DeltaComplex, Self)> {
        if !a.is_unimodular() {
            return Err(Error::NotUnimodular(a.det().to_string()));
        }
        let entries: Vec<i64> = [&a.a, &a.b, &a.c, &a.d]
            .iter()
            .map(|x| i64::try_from(*x).map_err(|_| Error::InvalidAutomorphism("matrix entry too large".into())))
            .collect::<Result<_>>()?;
        let map = |p: &Vec<i64>| {
            vec![
                entries[0] * p[0] + entries[1] * p[1] + shift[0],
                entries[2] * p[0] + entries[3] * p[1] + shift[1],
            ]
        };
        let lc = grid_torus_lattice(q);
        let phi = from_lattice(&lc, map)?;
        Ok((lc.complex, phi))
    }

    /// The automorphism of the `q`-gon circle induced by `t ↦ sign·t + shift`.
    pub fn circle_affine(q: usize, sign: i64, shift: i64) -> Result<(DeltaComplex, Self)> {
        if sign.abs() != 1 {
            return Err(Error::NotUnimodular(sign.to_string()));
        }
        let lc = circle_lattice(q);
        let phi = from_lattice(&lc, |p: &Vec<i64>| vec![sign * p[0] + shift])?;
        Ok((lc.complex, phi))
    }
}

fn from_lattice(
    lc: &LatticeComplex,
    map: impl Fn(&Vec<i64>) -> Vec<i64>,
) -> Result<SimplicialAutomorphism> {
    let mut images = Vec::new();
    for (k, reps) in lc.reps.iter().enumerate() {
        let perms = permutations(k + 1);
        let mut layer = Vec::with_capacity(reps.len());
        for (i, s) in reps.iter().enumerate() {
            let moved: Vec<Vec<i64>> = s.iter().map(&map).collect();
            let found = perms.iter().find_map(|rho| {
                let reordered: Vec<Vec<i64>> = rho.iter().map(|&r| moved[r].clone()).collect();
                lc.lookup(&reordered).map(|t| (t, rho))
            });
            let Some((target, rho)) = found else {
                return Err(Error::InvalidAutomorphism(format!(
                    "image of cell {k}:{i} is not a cell"
                )));
            };
            let mut perm = vec![0; k + 1];
            for (j, &r) in rho.iter().enumerate() {
                perm[r] = j;
            }
            layer.push(CellImage { target, perm });
        }
        images.push(layer);
    }
    SimplicialAutomorphism::new(&lc.complex, images)
}

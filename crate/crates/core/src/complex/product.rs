use std::collections::HashMap;

use super::{fundamental_cycle, CellChain, DeltaComplex, SimplicialAutomorphism};
use crate::chain::Chain;
use crate::error::{Error, Result};
use crate::rational::Rat;

/// A cell of `X × [0,1]` in the staircase triangulation, described through the cell `τ`
/// of `X` it projects onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProductCell {
    /// `τ` with vertices `0..bottom` on level 0 and `bottom..=deg τ` on level 1.
    /// `bottom = deg τ + 1` is `τ × {0}`, `bottom = 0` is `τ × {1}`.
    Flat {
        degree: usize,
        cell: usize,
        bottom: usize,
    },
    /// `[(v₀,0) … (v_pivot,0), (v_pivot,1) … (v_d,1)]`, of degree `deg τ + 1`.
    Prism {
        degree: usize,
        cell: usize,
        pivot: usize,
    },
}

impl ProductCell {
    pub fn dimension(&self) -> usize {
        match *self {
            ProductCell::Flat { degree, .. } => degree,
            ProductCell::Prism { degree, .. } => degree + 1,
        }
    }
}

/// `X × [0,1]` (or its quotient by a monodromy) with the map back to product cells.
#[derive(Clone, Debug)]
pub struct Prism {
    pub complex: DeltaComplex,
    cells: Vec<Vec<ProductCell>>,
    index: Vec<HashMap<ProductCell, usize>>,
}

struct Builder<'a> {
    base: &'a DeltaComplex,
    monodromy: Option<&'a SimplicialAutomorphism>,
}

impl Builder<'_> {
    /// Ordered vertices `(position in τ, level)`. Level-0 positions follow the monodromy's
    /// vertex order so that `τ × {0}` is glued order-preservingly onto `φ(τ) × {1}`.
    fn vertices(&self, c: ProductCell) -> Vec<(usize, u8)> {
        let (degree, cell, bottom_end, top_start) = match c {
            ProductCell::Flat {
                degree,
                cell,
                bottom,
            } => (degree, cell, bottom, bottom),
            ProductCell::Prism {
                degree,
                cell,
                pivot,
            } => (degree, cell, pivot + 1, pivot),
        };
        let mut bottom: Vec<usize> = (0..bottom_end).collect();
        if let Some(phi) = self.monodromy {
            let perm = &phi.image(degree, cell).perm;
            bottom.sort_by_key(|&p| perm[p]);
        }
        bottom
            .into_iter()
            .map(|p| (p, 0))
            .chain((top_start..=degree).map(|p| (p, 1)))
            .collect()
    }

    fn face(&self, c: ProductCell, slot: usize) -> ProductCell {
        let (p, level) = self.vertices(c)[slot];
        match c {
            ProductCell::Prism {
                degree,
                cell,
                pivot,
            } if p == pivot => ProductCell::Flat {
                degree,
                cell,
                bottom: if level == 0 { pivot } else { pivot + 1 },
            },
            ProductCell::Prism {
                degree,
                cell,
                pivot,
            } => ProductCell::Prism {
                degree: degree - 1,
                cell: self.base.faces(degree, cell)[p],
                pivot: pivot - usize::from(p < pivot),
            },
            ProductCell::Flat {
                degree,
                cell,
                bottom,
            } => ProductCell::Flat {
                degree: degree - 1,
                cell: self.base.faces(degree, cell)[p],
                bottom: bottom - usize::from(p < bottom),
            },
        }
    }

    fn canonical(&self, c: ProductCell) -> ProductCell {
        match (c, self.monodromy) {
            (
                ProductCell::Flat {
                    degree,
                    cell,
                    bottom,
                },
                Some(phi),
            ) if bottom == degree + 1 => ProductCell::Flat {
                degree,
                cell: phi.image(degree, cell).target,
                bottom: 0,
            },
            _ => c,
        }
    }

    fn build(&self) -> Prism {
        let n = self.base.dimension();
        let mut cells: Vec<Vec<ProductCell>> = vec![Vec::new(); n + 2];
        for d in 0..=n {
            for cell in 0..self.base.num_cells(d) {
                let glued = self.monodromy.is_some();
                for bottom in 0..=d + 1 {
                    if glued && bottom == d + 1 {
                        continue;
                    }
                    cells[d].push(ProductCell::Flat {
                        degree: d,
                        cell,
                        bottom,
                    });
                }
                for pivot in 0..=d {
                    cells[d + 1].push(ProductCell::Prism {
                        degree: d,
                        cell,
                        pivot,
                    });
                }
            }
        }
        for layer in &mut cells {
            layer.sort();
        }
        let index: Vec<HashMap<ProductCell, usize>> = cells
            .iter()
            .map(|l| l.iter().enumerate().map(|(i, &c)| (c, i)).collect())
            .collect();
        let faces = cells
            .iter()
            .enumerate()
            .map(|(dim, layer)| {
                layer
                    .iter()
                    .map(|&c| {
                        if dim == 0 {
                            return Vec::new();
                        }
                        (0..=dim)
                            .map(|s| index[dim - 1][&self.canonical(self.face(c, s))])
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let complex = DeltaComplex::new(faces)
            .expect("product faces reference existing cells")
            .with_default_labels();
        Prism {
            complex,
            cells,
            index,
        }
    }
}

impl Prism {
    /// The staircase triangulation of `X × [0,1]`.
    pub fn product(x: &DeltaComplex) -> Prism {
        Builder {
            base: x,
            monodromy: None,
        }
        .build()
    }

    pub fn cell(&self, dim: usize, id: usize) -> ProductCell {
        self.cells[dim][id]
    }

    pub fn cell_id(&self, c: ProductCell) -> Option<usize> {
        self.index.get(c.dimension())?.get(&c).copied()
    }

    fn level_map(&self, c: &CellChain, bottom: bool) -> CellChain {
        let k = c.degree();
        c.map_terms(k, |&cell| {
            let pc = ProductCell::Flat {
                degree: k,
                cell,
                bottom: if bottom { k + 1 } else { 0 },
            };
            vec![(self.cell_id(pc).expect("level cell exists"), Rat::from_integer(1.into()))]
        })
    }

    /// `(i₀)_#`: the copy of a chain on level 0.
    pub fn bottom(&self, c: &CellChain) -> CellChain {
        self.level_map(c, true)
    }

    /// `(i₁)_#`: the copy of a chain on level 1.
    pub fn top(&self, c: &CellChain) -> CellChain {
        self.level_map(c, false)
    }

    /// Prism operator `P(σ) = Σᵢ (−1)ⁱ [v₀…vᵢ, vᵢ′…v_d′]`; satisfies
    /// `∂P + P∂ = (i₁)_# − (i₀)_#` and `‖P(c)‖₁ = (deg c + 1)·‖c‖₁`.
    pub fn prism_operator(&self, c: &CellChain) -> CellChain {
        let k = c.degree();
        c.map_terms(k + 1, |&cell| {
            (0..=k)
                .map(|pivot| {
                    let id = self
                        .cell_id(ProductCell::Prism {
                            degree: k,
                            cell,
                            pivot,
                        })
                        .expect("prism cell exists");
                    let s: i64 = if pivot % 2 == 0 { 1 } else { -1 };
                    (id, Rat::from_integer(s.into()))
                })
                .collect()
        })
    }
}

/// Product triangulation `P = X × [0,1]` together with the prism chain `w = P(z)`.
/// For a cycle `z`, `∂w = (i₁)_#(z) − (i₀)_#(z)`; in general `∂w = (i₁)_# z − (i₀)_# z − P(∂z)`.
pub fn prism_chain(x: &DeltaComplex, z: &CellChain) -> Result<(Prism, CellChain)> {
    if z.degree() > x.dimension() {
        return Err(Error::DegreeMismatch {
            expected: x.dimension(),
            found: z.degree(),
        });
    }
    if let Some(&bad) = z.keys().find(|&&i| i >= x.num_cells(z.degree())) {
        return Err(Error::InvalidComplex(format!(
            "chain refers to missing cell {}:{bad}",
            z.degree()
        )));
    }
    let p = Prism::product(x);
    let w = if z.is_zero() {
        Chain::zero(z.degree() + 1, z.mode())
    } else {
        p.prism_operator(z)
    };
    Ok((p, w))
}

/// Mapping torus `X × [0,1] / (x,0) ∼ (φ(x),1)`, triangulated by the staircase prisms.
pub fn mapping_torus(x: &DeltaComplex, phi: &SimplicialAutomorphism) -> Result<DeltaComplex> {
    phi.check(x)?;
    if let Ok(z) = fundamental_cycle(x) {
        let image = phi.apply_chain(&z);
        if image == z.neg() && !z.is_zero() {
            return Err(Error::OrientationReversing);
        }
        if image != z {
            return Err(Error::InvalidAutomorphism(
                "image of the fundamental cycle is not ± itself".into(),
            ));
        }
    }
    Ok(Builder {
        base: x,
        monodromy: Some(phi),
    }
    .build()
    .complex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::*;
    use crate::linalg::Mat2;
    use crate::rational::int_rat;

    #[test]
    fn product_of_one_vertex_torus() {
        let x = build_one_vertex_torus();
        let p = Prism::product(&x);
        assert_eq!(p.complex.cell_counts(), vec![2, 10, 14, 6]);
        assert!(p.complex.validate().is_complex);
        let z = fundamental_cycle(&x).unwrap();
        let (p, w) = prism_chain(&x, &z).unwrap();
        assert_eq!(w.l1_norm(), int_rat(6));
        let lhs = p.complex.boundary(&w);
        let rhs = p.top(&z).sub(&p.bottom(&z)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_chain_gives_zero_prism() {
        let x = build_circle(3);
        let (_, w) = prism_chain(&x, &Chain::zero(1, crate::CoeffMode::Z)).unwrap();
        assert!(w.is_zero());
        assert_eq!(w.degree(), 2);
    }

    #[test]
    fn circle_prism_identity() {
        let x = build_circle(3);
        let z = fundamental_cycle(&x).unwrap();
        let (p, w) = prism_chain(&x, &z).unwrap();
        assert!(w.l1_norm() <= int_rat(6));
        assert_eq!(p.complex.boundary(&w), p.top(&z).sub(&p.bottom(&z)).unwrap());
    }

    #[test]
    fn degree_too_high_is_rejected() {
        let x = build_circle(3);
        let z = Chain::from_int_terms(2, [(0usize, 1)]);
        assert!(matches!(prism_chain(&x, &z), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn mapping_torus_of_identity() {
        let x = build_one_vertex_torus();
        let e = mapping_torus(&x, &SimplicialAutomorphism::identity(&x)).unwrap();
        assert_eq!(e.num_cells(3), 6);
        assert_eq!(e.euler_characteristic(), 0);
        let r = e.validate();
        assert!(r.is_complex && r.is_closed_pseudo_manifold, "{r:?}");
        assert!(fundamental_cycle(&e).is_ok());
    }

    #[test]
    fn mapping_torus_with_reordering_monodromy() {
        let (x, phi) = SimplicialAutomorphism::grid_affine(2, &Mat2::new(-1, 0, 0, -1), [0, 0]).unwrap();
        let e = mapping_torus(&x, &phi).unwrap();
        let r = e.validate();
        assert!(r.is_complex && r.is_closed_pseudo_manifold, "{r:?}");
        assert!(fundamental_cycle(&e).is_ok());
    }

    #[test]
    fn orientation_reversing_monodromy_is_rejected() {
        let (x, phi) = SimplicialAutomorphism::grid_affine(2, &Mat2::new(0, 1, 1, 0), [0, 0]).unwrap();
        assert_eq!(mapping_torus(&x, &phi), Err(Error::OrientationReversing));
    }
}

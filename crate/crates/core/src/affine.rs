//! Affine singular simplices on the flat torus `ℝ²/ℤ²`.
//!
//! A simplex is a basepoint together with the displacement vectors to its other vertices;
//! translating by an integer vector gives the same singular simplex, so the basepoint is
//! kept in `[0,1)²`. Faces, the boundary and the action of `GL₂(ℤ)` stay inside the model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chain::{Chain, CoeffMode};
use crate::error::{Error, Result};
use crate::linalg::{IntMatrix, Mat2};
use crate::rational::{format_rat, frac, parse_rat, Int, Rat};

pub type Vec2 = [Rat; 2];

fn add(u: &Vec2, v: &Vec2) -> Vec2 {
    [&u[0] + &v[0], &u[1] + &v[1]]
}

fn sub(u: &Vec2, v: &Vec2) -> Vec2 {
    [&u[0] - &v[0], &u[1] - &v[1]]
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineSimplex {
    base: Vec2,
    disp: Vec<Vec2>,
}

impl AffineSimplex {
    /// The simplex with vertices `base, base + disp[0], …`, basepoint reduced mod `ℤ²`.
    pub fn new(base: Vec2, disp: Vec<Vec2>) -> Self {
        AffineSimplex {
            base: [frac(&base[0]), frac(&base[1])],
            disp,
        }
    }

    /// Convenience constructor from `(numerator, denominator)` pairs sharing one denominator.
    pub fn from_lattice(q: i64, base: [i64; 2], disp: &[[i64; 2]]) -> Self {
        let r = |n: i64| Rat::new(n.into(), q.into());
        AffineSimplex::new(
            [r(base[0]), r(base[1])],
            disp.iter().map(|w| [r(w[0]), r(w[1])]).collect(),
        )
    }

    pub fn degree(&self) -> usize {
        self.disp.len()
    }

    pub fn base(&self) -> &Vec2 {
        &self.base
    }

    pub fn displacements(&self) -> &[Vec2] {
        &self.disp
    }

    /// Vertex positions in `ℝ²` with the first at the basepoint.
    pub fn vertices(&self) -> Vec<Vec2> {
        std::iter::once(self.base.clone())
            .chain(self.disp.iter().map(|w| add(&self.base, w)))
            .collect()
    }

    /// Face opposite vertex `i`.
    pub fn face(&self, i: usize) -> AffineSimplex {
        assert!(i <= self.degree(), "face index out of range");
        if i == 0 {
            let w1 = &self.disp[0];
            AffineSimplex::new(
                add(&self.base, w1),
                self.disp[1..].iter().map(|w| sub(w, w1)).collect(),
            )
        } else {
            let mut disp = self.disp.clone();
            disp.remove(i - 1);
            AffineSimplex::new(self.base.clone(), disp)
        }
    }

    /// Rank of the displacement vectors.
    pub fn displacement_rank(&self) -> usize {
        let nonzero: Vec<&Vec2> = self.disp.iter().filter(|w| !(w[0].is_zero() && w[1].is_zero())).collect();
        if nonzero.is_empty() {
            return 0;
        }
        let u = nonzero[0];
        let independent = nonzero[1..]
            .iter()
            .any(|v| !(&u[0] * &v[1] - &u[1] * &v[0]).is_zero());
        if independent {
            2
        } else {
            1
        }
    }

    /// A simplex is degenerate when its displacements span less than `min(k, 2)` dimensions.
    pub fn is_degenerate(&self) -> bool {
        self.displacement_rank() < self.degree().min(2)
    }

    pub fn apply_linear(&self, a: &Mat2) -> AffineSimplex {
        AffineSimplex::new(a.apply_rat(&self.base), self.disp.iter().map(|w| a.apply_rat(w)).collect())
    }

    pub fn translate(&self, t: &Vec2) -> AffineSimplex {
        AffineSimplex::new(add(&self.base, t), self.disp.clone())
    }
}

impl fmt::Debug for AffineSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |v: &Vec2| format!("({}, {})", format_rat(&v[0]), format_rat(&v[1]));
        write!(f, "[{}", p(&self.base))?;
        for (i, w) in self.disp.iter().enumerate() {
            f.write_str(if i == 0 { "; " } else { ", " })?;
            f.write_str(&p(w))?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct SimplexJson {
    base: [String; 2],
    disp: Vec<[String; 2]>,
}

impl Serialize for AffineSimplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = |w: &Vec2| [format_rat(&w[0]), format_rat(&w[1])];
        SimplexJson {
            base: v(&self.base),
            disp: self.disp.iter().map(v).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineSimplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SimplexJson::deserialize(d)?;
        let v = |w: &[String; 2]| -> Result<Vec2> { Ok([parse_rat(&w[0])?, parse_rat(&w[1])?]) };
        let base = v(&j.base).map_err(serde::de::Error::custom)?;
        let disp = j
            .disp
            .iter()
            .map(v)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(AffineSimplex::new(base, disp))
    }
}

pub type AffineChain = Chain<AffineSimplex>;

/// `∂c = Σ (−1)ⁱ faceᵢ`. The boundary of a 0-chain is the zero 0-chain.
pub fn boundary(c: &AffineChain) -> AffineChain {
    let k = c.degree();
    if k == 0 {
        return Chain::zero(0, c.mode());
    }
    c.map_terms(k - 1, |s| {
        (0..=k)
            .map(|i| {
                let sign = if i % 2 == 0 { Rat::one() } else { -Rat::one() };
                (s.face(i), sign)
            })
            .collect()
    })
}

/// Push-forward under the torus map induced by `a ∈ GL₂(ℤ)`.
pub fn apply_linear(a: &Mat2, c: &AffineChain) -> Result<AffineChain> {
    if !a.is_unimodular() {
        return Err(Error::NotUnimodular(a.det().to_string()));
    }
    Ok(c.map_terms(c.degree(), |s| vec![(s.apply_linear(a), Rat::one())]))
}

/// The `2q²` triangles of the `q`-grid, oriented coherently: each square with lower-left
/// corner `p` contributes `(p; e₁, e₁+e₂) − (p; e₂, e₁+e₂)` (edges scaled by `1/q`).
pub fn grid_cycle(q: usize) -> AffineChain {
    assert!(q >= 1, "grid size must be positive");
    let q = q as i64;
    let mut terms = Vec::new();
    for i in 0..q {
        for j in 0..q {
            terms.push((AffineSimplex::from_lattice(q, [i, j], &[[1, 0], [1, 1]]), 1));
            terms.push((AffineSimplex::from_lattice(q, [i, j], &[[0, 1], [1, 1]]), -1));
        }
    }
    Chain::from_int_terms(2, terms)
}

/// Serialized form of an affine chain: `{"degree": k, "entries": [[simplex, "p/q"], …]}`.
pub fn chain_to_json(c: &AffineChain) -> serde_json::Value {
    serde_json::json!({
        "degree": c.degree(),
        "entries": c
            .iter()
            .map(|(s, v)| serde_json::json!([s, format_rat(v)]))
            .collect::<Vec<_>>(),
    })
}

pub fn chain_from_json(v: &serde_json::Value, mode: CoeffMode) -> Result<AffineChain> {
    #[derive(Deserialize)]
    struct J {
        degree: usize,
        entries: Vec<(AffineSimplex, String)>,
    }
    let j: J = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some((s, _)) = j.entries.iter().find(|(s, _)| s.degree() != j.degree) {
        return Err(Error::DegreeMismatch {
            expected: j.degree,
            found: s.degree(),
        });
    }
    let terms = j
        .entries
        .into_iter()
        .map(|(s, v)| Ok((s, parse_rat(&v)?)))
        .collect::<Result<Vec<_>>>()?;
    Chain::from_terms(j.degree, mode, terms)
}

/// Parameters of a finite candidate set of affine simplices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryParams {
    pub q: usize,
    pub r: usize,
    pub k: usize,
    pub allow_degenerate: bool,
    pub cap: usize,
}

impl DictionaryParams {
    pub fn new(q: usize, r: usize, k: usize) -> Self {
        DictionaryParams {
            q,
            r,
            k,
            allow_degenerate: false,
            cap: 200_000,
        }
    }
}

/// Degree-`k` simplices with basepoint in `(1/q)ℤ²/ℤ²` and displacements in `(1/q)ℤ²` of
/// sup-norm at most `r`, together with the face set and the boundary matrix between them.
#[derive(Clone, Debug)]
pub struct Dictionary {
    pub params: DictionaryParams,
    simplices: Vec<AffineSimplex>,
    faces: Vec<AffineSimplex>,
    column: BTreeMap<AffineSimplex, usize>,
    row: BTreeMap<AffineSimplex, usize>,
}

pub fn build_dictionary(params: &DictionaryParams) -> Result<Dictionary> {
    let (q, r, k) = (params.q, params.r, params.k);
    if q == 0 || r == 0 {
        return Err(Error::Parse("dictionary needs q, r ≥ 1".into()));
    }
    let side = 2 * q * r + 1;
    let needed = (q * q).saturating_mul(side.checked_pow(k as u32).unwrap_or(usize::MAX));
    if needed > params.cap {
        return Err(Error::SizeLimitExceeded {
            limit: params.cap,
            needed,
        });
    }
    let span = (q * r) as i64;
    let vectors: Vec<[i64; 2]> = (-span..=span)
        .flat_map(|x| (-span..=span).map(move |y| [x, y]))
        .collect();
    let mut set = BTreeSet::new();
    let mut disp = vec![0usize; k];
    for bx in 0..q as i64 {
        for by in 0..q as i64 {
            loop {
                let ws: Vec<[i64; 2]> = disp.iter().map(|&i| vectors[i]).collect();
                let s = AffineSimplex::from_lattice(q as i64, [bx, by], &ws);
                if params.allow_degenerate || !s.is_degenerate() {
                    set.insert(s);
                }
                if !advance(&mut disp, vectors.len()) {
                    break;
                }
            }
        }
    }
    Ok(Dictionary::from_simplices(params.clone(), set))
}

fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

impl Dictionary {
    /// A dictionary over an explicit set of simplices of degree `params.k`.
    pub fn from_simplices(params: DictionaryParams, set: impl IntoIterator<Item = AffineSimplex>) -> Self {
        let simplices: Vec<AffineSimplex> = set.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let faces: Vec<AffineSimplex> = if params.k == 0 {
            Vec::new()
        } else {
            simplices
                .iter()
                .flat_map(|s| (0..=s.degree()).map(|i| s.face(i)))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        };
        let column = simplices.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let row = faces.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        Dictionary {
            params,
            simplices,
            faces,
            column,
            row,
        }
    }

    /// Adds simplices (for example the support of a known filling) to the candidate set.
    pub fn extended(&self, extra: impl IntoIterator<Item = AffineSimplex>) -> Self {
        Dictionary::from_simplices(
            self.params.clone(),
            self.simplices.iter().cloned().chain(extra),
        )
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[AffineSimplex] {
        &self.simplices
    }

    pub fn faces(&self) -> &[AffineSimplex] {
        &self.faces
    }

    pub fn contains(&self, s: &AffineSimplex) -> bool {
        self.column.contains_key(s)
    }

    pub fn column_of(&self, s: &AffineSimplex) -> Option<usize> {
        self.column.get(s).copied()
    }

    pub fn row_of(&self, s: &AffineSimplex) -> Option<usize> {
        self.row.get(s).copied()
    }

    /// Boundary matrix with rows indexed by [`faces`](Self::faces) and columns by
    /// [`simplices`](Self::simplices).
    pub fn boundary_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.faces.len(), self.simplices.len());
        for (j, s) in self.simplices.iter().enumerate() {
            for i in 0..=s.degree() {
                let sign = if i % 2 == 0 { Int::one() } else { -Int::one() };
                m.add_to(self.row[&s.face(i)], j, &sign);
            }
        }
        m
    }

    /// Chain from a coefficient vector over the columns.
    pub fn chain_from_columns(&self, v: &[Rat], mode: CoeffMode) -> AffineChain {
        Chain::from_terms(
            self.params.k,
            mode,
            self.simplices.iter().cloned().zip(v.iter().cloned()),
        )
        .expect("coefficients match the chain mode")
    }

    /// Coefficient vector over the face rows; `None` if the chain leaves the face set.
    pub fn rows_from_chain(&self, c: &AffineChain) -> Option<Vec<Rat>> {
        let mut v = vec![Rat::zero(); self.faces.len()];
        for (s, x) in c.iter() {
            v[self.row_of(s)?] = x.clone();
        }
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int_rat, rat};
    use proptest::prelude::*;

    fn v(x: i64, y: i64) -> Vec2 {
        [int_rat(x), int_rat(y)]
    }

    #[test]
    fn canonical_basepoint() {
        let s = AffineSimplex::new([rat(5, 2), rat(-1, 3)], vec![v(1, 0)]);
        assert_eq!(s.base(), &[rat(1, 2), rat(2, 3)]);
        assert_eq!(s, AffineSimplex::new([rat(1, 2), rat(-4, 3)], vec![v(1, 0)]));
    }

    #[test]
    fn triangle_boundary_formula() {
        let p = [rat(1, 3), rat(1, 5)];
        let (w1, w2) = (v(1, 2), v(-1, 1));
        let t = Chain::from_int_terms(2, [(AffineSimplex::new(p.clone(), vec![w1.clone(), w2.clone()]), 1)]);
        let expected = Chain::from_int_terms(
            1,
            [
                (AffineSimplex::new(add(&p, &w1), vec![sub(&w2, &w1)]), 1),
                (AffineSimplex::new(p.clone(), vec![w2.clone()]), -1),
                (AffineSimplex::new(p.clone(), vec![w1.clone()]), 1),
            ],
        );
        assert_eq!(boundary(&t), expected);
    }

    #[test]
    fn grid_cycles() {
        for q in 1..=3 {
            let z = grid_cycle(q);
            assert_eq!(z.l1_norm(), int_rat(2 * q * q));
            assert!(boundary(&z).is_zero());
            assert_eq!(apply_linear(&Mat2::identity(), &z).unwrap(), z);
        }
    }

    #[test]
    fn cat_map_image_of_grid_cycle() {
        let z = grid_cycle(1);
        let a = Mat2::new(2, 1, 1, 1);
        let az = apply_linear(&a, &z).unwrap();
        assert!(boundary(&az).is_zero());
        assert_eq!(az.l1_norm(), int_rat(2));
        assert_ne!(az, z);
        assert!(matches!(apply_linear(&Mat2::new(2, 0, 0, 1), &z), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn edge_dictionary_matches_enumeration() {
        for allow in [false, true] {
            let mut p = DictionaryParams::new(1, 1, 1);
            p.allow_degenerate = allow;
            let d = build_dictionary(&p).unwrap();
            let mut count = 0;
            for x in -1..=1 {
                for y in -1..=1 {
                    if allow || (x, y) != (0, 0) {
                        count += 1;
                    }
                }
            }
            assert_eq!(d.len(), count);
        }
    }

    #[test]
    fn dictionary_closure_and_membership() {
        let d = build_dictionary(&DictionaryParams::new(2, 1, 2)).unwrap();
        for s in d.simplices() {
            for i in 0..=2 {
                assert!(d.row_of(&s.face(i)).is_some());
            }
        }
        for (s, _) in grid_cycle(2).iter() {
            assert!(d.contains(s));
        }
        let m = d.boundary_matrix();
        assert_eq!((m.rows(), m.cols()), (d.faces().len(), d.len()));
    }

    #[test]
    fn dictionary_cap() {
        let mut p = DictionaryParams::new(4, 2, 3);
        p.cap = 1000;
        assert!(matches!(build_dictionary(&p), Err(Error::SizeLimitExceeded { .. })));
    }

    #[test]
    fn json_round_trip() {
        let s = AffineSimplex::new([rat(1, 2), rat(0, 1)], vec![v(1, 0), [rat(-1, 3), rat(2, 1)]]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"base":["1/2","0"],"disp":[["1","0"],["-1/3","2"]]}"#);
        assert_eq!(serde_json::from_str::<AffineSimplex>(&text).unwrap(), s);
        let c = grid_cycle(2);
        assert_eq!(chain_from_json(&chain_to_json(&c), CoeffMode::Z).unwrap(), c);
    }

    fn small_vec() -> impl Strategy<Value = Vec2> {
        (-6i64..=6, -6i64..=6, 1i64..=3).prop_map(|(x, y, d)| [rat(x, d), rat(y, d)])
    }

    fn simplex(k: usize) -> impl Strategy<Value = AffineSimplex> {
        (small_vec(), prop::collection::vec(small_vec(), k)).prop_map(|(b, w)| AffineSimplex::new(b, w))
    }

    fn chain(k: usize) -> impl Strategy<Value = AffineChain> {
        prop::collection::vec((simplex(k), -3i64..=3), 0..6).prop_map(move |t| Chain::from_int_terms(k, t))
    }

    fn unimodular() -> impl Strategy<Value = Mat2> {
        prop::collection::vec(0usize..4, 0..6).prop_map(|ws| {
            let gens = [Mat2::r(), Mat2::l(), Mat2::new(0, -1, 1, 0), Mat2::new(0, 1, 1, 0)];
            ws.iter().fold(Mat2::identity(), |m, &i| m.mul(&gens[i]))
        })
    }

    proptest! {
        #[test]
        fn boundary_squares_to_zero(c in (1usize..=3).prop_flat_map(chain)) {
            prop_assert!(boundary(&boundary(&c)).is_zero());
        }

        #[test]
        fn linear_maps_commute_with_boundary(c in chain(2), a in unimodular(), b in unimodular()) {
            let ac = apply_linear(&a, &c).unwrap();
            prop_assert_eq!(boundary(&ac), apply_linear(&a, &boundary(&c)).unwrap());
            prop_assert_eq!(ac.l1_norm(), c.l1_norm());
            prop_assert_eq!(
                apply_linear(&a.mul(&b), &c).unwrap(),
                apply_linear(&a, &apply_linear(&b, &c).unwrap()).unwrap()
            );
        }

        #[test]
        fn canonical_form_is_idempotent(s in simplex(2)) {
            let again = AffineSimplex::new(s.base().clone(), s.displacements().to_vec());
            prop_assert_eq!(again, s);
        }
    }
}

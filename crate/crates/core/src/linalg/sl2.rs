use std::fmt;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::{snf, HomologyGroup, IntMatrix};
use crate::error::{Error, Result};
use crate::rational::{parse_int, Int, Rat};

/// A 2×2 integer matrix `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: Int,
    pub b: Int,
    pub c: Int,
    pub d: Int,
}

impl Mat2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn from_ints(a: Int, b: Int, c: Int, d: Int) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    /// `R = [[1,1],[0,1]]`.
    pub fn r() -> Self {
        Mat2::new(1, 1, 0, 1)
    }

    /// `L = [[1,0],[1,1]]`.
    pub fn l() -> Self {
        Mat2::new(1, 0, 1, 1)
    }

    /// Parses the row-major flag form `a,b,c,d`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected four comma-separated integers, got {s:?}"
            )));
        }
        let v = parts
            .iter()
            .map(|p| parse_int(p))
            .collect::<Result<Vec<_>>>()?;
        let [a, b, c, d]: [Int; 4] = v.try_into().expect("length checked");
        Ok(Mat2 { a, b, c, d })
    }

    pub fn det(&self) -> Int {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> Int {
        &self.a + &self.d
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn pow(&self, mut e: u64) -> Mat2 {
        let mut base = self.clone();
        let mut acc = Mat2::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Mat2 {
            a: &self.d * &det,
            b: -&self.b * &det,
            c: -&self.c * &det,
            d: &self.a * &det,
        })
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn conjugate_by(&self, c: &Mat2) -> Result<Mat2> {
        Ok(c.mul(self).mul(&c.inverse()?))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn check_sl2(&self) -> Result<()> {
        let det = self.det();
        if det.is_one() {
            Ok(())
        } else {
            Err(Error::NotSl2(det.to_string()))
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    pub fn is_nonnegative(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d]
            .iter()
            .all(|x| !x.is_negative())
    }

    pub fn apply_int(&self, v: &[Int; 2]) -> [Int; 2] {
        [
            &self.a * &v[0] + &self.b * &v[1],
            &self.c * &v[0] + &self.d * &v[1],
        ]
    }

    pub fn apply_rat(&self, v: &[Rat; 2]) -> [Rat; 2] {
        let (a, b, c, d) = (
            Rat::from_integer(self.a.clone()),
            Rat::from_integer(self.b.clone()),
            Rat::from_integer(self.c.clone()),
            Rat::from_integer(self.d.clone()),
        );
        [&a * &v[0] + &b * &v[1], &c * &v[0] + &d * &v[1]]
    }

    /// Columns as vectors.
    pub fn columns(&self) -> ([Int; 2], [Int; 2]) {
        (
            [self.a.clone(), self.c.clone()],
            [self.b.clone(), self.d.clone()],
        )
    }

    pub fn from_columns(u: &[Int; 2], v: &[Int; 2]) -> Mat2 {
        Mat2 {
            a: u[0].clone(),
            b: v[0].clone(),
            c: u[1].clone(),
            d: v[1].clone(),
        }
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(
            2,
            2,
            vec![
                vec![self.a.clone(), self.b.clone()],
                vec![self.c.clone(), self.d.clone()],
            ],
        )
        .expect("2x2")
    }

    /// `A - I`.
    pub fn minus_identity(&self) -> Mat2 {
        Mat2 {
            a: &self.a - Int::one(),
            b: self.b.clone(),
            c: self.c.clone(),
            d: &self.d - Int::one(),
        }
    }

    /// Row-major flag form `a,b,c,d`.
    pub fn flag(&self) -> String {
        format!("{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.flag())
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Mat2::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// First homology of the torus bundle with monodromy `Aᵐ`: `ℤ ⊕ coker(Aᵐ − I)`.
pub fn torus_bundle_h1(a: &Mat2, m: u64) -> Result<HomologyGroup> {
    a.check_sl2()?;
    if m == 0 {
        return Err(Error::Parse("m must be positive".into()));
    }
    let s = snf(&a.pow(m).minus_identity().to_int_matrix());
    let rank = s.rank();
    Ok(HomologyGroup {
        degree: 1,
        betti: 1 + (2 - rank),
        torsion: s.torsion(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_multiply_to_cat_map() {
        assert_eq!(Mat2::r().mul(&Mat2::l()), Mat2::new(2, 1, 1, 1));
        assert_eq!(Mat2::r().mul(&Mat2::l()).pow(2), Mat2::new(5, 3, 3, 2));
        assert_eq!(Mat2::r().pow(2).mul(&Mat2::l()), Mat2::new(3, 2, 1, 1));
    }

    #[test]
    fn parse_flag() {
        assert_eq!(Mat2::parse("2, 1,1,1").unwrap(), Mat2::new(2, 1, 1, 1));
        assert!(Mat2::parse("2,1,1").is_err());
        assert!(Mat2::parse("a,b,c,d").is_err());
    }

    #[test]
    fn bundle_homology_examples() {
        let a = Mat2::new(2, 1, 1, 1);
        assert_eq!(torus_bundle_h1(&a, 1).unwrap().to_string(), "Z");
        assert_eq!(torus_bundle_h1(&a, 2).unwrap().to_string(), "Z + Z/5");
        assert_eq!(
            torus_bundle_h1(&Mat2::identity(), 1).unwrap().to_string(),
            "Z^3"
        );
        assert!(matches!(
            torus_bundle_h1(&Mat2::new(2, 0, 0, 1), 1),
            Err(Error::NotSl2(_))
        ));
    }
}

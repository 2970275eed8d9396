//! Sparse formal sums with exact coefficients and their ℓ¹ norm.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rat, is_integral, Int, Rat};

/// Coefficient ring of a chain. `Z` chains only ever hold integral coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CoeffMode {
    Z,
    Q,
}

impl fmt::Display for CoeffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoeffMode::Z => "Z",
            CoeffMode::Q => "Q",
        })
    }
}

impl std::str::FromStr for CoeffMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" | "int" | "integer" => Ok(CoeffMode::Z),
            "q" | "r" | "rational" | "real" => Ok(CoeffMode::Q),
            _ => Err(Error::Parse(format!("unknown coefficient mode {s:?}"))),
        }
    }
}

/// A degree-`k` chain: a finite map from generators to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chain<K: Ord> {
    degree: usize,
    mode: CoeffMode,
    entries: BTreeMap<K, Rat>,
}

impl<K: Ord + Clone> Chain<K> {
    pub fn zero(degree: usize, mode: CoeffMode) -> Self {
        Chain {
            degree,
            mode,
            entries: BTreeMap::new(),
        }
    }

    /// Collects terms, merging repeated generators and dropping zero sums.
    pub fn from_terms(
        degree: usize,
        mode: CoeffMode,
        terms: impl IntoIterator<Item = (K, Rat)>,
    ) -> Result<Self> {
        let mut c = Chain::zero(degree, mode);
        for (k, v) in terms {
            c.try_add_term(k, v)?;
        }
        Ok(c)
    }

    pub fn from_int_terms(
        degree: usize,
        terms: impl IntoIterator<Item = (K, i64)>,
    ) -> Self {
        let mut c = Chain::zero(degree, CoeffMode::Z);
        for (k, v) in terms {
            c.add_term(k, Rat::from_integer(Int::from(v)));
        }
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn mode(&self) -> CoeffMode {
        self.mode
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: &K) -> Option<&Rat> {
        self.entries.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn l1_norm(&self) -> Rat {
        self.entries.values().fold(Rat::zero(), |acc, v| acc + v.abs())
    }

    /// Number of generators with nonzero coefficient.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Adds `v·k`. In `Z` mode `v` must be integral.
    pub fn try_add_term(&mut self, k: K, v: Rat) -> Result<()> {
        if self.mode == CoeffMode::Z && !is_integral(&v) {
            return Err(Error::CoefficientMode(format!(
                "non-integral coefficient {} in a Z chain",
                format_rat(&v)
            )));
        }
        self.add_term(k, v);
        Ok(())
    }

    /// Adds `v·k` without checking the coefficient mode.
    pub(crate) fn add_term(&mut self, k: K, v: Rat) {
        if v.is_zero() {
            return;
        }
        match self.entries.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += v;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_int_term(&mut self, k: K, v: i64) {
        self.add_term(k, Rat::from_integer(Int::from(v)));
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        if self.mode != other.mode {
            return Err(Error::CoefficientMode(format!(
                "cannot combine {} and {} chains",
                self.mode, other.mode
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_compatible(other)?;
        for (k, v) in &other.entries {
            self.add_term(k.clone(), v.clone());
        }
        Ok(())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.add_term(k.clone(), -v.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Chain {
            degree: self.degree,
            mode: self.mode,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), -v.clone()))
                .collect(),
        }
    }

    /// Multiplies by `s`; a `Z` chain only accepts integral scalars.
    pub fn scale(&self, s: &Rat) -> Result<Self> {
        if self.mode == CoeffMode::Z && !is_integral(s) {
            return Err(Error::CoefficientMode(format!(
                "cannot scale a Z chain by {}",
                format_rat(s)
            )));
        }
        if s.is_zero() {
            return Ok(Chain::zero(self.degree, self.mode));
        }
        Ok(Chain {
            degree: self.degree,
            mode: self.mode,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), v * s))
                .collect(),
        })
    }

    /// Reinterprets the chain in `mode`; `Q → Z` fails on fractional coefficients.
    pub fn with_mode(&self, mode: CoeffMode) -> Result<Self> {
        if mode == CoeffMode::Z && !self.entries.values().all(is_integral) {
            return Err(Error::CoefficientMode(
                "chain has fractional coefficients".into(),
            ));
        }
        Ok(Chain {
            degree: self.degree,
            mode,
            entries: self.entries.clone(),
        })
    }

    /// Applies a generator map with signs, e.g. the action of a cellular map.
    pub fn map_terms<K2: Ord + Clone>(
        &self,
        degree: usize,
        mut f: impl FnMut(&K) -> Vec<(K2, Rat)>,
    ) -> Chain<K2> {
        let mut out = Chain::zero(degree, self.mode);
        for (k, v) in &self.entries {
            for (k2, w) in f(k) {
                out.add_term(k2, v * w);
            }
        }
        out
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Chain<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chain[{}; {}](", self.degree, self.mode)?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{}·{:?}", format_rat(v), k)?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn zero_coefficients_are_dropped() {
        let c = Chain::from_int_terms(1, [(0usize, 2), (1, -1), (0, -2)]);
        assert_eq!(c.len(), 1);
        assert_eq!(c.l1_norm(), rat(1, 1));
    }

    #[test]
    fn mode_is_enforced() {
        let mut c: Chain<usize> = Chain::zero(0, CoeffMode::Z);
        assert!(c.try_add_term(0, rat(1, 2)).is_err());
        assert!(c.scale(&rat(1, 3)).is_err());
        let q = Chain::<usize>::zero(0, CoeffMode::Q);
        assert!(c.add(&q).is_err());
        let d = Chain::<usize>::zero(1, CoeffMode::Z);
        assert!(matches!(c.add(&d), Err(Error::DegreeMismatch { .. })));
    }

    proptest! {
        #[test]
        fn norm_is_a_norm(a in proptest::collection::vec((0usize..6, -5i64..5), 0..8),
                          b in proptest::collection::vec((0usize..6, -5i64..5), 0..8),
                          s in -4i64..4) {
            let ca = Chain::from_int_terms(2, a);
            let cb = Chain::from_int_terms(2, b);
            let sum = ca.add(&cb).unwrap();
            prop_assert!(sum.l1_norm() <= ca.l1_norm() + cb.l1_norm());
            let scaled = ca.scale(&rat(s, 1)).unwrap();
            prop_assert_eq!(scaled.l1_norm(), ca.l1_norm() * rat(s.abs(), 1));
            prop_assert!(sum.sub(&cb).unwrap() == ca);
        }
    }
}

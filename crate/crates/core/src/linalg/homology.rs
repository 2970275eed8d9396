use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::snf;
use crate::complex::DeltaComplex;
use crate::rational::{serde_int, Int};

/// A finitely generated abelian group `ℤ^betti ⊕ ⨁ ℤ/tᵢ` with `t₁ | t₂ | …`, all `tᵢ > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: usize,
    pub betti: usize,
    #[serde(with = "torsion_serde")]
    pub torsion: Vec<Int>,
}

mod torsion_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Wrapped(#[serde(with = "serde_int")] Int);

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        Ok(Vec::<Wrapped>::deserialize(d)?.into_iter().map(|w| w.0).collect())
    }
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> Int {
        self.torsion.iter().fold(Int::one(), |acc, t| acc * t)
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// Integral homology `H_k(X; ℤ)` via Smith normal forms of the boundary matrices.
pub fn homology(x: &DeltaComplex, k: usize) -> HomologyGroup {
    if k > x.dimension() {
        return HomologyGroup {
            degree: k,
            betti: 0,
            torsion: Vec::new(),
        };
    }
    let rank_out = if k == 0 { 0 } else { snf(&x.boundary_matrix(k)).rank() };
    let incoming = snf(&x.boundary_matrix(k + 1));
    HomologyGroup {
        degree: k,
        betti: x.num_cells(k) - rank_out - incoming.rank(),
        torsion: incoming.torsion(),
    }
}

pub fn homology_all(x: &DeltaComplex) -> Vec<HomologyGroup> {
    (0..=x.dimension()).map(|k| homology(x, k)).collect()
}

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{CellChain, DeltaComplex};
use crate::chain::{Chain, CoeffMode};
use crate::error::{Error, Result};
use crate::rational::{format_rat, is_integral, parse_rat, Rat};

/// Interchange form of a [`DeltaComplex`]: `cells[k][i]` lists the faces of cell `i` of
/// degree `k` (empty for vertices); labels are keyed by `"k:i"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub dimension: usize,
    pub cells: Vec<Vec<Vec<usize>>>,
    #[serde(default)]
    pub labels: BTreeMap<String, String>,
}

impl ComplexJson {
    pub fn from_complex(x: &DeltaComplex) -> Self {
        ComplexJson {
            dimension: x.dimension(),
            cells: x.cells().to_vec(),
            labels: x
                .labels()
                .iter()
                .map(|(&(k, i), name)| (format!("{k}:{i}"), name.clone()))
                .collect(),
        }
    }

    pub fn into_complex(self) -> Result<DeltaComplex> {
        if self.cells.len() != self.dimension + 1 {
            return Err(Error::InvalidComplex(format!(
                "dimension {} needs {} cell lists, found {}",
                self.dimension,
                self.dimension + 1,
                self.cells.len()
            )));
        }
        let mut labels = BTreeMap::new();
        for (key, name) in self.labels {
            let (k, i) = key
                .split_once(':')
                .and_then(|(k, i)| Some((k.parse().ok()?, i.parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("bad label key {key:?}")))?;
            labels.insert((k, i), name);
        }
        let x = DeltaComplex::new(self.cells)?;
        if labels.is_empty() {
            Ok(x.with_default_labels())
        } else {
            x.with_labels(labels)
        }
    }

    pub fn parse(text: &str) -> Result<DeltaComplex> {
        serde_json::from_str::<ComplexJson>(text)
            .map_err(|e| Error::Parse(e.to_string()))?
            .into_complex()
    }

    pub fn render(x: &DeltaComplex) -> String {
        serde_json::to_string_pretty(&Self::from_complex(x)).expect("serializable")
    }
}

/// Interchange form of a cellular chain: `{"degree": k, "entries": [[id, "p/q"], …]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainJson {
    pub degree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<CoeffMode>,
    pub entries: Vec<(usize, String)>,
}

impl ChainJson {
    pub fn from_chain(c: &CellChain) -> Self {
        ChainJson {
            degree: c.degree(),
            mode: Some(c.mode()),
            entries: c.iter().map(|(&i, v)| (i, format_rat(v))).collect(),
        }
    }

    /// Without an explicit mode the chain is integral unless a coefficient is fractional.
    pub fn into_chain(self) -> Result<CellChain> {
        let mut terms = Vec::with_capacity(self.entries.len());
        for (i, s) in &self.entries {
            terms.push((*i, parse_rat(s)?));
        }
        let mode = self.mode.unwrap_or(if terms.iter().all(|(_, v)| is_integral(v)) {
            CoeffMode::Z
        } else {
            CoeffMode::Q
        });
        Chain::from_terms(self.degree, mode, terms)
    }

    pub fn parse(text: &str) -> Result<CellChain> {
        serde_json::from_str::<ChainJson>(text)
            .map_err(|e| Error::Parse(e.to_string()))?
            .into_chain()
    }
}

/// Parses a linear combination of cells such as `v1 - v0`, `2*e0 - e1`, `3/2 #1.4` or `0`.
/// Cells are named by label or by `#k.i`. `default_degree` is used for the empty sum.
pub fn parse_chain_expr(
    x: &DeltaComplex,
    expr: &str,
    default_degree: usize,
    mode: CoeffMode,
) -> Result<CellChain> {
    let bad = |msg: &str| Error::Parse(format!("{msg} in chain expression {expr:?}"));
    let mut terms: Vec<(usize, usize, Rat)> = Vec::new();
    let mut rest = expr.trim();
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = Rat::one();
        if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.trim_start();
        } else if !first {
            return Err(bad("expected + or -"));
        }
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = rest[..end].trim();
        rest = rest[end..].trim_start();
        if term.is_empty() {
            return Err(bad("empty term"));
        }
        let (coef, name) = split_coefficient(term).ok_or_else(|| bad("malformed term"))?;
        let coef = match coef {
            Some(c) => parse_rat(c)?,
            None => Rat::one(),
        };
        let Some(name) = name else {
            if coef.is_zero() {
                continue;
            }
            return Err(bad("constant term"));
        };
        let (k, i) = resolve_cell(x, name).ok_or_else(|| bad(&format!("unknown cell {name:?}")))?;
        terms.push((k, i, sign * coef));
    }
    let degree = match terms.first() {
        Some(&(k, _, _)) => k,
        None => default_degree,
    };
    if let Some(&(k, _, _)) = terms.iter().find(|t| t.0 != degree) {
        return Err(Error::DegreeMismatch {
            expected: degree,
            found: k,
        });
    }
    Chain::from_terms(degree, mode, terms.into_iter().map(|(_, i, v)| (i, v)))
}

/// Splits `2*e0`, `2 e0`, `e0`, `3/2` into an optional coefficient and an optional name.
fn split_coefficient(term: &str) -> Option<(Option<&str>, Option<&str>)> {
    if let Some((c, n)) = term.split_once('*') {
        let (c, n) = (c.trim(), n.trim());
        if c.is_empty() || n.is_empty() || n.contains('*') {
            return None;
        }
        return Some((Some(c), Some(n)));
    }
    let numeric_len = term
        .find(|ch: char| !(ch.is_ascii_digit() || ch == '/'))
        .unwrap_or(term.len());
    if numeric_len == 0 {
        return Some((None, Some(term)));
    }
    let (c, n) = term.split_at(numeric_len);
    let n = n.trim();
    if n.is_empty() {
        Some((Some(c), None))
    } else if n.len() == term.len() - numeric_len {
        // a label may start with digits only when written with `*`
        None
    } else {
        Some((Some(c), Some(n)))
    }
}

fn resolve_cell(x: &DeltaComplex, name: &str) -> Option<(usize, usize)> {
    if let Some(id) = name.strip_prefix('#') {
        let (k, i) = id.split_once('.')?;
        let (k, i): (usize, usize) = (k.parse().ok()?, i.parse().ok()?);
        return (k <= x.dimension() && i < x.num_cells(k)).then_some((k, i));
    }
    x.find_label(name)
}

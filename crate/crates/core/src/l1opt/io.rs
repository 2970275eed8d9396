use serde::{Deserialize, Serialize};

use super::fill::{FillProblem, FillSolution};
use super::problem::{L1Problem, Objective};
use crate::chain::CoeffMode;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::rational::{format_rat, parse_rat, Rat};

/// Interchange form of a [`FillProblem`]: matrix rows, target, mode and objective, with all
/// numbers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemJson {
    pub matrix: Vec<Vec<String>>,
    pub target: Vec<String>,
    pub mode: CoeffMode,
    #[serde(default = "default_objective")]
    pub objective: Objective,
}

fn default_objective() -> Objective {
    Objective::L1
}

fn rats(v: &[String]) -> Result<Vec<Rat>> {
    v.iter().map(|s| parse_rat(s)).collect()
}

fn strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

impl ProblemJson {
    pub fn from_problem(p: &FillProblem) -> Self {
        ProblemJson {
            matrix: p.boundary.to_string_rows(),
            target: strings(&p.target),
            mode: p.mode,
            objective: p.objective,
        }
    }

    pub fn into_problem(self) -> Result<FillProblem> {
        let boundary = if self.matrix.is_empty() {
            IntMatrix::zeros(0, 0)
        } else {
            IntMatrix::from_string_rows(&self.matrix)?
        };
        FillProblem::new(boundary, rats(&self.target)?, self.mode, self.objective)
    }

    pub fn parse(text: &str) -> Result<FillProblem> {
        serde_json::from_str::<ProblemJson>(text)
            .map_err(|e| Error::Parse(e.to_string()))?
            .into_problem()
    }
}

/// Interchange form of a [`FillSolution`], self-contained enough for an independent check:
/// `matrix · witness = target`, `value = Σ|witness|`, and for LP runs `|matrixᵀ·dual| ≤ 1`
/// with `target · dual = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionJson {
    pub status: String,
    pub mode: CoeffMode,
    pub objective: Objective,
    pub value: String,
    pub bound: String,
    pub witness: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<String>>,
    pub nodes: usize,
}

impl SolutionJson {
    pub fn from_solution(s: &FillSolution) -> Self {
        SolutionJson {
            status: "optimal".into(),
            mode: s.mode,
            objective: s.objective,
            value: format_rat(&s.value),
            bound: format_rat(&s.bound),
            witness: strings(&s.witness),
            cycle: s.cycle.as_deref().map(strings),
            dual: s.dual.as_deref().map(strings),
            nodes: s.nodes,
        }
    }

    pub fn into_solution(self) -> Result<FillSolution> {
        Ok(FillSolution {
            mode: self.mode,
            objective: self.objective,
            value: parse_rat(&self.value)?,
            bound: parse_rat(&self.bound)?,
            witness: rats(&self.witness)?,
            cycle: self.cycle.as_deref().map(rats).transpose()?,
            dual: self.dual.as_deref().map(rats).transpose()?,
            nodes: self.nodes,
        })
    }

    /// Re-checks a plain filling solution against its problem.
    pub fn check(&self, p: &FillProblem) -> Result<bool> {
        let s = self.clone().into_solution()?;
        let l1 = L1Problem::fill(p.boundary.clone(), p.target.clone())?;
        if !l1.is_feasible_point(&s.witness) {
            return Ok(false);
        }
        let achieved = match s.objective {
            Objective::L1 => l1.objective(&s.witness),
            Objective::Support => crate::rational::int_rat(l1.support(&s.witness)),
        };
        if achieved != s.value || s.bound > s.value {
            return Ok(false);
        }
        if s.mode == CoeffMode::Z && !s.witness.iter().all(crate::rational::is_integral) {
            return Ok(false);
        }
        Ok(match &s.dual {
            Some(y) => l1.verify_dual(y, &s.value),
            None => true,
        })
    }
}

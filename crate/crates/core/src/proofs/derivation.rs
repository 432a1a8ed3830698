use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::schema::{match_axiom, ProofSystem, Schema};
use super::tautology::check_tautology;
use crate::models::{validate_model, KyModel, Violation};
use crate::semantics::{EvalError, Evaluator, SemanticsVariant};
use crate::syntax::{parse_formula, Formula, Name, ParseError};

/// Why a line holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom(Schema),
    /// Propositional tautology under boolean abstraction of modal subformulas.
    PT,
    /// From line `minor` (φ) and line `major` (φ -> ψ), infer ψ. Lines are 1-based.
    MP {
        minor: usize,
        major: usize,
    },
    /// From line `premise` (φ), infer `K{a}φ`.
    NK {
        premise: usize,
        agent: Option<Name>,
    },
    /// From φ in the tautology ground, infer `Ky{a}φ`.
    NKy {
        lambda_index: Option<usize>,
        agent: Option<Name>,
    },
    /// From φ in the tautology ground, infer `Kyr{a}(top, φ)`.
    NKyR {
        lambda_index: Option<usize>,
        agent: Option<Name>,
    },
}

impl Justification {
    pub fn rule_name(&self) -> &'static str {
        match self {
            Justification::Axiom(s) => s.name(),
            Justification::PT => "PT",
            Justification::MP { .. } => "MP",
            Justification::NK { .. } => "NK",
            Justification::NKy { .. } => "NKy",
            Justification::NKyR { .. } => "NKyR",
        }
    }

    /// Lines this justification cites.
    pub fn refs(&self) -> Vec<usize> {
        match self {
            Justification::MP { minor, major } => vec![*minor, *major],
            Justification::NK { premise, .. } => vec![*premise],
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub formula: Formula,
    pub justification: Justification,
}

/// Hilbert-style theorem proof: every line is an axiom instance, a tautology,
/// or follows from earlier lines by a rule. There are no premises.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Derivation {
    pub lines: Vec<Line>,
}

/// Tautology ground used by the necessitation rules for `Ky`/`Kyr`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LambdaConfig {
    pub formulas: Vec<Formula>,
}

impl LambdaConfig {
    pub fn new(formulas: Vec<Formula>) -> LambdaConfig {
        LambdaConfig { formulas }
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.formulas.contains(f)
    }

    /// Reads a JSON array of formula strings.
    pub fn from_json(text: &str) -> Result<LambdaConfig, ProofError> {
        let raw: Vec<String> = serde_json::from_str(text)?;
        let formulas = raw
            .iter()
            .enumerate()
            .map(|(i, t)| parse_formula(t).map_err(|source| ProofError::Formula { line: i + 1, source }))
            .collect::<Result<_, _>>()?;
        Ok(LambdaConfig { formulas })
    }
}

#[derive(Debug, Error)]
pub enum ProofError {
    #[error("derivation JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line}: unknown rule `{rule}`")]
    UnknownRule { line: usize, rule: String },
    #[error("line {line}: rule {rule} takes {expected} reference(s), got {got}")]
    RefCount { line: usize, rule: String, expected: usize, got: usize },
}

/// JSON layout of one derivation line.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineFile {
    pub formula: String,
    pub rule: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub refs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_index: Option<usize>,
}

impl Derivation {
    pub fn from_json(text: &str) -> Result<Derivation, ProofError> {
        let raw: Vec<LineFile> = serde_json::from_str(text)?;
        let mut lines = Vec::with_capacity(raw.len());
        for (i, l) in raw.into_iter().enumerate() {
            let n = i + 1;
            let formula = parse_formula(&l.formula).map_err(|source| ProofError::Formula { line: n, source })?;
            let arity = |expected: usize| {
                if l.refs.len() == expected {
                    Ok(())
                } else {
                    Err(ProofError::RefCount { line: n, rule: l.rule.clone(), expected, got: l.refs.len() })
                }
            };
            let agent: Option<Name> = l.agent.as_deref().map(Arc::from);
            let justification = match l.rule.as_str() {
                "PT" => {
                    arity(0)?;
                    Justification::PT
                }
                "MP" => {
                    arity(2)?;
                    Justification::MP { minor: l.refs[0], major: l.refs[1] }
                }
                "NK" => {
                    arity(1)?;
                    Justification::NK { premise: l.refs[0], agent }
                }
                "NKy" => {
                    arity(0)?;
                    Justification::NKy { lambda_index: l.lambda_index, agent }
                }
                "NKyR" => {
                    arity(0)?;
                    Justification::NKyR { lambda_index: l.lambda_index, agent }
                }
                other => match other.parse::<Schema>() {
                    Ok(s) => {
                        arity(0)?;
                        Justification::Axiom(s)
                    }
                    Err(_) => return Err(ProofError::UnknownRule { line: n, rule: other.to_string() }),
                },
            };
            lines.push(Line { formula, justification });
        }
        Ok(Derivation { lines })
    }

    pub fn to_json(&self) -> String {
        let raw: Vec<LineFile> = self
            .lines
            .iter()
            .map(|l| {
                let (agent, lambda_index) = match &l.justification {
                    Justification::NK { agent, .. } => (agent.clone(), None),
                    Justification::NKy { agent, lambda_index } | Justification::NKyR { agent, lambda_index } => {
                        (agent.clone(), *lambda_index)
                    }
                    _ => (None, None),
                };
                LineFile {
                    formula: l.formula.to_string(),
                    rule: l.justification.rule_name().to_string(),
                    refs: l.justification.refs(),
                    agent: agent.map(|a| a.to_string()),
                    lambda_index,
                }
            })
            .collect();
        serde_json::to_string_pretty(&raw).expect("derivation serialises")
    }

    /// The last line, which is what the derivation proves.
    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    /// First failing line (1-based) and the reason.
    Failed {
        line: usize,
        reason: String,
    },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Ok => f.write_str("ok"),
            Verdict::Failed { line, reason } => write!(f, "line {line}: {reason}"),
        }
    }
}

fn agent_matches(expected: &Option<Name>, actual: &Name) -> bool {
    expected.as_ref().is_none_or(|e| e == actual)
}

/// Checks one line; `prior` holds the formulas of the lines before it.
fn check_line(line: &Line, prior: &[Formula], sys: ProofSystem, lam: &LambdaConfig) -> Result<(), String> {
    let current = &line.formula;
    let cited = |r: usize| -> Result<&Formula, String> {
        if r == 0 || r > prior.len() {
            Err(format!("reference {r} does not point to an earlier line"))
        } else {
            Ok(&prior[r - 1])
        }
    };
    let lambda_member = |body: &Formula, index: &Option<usize>| -> Result<(), String> {
        if !lam.contains(body) {
            return Err(format!("{body} is not in the tautology ground"));
        }
        if let Some(i) = index {
            if lam.formulas.get(*i).is_none() {
                return Err(format!("lambda_index {i} is out of range"));
            }
        }
        Ok(())
    };
    match &line.justification {
        Justification::Axiom(s) => {
            if !sys.has(*s) {
                return Err(format!("axiom {s} is not part of {sys}"));
            }
            match_axiom(current, *s).map(|_| ()).ok_or_else(|| format!("not an instance of axiom {s}"))
        }
        Justification::PT => {
            if check_tautology(current) {
                Ok(())
            } else {
                Err("not a propositional tautology".to_string())
            }
        }
        Justification::MP { minor, major } => {
            let phi = cited(*minor)?;
            let imp = cited(*major)?;
            match imp.as_implication() {
                Some((ante, cons)) if ante == phi && cons == current => Ok(()),
                Some(_) => Err(format!("line {major} is not `{phi} -> {current}`")),
                None => Err(format!("line {major} is not an implication")),
            }
        }
        Justification::NK { premise, agent } => {
            let phi = cited(*premise)?;
            match current {
                Formula::K(a, body) if **body == *phi && agent_matches(agent, a) => Ok(()),
                _ => Err(format!("expected K{{a}} applied to line {premise}")),
            }
        }
        Justification::NKy { lambda_index, agent } => {
            if sys != ProofSystem::Sky {
                return Err(format!("rule NKy is not part of {sys}"));
            }
            match current {
                Formula::Ky(a, body) if agent_matches(agent, a) => lambda_member(body, lambda_index),
                _ => Err("expected Ky{a} applied to a tautology-ground formula".to_string()),
            }
        }
        Justification::NKyR { lambda_index, agent } => {
            if sys != ProofSystem::Skyr {
                return Err(format!("rule NKyR is not part of {sys}"));
            }
            match current {
                Formula::KyR(a, cond, body) if cond.is_top() && agent_matches(agent, a) => {
                    lambda_member(body, lambda_index)
                }
                _ => Err("expected Kyr{a}(top, φ) with φ in the tautology ground".to_string()),
            }
        }
    }
}

/// Verifies every line in order and reports the first failure.
///
/// Tautology-ground membership is decided by structural equality, so the
/// verdict does not depend on the order of `lam`; a `lambda_index` is only
/// checked to be in range.
pub fn check_derivation(d: &Derivation, sys: ProofSystem, lam: &LambdaConfig) -> Verdict {
    if d.lines.is_empty() {
        return Verdict::Failed { line: 0, reason: "empty derivation".to_string() };
    }
    let mut prior: Vec<Formula> = Vec::with_capacity(d.lines.len());
    for (i, line) in d.lines.iter().enumerate() {
        if let Err(reason) = check_line(line, &prior, sys, lam) {
            return Verdict::Failed { line: i + 1, reason };
        }
        prior.push(line.formula.clone());
    }
    Verdict::Ok
}

/// A derivation line false at some world of a sample model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Falsification {
    pub line: usize,
    pub model: usize,
    pub world: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProbeReport {
    pub models: usize,
    pub evaluations: usize,
    pub falsified: Vec<Falsification>,
}

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("derivation does not check: {0}")]
    NotDerivable(Verdict),
    #[error("sample model {index} is invalid: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidSample { index: usize, violations: Vec<Violation> },
    #[error("sample model {index}: {source}")]
    Eval { index: usize, source: EvalError },
}

/// Evaluates every line of a checked derivation at every world of every
/// sample, with the samples' tautology ground set to `lam`.
pub fn soundness_probe(
    d: &Derivation,
    sys: ProofSystem,
    lam: &LambdaConfig,
    samples: &[KyModel],
) -> Result<ProbeReport, ProbeError> {
    let verdict = check_derivation(d, sys, lam);
    if !verdict.is_ok() {
        return Err(ProbeError::NotDerivable(verdict));
    }
    let mut report = ProbeReport::default();
    for (index, sample) in samples.iter().enumerate() {
        let mut m = sample.clone();
        m.set_tautology_ground(lam.formulas.clone());
        let violations = validate_model(&m);
        if !violations.is_empty() {
            return Err(ProbeError::InvalidSample { index, violations });
        }
        let ev = Evaluator::new(&m);
        for (i, line) in d.lines.iter().enumerate() {
            let set = ev
                .truth_set(&line.formula, &SemanticsVariant::Standard)
                .map_err(|source| ProbeError::Eval { index, source })?;
            report.evaluations += m.num_worlds();
            for w in m.all_worlds().difference(set).iter() {
                report.falsified.push(Falsification { line: i + 1, model: index, world: m.world_name(w).to_string() });
            }
        }
        report.models += 1;
    }
    Ok(report)
}

//! Embedded fixture corpus: reference models, derivations, and their expected
//! outcomes.

use serde::Serialize;

use crate::models::{
    extents_of, factive_companion, saturate, update_model, validate_model, KyModel, SearchRelevantFormulas,
};
use crate::proofs::{check_derivation, Derivation, LambdaConfig, ProofSystem, Verdict};
use crate::semantics::{eval_at, SemanticsVariant};
use crate::syntax::{parse_formula, Formula};

/// Model fixtures as `(name, json)`.
pub const MODELS: &[(&str, &str)] = &[
    ("separation_small", include_str!("../fixtures/separation_small.json")),
    ("separation_large", include_str!("../fixtures/separation_large.json")),
    ("noncorrespondence", include_str!("../fixtures/noncorrespondence.json")),
    ("factivity_gap", include_str!("../fixtures/factivity_gap.json")),
    ("factivity_gap_companion", include_str!("../fixtures/factivity_gap_companion.json")),
];

/// Derivation fixtures as `(name, json, system, tautology ground json)`.
pub const DERIVATIONS: &[(&str, &str, ProofSystem, &str)] = &[
    ("negative_introspection", include_str!("../fixtures/negative_introspection.json"), ProofSystem::Skyr, "[]"),
    ("vacuous_condition", include_str!("../fixtures/vacuous_condition.json"), ProofSystem::Skyr, "[]"),
    ("conditional_distribution", include_str!("../fixtures/conditional_distribution.json"), ProofSystem::Skyr, "[]"),
    (
        "generalized_necessitation",
        include_str!("../fixtures/generalized_necessitation.json"),
        ProofSystem::Skyr,
        include_str!("../fixtures/generalized_necessitation_lambda.json"),
    ),
];

/// Parses a model fixture by name.
///
/// # Panics
/// If the embedded JSON is malformed.
pub fn model(name: &str) -> Option<KyModel> {
    MODELS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, json)| KyModel::from_json(json).unwrap_or_else(|e| panic!("fixture {name}: {e}")))
}

/// A derivation fixture with its proof system and tautology ground.
pub fn derivation(name: &str) -> Option<(Derivation, ProofSystem, LambdaConfig)> {
    DERIVATIONS.iter().find(|(n, ..)| *n == name).map(|(_, json, sys, lam)| {
        let d = Derivation::from_json(json).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
        let lam = LambdaConfig::from_json(lam).unwrap_or_else(|e| panic!("fixture {name}: {e}"));
        (d, *sys, lam)
    })
}

/// Outcome of one corpus check.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn f(text: &str) -> Formula {
    parse_formula(text).expect("corpus formulas parse")
}

fn check(name: &str, result: Result<String, String>) -> CorpusCheck {
    match result {
        Ok(detail) => CorpusCheck { name: name.to_string(), passed: true, detail },
        Err(detail) => CorpusCheck { name: name.to_string(), passed: false, detail },
    }
}

fn expect_eval(m: &KyModel, world: &str, formula: &str, expected: bool) -> Result<String, String> {
    let got = eval_at(m, world, &f(formula), &SemanticsVariant::Standard).map_err(|e| e.to_string())?.verdict;
    let line = format!("{formula} at {world}: {got}");
    if got == expected {
        Ok(line)
    } else {
        Err(format!("{line}, expected {expected}"))
    }
}

fn expect_update(m: &KyModel, announced: &str, worlds: &[&str]) -> Result<String, String> {
    let u = update_model(m, &f(announced)).map_err(|e| e.to_string())?;
    let violations = validate_model(&u);
    if !violations.is_empty() {
        return Err(format!("updated model is invalid: {}", violations[0]));
    }
    if u.world_names() != worlds {
        return Err(format!("update by {announced} kept {:?}, expected {worlds:?}", u.world_names()));
    }
    Ok(format!("update by {announced} keeps {{{}}}", worlds.join(",")))
}

/// Replays every fixture against its expected outcome.
pub fn replay_corpus() -> Vec<CorpusCheck> {
    let small = model("separation_small").expect("fixture");
    let large = model("separation_large").expect("fixture");
    let nc = model("noncorrespondence").expect("fixture");
    let gap = model("factivity_gap").expect("fixture");
    let gap_f = model("factivity_gap_companion").expect("fixture");

    let mut out = vec![
        check("separation_small/announced_ky", expect_eval(&small, "w1", "[q]Ky{a}p", true)),
        check("separation_large/announced_ky", expect_eval(&large, "w1", "[q]Ky{a}p", false)),
        check("separation_small/update", expect_update(&small, "q", &["w1"])),
        check("separation_large/update", expect_update(&large, "q", &["w1", "w3"])),
        check("noncorrespondence/announced_ky", expect_eval(&nc, "w1", "[p]Ky{a}q", true)),
        check("noncorrespondence/conditional_ky", expect_eval(&nc, "w1", "Kyr{a}(p, q)", false)),
        check("factivity_gap/announced_ky", expect_eval(&gap, "1", "[p]Ky{a}K{a}q", true)),
    ];

    let companion = factive_companion(&gap).map_err(|e| e.to_string());
    out.push(check(
        "factivity_gap/companion",
        companion.clone().and_then(|c| {
            if c == gap_f {
                Ok("companion matches the shipped fixture".to_string())
            } else {
                Err(format!("companion differs from the shipped fixture:\n{}", c.to_json()))
            }
        }),
    ));
    out.push(check(
        "factivity_gap/companion_extent",
        companion.clone().and_then(|c| {
            let kq = f("K{a}q");
            let table = saturate(&c, &SearchRelevantFormulas::new([kq.clone()]));
            let extents = extents_of(&table, &kq).map_err(|e| e.to_string())?;
            if extents.iter().all(|x| x.is_empty()) {
                Ok("every extent for K{a}q is empty".to_string())
            } else {
                Err(format!("nonempty extents for K{{a}}q: {extents:?}"))
            }
        }),
    ));
    out.push(check(
        "factivity_gap/companion_announced_ky",
        companion.and_then(|c| expect_eval(&c, "1", "[p]Ky{a}K{a}q", false)),
    ));

    for (name, ..) in DERIVATIONS {
        let (d, sys, lam) = derivation(name).expect("fixture");
        let result = match check_derivation(&d, sys, &lam) {
            Verdict::Ok => Ok(format!("{} lines check in {sys}", d.lines.len())),
            Verdict::Failed { line, reason } => Err(format!("line {line}: {reason}")),
        };
        out.push(check(&format!("{name}/{}", sys.name().to_ascii_lowercase()), result));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_loads() {
        for (name, _) in MODELS {
            let m = model(name).unwrap();
            assert!(validate_model(&m).is_empty(), "{name}");
        }
        for (name, ..) in DERIVATIONS {
            assert!(derivation(name).is_some());
        }
        assert!(model("missing").is_none());
    }

    #[test]
    fn corpus_passes() {
        for c in replay_corpus() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}

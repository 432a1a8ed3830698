// Check line derivations in SKY and SKYR, see how a broken line is
// reported, and probe a derivation on random models.

use std::error::Error;

use kywhy::fixtures;
use kywhy::models::SearchRelevantFormulas;
use kywhy::proofs::{
    check_derivation, match_axiom, soundness_probe, Derivation, Justification, LambdaConfig, ProofSystem, Schema,
    Verdict,
};
use kywhy::search::{sample_models, SearchBounds};
use kywhy::syntax::parse_formula;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for (name, ..) in fixtures::DERIVATIONS {
        let (d, sys, lam) = fixtures::derivation(name).expect("fixture");
        println!("{name}: {} lines, {sys}: {:?}", d.lines.len(), check_derivation(&d, sys, &lam));
    }

    // Hand-written: distribution of knowledge over a conjunction.
    let d = Derivation::from_json(
        r#"[
        {"formula": "p & q -> p", "rule": "PT"},
        {"formula": "K{a}(p & q -> p)", "rule": "NK", "refs": [1]},
        {"formula": "K{a}(p & q -> p) -> (K{a}(p & q) -> K{a}p)", "rule": "K"},
        {"formula": "K{a}(p & q) -> K{a}p", "rule": "MP", "refs": [2, 3]}
    ]"#,
    )?;
    assert!(check_derivation(&d, ProofSystem::Sky, &LambdaConfig::default()).is_ok());

    let mut broken = d.clone();
    broken.lines[3].justification = Justification::MP { minor: 3, major: 2 };
    match check_derivation(&broken, ProofSystem::Sky, &LambdaConfig::default()) {
        Verdict::Failed { line, reason } => println!("broken copy fails at line {line}: {reason}"),
        Verdict::Ok => unreachable!(),
    }

    let axiom = parse_formula("Kyr{a}(p, q) -> K{a}(p -> q)")?;
    println!("{axiom} matches DKyR with {}", match_axiom(&axiom, Schema::DKyR).expect("instance"));

    let (d, sys, lam) = fixtures::derivation("conditional_distribution").expect("fixture");
    let mut relevant = SearchRelevantFormulas::default();
    for l in &d.lines {
        l.formula.explained_bodies().into_iter().for_each(|b| relevant.insert(b));
    }
    let samples = sample_models(&SearchBounds::default().with_atoms(&["p", "q", "r"]), &relevant, 7, 100)?;
    let report = soundness_probe(&d, sys, &lam, &samples)?;
    println!(
        "probe: {} models, {} evaluations, {} falsified",
        report.models,
        report.evaluations,
        report.falsified.len()
    );
    assert!(report.falsified.is_empty());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

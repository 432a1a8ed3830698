//! One pass/fail line per acceptance criterion. Runs without the libtest
//! harness so the lines always reach stdout.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_formula, Flavor};
use kywhy::fixtures;
use kywhy::models::{
    extents_of, factive_companion, saturate, update_model, validate_model, KyModel, SearchRelevantFormulas, WorldSet,
};
use kywhy::proofs::{check_derivation, Derivation, Justification, ProofSystem, Schema, Substitution, Verdict};
use kywhy::search::{enumerate_models, frame_shapes, sample_models, search_countermodel, SearchBounds};
use kywhy::semantics::{eval_at, truth_set, SemanticsVariant};
use kywhy::syntax::{parse_formula, Formula};

/// Wall-clock budget for the validity suite.
const VALIDITY_BUDGET: Duration = Duration::from_secs(60);
/// Random models per random suite.
const RANDOM_MODELS: usize = 200;
/// Random formulas for the factivity property.
const RANDOM_FORMULAS: usize = 60;
/// Seed shared by the random suites.
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn fixture(name: &str) -> KyModel {
    fixtures::model(name).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verdict(m: &KyModel, world: &str, formula: &str, v: &SemanticsVariant) -> Result<bool, String> {
    eval_at(m, world, &f(formula), v).map(|r| r.verdict).map_err(|e| e.to_string())
}

/// Bounds of the validity suite: up to 3 worlds, 2 extents per relevant
/// formula, one agent, atoms p and q.
fn validity_bounds() -> SearchBounds {
    SearchBounds::default().with_worlds(1, 3).with_extents(2).with_atoms(&["p", "q"])
}

fn relevant_for(fs: &[Formula]) -> SearchRelevantFormulas {
    let mut r = SearchRelevantFormulas::default();
    for g in fs {
        for b in g.explained_bodies() {
            r.insert(b);
        }
    }
    r
}

/// Worlds of `m` where `g` is false under `v`.
fn refuting_worlds(m: &KyModel, g: &Formula, v: &SemanticsVariant) -> Result<WorldSet, String> {
    let t = truth_set(m, g, v).map_err(|e| e.to_string())?;
    Ok(m.all_worlds().difference(t))
}

fn criterion_1() -> Outcome {
    let small = verdict(&fixture("separation_small"), "w1", "[q]Ky{a}p", &SemanticsVariant::Standard)?;
    let large = verdict(&fixture("separation_large"), "w1", "[q]Ky{a}p", &SemanticsVariant::Standard)?;
    ensure(small && !large, || format!("small={small} large={large}"))?;
    Ok("[q]Ky{a}p true at w1 of the two-world model, false at w1 of the three-world model".into())
}

fn criterion_2() -> Outcome {
    let q = f("q");
    for (name, expected) in [("separation_small", vec!["w1"]), ("separation_large", vec!["w1", "w3"])] {
        let m = fixture(name);
        let t = truth_set(&m, &q, &SemanticsVariant::Standard).map_err(|e| e.to_string())?;
        ensure(m.names_of(t) == expected, || format!("{name}: truth set of q is {:?}", m.names_of(t)))?;
        let u = update_model(&m, &q).map_err(|e| e.to_string())?;
        ensure(u.world_names() == expected, || format!("{name}: update kept {:?}", u.world_names()))?;
        let violations = validate_model(&u);
        ensure(violations.is_empty(), || format!("{name}: updated model invalid: {}", violations[0]))?;
    }
    Ok("truth sets of q are {w1} and {w1,w3}; both updates validate".into())
}

fn criterion_3() -> Outcome {
    let m = fixture("noncorrespondence");
    let announced = verdict(&m, "w1", "[p]Ky{a}q", &SemanticsVariant::Standard)?;
    let conditional = verdict(&m, "w1", "Kyr{a}(p,q)", &SemanticsVariant::Standard)?;
    ensure(announced && !conditional, || format!("[p]Ky{{a}}q={announced} Kyr{{a}}(p,q)={conditional}"))?;
    Ok("[p]Ky{a}q true and Kyr{a}(p,q) false at w1".into())
}

fn criterion_4() -> Outcome {
    let m = fixture("factivity_gap");
    let c = factive_companion(&m).map_err(|e| e.to_string())?;
    let before = verdict(&m, "1", "[p]Ky{a}K{a}q", &SemanticsVariant::Standard)?;
    let after = verdict(&c, "1", "[p]Ky{a}K{a}q", &SemanticsVariant::Standard)?;
    ensure(before && !after, || format!("model={before} companion={after}"))?;
    let kq = f("K{a}q");
    let extents =
        extents_of(&saturate(&c, &SearchRelevantFormulas::new([kq.clone()])), &kq).map_err(|e| e.to_string())?;
    ensure(extents.iter().all(|x| x.is_empty()), || format!("companion extents for K{{a}}q: {extents:?}"))?;
    ensure(c == fixture("factivity_gap_companion"), || "companion differs from the shipped fixture".into())?;
    Ok("[p]Ky{a}K{a}q true at 1, false at 1 of the companion; companion extent for K{a}q is empty".into())
}

/// The formulas of the validity suite, labelled.
fn validity_suite() -> Vec<(String, Formula)> {
    let mut out: Vec<(String, Formula)> = [
        ("kyr distribution", "Kyr{a}(p, q -> p) -> (Kyr{a}(p, q) -> Kyr{a}(p, p))"),
        ("kyr to k", "Kyr{a}(p, q) -> K{a}(p -> q)"),
        ("kyr introspection", "Kyr{a}(p, q) -> K{a}Kyr{a}(p, q)"),
        ("kyr strengthening", "Kyr{a}(q, p) & K{a}(p -> q) -> Kyr{a}(p, p)"),
        ("kyr vacuous", "K{a}~p -> Kyr{a}(p, q)"),
        ("kyr combined conditions", "Kyr{a}(p, p -> q) & Kyr{a}(q, p) -> Kyr{a}(p & q, q)"),
        ("kyr bottom condition", "Kyr{a}(bot, p)"),
    ]
    .into_iter()
    .map(|(l, s)| (l.to_string(), f(s)))
    .collect();
    let subst =
        Substitution::new("a").with("phi", f("p")).with("psi", f("q")).with("chi", f("p")).with("theta", f("q"));
    for s in Schema::ALL {
        out.push((format!("schema {s}"), s.instantiate(&subst)));
    }
    out
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let bounds = validity_bounds();
    let mut examined = 0u64;
    for (label, g) in validity_suite() {
        let report = search_countermodel(&g, &SemanticsVariant::Standard, &bounds).map_err(|e| e.to_string())?;
        if let Some(c) = report.countermodel {
            return Err(format!("{label}: countermodel at {}:\n{}", c.world_name(), c.model.to_json()));
        }
        examined += report.models_examined;

        let samples = sample_models(&bounds, &relevant_for(std::slice::from_ref(&g)), SEED, RANDOM_MODELS)
            .map_err(|e| e.to_string())?;
        for (i, m) in samples.iter().enumerate() {
            let bad = refuting_worlds(m, &g, &SemanticsVariant::Standard)?;
            ensure(bad.is_empty(), || format!("{label}: false on random model {i}:\n{}", m.to_json()))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= VALIDITY_BUDGET, || format!("took {elapsed:?}, budget {VALIDITY_BUDGET:?}"))?;
    Ok(format!(
        "{} formulas: no countermodel in {examined} bounded models, none false on {RANDOM_MODELS} random models each ({:.1}s)",
        validity_suite().len(),
        elapsed.as_secs_f64()
    ))
}

/// Single-line mutations of line `i` (0-based): cited lines moved or swapped,
/// or the rule replaced by a different schema.
fn mutations(d: &Derivation, i: usize, sys: ProofSystem) -> Vec<Justification> {
    let n = i + 1;
    let mut out = Vec::new();
    match &d.lines[i].justification {
        Justification::MP { minor, major } => {
            out.push(Justification::MP { minor: *major, major: *minor });
            out.push(Justification::MP { minor: *minor, major: n });
        }
        Justification::NK { premise, agent } => {
            out.push(Justification::NK { premise: n, agent: agent.clone() });
            if *premise > 1 {
                out.push(Justification::NK { premise: premise - 1, agent: agent.clone() });
            }
        }
        Justification::Axiom(s) => {
            for &other in sys.schemas() {
                if other != *s {
                    out.push(Justification::Axiom(other));
                }
            }
        }
        Justification::PT => out.push(Justification::Axiom(Schema::K)),
        Justification::NKy { .. } | Justification::NKyR { .. } => {}
    }
    out
}

fn criterion_6() -> Outcome {
    let mut mutants = 0;
    for name in ["negative_introspection", "vacuous_condition", "conditional_distribution"] {
        let (d, sys, lam) = fixtures::derivation(name).unwrap();
        match check_derivation(&d, sys, &lam) {
            Verdict::Ok => {}
            Verdict::Failed { line, reason } => return Err(format!("{name} fails at line {line}: {reason}")),
        }
        for i in 0..d.lines.len() {
            for j in mutations(&d, i, sys) {
                let mut m = d.clone();
                m.lines[i].justification = j.clone();
                mutants += 1;
                match check_derivation(&m, sys, &lam) {
                    Verdict::Failed { line, .. } if line == i + 1 => {}
                    other => return Err(format!("{name}: mutating line {} to {j:?} gave {other:?}", i + 1)),
                }
            }
        }
    }
    Ok(format!("three derivations check; all {mutants} single-line mutants fail at the mutated line"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let formulas: Vec<Formula> = (0..RANDOM_FORMULAS)
        .map(|i| random_formula(&mut rng, 3, &["p", "q"], if i % 2 == 0 { Flavor::Ky } else { Flavor::KyR }))
        .collect();
    let bounds = validity_bounds();
    let models = sample_models(&bounds, &relevant_for(&formulas), SEED, RANDOM_MODELS).map_err(|e| e.to_string())?;
    let mut nonfactive = 0;
    for (i, m) in models.iter().enumerate() {
        let c = factive_companion(m).map_err(|e| e.to_string())?;
        if &c != m {
            nonfactive += 1;
        }
        for g in &formulas {
            let before = truth_set(m, g, &SemanticsVariant::Standard).map_err(|e| e.to_string())?;
            let after = truth_set(&c, g, &SemanticsVariant::Standard).map_err(|e| e.to_string())?;
            ensure(before == after, || format!("{g} differs on random model {i}:\n{}", m.to_json()))?;
        }
    }
    ensure(nonfactive > 0, || "no random model was changed by the companion".into())?;

    let gap = fixture("factivity_gap");
    let companion = factive_companion(&gap).map_err(|e| e.to_string())?;
    let g = "[p]Ky{a}K{a}q";
    let (before, after) = (
        verdict(&gap, "1", g, &SemanticsVariant::Standard)?,
        verdict(&companion, "1", g, &SemanticsVariant::Standard)?,
    );
    ensure(before != after, || "the announcement formula kept its value on the companion".into())?;
    Ok(format!(
        "{RANDOM_FORMULAS} formulas agree on {RANDOM_MODELS} models ({nonfactive} not factive); {g} breaks invariance"
    ))
}

fn criterion_8() -> Outcome {
    let pairs = [("p", "q"), ("q", "p"), ("p", "K{a}q"), ("p & q", "p"), ("~p", "q"), ("K{a}p", "q")];
    let translations: Vec<Formula> =
        pairs.iter().map(|(c, b)| f(&format!("[{c}]Ky{{a}}({b}) <-> (({c}) -> Kyr{{a}}({c}, {b}))"))).collect();
    let bounds = validity_bounds();
    let models =
        sample_models(&bounds, &relevant_for(&translations), SEED, RANDOM_MODELS).map_err(|e| e.to_string())?;
    for (i, m) in models.iter().enumerate() {
        for g in &translations {
            let bad = refuting_worlds(m, g, &SemanticsVariant::AltKyr)?;
            ensure(bad.is_empty(), || format!("{g} false on random model {i}:\n{}", m.to_json()))?;
        }
    }
    Ok(format!("{} translation instances true everywhere on {RANDOM_MODELS} random models", translations.len()))
}

fn criterion_9() -> Outcome {
    let bounds = validity_bounds().with_atoms(&["p", "q", "r"]);
    let mut examined = 0;
    for g in ["[p][q]r <-> [p & q]r", "[p][q]K{a}r <-> [p & q]K{a}r"] {
        let report = search_countermodel(&f(g), &SemanticsVariant::context(), &bounds).map_err(|e| e.to_string())?;
        if let Some(c) = report.countermodel {
            return Err(format!("{g} refuted at {}:\n{}", c.world_name(), c.model.to_json()));
        }
        examined += report.models_examined;
    }
    Ok(format!("both composition instances hold in all {examined} bounded models"))
}

/// Equivalence relations over `n` worlds found by testing every relation.
fn brute_force_equivalences(n: usize) -> Vec<Vec<WorldSet>> {
    let mut out = Vec::new();
    for bits in 0u64..1 << (n * n) {
        let r = |w: usize, v: usize| bits >> (w * n + v) & 1 == 1;
        let reflexive = (0..n).all(|w| r(w, w));
        let symmetric = (0..n).all(|w| (0..n).all(|v| r(w, v) == r(v, w)));
        let transitive = (0..n).all(|w| (0..n).all(|v| (0..n).all(|u| !(r(w, v) && r(v, u)) || r(w, u))));
        if reflexive && symmetric && transitive {
            out.push((0..n).map(|w| (0..n).filter(|&v| r(w, v)).collect()).collect());
        }
    }
    out
}

fn criterion_10() -> Outcome {
    let b = SearchBounds::default().with_worlds(2, 2).with_atoms(&["p"]).with_extents(0);
    let models: Vec<KyModel> =
        enumerate_models(&b, &SearchRelevantFormulas::default()).map_err(|e| e.to_string())?.collect();
    ensure(models.len() == 8, || format!("{} two-world models", models.len()))?;
    let mut distinct = models.clone();
    distinct.dedup();
    ensure(distinct.len() == 8, || "duplicate models in the enumeration".into())?;
    ensure(models.iter().all(|m| validate_model(m).is_empty()), || "invalid enumerated model".into())?;
    for n in 1..=3 {
        let mut oracle = brute_force_equivalences(n);
        let mut ours = frame_shapes(n, true);
        ensure(ours.len() == oracle.len(), || {
            format!("{n} worlds: {} partitions, oracle {}", ours.len(), oracle.len())
        })?;
        oracle.sort_by_key(|r| r.iter().map(|s| s.bits()).collect::<Vec<_>>());
        ours.sort_by_key(|r| r.iter().map(|s| s.bits()).collect::<Vec<_>>());
        ensure(ours == oracle, || format!("{n} worlds: partitions differ from the oracle"))?;
    }
    let three = frame_shapes(3, true).len();
    ensure(three == 5, || format!("{three} frame shapes over 3 worlds"))?;
    Ok(format!("8 two-world models (2 frames x 4 valuations); {three} frame shapes over 3 worlds"))
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {n}: PASS: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n}: FAIL: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

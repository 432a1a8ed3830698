mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_dynamic_formula, random_formula, Flavor};
use kywhy::models::{
    factive_companion, is_factive, saturate, update_model, validate_model, ExplanationEntry, ExplanationTerm, KyModel,
    SearchRelevantFormulas, WorldSet,
};
use kywhy::proofs::{check_derivation, check_tautology, Derivation, LambdaConfig, ProofSystem, Verdict};
use kywhy::search::{sample_models, SearchBounds};
use kywhy::semantics::{truth_set, SemanticsVariant};
use kywhy::syntax::{classify_language, embed_ky, parse_formula, print_formula, Formula, LanguageTag};

fn f(s: &str) -> Formula {
    parse_formula(s).unwrap()
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        Just(Formula::atom("r")),
        Just(Formula::top()),
        Just(Formula::bot()),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
            inner.clone().prop_map(|a| Formula::k("a", a)),
            inner.clone().prop_map(|a| Formula::ky("b", a)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::kyr("a", a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::announce(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::diamond(a, b)),
        ]
    })
}

fn bounds() -> SearchBounds {
    SearchBounds::default().with_atoms(&["p", "q"])
}

/// A few random models carrying extents for the bodies of `fs`.
fn models_for(fs: &[Formula], seed: u64, n: usize) -> Vec<KyModel> {
    let mut rel = SearchRelevantFormulas::default();
    for g in fs {
        for b in g.explained_bodies() {
            rel.insert(b);
        }
    }
    sample_models(&bounds(), &rel, seed, n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(g in arb_formula()) {
        let text = print_formula(&g);
        prop_assert_eq!(parse_formula(&text).unwrap(), g.clone(), "{}", text);
        prop_assert_eq!(print_formula(&parse_formula(&text).unwrap()), text);
    }

    #[test]
    fn embedding_lands_in_the_conditional_languages(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_dynamic_formula(&mut rng, 3, &["p", "q"], Flavor::Ky);
        prop_assume!(g.contains_ky());
        let e = embed_ky(&g).unwrap();
        prop_assert!(!e.contains_ky());
        if let Ok(tag) = classify_language(&e) {
            prop_assert!(matches!(tag, LanguageTag::Elkyr | LanguageTag::Pafkyr));
        }
    }

    #[test]
    fn ky_matches_kyr_with_top_condition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_formula(&mut rng, 2, &["p", "q"], Flavor::Ky);
        let lhs = Formula::ky("a", g.clone());
        let rhs = Formula::kyr("a", Formula::top(), g);
        for m in models_for(std::slice::from_ref(&lhs), seed, 5) {
            prop_assert_eq!(
                truth_set(&m, &lhs, &SemanticsVariant::Standard).unwrap(),
                truth_set(&m, &rhs, &SemanticsVariant::Standard).unwrap()
            );
        }
    }

    #[test]
    fn trivial_context_is_standard_without_announcements(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let flavor = if seed % 2 == 0 { Flavor::Ky } else { Flavor::KyR };
        let g = random_formula(&mut rng, 3, &["p", "q"], flavor);
        for m in models_for(std::slice::from_ref(&g), seed, 5) {
            prop_assert_eq!(
                truth_set(&m, &g, &SemanticsVariant::Standard).unwrap(),
                truth_set(&m, &g, &SemanticsVariant::context()).unwrap()
            );
        }
    }

    #[test]
    fn diamond_is_dual_of_box(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_formula(&mut rng, 2, &["p", "q"], Flavor::Ky);
        let b = random_formula(&mut rng, 2, &["p", "q"], Flavor::Ky);
        let dia = Formula::diamond(a.clone(), b.clone());
        let dual = Formula::not(Formula::announce(a, Formula::not(b)));
        prop_assert_eq!(&dia, &dual);
    }

    #[test]
    fn updates_preserve_validity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ann = random_formula(&mut rng, 2, &["p", "q"], Flavor::Ky);
        for m in models_for(&[f("Ky{a}p"), f("Ky{a}(p -> q)")], seed, 5) {
            match update_model(&m, &ann) {
                Ok(u) => {
                    prop_assert!(validate_model(&u).is_empty());
                    let kept = truth_set(&m, &ann, &SemanticsVariant::Standard).unwrap();
                    prop_assert_eq!(u.num_worlds(), kept.len());
                }
                Err(_) => prop_assert!(truth_set(&m, &ann, &SemanticsVariant::Standard).unwrap().is_empty()),
            }
            prop_assert_eq!(update_model(&m, &Formula::top()).unwrap(), m);
        }
    }

    #[test]
    fn companion_is_factive_and_idempotent(seed in any::<u64>()) {
        for m in models_for(&[f("Ky{a}p"), f("Ky{a}(p -> q)"), f("Kyr{a}(p, K{a}q)")], seed, 5) {
            let c = factive_companion(&m).unwrap();
            prop_assert!(is_factive(&c).unwrap());
            prop_assert_eq!(factive_companion(&c).unwrap(), c.clone());
            prop_assert!(validate_model(&c).is_empty());
        }
    }

    #[test]
    fn saturation_is_idempotent(seed in any::<u64>()) {
        let bodies = [f("p -> q"), f("p"), f("q -> p")];
        for mut m in models_for(&[f("Ky{a}(p -> q)"), f("Ky{a}p"), f("Ky{a}(q -> p)")], seed, 5) {
            let rel = SearchRelevantFormulas::new(bodies.clone());
            let table = saturate(&m, &rel);
            let mut entries = Vec::new();
            for g in table.tracked_formulas() {
                for e in table.entries(g).unwrap() {
                    entries.push(ExplanationEntry { term: e.term.clone(), formula: g.clone(), extent: e.extent });
                }
            }
            m.set_explanations(entries);
            let again = saturate(&m, &rel);
            for g in table.tracked_formulas() {
                let a: Vec<WorldSet> = table.entries(g).unwrap().iter().map(|e| e.extent).collect();
                let b: Vec<WorldSet> = again.entries(g).unwrap().iter().map(|e| e.extent).collect();
                prop_assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn extra_explanations_never_falsify_positive_formulas(seed in any::<u64>(), bits in 1u64..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = positive_formula(&mut rng, 3);
        let bodies = g.explained_bodies();
        prop_assume!(!bodies.is_empty());
        for m in models_for(std::slice::from_ref(&g), seed, 4) {
            let before = truth_set(&m, &g, &SemanticsVariant::Standard).unwrap();
            let mut more = m.clone();
            let extent = WorldSet::from_bits(bits & m.all_worlds().bits());
            more.add_explanation(ExplanationEntry {
                term: ExplanationTerm::base("extra"),
                formula: bodies[seed as usize % bodies.len()].clone(),
                extent,
            });
            let after = truth_set(&more, &g, &SemanticsVariant::Standard).unwrap();
            prop_assert!(before.is_subset(after), "{} lost worlds", g);
        }
    }

    #[test]
    fn lambda_order_does_not_matter(perm in Just(vec!["p -> p", "q | ~q", "~(p & ~p)"]).prop_shuffle()) {
        let lam = LambdaConfig::new(perm.iter().map(|s| f(s)).collect());
        for phi in ["p -> p", "q | ~q"] {
            let d = generalized_necessitation(&f(phi), &f("q & r"));
            prop_assert!(check_derivation(&d, ProofSystem::Skyr, &lam).is_ok());
        }
    }
}

/// Formula with every `Ky`/`Kyr` in positive position and announcement-free
/// conditions.
fn positive_formula(rng: &mut ChaCha8Rng, depth: usize) -> Formula {
    use rand::Rng;
    if depth == 0 {
        return random_formula(rng, 1, &["p", "q"], Flavor::Ky);
    }
    match rng.gen_range(0..4) {
        0 => Formula::and(positive_formula(rng, depth - 1), positive_formula(rng, depth - 1)),
        1 => Formula::k("a", positive_formula(rng, depth - 1)),
        2 => Formula::ky("a", positive_formula(rng, depth - 1)),
        _ => {
            let cond = random_formula(rng, 1, &["p", "q"], Flavor::Ky).clone();
            let cond = if cond.contains_ky() { Formula::atom("p") } else { cond };
            Formula::kyr("a", cond, positive_formula(rng, depth - 1))
        }
    }
}

/// Six-line derivation of `Kyr{a}(psi, phi)` from `phi` in the tautology
/// ground.
fn generalized_necessitation(phi: &Formula, psi: &Formula) -> Derivation {
    let top = Formula::top();
    let kyr_top = Formula::kyr("a", top.clone(), phi.clone());
    let imp = Formula::implies(psi.clone(), top);
    let k_imp = Formula::k("a", imp.clone());
    let goal = Formula::kyr("a", psi.clone(), phi.clone());
    let json = serde_json::json!([
        {"formula": kyr_top.to_string(), "rule": "NKyR"},
        {"formula": imp.to_string(), "rule": "PT"},
        {"formula": k_imp.to_string(), "rule": "NK", "refs": [2]},
        {"formula": Formula::implies(kyr_top.clone(), Formula::implies(k_imp.clone(), goal.clone())).to_string(), "rule": "IKyR"},
        {"formula": Formula::implies(k_imp, goal.clone()).to_string(), "rule": "MP", "refs": [1, 4]},
        {"formula": goal.to_string(), "rule": "MP", "refs": [3, 5]},
    ]);
    Derivation::from_json(&json.to_string()).unwrap()
}

#[test]
fn generalized_necessitation_needs_the_ground() {
    let d = generalized_necessitation(&f("p -> p"), &f("q"));
    assert!(matches!(
        check_derivation(&d, ProofSystem::Skyr, &LambdaConfig::default()),
        Verdict::Failed { line: 1, .. }
    ));
    assert!(!check_derivation(&d, ProofSystem::Sky, &LambdaConfig::new(vec![f("p -> p")])).is_ok());
}

#[test]
fn sampled_models_are_valid_and_seeded() {
    let rel = SearchRelevantFormulas::new([f("p"), f("p -> q")]);
    let a = sample_models(&bounds(), &rel, 0, 50).unwrap();
    let b = sample_models(&bounds(), &rel, 1, 50).unwrap();
    assert!(a.iter().chain(&b).all(|m| validate_model(m).is_empty()));
    assert_eq!(a, sample_models(&bounds(), &rel, 0, 50).unwrap());
    let serial = |ms: &[KyModel]| ms.iter().map(KyModel::to_json).collect::<Vec<_>>();
    assert_ne!(serial(&a), serial(&b));
}

#[test]
fn tautology_examples() {
    assert!(check_tautology(&f("~bot")));
    assert!(check_tautology(&f("K{a}p -> K{a}p & K{a}p")));
    assert!(!check_tautology(&f("K{a}p -> p")));
}

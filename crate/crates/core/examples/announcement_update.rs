// Public announcements: two models that agree on every announcement-free
// formula at w1 are told apart by `[q]Ky{a}p`.

use std::error::Error;

use kywhy::fixtures;
use kywhy::models::{update_model, validate_model};
use kywhy::semantics::{eval_at, SemanticsVariant};
use kywhy::syntax::parse_formula;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let small = fixtures::model("separation_small").expect("fixture");
    let large = fixtures::model("separation_large").expect("fixture");
    let q = parse_formula("q")?;
    let f = parse_formula("[q]Ky{a}p")?;

    for (name, m) in [("two worlds", &small), ("three worlds", &large)] {
        let updated = update_model(m, &q)?;
        assert!(validate_model(&updated).is_empty());
        let verdict = eval_at(m, "w1", &f, &SemanticsVariant::Standard)?.verdict;
        println!("{name}: announcing q keeps {{{}}}; {f} at w1 is {verdict}", updated.world_names().join(","));
    }
    assert!(eval_at(&small, "w1", &f, &SemanticsVariant::Standard)?.verdict);
    assert!(!eval_at(&large, "w1", &f, &SemanticsVariant::Standard)?.verdict);

    // An announcement false everywhere cannot be applied, but the formula is
    // vacuously true.
    let contradiction = parse_formula("q & ~q")?;
    assert!(update_model(&small, &contradiction).is_err());
    assert!(eval_at(&small, "w1", &parse_formula("[q & ~q]bot")?, &SemanticsVariant::Standard)?.verdict);
    println!("updated model:\n{}", update_model(&large, &q)?.to_json());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

// Factivity: cutting explanations down to where the explained formula is
// true changes nothing for static formulas, but can flip announcements.

use std::error::Error;

use kywhy::fixtures;
use kywhy::models::{factive_companion, is_factive};
use kywhy::semantics::{eval_at, SemanticsVariant};
use kywhy::syntax::parse_formula;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = fixtures::model("factivity_gap").expect("fixture");
    let c = factive_companion(&m)?;
    println!("factive: model {}, companion {}", is_factive(&m)?, is_factive(&c)?);
    for e in c.explanations() {
        println!("companion: {} explains {} at {{{}}}", e.term, e.formula, c.names_of(e.extent).join(","));
    }

    let std = SemanticsVariant::Standard;
    for text in ["Ky{a}K{a}q", "Kyr{a}(p, K{a}q)", "K{a}(p -> q)", "[p]Ky{a}K{a}q"] {
        let f = parse_formula(text)?;
        let before = eval_at(&m, "1", &f, &std)?.verdict;
        let after = eval_at(&c, "1", &f, &std)?.verdict;
        println!("{text:20} model: {before:5} companion: {after}");
    }
    let f = parse_formula("[p]Ky{a}K{a}q")?;
    assert!(eval_at(&m, "1", &f, &std)?.verdict && !eval_at(&c, "1", &f, &std)?.verdict);
    assert_eq!(factive_companion(&c)?, c);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

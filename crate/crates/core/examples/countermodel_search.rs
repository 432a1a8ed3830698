// Bounded countermodel search and equivalence checking.

use std::error::Error;

use kywhy::search::{check_equivalence, search_countermodel, Equivalence, SearchBounds};
use kywhy::semantics::SemanticsVariant;
use kywhy::syntax::parse_formula;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let std = SemanticsVariant::Standard;
    let bounds = SearchBounds::default();
    for text in ["p -> K{a}p", "Kyr{a}(p, q) <-> [p]Ky{a}q", "Kyr{a}(p, q) -> K{a}(p -> q)", "Ky{a}p -> K{a}Ky{a}p"] {
        let f = parse_formula(text)?;
        let report = search_countermodel(&f, &std, &bounds)?;
        match report.countermodel {
            Some(c) => {
                println!("{text}: refuted at {} after {} models", c.world_name(), report.models_examined);
                for line in &c.transcript {
                    println!("    {line}");
                }
            }
            None => println!("{text}: no countermodel up to bounds ({} models)", report.models_examined),
        }
    }

    let pairs = [
        ("Ky{a}p", "Kyr{a}(top, p)", SemanticsVariant::Standard),
        ("[p]Ky{a}K{a}q", "p -> Kyr{a}(p, K{a}q)", SemanticsVariant::Standard),
        ("[p]Ky{a}K{a}q", "p -> Kyr{a}(p, K{a}q)", SemanticsVariant::AltKyr),
    ];
    for (l, r, v) in pairs {
        let verdict = match check_equivalence(&parse_formula(l)?, &parse_formula(r)?, &v, &bounds)? {
            Equivalence::Separated(c) => format!("separated at {}", c.world_name()),
            Equivalence::Indistinguishable { models_examined } => {
                format!("indistinguishable ({models_examined} models)")
            }
        };
        println!("{l} vs {r} under {}: {verdict}", v.name());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

// Build a model, evaluate knowing-why formulas, and inspect the saturated
// explanation table, witnesses and evaluation traces.

use std::error::Error;

use kywhy::models::{extents_of, saturate, validate_model, KyModel, SearchRelevantFormulas};
use kywhy::semantics::{holds_globally, Evaluator, SemanticsVariant};
use kywhy::syntax::parse_formula;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // The agent cannot tell w1 from w2; s explains p -> q everywhere and t
    // explains p everywhere, so s.t explains q.
    let m = KyModel::builder(["w1", "w2"])
        .agent("a")
        .total("a")
        .atom("p", ["w1", "w2"])
        .atom("q", ["w1", "w2"])
        .explain("s", "p -> q", ["w1", "w2"])
        .explain("t", "p", ["w1", "w2"])
        .build()?;
    assert!(validate_model(&m).is_empty());

    let q = parse_formula("q")?;
    let table = saturate(&m, &SearchRelevantFormulas::new([q.clone()]));
    for entry in table.entries(&q)? {
        println!("q is explained by {} at {{{}}}", entry.term, m.names_of(entry.extent).join(","));
    }
    assert_eq!(extents_of(&table, &q)?, vec![m.all_worlds()]);

    let ev = Evaluator::new(&m);
    let std = SemanticsVariant::Standard;
    for text in ["Ky{a}q", "Ky{a}p & Ky{a}(p -> q)", "Kyr{a}(~p, r)", "Ky{a}~q"] {
        let f = parse_formula(text)?;
        let r = ev.eval(0, &f, &std)?;
        match r.witness {
            Some(w) => {
                println!("{text}: {} (witness {} over {{{}}})", r.verdict, w.term, m.names_of(w.extent).join(","))
            }
            None => println!("{text}: {}", r.verdict),
        }
    }

    println!("trace of Ky{{a}}q -> K{{a}}q:");
    for step in ev.trace(&parse_formula("Ky{a}q -> K{a}q")?, &std)? {
        println!("  {}", step.render(&m));
    }
    assert!(holds_globally(&m, &parse_formula("Kyr{a}(bot, q)")?, &std)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

// The context-dependent relation: announcements accumulate into a context
// that restricts what agents consider, and successive announcements compose
// into one conjunction.

use std::error::Error;

use kywhy::fixtures;
use kywhy::search::{find_countermodel, SearchBounds};
use kywhy::semantics::{check_correspondence, eval_at, SemanticsVariant};
use kywhy::syntax::parse_formula;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let m = fixtures::model("noncorrespondence").expect("fixture");
    let kq = parse_formula("K{a}p")?;
    for v in [SemanticsVariant::Standard, SemanticsVariant::context(), SemanticsVariant::Context(parse_formula("p")?)] {
        let label = match &v {
            SemanticsVariant::Context(rho) => format!("context {rho}"),
            other => other.name().to_string(),
        };
        println!("K{{a}}p at w2 under {label}: {}", eval_at(&m, "w2", &kq, &v)?.verdict);
    }

    let bounds = SearchBounds::default().with_atoms(&["p", "q", "r"]);
    for text in ["[p][q]r <-> [p & q]r", "[p][q]K{a}r <-> [p & q]K{a}r"] {
        let f = parse_formula(text)?;
        let found = find_countermodel(&f, &SemanticsVariant::context(), &bounds)?;
        println!("{text}: {}", if found.is_some() { "refuted" } else { "no countermodel up to bounds" });
        assert!(found.is_none());
    }

    let gap = fixtures::model("factivity_gap").expect("fixture");
    let report = check_correspondence(&gap, 0, "a", &parse_formula("p")?, &parse_formula("K{a}q")?)?;
    println!("correspondence at 1: {report}");
    assert!(report.alt_agrees() && !report.standard_agrees());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

// Parse formulas in the concrete syntax, print their normal forms, classify
// their language, and embed `Ky` into `Kyr`.

use std::error::Error;

use kywhy::syntax::{classify_language, embed_ky, parse_formula};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for text in ["[q] Ky{a} p", "Kyr{a}(bot, p)", "p -> q -> r", "<p>K{b}(q | ~q)", "Kyr{a}(p & q, p -> q) <-> top"] {
        let f = parse_formula(text)?;
        let tag = classify_language(&f)?;
        println!("{text:32} => {f:32} [{tag}]");
    }

    let f = parse_formula("[q]Ky{a}p")?;
    let embedded = embed_ky(&f)?;
    println!("embedding {f} gives {embedded} [{}]", classify_language(&embedded)?);
    assert_eq!(embedded.to_string(), "[q]Kyr{a}(top,p)");

    match parse_formula("K{a} (p &") {
        Err(e) => println!("error: {e}"),
        Ok(f) => unreachable!("parsed {f}"),
    }
    match classify_language(&parse_formula("Ky{a}p & Kyr{a}(q, p)")?) {
        Err(e) => println!("error: {e}"),
        Ok(tag) => unreachable!("classified as {tag}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}

use std::collections::HashMap;

use crate::syntax::Formula;

/// Largest number of propositional components the truth table accepts.
pub const MAX_COMPONENTS: usize = 26;

enum Prop {
    Var(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
}

/// Replaces atoms and maximal modal subformulas by variables, sharing
/// variables between structurally equal components.
fn abstract_prop(f: &Formula, vars: &mut HashMap<Formula, usize>) -> Prop {
    match f {
        Formula::Not(g) => Prop::Not(Box::new(abstract_prop(g, vars))),
        Formula::And(l, r) => Prop::And(Box::new(abstract_prop(l, vars)), Box::new(abstract_prop(r, vars))),
        _ => {
            let n = vars.len();
            Prop::Var(*vars.entry(f.clone()).or_insert(n))
        }
    }
}

/// Lane `j` of the returned word holds the value of variable `i` under
/// assignment `64 * chunk + j`.
fn lanes(i: usize, chunk: u64) -> u64 {
    const PATTERNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    if i < 6 {
        PATTERNS[i]
    } else if chunk >> (i - 6) & 1 == 1 {
        u64::MAX
    } else {
        0
    }
}

fn eval(p: &Prop, chunk: u64) -> u64 {
    match p {
        Prop::Var(i) => lanes(*i, chunk),
        Prop::Not(g) => !eval(g, chunk),
        Prop::And(l, r) => eval(l, chunk) & eval(r, chunk),
    }
}

/// Whether `f` is a classical tautology once every atom and every subformula
/// rooted at `K`, `Ky`, `Kyr` or an announcement is read as a propositional
/// variable. Formulas with more than [`MAX_COMPONENTS`] components are
/// rejected.
pub fn check_tautology(f: &Formula) -> bool {
    let mut vars = HashMap::new();
    let prop = abstract_prop(f, &mut vars);
    let n = vars.len();
    if n > MAX_COMPONENTS {
        return false;
    }
    let used = if n >= 6 { u64::MAX } else { (1u64 << (1u64 << n)) - 1 };
    let chunks = if n > 6 { 1u64 << (n - 6) } else { 1 };
    (0..chunks).all(|c| eval(&prop, c) & used == used)
}

use std::fmt::{self, Write};

use super::formula::Formula;

// Binding strength of the printed form.
const IFF: u8 = 1;
const IMP: u8 = 2;
const AND: u8 = 4;
const UNARY: u8 = 5;

/// Prints a formula in the concrete syntax accepted by [`parse_formula`](super::parse_formula).
///
/// Truth constants, implications, biconditionals and dual announcements are
/// re-sugared when their encoding is recognised.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, 0).expect("writing to a String cannot fail");
    out
}

fn level(f: &Formula) -> u8 {
    if f.is_top() || f.is_bot() || f.as_diamond().is_some() {
        UNARY
    } else if f.as_iff().is_some() {
        IFF
    } else if f.as_implication().is_some() {
        IMP
    } else if let Formula::And(..) = f {
        AND
    } else {
        UNARY
    }
}

fn write_formula(out: &mut impl Write, f: &Formula, min: u8) -> fmt::Result {
    let lvl = level(f);
    if lvl < min {
        out.write_char('(')?;
        write_bare(out, f, lvl)?;
        out.write_char(')')
    } else {
        write_bare(out, f, lvl)
    }
}

fn write_bare(out: &mut impl Write, f: &Formula, lvl: u8) -> fmt::Result {
    if f.is_top() {
        return out.write_str("top");
    }
    if f.is_bot() {
        return out.write_str("bot");
    }
    if let Some((ann, body)) = f.as_diamond() {
        out.write_char('<')?;
        write_formula(out, ann, 0)?;
        out.write_char('>')?;
        return write_formula(out, body, UNARY);
    }
    if lvl == IFF {
        let (l, r) = f.as_iff().expect("level says iff");
        write_formula(out, l, IMP)?;
        out.write_str(" <-> ")?;
        return write_formula(out, r, IMP);
    }
    if lvl == IMP {
        let (l, r) = f.as_implication().expect("level says implication");
        write_formula(out, l, IMP + 1)?;
        out.write_str(" -> ")?;
        return write_formula(out, r, IMP);
    }
    match f {
        Formula::Atom(p) => out.write_str(p),
        Formula::Not(g) => {
            out.write_char('~')?;
            write_formula(out, g, UNARY)
        }
        Formula::And(l, r) => {
            write_formula(out, l, AND)?;
            out.write_str(" & ")?;
            write_formula(out, r, UNARY)
        }
        Formula::K(a, g) => {
            write!(out, "K{{{a}}}")?;
            write_formula(out, g, UNARY)
        }
        Formula::Ky(a, g) => {
            write!(out, "Ky{{{a}}}")?;
            write_formula(out, g, UNARY)
        }
        Formula::KyR(a, c, b) => {
            write!(out, "Kyr{{{a}}}(")?;
            write_formula(out, c, 0)?;
            out.write_char(',')?;
            write_formula(out, b, 0)?;
            out.write_char(')')
        }
        Formula::Announce(ann, body) => {
            out.write_char('[')?;
            write_formula(out, ann, 0)?;
            out.write_char(']')?;
            write_formula(out, body, UNARY)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn prints_examples() {
        let p = Formula::atom("p");
        let q = Formula::atom("q");
        assert_eq!(print_formula(&p), "p");
        assert_eq!(print_formula(&Formula::announce(q.clone(), Formula::ky("a", p.clone()))), "[q]Ky{a}p");
        assert_eq!(print_formula(&Formula::kyr("a", p.clone(), q.clone())), "Kyr{a}(p,q)");
        assert_eq!(print_formula(&Formula::kyr("a", Formula::bot(), p)), "Kyr{a}(bot,p)");
    }

    #[test]
    fn parenthesises_where_needed() {
        for text in [
            "(p -> q) -> r",
            "p -> q -> r",
            "p & (q & r)",
            "(p -> q) & r",
            "~(p & q)",
            "K{a}(p -> q)",
            "[p -> q](r <-> s)",
            "<p>~q",
            "(p <-> q) <-> r",
            "~top",
        ] {
            let f = parse_formula(text).unwrap();
            let printed = print_formula(&f);
            assert_eq!(parse_formula(&printed).unwrap(), f, "{text} printed as {printed}");
        }
        assert_eq!(print_formula(&parse_formula("(p -> q) -> r").unwrap()), "(p -> q) -> r");
        assert_eq!(print_formula(&parse_formula("p & (q & r)").unwrap()), "p & (q & r)");
    }
}

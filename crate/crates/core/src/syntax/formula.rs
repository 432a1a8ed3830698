use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Interned-by-refcount identifier used for atoms and agents.
pub type Name = Arc<str>;

/// Atom reserved for encoding the truth constants: `top` is `~(p0 & ~p0)`.
pub const RESERVED_ATOM: &str = "p0";

/// Formula over the seven core constructors.
///
/// Derived connectives (`->`, `|`, `<->`, `top`, `bot`, `<φ>ψ`) never appear
/// as nodes; the smart constructors below expand them, so two formulas are
/// the same formula exactly when they are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(Name),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    K(Name, Arc<Formula>),
    Ky(Name, Arc<Formula>),
    /// Conditional knowing why: `KyR(agent, condition, body)`.
    KyR(Name, Arc<Formula>, Arc<Formula>),
    /// Public announcement `[announcement]body`.
    Announce(Arc<Formula>, Arc<Formula>),
}

/// The four languages, ordered by the inclusions ELKY ⊂ PAFKY and ELKYR ⊂ PAFKYR.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanguageTag {
    Elky,
    Elkyr,
    Pafky,
    Pafkyr,
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LanguageTag::Elky => "ELKY",
            LanguageTag::Elkyr => "ELKYR",
            LanguageTag::Pafky => "PAFKY",
            LanguageTag::Pafkyr => "PAFKYR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("formula mixes Ky and Kyr operators")]
    MixedOperators,
    #[error("formula already contains a Kyr operator")]
    AlreadyConditional,
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Arc::from(name))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Arc::new(l), Arc::new(r))
    }

    pub fn k(agent: &str, f: Formula) -> Formula {
        Formula::K(Arc::from(agent), Arc::new(f))
    }

    pub fn ky(agent: &str, f: Formula) -> Formula {
        Formula::Ky(Arc::from(agent), Arc::new(f))
    }

    pub fn kyr(agent: &str, cond: Formula, body: Formula) -> Formula {
        Formula::KyR(Arc::from(agent), Arc::new(cond), Arc::new(body))
    }

    pub fn announce(ann: Formula, body: Formula) -> Formula {
        Formula::Announce(Arc::new(ann), Arc::new(body))
    }

    /// `l -> r`, encoded as `~(l & ~r)`.
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::not(Formula::and(l, Formula::not(r)))
    }

    /// `l | r`, encoded as `~(~l & ~r)`.
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(l), Formula::not(r)))
    }

    /// `l <-> r`, encoded as `(l -> r) & (r -> l)`.
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(Formula::implies(l.clone(), r.clone()), Formula::implies(r, l))
    }

    pub fn top() -> Formula {
        let p0 = Formula::atom(RESERVED_ATOM);
        Formula::not(Formula::and(p0.clone(), Formula::not(p0)))
    }

    pub fn bot() -> Formula {
        Formula::not(Formula::top())
    }

    /// Dual announcement `<ann>body`, encoded as `~[ann]~body`.
    pub fn diamond(ann: Formula, body: Formula) -> Formula {
        Formula::not(Formula::announce(ann, Formula::not(body)))
    }

    pub fn is_top(&self) -> bool {
        match self.as_implication() {
            Some((l, r)) => {
                matches!((l, r), (Formula::Atom(a), Formula::Atom(b)) if &**a == RESERVED_ATOM && &**b == RESERVED_ATOM)
            }
            None => false,
        }
    }

    pub fn is_bot(&self) -> bool {
        matches!(self, Formula::Not(inner) if inner.is_top())
    }

    /// Splits `~(l & ~r)` into `(l, r)`.
    pub fn as_implication(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::Not(inner) = self {
            if let Formula::And(l, r) = &**inner {
                if let Formula::Not(r) = &**r {
                    return Some((l, r));
                }
            }
        }
        None
    }

    /// Splits `(l -> r) & (r -> l)` into `(l, r)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::And(a, b) = self {
            let (l1, r1) = a.as_implication()?;
            let (l2, r2) = b.as_implication()?;
            if l1 == r2 && r1 == l2 {
                return Some((l1, r1));
            }
        }
        None
    }

    /// Splits `~[ann]~body` into `(ann, body)`.
    pub fn as_diamond(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::Not(inner) = self {
            if let Formula::Announce(ann, body) = &**inner {
                if let Formula::Not(body) = &**body {
                    return Some((ann, body));
                }
            }
        }
        None
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Not(f) | Formula::K(_, f) | Formula::Ky(_, f) => 1 + f.size(),
            Formula::And(l, r) | Formula::KyR(_, l, r) | Formula::Announce(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Not(f) | Formula::K(_, f) | Formula::Ky(_, f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::KyR(_, l, r) | Formula::Announce(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Pre-order traversal over every subformula, including `self`.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Atom(_) => {}
            Formula::Not(g) | Formula::K(_, g) | Formula::Ky(_, g) => g.visit(f),
            Formula::And(l, r) | Formula::KyR(_, l, r) | Formula::Announce(l, r) => {
                l.visit(f);
                r.visit(f);
            }
        }
    }

    fn any(&self, pred: &impl Fn(&Formula) -> bool) -> bool {
        let mut found = false;
        self.visit(&mut |g| found |= pred(g));
        found
    }

    pub fn contains_ky(&self) -> bool {
        self.any(&|g| matches!(g, Formula::Ky(..)))
    }

    pub fn contains_kyr(&self) -> bool {
        self.any(&|g| matches!(g, Formula::KyR(..)))
    }

    pub fn contains_announce(&self) -> bool {
        self.any(&|g| matches!(g, Formula::Announce(..)))
    }

    /// Atoms in first-occurrence order, excluding the reserved atom.
    pub fn atoms(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        self.visit(&mut |g| {
            if let Formula::Atom(p) = g {
                if &**p != RESERVED_ATOM && !out.contains(p) {
                    out.push(p.clone());
                }
            }
        });
        out
    }

    /// Agents in first-occurrence order.
    pub fn agents(&self) -> Vec<Name> {
        let mut out: Vec<Name> = Vec::new();
        self.visit(&mut |g| {
            if let Formula::K(a, _) | Formula::Ky(a, _) | Formula::KyR(a, _, _) = g {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
        });
        out
    }

    /// Formulas whose explanations an evaluation can consult: every `Ky` body
    /// and every `Kyr` body, in first-occurrence order.
    pub fn explained_bodies(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = Vec::new();
        self.visit(&mut |g| {
            if let Formula::Ky(_, body) | Formula::KyR(_, _, body) = g {
                if !out.contains(body) {
                    out.push((**body).clone());
                }
            }
        });
        out
    }
}

/// Minimal language containing `f`; formulas using both `Ky` and `Kyr` are rejected.
pub fn classify_language(f: &Formula) -> Result<LanguageTag, LanguageError> {
    let ky = f.contains_ky();
    let kyr = f.contains_kyr();
    let ann = f.contains_announce();
    match (ky, kyr, ann) {
        (true, true, _) => Err(LanguageError::MixedOperators),
        (_, false, false) => Ok(LanguageTag::Elky),
        (false, true, false) => Ok(LanguageTag::Elkyr),
        (_, false, true) => Ok(LanguageTag::Pafky),
        (false, true, true) => Ok(LanguageTag::Pafkyr),
    }
}

/// Replaces every `Ky{a}φ` with `Kyr{a}(top, φ)`.
pub fn embed_ky(f: &Formula) -> Result<Formula, LanguageError> {
    if f.contains_kyr() {
        return Err(LanguageError::AlreadyConditional);
    }
    Ok(embed(f))
}

fn embed(f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::Not(Arc::new(embed(g))),
        Formula::And(l, r) => Formula::And(Arc::new(embed(l)), Arc::new(embed(r))),
        Formula::K(a, g) => Formula::K(a.clone(), Arc::new(embed(g))),
        Formula::Ky(a, g) => Formula::KyR(a.clone(), Arc::new(Formula::top()), Arc::new(embed(g))),
        Formula::KyR(a, c, b) => Formula::KyR(a.clone(), Arc::new(embed(c)), Arc::new(embed(b))),
        Formula::Announce(x, y) => Formula::Announce(Arc::new(embed(x)), Arc::new(embed(y))),
    }
}

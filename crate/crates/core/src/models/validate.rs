use std::fmt;

use super::model::KyModel;
use crate::semantics::{truth_set, SemanticsVariant};
use crate::syntax::Formula;

/// A broken model invariant. Worlds and agents are reported by name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotReflexive {
        agent: String,
        world: String,
    },
    /// `(from, to)` is in the relation but `(to, from)` is not.
    NotSymmetric {
        agent: String,
        from: String,
        to: String,
    },
    /// `(a, b)` and `(b, c)` are in the relation but `(a, c)` is not.
    NotTransitive {
        agent: String,
        a: String,
        b: String,
        c: String,
    },
    RelationOutOfRange {
        agent: String,
    },
    ValuationOutOfRange {
        atom: String,
    },
    ExtentOutOfRange {
        term: String,
        formula: String,
    },
    TautologyGroundFalse {
        formula: Formula,
        world: String,
    },
    TautologyGroundUnevaluable {
        formula: Formula,
        reason: String,
    },
    DuplicateEntry {
        term: String,
        formula: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReflexive { agent, world } => {
                write!(f, "relation of {agent} is not reflexive: ({world},{world}) missing")
            }
            Violation::NotSymmetric { agent, from, to } => {
                write!(f, "relation of {agent} is not symmetric: ({from},{to}) present, ({to},{from}) missing")
            }
            Violation::NotTransitive { agent, a, b, c } => {
                write!(f, "relation of {agent} is not transitive: ({a},{b}) and ({b},{c}) present, ({a},{c}) missing")
            }
            Violation::RelationOutOfRange { agent } => write!(f, "relation of {agent} mentions unknown worlds"),
            Violation::ValuationOutOfRange { atom } => write!(f, "valuation of {atom} mentions unknown worlds"),
            Violation::ExtentOutOfRange { term, formula } => {
                write!(f, "extent of {term} for {formula} mentions unknown worlds")
            }
            Violation::TautologyGroundFalse { formula, world } => {
                write!(f, "tautology-ground formula {formula} is false at {world}")
            }
            Violation::TautologyGroundUnevaluable { formula, reason } => {
                write!(f, "tautology-ground formula {formula} cannot be evaluated: {reason}")
            }
            Violation::DuplicateEntry { term, formula } => {
                write!(f, "explanation {term} for {formula} is declared more than once")
            }
        }
    }
}

/// Every structural invariant `m` violates; an empty list means the model is valid.
pub fn validate_model(m: &KyModel) -> Vec<Violation> {
    let mut out = Vec::new();
    let all = m.all_worlds();
    let name = |w: usize| m.world_name(w).to_string();

    for (ai, rel) in m.relations().iter().enumerate() {
        let agent = m.agents()[ai].to_string();
        if rel.iter().any(|s| !s.is_subset(all)) {
            out.push(Violation::RelationOutOfRange { agent: agent.clone() });
        }
        if !m.is_s5_required() {
            continue;
        }
        for w in all.iter() {
            if !rel[w].contains(w) {
                out.push(Violation::NotReflexive { agent: agent.clone(), world: name(w) });
            }
        }
        for w in all.iter() {
            for v in rel[w].intersection(all).iter() {
                if !rel[v].contains(w) {
                    out.push(Violation::NotSymmetric { agent: agent.clone(), from: name(w), to: name(v) });
                }
            }
        }
        'trans: for w in all.iter() {
            for v in rel[w].intersection(all).iter() {
                let missing = rel[v].intersection(all).difference(rel[w]);
                if let Some(u) = missing.iter().next() {
                    out.push(Violation::NotTransitive { agent: agent.clone(), a: name(w), b: name(v), c: name(u) });
                    continue 'trans;
                }
            }
        }
    }

    for (i, atom) in m.atoms().iter().enumerate() {
        if !m.valuation_of(i).is_subset(all) {
            out.push(Violation::ValuationOutOfRange { atom: atom.to_string() });
        }
    }

    for (i, e) in m.explanations().iter().enumerate() {
        if !e.extent.is_subset(all) {
            out.push(Violation::ExtentOutOfRange { term: e.term.to_string(), formula: e.formula.to_string() });
        }
        let first = m.explanations()[..i].iter().any(|d| d.term == e.term && d.formula == e.formula);
        let reported = out
            .iter()
            .any(|v| matches!(v, Violation::DuplicateEntry { term, formula } if *term == e.term.to_string() && *formula == e.formula.to_string()));
        if first && !reported {
            out.push(Violation::DuplicateEntry { term: e.term.to_string(), formula: e.formula.to_string() });
        }
    }

    for lambda in m.tautology_ground() {
        match truth_set(m, lambda, &SemanticsVariant::Standard) {
            Ok(set) => {
                for w in all.difference(set).iter() {
                    out.push(Violation::TautologyGroundFalse { formula: lambda.clone(), world: name(w) });
                }
            }
            Err(e) => {
                out.push(Violation::TautologyGroundUnevaluable { formula: lambda.clone(), reason: e.to_string() })
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn separation_small() -> KyModel {
        KyModel::builder(["w1", "w2"])
            .agent("a")
            .total("a")
            .atom("p", ["w1", "w2"])
            .atom("q", ["w1"])
            .explain("s", "p", ["w1"])
            .explain("t", "p", ["w2"])
            .build()
            .unwrap()
    }

    #[test]
    fn separation_model_is_valid() {
        assert_eq!(validate_model(&separation_small()), vec![]);
    }

    #[test]
    fn missing_pair_breaks_symmetry_only() {
        let m = KyModel::builder(["w1", "w2"])
            .agent("a")
            .edge("a", "w1", "w1")
            .edge("a", "w2", "w2")
            .edge("a", "w2", "w1")
            .build()
            .unwrap();
        let v = validate_model(&m);
        assert_eq!(v, vec![Violation::NotSymmetric { agent: "a".into(), from: "w2".into(), to: "w1".into() }]);
    }

    #[test]
    fn non_transitive_and_non_reflexive() {
        let m = KyModel::builder(["u", "v", "w"])
            .agent("a")
            .edge("a", "u", "v")
            .edge("a", "v", "u")
            .edge("a", "v", "w")
            .edge("a", "w", "v")
            .build()
            .unwrap();
        let v = validate_model(&m);
        assert!(v.contains(&Violation::NotReflexive { agent: "a".into(), world: "u".into() }));
        assert!(v.contains(&Violation::NotTransitive {
            agent: "a".into(),
            a: "u".into(),
            b: "v".into(),
            c: "u".into()
        }));
        let relaxed = KyModel::builder(["u", "v"]).agent("a").edge("a", "u", "v").s5(false).build().unwrap();
        assert_eq!(validate_model(&relaxed), vec![]);
    }

    #[test]
    fn false_tautology_ground_is_reported_per_world() {
        let m = KyModel::builder(["w1", "w2"]).agent("a").total("a").atom("p", ["w1"]).tautology("p").build().unwrap();
        let v = validate_model(&m);
        assert_eq!(
            v,
            vec![Violation::TautologyGroundFalse { formula: parse_formula("p").unwrap(), world: "w2".into() }]
        );
        assert_eq!(v[0].to_string(), "tautology-ground formula p is false at w2");
    }

    #[test]
    fn duplicates_and_unknown_agents() {
        let m = KyModel::builder(["w1"])
            .agent("a")
            .total("a")
            .explain("s", "p", ["w1"])
            .explain("s", "p", Vec::<String>::new())
            .tautology("K{b}top")
            .build()
            .unwrap();
        let v = validate_model(&m);
        assert!(v.contains(&Violation::DuplicateEntry { term: "s".into(), formula: "p".into() }));
        assert!(v.iter().any(|x| matches!(x, Violation::TautologyGroundUnevaluable { .. })));
    }
}

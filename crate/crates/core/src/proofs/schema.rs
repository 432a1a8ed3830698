use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{parse_formula, Formula, Name};

/// Axiom schemas of the two calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Schema {
    K,
    Ky,
    T,
    Four,
    Five,
    PS,
    FourYK,
    EKyR,
    FourYKR,
    DKyR,
    IKyR,
    UKyR,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown axiom schema `{0}`")]
pub struct UnknownSchema(pub String);

/// Metavariables usable in schema templates.
const METAVARS: [&str; 4] = ["phi", "psi", "chi", "theta"];
/// Agent parameter of schema templates.
const AGENT_VAR: &str = "a";

impl Schema {
    pub const ALL: [Schema; 12] = [
        Schema::K,
        Schema::Ky,
        Schema::T,
        Schema::Four,
        Schema::Five,
        Schema::PS,
        Schema::FourYK,
        Schema::EKyR,
        Schema::FourYKR,
        Schema::DKyR,
        Schema::IKyR,
        Schema::UKyR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Schema::K => "K",
            Schema::Ky => "Ky",
            Schema::T => "T",
            Schema::Four => "4",
            Schema::Five => "5",
            Schema::PS => "PS",
            Schema::FourYK => "4YK",
            Schema::EKyR => "EKyR",
            Schema::FourYKR => "4YKR",
            Schema::DKyR => "DKyR",
            Schema::IKyR => "IKyR",
            Schema::UKyR => "UKyR",
        }
    }

    /// The schema in concrete syntax, over metavariables `phi`, `psi`, `chi`,
    /// `theta` and the agent parameter `a`.
    pub fn template(self) -> &'static str {
        match self {
            Schema::K => "K{a}(phi -> psi) -> (K{a}phi -> K{a}psi)",
            Schema::Ky => "Ky{a}(phi -> psi) -> (Ky{a}phi -> Ky{a}psi)",
            Schema::T => "K{a}phi -> phi",
            Schema::Four => "K{a}phi -> K{a}K{a}phi",
            Schema::Five => "~K{a}phi -> K{a}~K{a}phi",
            Schema::PS => "Ky{a}phi -> K{a}phi",
            Schema::FourYK => "Ky{a}phi -> K{a}Ky{a}phi",
            Schema::EKyR => "Kyr{a}(chi, phi -> psi) -> (Kyr{a}(theta, phi) -> Kyr{a}(chi & theta, psi))",
            Schema::FourYKR => "Kyr{a}(phi, psi) -> K{a}Kyr{a}(phi, psi)",
            Schema::DKyR => "Kyr{a}(phi, psi) -> K{a}(phi -> psi)",
            Schema::IKyR => "Kyr{a}(psi, chi) -> (K{a}(phi -> psi) -> Kyr{a}(phi, chi))",
            Schema::UKyR => "K{a}~phi -> Kyr{a}(phi, psi)",
        }
    }

    pub fn pattern(self) -> Formula {
        parse_formula(self.template()).expect("schema templates parse")
    }

    /// Metavariables occurring in the template, in a fixed order.
    pub fn metavariables(self) -> Vec<&'static str> {
        let pattern = self.pattern();
        let atoms = pattern.atoms();
        METAVARS.into_iter().filter(|v| atoms.iter().any(|a| &**a == *v)).collect()
    }

    /// Replaces metavariables and the agent parameter. Metavariables missing
    /// from `subst` stay as atoms of the same name.
    pub fn instantiate(self, subst: &Substitution) -> Formula {
        replace(&self.pattern(), subst)
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Schema {
    type Err = UnknownSchema;

    fn from_str(s: &str) -> Result<Schema, UnknownSchema> {
        Schema::ALL
            .into_iter()
            .find(|sch| sch.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownSchema(s.to_string()))
    }
}

/// The two Hilbert calculi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProofSystem {
    Sky,
    Skyr,
}

impl ProofSystem {
    pub fn name(self) -> &'static str {
        match self {
            ProofSystem::Sky => "SKY",
            ProofSystem::Skyr => "SKYR",
        }
    }

    pub fn schemas(self) -> &'static [Schema] {
        match self {
            ProofSystem::Sky => {
                &[Schema::K, Schema::Ky, Schema::T, Schema::Four, Schema::Five, Schema::PS, Schema::FourYK]
            }
            ProofSystem::Skyr => &[
                Schema::K,
                Schema::T,
                Schema::Four,
                Schema::Five,
                Schema::EKyR,
                Schema::FourYKR,
                Schema::DKyR,
                Schema::IKyR,
                Schema::UKyR,
            ],
        }
    }

    pub fn has(self, schema: Schema) -> bool {
        self.schemas().contains(&schema)
    }
}

impl fmt::Display for ProofSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProofSystem {
    type Err = String;

    fn from_str(s: &str) -> Result<ProofSystem, String> {
        match s.to_ascii_lowercase().as_str() {
            "sky" => Ok(ProofSystem::Sky),
            "skyr" => Ok(ProofSystem::Skyr),
            _ => Err(format!("unknown proof system `{s}` (expected sky or skyr)")),
        }
    }
}

/// Values of schema metavariables and of the agent parameter.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    pub formulas: BTreeMap<String, Formula>,
    pub agent: Option<Name>,
}

impl Substitution {
    pub fn new(agent: &str) -> Substitution {
        Substitution { formulas: BTreeMap::new(), agent: Some(Arc::from(agent)) }
    }

    pub fn with(mut self, var: &str, f: Formula) -> Substitution {
        self.formulas.insert(var.to_string(), f);
        self
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.formulas.iter().map(|(k, v)| format!("{k}:={v}")).collect();
        if let Some(a) = &self.agent {
            parts.push(format!("a:={a}"));
        }
        f.write_str(&parts.join(", "))
    }
}

fn replace(p: &Formula, s: &Substitution) -> Formula {
    let agent = |a: &Name| -> Name {
        match &s.agent {
            Some(b) if &**a == AGENT_VAR => b.clone(),
            _ => a.clone(),
        }
    };
    match p {
        Formula::Atom(x) => s.formulas.get(&**x).cloned().unwrap_or_else(|| p.clone()),
        Formula::Not(g) => Formula::Not(Arc::new(replace(g, s))),
        Formula::And(l, r) => Formula::And(Arc::new(replace(l, s)), Arc::new(replace(r, s))),
        Formula::K(a, g) => Formula::K(agent(a), Arc::new(replace(g, s))),
        Formula::Ky(a, g) => Formula::Ky(agent(a), Arc::new(replace(g, s))),
        Formula::KyR(a, c, b) => Formula::KyR(agent(a), Arc::new(replace(c, s)), Arc::new(replace(b, s))),
        Formula::Announce(x, y) => Formula::Announce(Arc::new(replace(x, s)), Arc::new(replace(y, s))),
    }
}

fn bind_agent(s: &mut Substitution, a: &Name) -> bool {
    match &s.agent {
        Some(b) => b == a,
        None => {
            s.agent = Some(a.clone());
            true
        }
    }
}

fn unify(p: &Formula, f: &Formula, s: &mut Substitution) -> bool {
    match (p, f) {
        (Formula::Atom(x), _) if METAVARS.contains(&&**x) => match s.formulas.get(&**x) {
            Some(bound) => bound == f,
            None => {
                s.formulas.insert(x.to_string(), f.clone());
                true
            }
        },
        (Formula::Atom(x), Formula::Atom(y)) => x == y,
        (Formula::Not(a), Formula::Not(b)) => unify(a, b, s),
        (Formula::And(a1, a2), Formula::And(b1, b2)) => unify(a1, b1, s) && unify(a2, b2, s),
        (Formula::K(x, a), Formula::K(y, b)) | (Formula::Ky(x, a), Formula::Ky(y, b)) => {
            &**x == AGENT_VAR && bind_agent(s, y) && unify(a, b, s)
        }
        (Formula::KyR(x, a1, a2), Formula::KyR(y, b1, b2)) => {
            &**x == AGENT_VAR && bind_agent(s, y) && unify(a1, b1, s) && unify(a2, b2, s)
        }
        (Formula::Announce(a1, a2), Formula::Announce(b1, b2)) => unify(a1, b1, s) && unify(a2, b2, s),
        _ => false,
    }
}

/// The substitution making `schema` equal to `f`, if there is one.
pub fn match_axiom(f: &Formula, schema: Schema) -> Option<Substitution> {
    let mut s = Substitution::default();
    unify(&schema.pattern(), f, &mut s).then_some(s)
}

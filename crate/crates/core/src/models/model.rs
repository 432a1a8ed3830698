use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::term::{ExplanationTerm, TermParseError};
use super::worldset::{WorldSet, MAX_WORLDS};
use crate::syntax::{parse_formula, Formula, Name, ParseError};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("model has no worlds")]
    NoWorlds,
    #[error("model has no agents")]
    NoAgents,
    #[error("model has {0} worlds; at most {MAX_WORLDS} are supported")]
    TooManyWorlds(usize),
    #[error("duplicate world `{0}`")]
    DuplicateWorld(String),
    #[error("duplicate agent `{0}`")]
    DuplicateAgent(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("formula `{text}`: {source}")]
    Formula { text: String, source: ParseError },
    #[error(transparent)]
    Term(#[from] TermParseError),
    #[error("model JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// A declared explanation: `term` explains `formula` exactly at the worlds in `extent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplanationEntry {
    pub term: ExplanationTerm,
    pub formula: Formula,
    pub extent: WorldSet,
}

/// Finite knowing-why model.
///
/// Worlds, agents and atoms are addressed by index; names are kept for I/O.
/// The explanation function is given by finitely many declared entries plus
/// the tautology ground; everything else is derived by saturation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KyModel {
    worlds: Vec<String>,
    agents: Vec<Name>,
    atoms: Vec<Name>,
    /// `relations[agent][w]` is the successor set of `w`.
    relations: Vec<Vec<WorldSet>>,
    valuation: Vec<WorldSet>,
    explanations: Vec<ExplanationEntry>,
    tautology_ground: Vec<Formula>,
    s5: bool,
}

impl KyModel {
    pub fn builder<I, S>(worlds: I) -> ModelBuilder
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        ModelBuilder {
            worlds: worlds.into_iter().map(Into::into).collect(),
            agents: Vec::new(),
            atoms: Vec::new(),
            pairs: Vec::new(),
            total: Vec::new(),
            valuation: Vec::new(),
            explanations: Vec::new(),
            tautology_ground: Vec::new(),
            s5: true,
        }
    }

    /// Assembles a model from index-level parts. Used by the search module,
    /// which produces structurally valid parts by construction.
    pub(crate) fn from_parts(
        worlds: Vec<String>,
        agents: Vec<Name>,
        atoms: Vec<Name>,
        relations: Vec<Vec<WorldSet>>,
        valuation: Vec<WorldSet>,
        explanations: Vec<ExplanationEntry>,
        s5: bool,
    ) -> KyModel {
        debug_assert_eq!(relations.len(), agents.len());
        debug_assert_eq!(valuation.len(), atoms.len());
        KyModel { worlds, agents, atoms, relations, valuation, explanations, tautology_ground: Vec::new(), s5 }
    }

    pub fn num_worlds(&self) -> usize {
        self.worlds.len()
    }

    pub fn all_worlds(&self) -> WorldSet {
        WorldSet::full(self.worlds.len())
    }

    pub fn world_names(&self) -> &[String] {
        &self.worlds
    }

    pub fn world_name(&self, w: usize) -> &str {
        &self.worlds[w]
    }

    pub fn world_index(&self, name: &str) -> Option<usize> {
        self.worlds.iter().position(|w| w == name)
    }

    pub fn agents(&self) -> &[Name] {
        &self.agents
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| &**a == name)
    }

    pub fn atoms(&self) -> &[Name] {
        &self.atoms
    }

    pub fn atom_index(&self, name: &str) -> Option<usize> {
        self.atoms.iter().position(|a| &**a == name)
    }

    pub fn successors(&self, agent: usize, w: usize) -> WorldSet {
        self.relations[agent][w]
    }

    pub(crate) fn relations(&self) -> &[Vec<WorldSet>] {
        &self.relations
    }

    pub fn valuation_of(&self, atom: usize) -> WorldSet {
        self.valuation[atom]
    }

    pub(crate) fn valuation(&self) -> &[WorldSet] {
        &self.valuation
    }

    pub fn explanations(&self) -> &[ExplanationEntry] {
        &self.explanations
    }

    pub fn tautology_ground(&self) -> &[Formula] {
        &self.tautology_ground
    }

    pub fn is_s5_required(&self) -> bool {
        self.s5
    }

    pub fn set_tautology_ground(&mut self, lambda: Vec<Formula>) {
        self.tautology_ground = lambda;
    }

    pub fn set_explanations(&mut self, entries: Vec<ExplanationEntry>) {
        self.explanations = entries;
    }

    pub fn add_explanation(&mut self, entry: ExplanationEntry) {
        self.explanations.push(entry);
    }

    /// Names of the worlds in `set`, in model order.
    pub fn names_of(&self, set: WorldSet) -> Vec<String> {
        set.iter().filter(|&w| w < self.worlds.len()).map(|w| self.worlds[w].clone()).collect()
    }

    /// Restriction of the model to the worlds in `keep`, renumbering worlds
    /// in their original order.
    pub(crate) fn restrict_to(&self, keep: WorldSet) -> KyModel {
        let kept: Vec<usize> = keep.iter().filter(|&w| w < self.worlds.len()).collect();
        let remap = |s: WorldSet| -> WorldSet {
            kept.iter().enumerate().filter(|(_, &old)| s.contains(old)).map(|(new, _)| new).collect()
        };
        KyModel {
            worlds: kept.iter().map(|&w| self.worlds[w].clone()).collect(),
            agents: self.agents.clone(),
            atoms: self.atoms.clone(),
            relations: self.relations.iter().map(|rel| kept.iter().map(|&w| remap(rel[w])).collect()).collect(),
            valuation: self.valuation.iter().map(|&v| remap(v)).collect(),
            explanations: self
                .explanations
                .iter()
                .map(|e| ExplanationEntry { term: e.term.clone(), formula: e.formula.clone(), extent: remap(e.extent) })
                .collect(),
            tautology_ground: self.tautology_ground.clone(),
            s5: self.s5,
        }
    }

    pub fn from_json(text: &str) -> Result<KyModel, ModelError> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ModelFile::from_model(self)).expect("model file serialises")
    }
}

/// Name-based model construction.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    worlds: Vec<String>,
    agents: Vec<String>,
    atoms: Vec<String>,
    pairs: Vec<(String, String, String)>,
    total: Vec<String>,
    valuation: Vec<(String, Vec<String>)>,
    explanations: Vec<(String, String, Vec<String>)>,
    tautology_ground: Vec<String>,
    s5: bool,
}

impl ModelBuilder {
    pub fn agent(mut self, name: &str) -> Self {
        self.agents.push(name.to_string());
        self
    }

    /// Adds the pair `(w, v)` to the relation of `agent`.
    pub fn edge(mut self, agent: &str, w: &str, v: &str) -> Self {
        self.pairs.push((agent.to_string(), w.to_string(), v.to_string()));
        self
    }

    /// Makes the relation of `agent` the full relation `W × W`.
    pub fn total(mut self, agent: &str) -> Self {
        self.total.push(agent.to_string());
        self
    }

    /// Declares an atom true exactly at `worlds`.
    pub fn atom<I, S>(mut self, name: &str, worlds: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.atoms.push(name.to_string());
        self.valuation.push((name.to_string(), worlds.into_iter().map(Into::into).collect()));
        self
    }

    /// Declares that `term` explains `formula` at `extent`.
    pub fn explain<I, S>(mut self, term: &str, formula: &str, extent: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.explanations.push((term.to_string(), formula.to_string(), extent.into_iter().map(Into::into).collect()));
        self
    }

    pub fn tautology(mut self, formula: &str) -> Self {
        self.tautology_ground.push(formula.to_string());
        self
    }

    pub fn s5(mut self, required: bool) -> Self {
        self.s5 = required;
        self
    }

    pub fn build(self) -> Result<KyModel, ModelError> {
        let mut relations: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
        for a in &self.agents {
            relations.entry(a.clone()).or_default();
        }
        for (a, w, v) in self.pairs {
            relations.entry(a).or_default().push((w, v));
        }
        for a in self.total {
            let all = self.worlds.iter().flat_map(|w| self.worlds.iter().map(move |v| (w.clone(), v.clone())));
            relations.entry(a).or_default().extend(all);
        }
        ModelFile {
            worlds: self.worlds,
            agents: self.agents,
            atoms: self.atoms,
            relations,
            valuation: self.valuation.into_iter().collect(),
            explanations: self
                .explanations
                .into_iter()
                .map(|(term, formula, extent)| ExplanationFile { term, formula, extent })
                .collect(),
            tautology_ground: self.tautology_ground,
            s5: self.s5,
        }
        .into_model()
    }
}

/// JSON layout of a model file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub worlds: Vec<String>,
    pub agents: Vec<String>,
    #[serde(default)]
    pub atoms: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<(String, String)>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub explanations: Vec<ExplanationFile>,
    #[serde(default)]
    pub tautology_ground: Vec<String>,
    #[serde(default = "default_s5")]
    pub s5: bool,
}

fn default_s5() -> bool {
    true
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplanationFile {
    pub term: String,
    pub formula: String,
    pub extent: Vec<String>,
}

fn formula(text: &str) -> Result<Formula, ModelError> {
    parse_formula(text).map_err(|source| ModelError::Formula { text: text.to_string(), source })
}

impl ModelFile {
    pub fn into_model(self) -> Result<KyModel, ModelError> {
        if self.worlds.is_empty() {
            return Err(ModelError::NoWorlds);
        }
        if self.worlds.len() > MAX_WORLDS {
            return Err(ModelError::TooManyWorlds(self.worlds.len()));
        }
        if self.agents.is_empty() {
            return Err(ModelError::NoAgents);
        }
        for (i, w) in self.worlds.iter().enumerate() {
            if self.worlds[..i].contains(w) {
                return Err(ModelError::DuplicateWorld(w.clone()));
            }
        }
        for (i, a) in self.agents.iter().enumerate() {
            if self.agents[..i].contains(a) {
                return Err(ModelError::DuplicateAgent(a.clone()));
            }
        }
        let mut atoms: Vec<Name> = Vec::new();
        for a in &self.atoms {
            if atoms.iter().any(|x| &**x == a) {
                return Err(ModelError::DuplicateAtom(a.clone()));
            }
            atoms.push(Arc::from(a.as_str()));
        }
        let world = |name: &str| -> Result<usize, ModelError> {
            self.worlds.iter().position(|w| w == name).ok_or_else(|| ModelError::UnknownWorld(name.to_string()))
        };
        let world_set = |names: &[String]| -> Result<WorldSet, ModelError> {
            names.iter().map(|n| world(n)).collect::<Result<WorldSet, _>>()
        };

        let n = self.worlds.len();
        let mut relations = vec![vec![WorldSet::EMPTY; n]; self.agents.len()];
        for (agent, pairs) in &self.relations {
            let ai =
                self.agents.iter().position(|a| a == agent).ok_or_else(|| ModelError::UnknownAgent(agent.clone()))?;
            for (w, v) in pairs {
                let (w, v) = (world(w)?, world(v)?);
                relations[ai][w].insert(v);
            }
        }

        let mut valuation = vec![WorldSet::EMPTY; atoms.len()];
        for (atom, worlds) in &self.valuation {
            let i = atoms
                .iter()
                .position(|a| &**a == atom.as_str())
                .ok_or_else(|| ModelError::UnknownAtom(atom.clone()))?;
            valuation[i] = world_set(worlds)?;
        }

        let explanations = self
            .explanations
            .iter()
            .map(|e| {
                Ok(ExplanationEntry {
                    term: ExplanationTerm::parse(&e.term)?,
                    formula: formula(&e.formula)?,
                    extent: world_set(&e.extent)?,
                })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;

        let tautology_ground = self.tautology_ground.iter().map(|t| formula(t)).collect::<Result<Vec<_>, _>>()?;

        Ok(KyModel {
            worlds: self.worlds,
            agents: self.agents.iter().map(|a| Arc::from(a.as_str())).collect(),
            atoms,
            relations,
            valuation,
            explanations,
            tautology_ground,
            s5: self.s5,
        })
    }

    pub fn from_model(m: &KyModel) -> ModelFile {
        ModelFile {
            worlds: m.worlds.clone(),
            agents: m.agents.iter().map(|a| a.to_string()).collect(),
            atoms: m.atoms.iter().map(|a| a.to_string()).collect(),
            relations: m
                .agents
                .iter()
                .zip(&m.relations)
                .map(|(a, rel)| {
                    let pairs = rel
                        .iter()
                        .enumerate()
                        .flat_map(|(w, succ)| succ.iter().map(move |v| (w, v)))
                        .map(|(w, v)| (m.worlds[w].clone(), m.worlds[v].clone()))
                        .collect();
                    (a.to_string(), pairs)
                })
                .collect(),
            valuation: m.atoms.iter().zip(&m.valuation).map(|(a, &v)| (a.to_string(), m.names_of(v))).collect(),
            explanations: m
                .explanations
                .iter()
                .map(|e| ExplanationFile {
                    term: e.term.to_string(),
                    formula: e.formula.to_string(),
                    extent: m.names_of(e.extent),
                })
                .collect(),
            tautology_ground: m.tautology_ground.iter().map(|f| f.to_string()).collect(),
            s5: m.s5,
        }
    }
}

use std::collections::HashMap;

use thiserror::Error;

use super::model::KyModel;
use super::term::ExplanationTerm;
use super::worldset::WorldSet;
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula `{0}` is not tracked by this extent table")]
pub struct UntrackedFormula(pub Formula);

/// One explanation of a formula: `term` explains it exactly at `extent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtentEntry {
    pub term: ExplanationTerm,
    pub extent: WorldSet,
}

/// Modus-ponens instance over tracked formula indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct MpRule {
    pub implication: usize,
    pub antecedent: usize,
    pub consequent: usize,
}

/// Formulas a query may need explanations for: `Ky`/`Kyr` bodies and `Kyr`
/// conditions of the query. Saturation closes the set under implication
/// decomposition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchRelevantFormulas {
    formulas: Vec<Formula>,
}

impl SearchRelevantFormulas {
    pub fn new(formulas: impl IntoIterator<Item = Formula>) -> Self {
        let mut out = SearchRelevantFormulas::default();
        for f in formulas {
            out.insert(f);
        }
        out
    }

    pub fn from_query(query: &Formula) -> Self {
        let mut out = SearchRelevantFormulas::default();
        query.visit(&mut |g| match g {
            Formula::Ky(_, body) => out.insert((**body).clone()),
            Formula::KyR(_, cond, body) => {
                out.insert((**body).clone());
                out.insert((**cond).clone());
            }
            _ => {}
        });
        out
    }

    pub fn insert(&mut self, f: Formula) {
        if !self.formulas.contains(&f) {
            self.formulas.push(f);
        }
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }
}

/// Finite formula universe closed under "if `φ -> ψ` and `φ` are tracked, so is `ψ`",
/// together with every modus-ponens instance inside it.
#[derive(Clone, Debug, Default)]
pub(crate) struct Universe {
    pub formulas: Vec<Formula>,
    pub index: HashMap<Formula, usize>,
    pub rules: Vec<MpRule>,
}

impl Universe {
    pub fn build<'a>(seeds: impl IntoIterator<Item = &'a Formula>) -> Universe {
        let mut u = Universe::default();
        for f in seeds {
            u.add(f);
        }
        // Each round can only add strict subformulas of tracked formulas.
        loop {
            let mut fresh = Vec::new();
            for f in &u.formulas {
                if let Some((ante, cons)) = f.as_implication() {
                    if u.index.contains_key(ante) && !u.index.contains_key(cons) && !fresh.contains(cons) {
                        fresh.push(cons.clone());
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            for f in &fresh {
                u.add(f);
            }
        }
        for (i, f) in u.formulas.iter().enumerate() {
            if let Some((ante, cons)) = f.as_implication() {
                if let (Some(&a), Some(&c)) = (u.index.get(ante), u.index.get(cons)) {
                    u.rules.push(MpRule { implication: i, antecedent: a, consequent: c });
                }
            }
        }
        u
    }

    fn add(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        self.formulas.push(f.clone());
        self.index.insert(f.clone(), self.formulas.len() - 1);
        self.formulas.len() - 1
    }
}

/// Adds `(term, extent)` unless an entry with the same extent is present.
pub(crate) fn push_entry(family: &mut Vec<ExtentEntry>, term: ExplanationTerm, extent: WorldSet) -> bool {
    if family.iter().any(|e| e.extent == extent) {
        return false;
    }
    family.push(ExtentEntry { term, extent });
    true
}

/// Closes `families` under `E(s, φ->ψ) ∩ E(t, φ) ⊆ E(s·t, ψ)`, realising each
/// derived extent as exactly the intersection. Extents live in a finite
/// lattice and equal extents are merged, so the loop terminates.
pub(crate) fn saturate_families(rules: &[MpRule], families: &mut [Vec<ExtentEntry>]) {
    loop {
        let mut changed = false;
        for rule in rules {
            let (n_imp, n_ante) = (families[rule.implication].len(), families[rule.antecedent].len());
            for i in 0..n_imp {
                for j in 0..n_ante {
                    let x = &families[rule.implication][i];
                    let y = &families[rule.antecedent][j];
                    let extent = x.extent.intersection(y.extent);
                    if families[rule.consequent].iter().any(|e| e.extent == extent) {
                        continue;
                    }
                    let term = ExplanationTerm::combine(&x.term, &y.term);
                    families[rule.consequent].push(ExtentEntry { term, extent });
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Saturated explanation table of a model: the least explanation function
/// containing the declared entries and `(e, W)` for every tautology-ground
/// formula, closed under the modus-ponens rule.
#[derive(Clone, Debug)]
pub struct ExtentTable {
    pub(crate) universe: Universe,
    pub(crate) families: Vec<Vec<ExtentEntry>>,
}

impl ExtentTable {
    pub fn tracked_formulas(&self) -> &[Formula] {
        &self.universe.formulas
    }

    pub fn is_tracked(&self, f: &Formula) -> bool {
        self.universe.index.contains_key(f)
    }

    /// Entries recorded for `f`.
    pub fn entries(&self, f: &Formula) -> Result<&[ExtentEntry], UntrackedFormula> {
        self.universe.index.get(f).map(|&i| self.families[i].as_slice()).ok_or_else(|| UntrackedFormula(f.clone()))
    }

    pub(crate) fn slot(&self, f: &Formula) -> Option<usize> {
        self.universe.index.get(f).copied()
    }

    pub fn len(&self) -> usize {
        self.families.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn saturate(m: &KyModel, extra: &SearchRelevantFormulas) -> ExtentTable {
    let seeds: Vec<&Formula> =
        m.explanations().iter().map(|e| &e.formula).chain(m.tautology_ground()).chain(extra.formulas()).collect();
    let universe = Universe::build(seeds);
    let mut families = vec![Vec::new(); universe.formulas.len()];
    for lambda in m.tautology_ground() {
        push_entry(&mut families[universe.index[lambda]], ExplanationTerm::SelfEvident, m.all_worlds());
    }
    for e in m.explanations() {
        push_entry(&mut families[universe.index[&e.formula]], e.term.clone(), e.extent);
    }
    saturate_families(&universe.rules, &mut families);
    ExtentTable { universe, families }
}

/// Distinct extents recorded for `f`; the knowing-why quantifier ranges over these.
pub fn extents_of(tbl: &ExtentTable, f: &Formula) -> Result<Vec<WorldSet>, UntrackedFormula> {
    Ok(tbl.entries(f)?.iter().map(|e| e.extent).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn set(ws: &[usize]) -> WorldSet {
        ws.iter().copied().collect()
    }

    fn m1() -> KyModel {
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
    fn declared_entries_only() {
        let tbl = saturate(&m1(), &SearchRelevantFormulas::new([f("p")]));
        assert_eq!(tbl.tracked_formulas(), [f("p")]);
        assert_eq!(extents_of(&tbl, &f("p")).unwrap(), vec![set(&[0]), set(&[1])]);
        assert_eq!(extents_of(&tbl, &f("r")), Err(UntrackedFormula(f("r"))));
    }

    #[test]
    fn one_modus_ponens_step() {
        let m = KyModel::builder(["w1", "w2"])
            .agent("a")
            .total("a")
            .atom("p", ["w1"])
            .explain("s", "p -> q", ["w1", "w2"])
            .explain("t", "p", ["w1"])
            .build()
            .unwrap();
        let tbl = saturate(&m, &SearchRelevantFormulas::new([f("q")]));
        let q = tbl.entries(&f("q")).unwrap();
        assert_eq!(q.len(), 1);
        assert_eq!(q[0].term.to_string(), "(s.t)");
        assert_eq!(q[0].extent, set(&[0]));
    }

    #[test]
    fn consequent_tracked_without_being_requested() {
        let m = KyModel::builder(["w1"])
            .agent("a")
            .explain("s", "p -> (q -> r)", ["w1"])
            .explain("t", "p", ["w1"])
            .explain("u", "q", ["w1"])
            .build()
            .unwrap();
        let tbl = saturate(&m, &SearchRelevantFormulas::default());
        assert_eq!(tbl.entries(&f("r")).unwrap()[0].term.to_string(), "((s.t).u)");
    }

    #[test]
    fn tautology_ground_is_self_evident_everywhere() {
        let m = KyModel::builder(["w1", "w2"])
            .agent("a")
            .total("a")
            .atom("q", ["w1", "w2"])
            .tautology("q")
            .build()
            .unwrap();
        let tbl = saturate(&m, &SearchRelevantFormulas::new([f("q")]));
        let entries = tbl.entries(&f("q")).unwrap();
        assert_eq!(entries, [ExtentEntry { term: ExplanationTerm::SelfEvident, extent: m.all_worlds() }]);
    }

    #[test]
    fn cyclic_implications_terminate() {
        let m = KyModel::builder(["w1", "w2", "w3"])
            .agent("a")
            .explain("s", "p -> q", ["w1", "w2"])
            .explain("t", "q -> p", ["w2", "w3"])
            .explain("u", "p", ["w1", "w2", "w3"])
            .build()
            .unwrap();
        let tbl = saturate(&m, &SearchRelevantFormulas::default());
        let mut p = extents_of(&tbl, &f("p")).unwrap();
        p.sort();
        assert_eq!(p, vec![set(&[1]), set(&[0, 1, 2])]);
        assert_eq!(extents_of(&tbl, &f("q")).unwrap(), vec![set(&[0, 1]), set(&[1])]);
    }
}

//! Truth evaluation under the standard, alternative-`Kyr`, and context-dependent semantics.
//!
//! Evaluation is set-based: a formula is compiled once and its truth set over
//! all worlds of a model is computed bottom-up. Announcements shrink the
//! current world domain instead of materialising updated models, which is
//! equivalent because restricting a saturated explanation table to a subset
//! of worlds gives the table of the restricted model.

mod program;

use std::fmt;

use thiserror::Error;

pub(crate) use program::{eval_flat, Mode, Program, Runner, Signature, Structure};

use crate::models::{saturate, ExplanationTerm, ExtentTable, KyModel, SearchRelevantFormulas, WorldSet};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("world index {0} out of range for a model with {1} worlds")]
    WorldOutOfRange(usize, usize),
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
}

/// Which satisfaction relation to use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SemanticsVariant {
    Standard,
    /// Standard clauses except `Kyr{a}(φ,ψ)`, whose body is evaluated in the
    /// model updated by `φ`.
    AltKyr,
    /// Context-dependent relation carrying the context formula. Epistemic
    /// operators only look at successors satisfying the context; announcements
    /// extend the context by conjunction.
    Context(Formula),
}

impl SemanticsVariant {
    /// Context semantics with the trivial context `top`.
    pub fn context() -> SemanticsVariant {
        SemanticsVariant::Context(Formula::top())
    }

    pub fn name(&self) -> &'static str {
        match self {
            SemanticsVariant::Standard => "standard",
            SemanticsVariant::AltKyr => "alt-kyr",
            SemanticsVariant::Context(_) => "context",
        }
    }

    fn mode(&self) -> Mode {
        match self {
            SemanticsVariant::Standard => Mode::Standard,
            SemanticsVariant::AltKyr => Mode::AltKyr,
            SemanticsVariant::Context(_) => Mode::Context,
        }
    }
}

/// The explanation that made an outermost `Ky`/`Kyr` true.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub term: ExplanationTerm,
    pub extent: WorldSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalResult {
    pub verdict: bool,
    pub witness: Option<Witness>,
}

/// One subformula evaluation: `truth` is its truth set when evaluated over
/// the world domain `domain`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub formula: Formula,
    pub domain: WorldSet,
    pub truth: WorldSet,
}

impl TraceStep {
    pub fn render(&self, m: &KyModel) -> String {
        format!(
            "{} over {{{}}}: true at {{{}}}",
            self.formula,
            m.names_of(self.domain).join(","),
            m.names_of(self.truth).join(",")
        )
    }
}

struct ModelSignature<'a> {
    model: &'a KyModel,
    table: &'a ExtentTable,
}

impl Signature for ModelSignature<'_> {
    fn atom(&self, name: &str) -> Option<usize> {
        self.model.atom_index(name)
    }
    fn agent(&self, name: &str) -> Option<usize> {
        self.model.agent_index(name)
    }
    fn slot(&self, body: &Formula) -> Option<usize> {
        self.table.slot(body)
    }
}

/// Evaluator bound to one model, sharing its saturated explanation table
/// across queries.
///
/// Formulas outside the table's universe have no explanations: nothing
/// declared can generate one, since every consequent of a tracked
/// implication with a tracked antecedent is itself tracked.
pub struct Evaluator<'m> {
    model: &'m KyModel,
    table: ExtentTable,
    extents: Vec<Vec<WorldSet>>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m KyModel) -> Self {
        let table = saturate(model, &SearchRelevantFormulas::default());
        let extents = table.families.iter().map(|f| f.iter().map(|e| e.extent).collect()).collect();
        Evaluator { model, table, extents }
    }

    pub fn model(&self) -> &KyModel {
        self.model
    }

    pub fn table(&self) -> &ExtentTable {
        &self.table
    }

    fn structure(&self) -> Structure<'_> {
        Structure {
            full: self.model.all_worlds(),
            relations: self.model.relations(),
            valuation: self.model.valuation(),
            extents: &self.extents,
        }
    }

    /// Compiles `f` (and the context formula, if any); returns the program,
    /// the root of `f`, and the root of the context.
    fn compile(&self, f: &Formula, v: &SemanticsVariant) -> Result<(Program, usize, Option<usize>), EvalError> {
        let sig = ModelSignature { model: self.model, table: &self.table };
        let mut prog = Program::new();
        let root = prog.add(f, &sig)?;
        let ctx = match v {
            SemanticsVariant::Context(rho) => Some(prog.add(rho, &sig)?),
            _ => None,
        };
        Ok((prog, root, ctx))
    }

    fn run<T>(
        &self,
        f: &Formula,
        v: &SemanticsVariant,
        trace: bool,
        k: impl FnOnce(&mut Runner, usize, WorldSet) -> T,
    ) -> Result<T, EvalError> {
        let (prog, root, ctx) = self.compile(f, v)?;
        let mut runner = Runner::new(&prog, self.structure(), v.mode());
        if trace {
            runner = runner.with_trace();
        }
        let full = self.model.all_worlds();
        let mask = match ctx {
            Some(c) => runner.set(c, full),
            None => full,
        };
        Ok(k(&mut runner, root, mask))
    }

    /// Worlds where `f` holds.
    pub fn truth_set(&self, f: &Formula, v: &SemanticsVariant) -> Result<WorldSet, EvalError> {
        self.run(f, v, false, |r, root, mask| r.set(root, mask))
    }

    pub fn eval(&self, w: usize, f: &Formula, v: &SemanticsVariant) -> Result<EvalResult, EvalError> {
        let n = self.model.num_worlds();
        if w >= n {
            return Err(EvalError::WorldOutOfRange(w, n));
        }
        let (verdict, quantified) = self.run(f, v, false, |r, root, mask| {
            let verdict = r.set(root, mask).contains(w);
            (verdict, if verdict { r.quantified(root, mask, w) } else { None })
        })?;
        let witness = quantified.map(|s| self.witness(f, s));
        Ok(EvalResult { verdict, witness })
    }

    fn witness(&self, f: &Formula, s: WorldSet) -> Witness {
        let body = match f {
            Formula::Ky(_, b) | Formula::KyR(_, _, b) => &**b,
            _ => unreachable!("witnesses are only computed for Ky and Kyr"),
        };
        let entries = self.table.entries(body).unwrap_or(&[]);
        if let Some(e) = entries.iter().find(|e| s.is_subset(e.extent)) {
            return Witness { term: e.term.clone(), extent: e.extent };
        }
        // Only reachable with nothing to cover: the self-evident explanation does.
        let extent =
            entries.iter().find(|e| e.term == ExplanationTerm::SelfEvident).map_or(WorldSet::EMPTY, |e| e.extent);
        Witness { term: ExplanationTerm::SelfEvident, extent }
    }

    /// Every subformula evaluation performed while computing the truth set of `f`,
    /// children before parents.
    pub fn trace(&self, f: &Formula, v: &SemanticsVariant) -> Result<Vec<TraceStep>, EvalError> {
        let (prog, root, ctx) = self.compile(f, v)?;
        let mut runner = Runner::new(&prog, self.structure(), v.mode()).with_trace();
        let full = self.model.all_worlds();
        let mask = match ctx {
            Some(c) => runner.set(c, full),
            None => full,
        };
        runner.set(root, mask);
        let steps = runner.trace.take().unwrap_or_default();
        Ok(steps
            .into_iter()
            .map(|(i, domain, truth)| TraceStep { formula: prog.formulas[i].clone(), domain, truth })
            .collect())
    }
}

pub fn eval(m: &KyModel, w: usize, f: &Formula, v: &SemanticsVariant) -> Result<EvalResult, EvalError> {
    Evaluator::new(m).eval(w, f, v)
}

/// [`eval`] addressing the world by name.
pub fn eval_at(m: &KyModel, world: &str, f: &Formula, v: &SemanticsVariant) -> Result<EvalResult, EvalError> {
    let w = m.world_index(world).ok_or_else(|| EvalError::UnknownWorld(world.to_string()))?;
    eval(m, w, f, v)
}

pub fn truth_set(m: &KyModel, f: &Formula, v: &SemanticsVariant) -> Result<WorldSet, EvalError> {
    Evaluator::new(m).truth_set(f, v)
}

pub fn holds_globally(m: &KyModel, f: &Formula, v: &SemanticsVariant) -> Result<bool, EvalError> {
    Ok(truth_set(m, f, v)? == m.all_worlds())
}

/// Verdicts of `[cond]Ky{a}body`, of the bare `Kyr{a}(cond, body)`, and of the
/// candidate translation `cond -> Kyr{a}(cond, body)` under the standard and
/// alternative clauses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub announced: bool,
    pub conditional: bool,
    pub standard: bool,
    pub alt_kyr: bool,
}

impl CorrespondenceReport {
    pub fn conditional_agrees(&self) -> bool {
        self.announced == self.conditional
    }

    pub fn standard_agrees(&self) -> bool {
        self.announced == self.standard
    }

    pub fn alt_agrees(&self) -> bool {
        self.announced == self.alt_kyr
    }
}

impl fmt::Display for CorrespondenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "announced={} conditional={} standard={} alt-kyr={} (standard {}, alt-kyr {})",
            self.announced,
            self.conditional,
            self.standard,
            self.alt_kyr,
            if self.standard_agrees() { "agrees" } else { "differs" },
            if self.alt_agrees() { "agrees" } else { "differs" },
        )
    }
}

pub fn check_correspondence(
    m: &KyModel,
    w: usize,
    agent: &str,
    cond: &Formula,
    body: &Formula,
) -> Result<CorrespondenceReport, EvalError> {
    let ev = Evaluator::new(m);
    let announced = Formula::announce(cond.clone(), Formula::ky(agent, body.clone()));
    let conditional = Formula::kyr(agent, cond.clone(), body.clone());
    let translated = Formula::implies(cond.clone(), conditional.clone());
    Ok(CorrespondenceReport {
        announced: ev.eval(w, &announced, &SemanticsVariant::Standard)?.verdict,
        conditional: ev.eval(w, &conditional, &SemanticsVariant::Standard)?.verdict,
        standard: ev.eval(w, &translated, &SemanticsVariant::Standard)?.verdict,
        alt_kyr: ev.eval(w, &translated, &SemanticsVariant::AltKyr)?.verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

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

    fn separation_large() -> KyModel {
        KyModel::builder(["w1", "w2", "w3"])
            .agent("a")
            .total("a")
            .atom("p", ["w1", "w2", "w3"])
            .atom("q", ["w1", "w3"])
            .explain("s", "p", ["w1"])
            .explain("t", "p", ["w2"])
            .explain("r", "p", ["w3"])
            .build()
            .unwrap()
    }

    fn noncorrespondence() -> KyModel {
        KyModel::builder(["w1", "w2", "w3"])
            .agent("a")
            .total("a")
            .atom("p", ["w2", "w3"])
            .atom("q", ["w1", "w2", "w3"])
            .explain("s", "p", ["w1"])
            .explain("t", "p", ["w2"])
            .explain("r", "p", ["w3"])
            .build()
            .unwrap()
    }

    #[test]
    fn announcement_separates_models() {
        let std = SemanticsVariant::Standard;
        let r = eval_at(&separation_small(), "w1", &f("[q]Ky{a}p"), &std).unwrap();
        assert!(r.verdict);
        assert!(!eval_at(&separation_large(), "w1", &f("[q]Ky{a}p"), &std).unwrap().verdict);
        assert!(!eval_at(&separation_small(), "w1", &f("Ky{a}p"), &std).unwrap().verdict);
    }

    #[test]
    fn witness_names_the_covering_explanation() {
        let m = KyModel::builder(["w1", "w2"])
            .agent("a")
            .total("a")
            .atom("p", ["w1", "w2"])
            .explain("s", "p", ["w1"])
            .explain("t", "p", ["w1", "w2"])
            .build()
            .unwrap();
        let r = eval(&m, 0, &f("Ky{a}p"), &SemanticsVariant::Standard).unwrap();
        assert_eq!(r.witness, Some(Witness { term: ExplanationTerm::base("t"), extent: m.all_worlds() }));
        let r = eval(&m, 0, &f("Kyr{a}(bot,q)"), &SemanticsVariant::Standard).unwrap();
        assert_eq!(r.witness, Some(Witness { term: ExplanationTerm::SelfEvident, extent: WorldSet::EMPTY }));
        assert_eq!(eval(&m, 0, &f("p"), &SemanticsVariant::Standard).unwrap().witness, None);
    }

    #[test]
    fn vacuous_condition_holds_everywhere() {
        for m in [separation_small(), separation_large(), noncorrespondence()] {
            assert!(holds_globally(&m, &f("Kyr{a}(bot,p)"), &SemanticsVariant::Standard).unwrap());
        }
    }

    #[test]
    fn global_truth() {
        let m = separation_small();
        assert!(holds_globally(&m, &f("p"), &SemanticsVariant::Standard).unwrap());
        assert!(!holds_globally(&m, &f("q"), &SemanticsVariant::Standard).unwrap());
    }

    #[test]
    fn noncorrespondence_at_w1() {
        let m = noncorrespondence();
        let std = SemanticsVariant::Standard;
        assert!(eval_at(&m, "w1", &f("[p]Ky{a}q"), &std).unwrap().verdict);
        assert!(!eval_at(&m, "w1", &f("Kyr{a}(p,q)"), &std).unwrap().verdict);
        let rep = check_correspondence(&m, 0, "a", &f("p"), &f("q")).unwrap();
        assert!(rep.announced && !rep.conditional && !rep.conditional_agrees());
        // The implication form is vacuously true where the condition fails.
        assert!(rep.standard && rep.alt_kyr);
    }

    #[test]
    fn context_agrees_with_standard_without_announcements() {
        let m = separation_large();
        for text in ["Ky{a}p", "K{a}q -> q", "Kyr{a}(q,p)", "~K{a}~q"] {
            let a = truth_set(&m, &f(text), &SemanticsVariant::Standard).unwrap();
            let b = truth_set(&m, &f(text), &SemanticsVariant::context()).unwrap();
            assert_eq!(a, b, "{text}");
        }
    }

    #[test]
    fn context_restricts_epistemic_successors() {
        let m = separation_large();
        let v = SemanticsVariant::Context(f("q"));
        // Only w1 and w3 are visible, so q is known, while p-explanations
        // are all singletons.
        assert!(holds_globally(&m, &f("K{a}q"), &v).unwrap());
        assert!(!holds_globally(&m, &f("Ky{a}p"), &v).unwrap());
        assert!(holds_globally(&m, &f("[q]r <-> [q & q]r"), &SemanticsVariant::context()).unwrap());
    }

    #[test]
    fn errors() {
        let m = separation_small();
        assert_eq!(eval(&m, 5, &f("p"), &SemanticsVariant::Standard), Err(EvalError::WorldOutOfRange(5, 2)));
        assert_eq!(eval(&m, 0, &f("K{b}p"), &SemanticsVariant::Standard), Err(EvalError::UnknownAgent("b".into())));
        assert_eq!(eval_at(&m, "w9", &f("p"), &SemanticsVariant::Standard), Err(EvalError::UnknownWorld("w9".into())));
        assert!(!eval(&m, 0, &f("zz"), &SemanticsVariant::Standard).unwrap().verdict);
    }

    #[test]
    fn trace_lists_children_first() {
        let m = separation_small();
        let steps = Evaluator::new(&m).trace(&f("[q]Ky{a}p"), &SemanticsVariant::Standard).unwrap();
        let last = steps.last().unwrap();
        assert_eq!(last.formula, f("[q]Ky{a}p"));
        assert_eq!(last.truth, m.all_worlds());
        assert!(steps.iter().any(|s| s.formula == f("Ky{a}p") && s.domain == WorldSet::singleton(0)));
        assert_eq!(last.render(&m), "[q]Ky{a}p over {w1,w2}: true at {w1,w2}");
    }
}

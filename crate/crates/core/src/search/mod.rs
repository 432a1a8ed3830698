//! Bounded model enumeration, countermodel search, and seeded random sampling.
//!
//! Frames are enumerated as partitions of the world set, valuations over the
//! bounded atoms, and explanation extents only for formulas occurring under a
//! `Ky`/`Kyr` of the query. The tautology ground is empty throughout.

mod space;

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use space::{extent_families, frame_shapes};

use crate::models::{ExplanationEntry, ExplanationTerm, KyModel, SearchRelevantFormulas, WorldSet};
use crate::semantics::{eval_flat, Evaluator, Mode, Program, Runner, SemanticsVariant, Signature, Structure};
use crate::syntax::{Formula, Name};
use space::{build_model, Cursor};

/// Largest number of valuation bits (worlds times atoms) a search may use.
pub const MAX_VALUATION_BITS: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub min_worlds: usize,
    pub max_worlds: usize,
    pub agents: Vec<Name>,
    pub atoms: Vec<Name>,
    pub max_extents_per_formula: usize,
    /// Enumerate only equivalence relations; otherwise every relation.
    pub s5_frames: bool,
    /// Stop after this many models.
    pub max_models: Option<u64>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            min_worlds: 1,
            max_worlds: 3,
            agents: vec![Arc::from("a")],
            atoms: Vec::new(),
            max_extents_per_formula: 2,
            s5_frames: true,
            max_models: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("bounds need 1 <= min_worlds <= max_worlds")]
    WorldRange,
    #[error("at most {0} worlds are supported with these frame settings")]
    TooManyWorlds(usize),
    #[error("{0} worlds times atoms exceeds {MAX_VALUATION_BITS} valuation bits")]
    TooManyValuationBits(usize),
    #[error("bounds need at least one agent")]
    NoAgents,
}

impl SearchBounds {
    /// Default bounds over the atoms and agents of `f`.
    pub fn for_formula(f: &Formula) -> SearchBounds {
        SearchBounds::default().covering(f)
    }

    pub fn with_worlds(mut self, min: usize, max: usize) -> Self {
        self.min_worlds = min;
        self.max_worlds = max;
        self
    }

    pub fn with_extents(mut self, k: usize) -> Self {
        self.max_extents_per_formula = k;
        self
    }

    pub fn with_atoms(mut self, atoms: &[&str]) -> Self {
        self.atoms = atoms.iter().map(|a| Arc::from(*a)).collect();
        self
    }

    /// Adds the atoms and agents of `f` that the bounds do not list yet.
    pub fn covering(mut self, f: &Formula) -> Self {
        for a in f.atoms() {
            if !self.atoms.contains(&a) {
                self.atoms.push(a);
            }
        }
        for a in f.agents() {
            if !self.agents.contains(&a) {
                self.agents.push(a);
            }
        }
        self
    }

    pub fn check(&self) -> Result<(), SearchError> {
        if self.min_worlds == 0 || self.min_worlds > self.max_worlds {
            return Err(SearchError::WorldRange);
        }
        let limit = if self.s5_frames { 10 } else { 4 };
        if self.max_worlds > limit {
            return Err(SearchError::TooManyWorlds(limit));
        }
        let bits = self.max_worlds * self.atoms.len();
        if bits > MAX_VALUATION_BITS {
            return Err(SearchError::TooManyValuationBits(bits));
        }
        if self.agents.is_empty() {
            return Err(SearchError::NoAgents);
        }
        Ok(())
    }
}

/// Every model in the bounded space, in search order.
///
/// Families of extents are attached to the formulas of `relevant` under fresh
/// base terms; the yielded models carry them as declared entries.
pub fn enumerate_models(
    b: &SearchBounds,
    relevant: &SearchRelevantFormulas,
) -> Result<impl Iterator<Item = KyModel>, SearchError> {
    b.check()?;
    let mut cursor = Cursor::new(b.clone(), relevant.formulas());
    let cap = b.max_models.unwrap_or(u64::MAX);
    let mut produced = 0u64;
    Ok(std::iter::from_fn(move || {
        if produced >= cap {
            return None;
        }
        cursor.advance()?;
        produced += 1;
        Some(cursor.model())
    }))
}

/// Size of the bounded space, if it fits in a `u128`.
pub fn count_models(b: &SearchBounds, relevant: &SearchRelevantFormulas) -> Option<u128> {
    Cursor::new(b.clone(), relevant.formulas()).total()
}

/// A pointed model refuting the searched formula.
#[derive(Clone, Debug)]
pub struct Countermodel {
    pub model: KyModel,
    pub world: usize,
    /// Subformula evaluations on the refuting model, children first.
    pub transcript: Vec<String>,
}

impl Countermodel {
    pub fn world_name(&self) -> &str {
        self.model.world_name(self.world)
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub countermodel: Option<Countermodel>,
    pub models_examined: u64,
}

struct CursorSignature<'a> {
    cursor: &'a Cursor,
}

impl Signature for CursorSignature<'_> {
    fn atom(&self, name: &str) -> Option<usize> {
        self.cursor.bounds.atoms.iter().position(|a| &**a == name)
    }
    fn agent(&self, name: &str) -> Option<usize> {
        self.cursor.bounds.agents.iter().position(|a| &**a == name)
    }
    fn slot(&self, body: &Formula) -> Option<usize> {
        self.cursor.universe.index.get(body).copied()
    }
}

/// Formulas whose explanations can affect `f` under `v`: the `Ky`/`Kyr`
/// bodies of `f` and of the context formula.
fn explained(f: &Formula, v: &SemanticsVariant) -> Vec<Formula> {
    let mut out = f.explained_bodies();
    if let SemanticsVariant::Context(rho) = v {
        for g in rho.explained_bodies() {
            if !out.contains(&g) {
                out.push(g);
            }
        }
    }
    out
}

/// Exhaustive search for a pointed model refuting `f`, in enumeration order,
/// reporting how many models were examined.
pub fn search_countermodel(f: &Formula, v: &SemanticsVariant, b: &SearchBounds) -> Result<SearchReport, SearchError> {
    let mut bounds = b.clone().covering(f);
    if let SemanticsVariant::Context(rho) = v {
        bounds = bounds.covering(rho);
    }
    bounds.check()?;
    let mut cursor = Cursor::new(bounds, &explained(f, v));

    let mut prog = Program::new();
    let sig = CursorSignature { cursor: &cursor };
    let root = prog.add(f, &sig).expect("bounds cover every agent of the formula");
    let ctx = match v {
        SemanticsVariant::Context(rho) if !rho.is_top() => Some(prog.add(rho, &sig).expect("bounds cover the context")),
        _ => None,
    };
    let mode = match v {
        SemanticsVariant::Standard => Mode::Standard,
        SemanticsVariant::AltKyr => Mode::AltKyr,
        SemanticsVariant::Context(_) => Mode::Context,
    };
    // Without announcements or a context, the three variants differ only in
    // the alternative `Kyr` clause.
    let flat = !prog.has_announce && ctx.is_none() && !(mode == Mode::AltKyr && prog.has_kyr);

    let cap = b.max_models.unwrap_or(u64::MAX);
    let mut examined = 0u64;
    let mut vals = Vec::with_capacity(prog.ops.len());
    while examined < cap && cursor.advance().is_some() {
        examined += 1;
        let full = WorldSet::full(cursor.n);
        let st =
            Structure { full, relations: &cursor.relations, valuation: &cursor.valuation, extents: &cursor.extents };
        let truth = if flat {
            eval_flat(&prog, &st, &mut vals);
            vals[root]
        } else {
            let mut runner = Runner::new(&prog, st, mode);
            let mask = ctx.map_or(full, |c| runner.set(c, full));
            runner.set(root, mask)
        };
        if truth != full {
            let world = full.difference(truth).iter().next().expect("some world refutes");
            let model = cursor.model();
            let ev = Evaluator::new(&model);
            let check = ev.eval(world, f, v).expect("search models cover the formula");
            assert!(!check.verdict, "bounded search and reference evaluation disagree on {f}");
            let transcript =
                ev.trace(f, v).expect("search models cover the formula").iter().map(|s| s.render(&model)).collect();
            return Ok(SearchReport {
                countermodel: Some(Countermodel { model, world, transcript }),
                models_examined: examined,
            });
        }
    }
    Ok(SearchReport { countermodel: None, models_examined: examined })
}

/// First pointed model in enumeration order where `f` is false, if any
/// exists within the bounds.
pub fn find_countermodel(
    f: &Formula,
    v: &SemanticsVariant,
    b: &SearchBounds,
) -> Result<Option<Countermodel>, SearchError> {
    Ok(search_countermodel(f, v, b)?.countermodel)
}

#[derive(Clone, Debug)]
pub enum Equivalence {
    /// The formulas differ at this pointed model.
    Separated(Countermodel),
    Indistinguishable {
        models_examined: u64,
    },
}

/// Searches for a pointed model where `f` and `g` get different truth values.
pub fn check_equivalence(
    f: &Formula,
    g: &Formula,
    v: &SemanticsVariant,
    b: &SearchBounds,
) -> Result<Equivalence, SearchError> {
    let report = search_countermodel(&Formula::iff(f.clone(), g.clone()), v, b)?;
    Ok(match report.countermodel {
        Some(c) => Equivalence::Separated(c),
        None => Equivalence::Indistinguishable { models_examined: report.models_examined },
    })
}

/// `n` pseudo-random models from the bounded space, reproducible from `seed`.
///
/// Each formula of `relevant` gets up to `max_extents_per_formula` random
/// nonempty extents under fresh base terms.
pub fn sample_models(
    b: &SearchBounds,
    relevant: &SearchRelevantFormulas,
    seed: u64,
    n: usize,
) -> Result<Vec<KyModel>, SearchError> {
    b.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let worlds = rng.gen_range(b.min_worlds..=b.max_worlds);
        let all = WorldSet::full(worlds).bits();
        let relations = b
            .agents
            .iter()
            .map(|_| {
                if b.s5_frames {
                    random_partition(&mut rng, worlds)
                } else {
                    (0..worlds).map(|_| WorldSet::from_bits(rng.gen::<u64>() & all)).collect()
                }
            })
            .collect();
        let valuation = b.atoms.iter().map(|_| WorldSet::from_bits(rng.gen::<u64>() & all)).collect();
        let mut declared = Vec::new();
        for (k, f) in relevant.formulas().iter().enumerate() {
            let count = rng.gen_range(0..=b.max_extents_per_formula);
            let mut extents: Vec<WorldSet> = Vec::new();
            for _ in 0..count {
                let x = WorldSet::from_bits(rng.gen_range(1..=all));
                if !extents.contains(&x) {
                    extents.push(x);
                }
            }
            for (j, extent) in extents.into_iter().enumerate() {
                declared.push(ExplanationEntry {
                    term: ExplanationTerm::base(&format!("t{}_{}", k + 1, j + 1)),
                    formula: f.clone(),
                    extent,
                });
            }
        }
        out.push(build_model(b, worlds, relations, valuation, declared));
    }
    Ok(out)
}

/// Random equivalence relation: each world joins an existing block or opens a new one.
fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<WorldSet> {
    let mut block = vec![0usize; n];
    let mut blocks = 0;
    for b in block.iter_mut() {
        *b = rng.gen_range(0..=blocks);
        if *b == blocks {
            blocks += 1;
        }
    }
    (0..n).map(|w| (0..n).filter(|&v| block[v] == block[w]).collect()).collect()
}

use std::collections::HashMap;

use super::EvalError;
use crate::models::WorldSet;
use crate::syntax::Formula;

/// One node of a compiled formula. Children always have smaller indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Op {
    /// Atom index, or `None` for an atom the model does not declare (false everywhere).
    Atom(Option<usize>),
    Not(usize),
    And(usize, usize),
    K(usize, usize),
    /// Agent, body, extent slot of the body.
    Ky(usize, usize, Option<usize>),
    /// Agent, condition, body, extent slot of the body.
    KyR(usize, usize, usize, Option<usize>),
    Announce(usize, usize),
}

/// Name resolution used while compiling.
pub(crate) trait Signature {
    fn atom(&self, name: &str) -> Option<usize>;
    fn agent(&self, name: &str) -> Option<usize>;
    fn slot(&self, body: &Formula) -> Option<usize>;
}

/// Formula DAG with shared subformulas, ready for repeated evaluation.
#[derive(Clone, Debug)]
pub(crate) struct Program {
    pub ops: Vec<Op>,
    pub formulas: Vec<Formula>,
    pub has_announce: bool,
    pub has_kyr: bool,
    index: HashMap<Formula, usize>,
}

impl Program {
    pub fn new() -> Program {
        Program { ops: Vec::new(), formulas: Vec::new(), has_announce: false, has_kyr: false, index: HashMap::new() }
    }

    /// Adds `f` and returns the index of its root node.
    pub fn add(&mut self, f: &Formula, sig: &impl Signature) -> Result<usize, EvalError> {
        if let Some(&i) = self.index.get(f) {
            return Ok(i);
        }
        let agent = |a: &str| sig.agent(a).ok_or_else(|| EvalError::UnknownAgent(a.to_string()));
        let op = match f {
            Formula::Atom(p) => Op::Atom(sig.atom(p)),
            Formula::Not(g) => Op::Not(self.add(g, sig)?),
            Formula::And(l, r) => {
                let l = self.add(l, sig)?;
                Op::And(l, self.add(r, sig)?)
            }
            Formula::K(a, g) => Op::K(agent(a)?, self.add(g, sig)?),
            Formula::Ky(a, g) => Op::Ky(agent(a)?, self.add(g, sig)?, sig.slot(g)),
            Formula::KyR(a, c, b) => {
                self.has_kyr = true;
                let a = agent(a)?;
                let c = self.add(c, sig)?;
                Op::KyR(a, c, self.add(b, sig)?, sig.slot(b))
            }
            Formula::Announce(x, y) => {
                self.has_announce = true;
                let x = self.add(x, sig)?;
                Op::Announce(x, self.add(y, sig)?)
            }
        };
        self.ops.push(op);
        self.formulas.push(f.clone());
        self.index.insert(f.clone(), self.ops.len() - 1);
        Ok(self.ops.len() - 1)
    }
}

/// Index-level view of a model: everything the evaluator reads.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Structure<'a> {
    pub full: WorldSet,
    pub relations: &'a [Vec<WorldSet>],
    pub valuation: &'a [WorldSet],
    /// Distinct extents per slot.
    pub extents: &'a [Vec<WorldSet>],
}

impl Structure<'_> {
    /// Some explanation of the slot's formula covers `s`. With `s` empty any
    /// explanation does, even for a formula with no recorded extents.
    pub fn covered(&self, slot: Option<usize>, s: WorldSet) -> bool {
        s.is_empty() || slot.is_some_and(|i| self.extents[i].iter().any(|&x| s.is_subset(x)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    Standard,
    AltKyr,
    Context,
}

/// Truth sets of an operator given the truth sets of its children.
///
/// `mask` is the current world domain: the worlds of the updated model, or the
/// worlds satisfying the context. `univ` is the set of worlds being evaluated.
#[inline]
fn local(st: &Structure, op: Op, a: WorldSet, b: WorldSet, mask: WorldSet, univ: WorldSet) -> WorldSet {
    match op {
        Op::Atom(i) => i.map_or(WorldSet::EMPTY, |i| st.valuation[i].intersection(univ)),
        Op::Not(_) => a.complement_in(univ),
        Op::And(..) => a.intersection(b),
        Op::K(ag, _) => univ.iter().filter(|&w| st.relations[ag][w].intersection(mask).is_subset(a)).collect(),
        Op::Ky(ag, _, slot) => univ
            .iter()
            .filter(|&w| {
                let s = st.relations[ag][w].intersection(mask);
                s.is_subset(a) && st.covered(slot, s)
            })
            .collect(),
        Op::KyR(ag, _, _, slot) => univ
            .iter()
            .filter(|&w| {
                let s = st.relations[ag][w].intersection(mask).intersection(a);
                s.is_subset(b) && st.covered(slot, s)
            })
            .collect(),
        Op::Announce(..) => unreachable!("announcements are evaluated recursively"),
    }
}

/// Single-pass evaluation of an announcement-free program over the whole model
/// under the standard clauses. `vals` is scratch space reused across calls.
pub(crate) fn eval_flat(prog: &Program, st: &Structure, vals: &mut Vec<WorldSet>) {
    vals.clear();
    let full = st.full;
    for &op in &prog.ops {
        let (a, b) = match op {
            Op::Atom(_) => (WorldSet::EMPTY, WorldSet::EMPTY),
            Op::Not(x) | Op::K(_, x) | Op::Ky(_, x, _) => (vals[x], WorldSet::EMPTY),
            Op::And(x, y) | Op::KyR(_, x, y, _) => (vals[x], vals[y]),
            Op::Announce(..) => unreachable!("flat evaluation requires an announcement-free program"),
        };
        vals.push(local(st, op, a, b, full, full));
    }
}

/// Recorded evaluation step: node, domain, truth set.
pub(crate) type Step = (usize, WorldSet, WorldSet);

/// Memoised recursive evaluator handling announcements and the variant clauses.
pub(crate) struct Runner<'p, 'a> {
    prog: &'p Program,
    st: Structure<'a>,
    mode: Mode,
    memo: HashMap<(usize, WorldSet), WorldSet>,
    pub trace: Option<Vec<Step>>,
}

impl<'p, 'a> Runner<'p, 'a> {
    pub fn new(prog: &'p Program, st: Structure<'a>, mode: Mode) -> Self {
        Runner { prog, st, mode, memo: HashMap::new(), trace: None }
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = Some(Vec::new());
        self
    }

    fn univ(&self, mask: WorldSet) -> WorldSet {
        match self.mode {
            Mode::Context => self.st.full,
            Mode::Standard | Mode::AltKyr => mask,
        }
    }

    /// Truth set of node `i` with current domain `mask`.
    pub fn set(&mut self, i: usize, mask: WorldSet) -> WorldSet {
        if let Some(&v) = self.memo.get(&(i, mask)) {
            return v;
        }
        let op = self.prog.ops[i];
        let univ = self.univ(mask);
        let v = match op {
            Op::Atom(_) => local(&self.st, op, WorldSet::EMPTY, WorldSet::EMPTY, mask, univ),
            Op::Not(x) | Op::K(_, x) | Op::Ky(_, x, _) => {
                let a = self.set(x, mask);
                local(&self.st, op, a, WorldSet::EMPTY, mask, univ)
            }
            Op::And(x, y) => {
                let a = self.set(x, mask);
                let b = self.set(y, mask);
                local(&self.st, op, a, b, mask, univ)
            }
            Op::KyR(_, c, b, _) => {
                let cond = self.set(c, mask);
                let body = match self.mode {
                    Mode::AltKyr => self.set(b, mask.intersection(cond)),
                    Mode::Standard | Mode::Context => self.set(b, mask),
                };
                local(&self.st, op, cond, body, mask, univ)
            }
            Op::Announce(x, y) => {
                let ann = self.set(x, mask);
                let inner = match self.mode {
                    Mode::Context => mask.intersection(self.set(x, self.st.full)),
                    Mode::Standard | Mode::AltKyr => mask.intersection(ann),
                };
                let body = self.set(y, inner);
                ann.complement_in(univ).union(body.intersection(univ))
            }
        };
        self.memo.insert((i, mask), v);
        if let Some(t) = &mut self.trace {
            t.push((i, mask, v));
        }
        v
    }

    /// Worlds an outermost `Ky`/`Kyr` at `i` quantifies over at world `w`.
    pub fn quantified(&mut self, i: usize, mask: WorldSet, w: usize) -> Option<WorldSet> {
        match self.prog.ops[i] {
            Op::Ky(ag, ..) => Some(self.st.relations[ag][w].intersection(mask)),
            Op::KyR(ag, c, ..) => {
                let cond = self.set(c, mask);
                Some(self.st.relations[ag][w].intersection(mask).intersection(cond))
            }
            _ => None,
        }
    }
}

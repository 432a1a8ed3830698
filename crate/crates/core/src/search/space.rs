use super::SearchBounds;
use crate::models::{ExplanationEntry, ExplanationTerm, KyModel, Universe, WorldSet};
use crate::syntax::Formula;

/// All relations of one agent over `n` worlds: the equivalence relations in
/// restricted-growth-string order when `s5` is set, otherwise every relation
/// in binary order of its adjacency matrix.
pub fn frame_shapes(n: usize, s5: bool) -> Vec<Vec<WorldSet>> {
    if !s5 {
        let cells = n * n;
        return (0..1u64 << cells)
            .map(|bits| (0..n).map(|w| WorldSet::from_bits((bits >> (w * n)) & ((1u64 << n) - 1))).collect())
            .collect();
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    partitions(&mut rgs, 0, 0, &mut out);
    out
}

/// Extends a restricted growth string from position `i`; `max` is the largest block so far.
fn partitions(rgs: &mut Vec<usize>, i: usize, max: usize, out: &mut Vec<Vec<WorldSet>>) {
    let n = rgs.len();
    if i == n {
        let block = |b: usize| -> WorldSet { (0..n).filter(|&w| rgs[w] == b).collect() };
        out.push((0..n).map(|w| block(rgs[w])).collect());
        return;
    }
    let limit = if i == 0 { 0 } else { max + 1 };
    for b in 0..=limit {
        rgs[i] = b;
        partitions(rgs, i + 1, max.max(b), out);
    }
}

/// Families of at most `k` distinct nonempty subsets of `n` worlds, by size,
/// then lexicographically. Empty extents are left out: they never cover a
/// nonempty set of successors and only combine into further empty extents.
pub fn extent_families(n: usize, k: usize) -> Vec<Vec<WorldSet>> {
    let subsets: Vec<WorldSet> = (1..1u64 << n).map(WorldSet::from_bits).collect();
    let mut out = Vec::new();
    for size in 0..=k.min(subsets.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| subsets[i]).collect());
            // Next combination of `size` indices.
            let mut pos = size;
            while pos > 0 && idx[pos - 1] == subsets.len() - size + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            for j in pos..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

/// Closes extent families under the modus-ponens intersection rule, keeping
/// each family free of duplicates.
fn saturate_extents(universe: &Universe, extents: &mut [Vec<WorldSet>]) {
    loop {
        let mut changed = false;
        for rule in &universe.rules {
            let (ni, na) = (extents[rule.implication].len(), extents[rule.antecedent].len());
            for i in 0..ni {
                for j in 0..na {
                    let z = extents[rule.implication][i].intersection(extents[rule.antecedent][j]);
                    if !extents[rule.consequent].contains(&z) {
                        extents[rule.consequent].push(z);
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// Which component changed on the last step; later components changed too.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Changed {
    Worlds,
    Frame,
    Extents,
    Valuation,
}

/// Position in the bounded model space, with the current model's components
/// materialised at index level.
pub(crate) struct Cursor {
    pub bounds: SearchBounds,
    pub universe: Universe,
    /// Universe slots that receive enumerated extent families.
    pub seeds: Vec<usize>,
    pub n: usize,
    frames: Vec<Vec<WorldSet>>,
    families: Vec<Vec<WorldSet>>,
    frame_idx: Vec<usize>,
    family_idx: Vec<usize>,
    valuation_code: u64,
    started: bool,
    pub relations: Vec<Vec<WorldSet>>,
    pub valuation: Vec<WorldSet>,
    /// Saturated extents per universe slot.
    pub extents: Vec<Vec<WorldSet>>,
}

impl Cursor {
    pub fn new(bounds: SearchBounds, relevant: &[Formula]) -> Cursor {
        let universe = Universe::build(relevant);
        let seeds = relevant.iter().map(|f| universe.index[f]).collect();
        let slots = universe.formulas.len();
        Cursor {
            n: 0,
            frames: Vec::new(),
            families: Vec::new(),
            frame_idx: vec![0; bounds.agents.len()],
            family_idx: Vec::new(),
            valuation_code: 0,
            started: false,
            relations: vec![Vec::new(); bounds.agents.len()],
            valuation: vec![WorldSet::EMPTY; bounds.atoms.len()],
            extents: vec![Vec::new(); slots],
            universe,
            seeds,
            bounds,
        }
    }

    fn valuation_bits(&self) -> usize {
        self.n * self.bounds.atoms.len()
    }

    fn enter_worlds(&mut self, n: usize) {
        self.n = n;
        self.frames = frame_shapes(n, self.bounds.s5_frames);
        self.families = extent_families(n, self.bounds.max_extents_per_formula);
        self.frame_idx.iter_mut().for_each(|i| *i = 0);
        self.family_idx = vec![0; self.seeds.len()];
        self.valuation_code = 0;
    }

    /// Moves to the next model; returns the highest changed component, or
    /// `None` when the space is exhausted.
    pub fn advance(&mut self) -> Option<Changed> {
        let changed = if !self.started {
            self.started = true;
            let n = self.bounds.min_worlds.max(1);
            if n > self.bounds.max_worlds {
                return None;
            }
            self.enter_worlds(n);
            Changed::Worlds
        } else if self.valuation_bits() < 64 && self.valuation_code + 1 < 1u64 << self.valuation_bits() {
            self.valuation_code += 1;
            Changed::Valuation
        } else if let Some(i) = (0..self.family_idx.len()).rev().find(|&i| self.family_idx[i] + 1 < self.families.len())
        {
            self.family_idx[i] += 1;
            self.family_idx[i + 1..].iter_mut().for_each(|x| *x = 0);
            self.valuation_code = 0;
            Changed::Extents
        } else if let Some(i) = (0..self.frame_idx.len()).rev().find(|&i| self.frame_idx[i] + 1 < self.frames.len()) {
            self.frame_idx[i] += 1;
            self.frame_idx[i + 1..].iter_mut().for_each(|x| *x = 0);
            self.family_idx.iter_mut().for_each(|x| *x = 0);
            self.valuation_code = 0;
            Changed::Frame
        } else if self.n < self.bounds.max_worlds {
            self.enter_worlds(self.n + 1);
            Changed::Worlds
        } else {
            return None;
        };
        self.materialise(changed);
        Some(changed)
    }

    fn materialise(&mut self, changed: Changed) {
        if changed <= Changed::Frame {
            for (a, &i) in self.frame_idx.iter().enumerate() {
                self.relations[a].clone_from(&self.frames[i]);
            }
        }
        if changed <= Changed::Extents {
            self.extents.iter_mut().for_each(Vec::clear);
            for (k, &slot) in self.seeds.iter().enumerate() {
                self.extents[slot].extend_from_slice(&self.families[self.family_idx[k]]);
            }
            saturate_extents(&self.universe, &mut self.extents);
        }
        let n = self.n;
        let mask = (1u64 << n) - 1;
        for (i, v) in self.valuation.iter_mut().enumerate() {
            *v = WorldSet::from_bits((self.valuation_code >> (i * n)) & mask);
        }
    }

    /// Declared entries of the current model: one fresh base term per
    /// enumerated extent.
    pub fn declared(&self) -> Vec<ExplanationEntry> {
        let mut out = Vec::new();
        for (k, &slot) in self.seeds.iter().enumerate() {
            for (j, &extent) in self.families[self.family_idx[k]].iter().enumerate() {
                out.push(ExplanationEntry {
                    term: ExplanationTerm::base(&format!("t{}_{}", k + 1, j + 1)),
                    formula: self.universe.formulas[slot].clone(),
                    extent,
                });
            }
        }
        out
    }

    pub fn model(&self) -> KyModel {
        build_model(&self.bounds, self.n, self.relations.clone(), self.valuation.clone(), self.declared())
    }

    /// Models in the whole space, if it fits in a `u128`.
    pub fn total(&self) -> Option<u128> {
        let mut total: u128 = 0;
        for n in self.bounds.min_worlds.max(1)..=self.bounds.max_worlds {
            let frames = frame_shapes(n, self.bounds.s5_frames).len() as u128;
            let families = extent_families(n, self.bounds.max_extents_per_formula).len() as u128;
            let mut count = frames.checked_pow(self.bounds.agents.len() as u32)?;
            count = count.checked_mul(families.checked_pow(self.seeds.len() as u32)?)?;
            count = count.checked_mul(1u128.checked_shl((n * self.bounds.atoms.len()) as u32)?)?;
            total = total.checked_add(count)?;
        }
        Some(total)
    }
}

pub(crate) fn world_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("w{i}")).collect()
}

pub(crate) fn build_model(
    bounds: &SearchBounds,
    n: usize,
    relations: Vec<Vec<WorldSet>>,
    valuation: Vec<WorldSet>,
    declared: Vec<ExplanationEntry>,
) -> KyModel {
    KyModel::from_parts(
        world_names(n),
        bounds.agents.clone(),
        bounds.atoms.clone(),
        relations,
        valuation,
        declared,
        bounds.s5_frames,
    )
}

use thiserror::Error;

use super::extent::saturate;
use super::model::{ExplanationEntry, KyModel};
use super::SearchRelevantFormulas;
use crate::semantics::{EvalError, Evaluator, SemanticsVariant};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UpdateError {
    #[error("announcement `{0}` holds at no world")]
    EmptyUpdate(Formula),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The model after publicly announcing `announced`: the submodel on the worlds
/// where it holds, with every declared extent cut down to those worlds.
pub fn update_model(m: &KyModel, announced: &Formula) -> Result<KyModel, UpdateError> {
    let keep = Evaluator::new(m).truth_set(announced, &SemanticsVariant::Standard)?;
    if keep.is_empty() {
        return Err(UpdateError::EmptyUpdate(announced.clone()));
    }
    if keep == m.all_worlds() {
        return Ok(m.clone());
    }
    Ok(m.restrict_to(keep))
}

/// True iff every declared extent lies inside the truth set of its formula.
pub fn is_factive(m: &KyModel) -> Result<bool, EvalError> {
    let ev = Evaluator::new(m);
    for e in m.explanations() {
        if !e.extent.is_subset(ev.truth_set(&e.formula, &SemanticsVariant::Standard)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Factive companion: every explanation extent, including those derived by
/// saturation, loses the worlds where its formula is false.
///
/// Declared entries are cut down in place. A derived extent of the original
/// model can be strictly larger than anything the cut-down declared entries
/// generate, so such extents are added as declared entries under the term
/// that produced them. The result is factive and has the same saturated
/// extents, up to domination, as the restricted explanation function.
pub fn factive_companion(m: &KyModel) -> Result<KyModel, EvalError> {
    let ev = Evaluator::new(m);
    let truth = |f: &Formula| ev.truth_set(f, &SemanticsVariant::Standard);

    let mut declared = Vec::with_capacity(m.explanations().len());
    for e in m.explanations() {
        declared.push(ExplanationEntry {
            term: e.term.clone(),
            formula: e.formula.clone(),
            extent: e.extent.intersection(truth(&e.formula)?),
        });
    }
    let mut out = m.clone();
    out.set_explanations(declared);

    let restricted = saturate(&out, &SearchRelevantFormulas::default());
    let original = ev.table();
    for (f, family) in original.tracked_formulas().iter().zip(&original.families) {
        let holds = truth(f)?;
        for entry in family {
            let target = entry.extent.intersection(holds);
            if target.is_empty() {
                continue;
            }
            let dominated =
                restricted.entries(f).map(|es| es.iter().any(|e| target.is_subset(e.extent))).unwrap_or(false)
                    || out.explanations().iter().any(|e| e.formula == *f && target.is_subset(e.extent));
            if !dominated {
                out.add_explanation(ExplanationEntry { term: entry.term.clone(), formula: f.clone(), extent: target });
            }
        }
    }
    Ok(out)
}

//! Finite knowing-why models, their explanation tables, and model transformations.

mod extent;
mod model;
mod term;
mod transform;
mod validate;
mod worldset;

pub(crate) use extent::Universe;
pub use extent::{extents_of, saturate, ExtentEntry, ExtentTable, SearchRelevantFormulas, UntrackedFormula};
pub use model::{ExplanationEntry, ExplanationFile, KyModel, ModelBuilder, ModelError, ModelFile};
pub use term::{ExplanationTerm, TermParseError};
pub use transform::{factive_companion, is_factive, update_model, UpdateError};
pub use validate::{validate_model, Violation};
pub use worldset::{WorldSet, MAX_WORLDS};

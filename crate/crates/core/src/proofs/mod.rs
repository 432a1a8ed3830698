//! Hilbert-style derivation checking for the calculi SKY and SKYR.

mod derivation;
mod schema;
mod tautology;

pub use derivation::{
    check_derivation, soundness_probe, Derivation, Falsification, Justification, LambdaConfig, Line, LineFile,
    ProbeError, ProbeReport, ProofError, Verdict,
};
pub use schema::{match_axiom, ProofSystem, Schema, Substitution, UnknownSchema};
pub use tautology::{check_tautology, MAX_COMPONENTS};

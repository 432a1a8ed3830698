//! Model checking, proof checking and countermodel search for the logic of
//! knowing why with public announcements.

pub mod cli;
pub mod fixtures;
pub mod models;
pub mod proofs;
pub mod search;
pub mod semantics;
pub mod syntax;

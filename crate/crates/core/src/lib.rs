//! Penman AMR graphs translated to simply-typed lambda terms.

pub mod amr;
pub mod cli;
pub mod evaluator;
pub mod penman;
pub mod scope;
pub mod stlc;
pub mod translate;

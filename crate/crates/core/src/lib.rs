//! Safety verification of term rewriting systems by finite countermodels.
//!
//! A safety problem asks whether some unsafe term is reachable from an
//! initial term. The problem is translated into a first-order theory whose
//! finite models, when the goal is false in them, prove that nothing unsafe
//! is reachable. Such models are searched for by grounding to SAT.

pub mod automaton;
pub mod finder;
pub mod logic;
pub mod model;
pub mod problem;
pub mod run;
pub mod sat;
pub mod syntax;
pub mod terms;
pub mod translate;
pub mod witness;

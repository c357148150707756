//! Convex polyhedral analyser for constraint logic programs.
//!
//! The pipeline: parse a logic program, standardise clause heads and calls,
//! optionally abstract symbolic terms by a size norm, optionally specialise
//! the program for a goal with a query-answer transformation, then run an
//! abstract fixpoint computation where every predicate is approximated by a
//! convex polyhedron over its argument positions.

pub mod ast;
pub mod engine;
pub mod frontend;
pub mod graph;
pub mod parser;
pub mod report;
pub mod transforms;

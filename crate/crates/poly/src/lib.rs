//! Exact-arithmetic not-necessarily-closed (NNC) convex polyhedra.
//!
//! A polyhedron is kept purely in constraint form: a canonicalized system of
//! linear equalities, inequalities and strict inequalities with arbitrary
//! precision rational coefficients.  All lattice operations (intersection,
//! convex hull, inclusion), projection, and the widening operators needed by a
//! polyhedral fixpoint analyser are provided.  Every operation is a pure
//! function; values are immutable after construction.

mod constraint;
mod error;
mod fm;
mod linexpr;
mod lp;
mod polyhedron;
pub mod rational;

pub use constraint::{Constraint, Relation};
pub use error::PolyError;
pub use linexpr::LinearExpression;
pub use polyhedron::{dim_name, Polyhedron};
pub use rational::{rat, ratio, Int, Rational};

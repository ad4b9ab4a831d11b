//! Conditional independence structures of max-linear Bayesian networks.
//!
//! A weighted DAG `(G, C)` determines a set of pairwise conditional
//! independence statements (its *maxoid*) through C*-separation. This crate
//! computes maxoids exactly over the rationals, enumerates the polyhedral fan
//! that stratifies the weight space `R^E` by maxoid together with its dual
//! polytope, and decides CI implication problems by exact polyhedral
//! feasibility with counterexample extraction.
//!
//! Module map:
//!
//! * [`graph`]: DAGs, path enumeration, transitive closure.
//! * [`tropical`]: max-plus path weights, Kleene star, critical paths.
//! * [`separation`]: critical DAGs, C*-separation, maxoids.
//! * [`linarith`]: exact rational feasibility of strict/non-strict systems.
//! * [`fan`]: maximal cones of the maxoid fan.
//! * [`polytope`]: the maxoid polytope, its face lattice and face maxoids.
//! * [`implication`]: PolyCI formulas and the CI implication procedure.
//! * [`axioms`]: closure-rule checkers for CI structures.
//! * [`census`]: enumeration of maxoids over transitively closed DAGs.
//! * [`format`]: JSON and text formats shared with the command line tool.

pub mod axioms;
pub mod census;
mod error;
pub mod fan;
pub mod format;
pub mod graph;
pub mod implication;
pub mod linarith;
pub mod nodeset;
pub mod polytope;
pub mod rational;
pub mod separation;
pub mod tropical;

pub use error::{Error, Result};
pub use graph::{Dag, Node, Path};
pub use nodeset::NodeSet;
pub use rational::{ExtRational, Rational};
pub use separation::{CiStatement, Maxoid};
pub use tropical::WeightedDag;

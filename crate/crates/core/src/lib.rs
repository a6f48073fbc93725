//! Functional-orientation 2-colorings (FO 2-colorings) of loopless multigraphs.
//!
//! A 2-coloring is an FO 2-coloring when every induced monochromatic component
//! admits a full functional orientation, i.e. is acyclic or unicyclic. This
//! crate provides:
//!
//! * [`multigraph`]: the loopless multigraph model, components, planarity.
//! * [`orientation`]: construction and checking of functional orientations.
//! * [`greedy`]: the linear-time defective-coloring route for maximum degree 5.
//! * [`solver`]: an exact clause-learning search with canonical witnesses.
//! * [`gadgets`]: NOT/EQ/NE/OR/VAR/XO gadget templates with solver-backed checks.
//! * [`reduction`]: the 3-CNF compiler, planarization pass and audits.
//! * [`format`], [`dot`], [`random`]: text formats, DOT export, instance generation.
//!
//! Data-parallel batch work (port tables, instance sweeps) goes through
//! [`exec`], which uses rayon when the `parallel` feature is on and runs
//! sequentially otherwise.

pub mod dot;
mod dsu;
pub mod exec;
pub mod format;
pub mod gadgets;
pub mod greedy;
pub mod multigraph;
pub mod orientation;
pub mod random;
pub mod reduction;
pub mod samples;
pub mod solver;

pub use gadgets::{GadgetKind, GadgetTemplate};
pub use multigraph::{ComponentSummary, EdgeId, GraphError, Multigraph, VertexId};
pub use orientation::{FunctionalOrientation, InfeasibilityCertificate, Mark, TwoColoring};
pub use reduction::{CnfFormula, Literal, ReductionOutput};
pub use solver::{Outcome, PortTable, SolveLimits};

//! Cycle double cover workbench core.
//!
//! A `no_std` (with `alloc`) library for auditing cycle double cover
//! constructions on desk-scale multigraphs: the multigraph model and its set
//! algebra, cycle enumeration and the cyclic core, path and cycle segments,
//! sign labelings with certified cyclic dimension, the segment-removal cover
//! builder, an exhaustive cover oracle, canonical forms, corpus generation and
//! the claim-by-claim audit harness.

#![no_std]

extern crate alloc;

pub mod graph;
pub mod linalg;
pub mod walk;
pub mod cycles;
pub mod segments;
pub mod signlab;
pub mod goddyn;
pub mod oracle;
pub mod canon;
pub mod corpus;
pub mod audit;

pub use graph::{build_graph, graph_algebra, AlgebraOp, ComponentReport, EdgeId, GraphError, MultiGraph, VertexId};
pub use walk::{Walk, WalkError};

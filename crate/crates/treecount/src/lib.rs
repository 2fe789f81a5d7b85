//! Exact spanning tree counting for loopless multigraphs.
//!
//! Three independent ways to count live here and are cross-checked in the
//! test suite: Laplacian determinants ([`kirchhoff`]), explicit enumeration
//! ([`enumerate`]), and closed or semi-closed formulas over clique
//! structure ([`formulas`]). The [`construct`] module builds the derived
//! graphs the formulas talk about (line, middle, subdivision, star
//! augmentation, vertex splitting), [`tutte`] carries the Tutte polynomial
//! experiments, and [`harness`] generates random instances and runs
//! verification campaigns.

pub mod construct;
pub mod enumerate;
pub mod formulas;
pub mod graph;
pub mod harness;
pub mod io;
pub mod kirchhoff;
pub mod partition;
pub mod tutte;

pub use graph::{Edge, EdgeId, EdgeSet, GraphError, MultiGraph, VertexId, VertexSet};
pub use kirchhoff::{Count, EdgeWeighting, TreeSum};

//! Binary coding of the perfect matchings of plane bipartite graphs.
//!
//! The coder walks a reducible face decomposition and produces one binary
//! string per perfect matching without enumerating matchings. The
//! `resonance` and `verify` modules build the resonance graph by brute force
//! and check that the coding embeds it isometrically into a hypercube and
//! that the matchings form a distributive lattice.

pub mod coder;
pub mod corpus;
pub mod error;
pub mod matching;
pub mod plane_graph;
pub mod resonance;
pub mod rfd;
pub mod verify;

pub use error::{Error, Result};
pub use plane_graph::{Color, DirectedCycle, EdgeId, FaceId, PlaneBipartiteGraph, VertexId};

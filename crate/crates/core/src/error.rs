use thiserror::Error;

use crate::plane_graph::{Color, EdgeId, FaceId, ValidationReport, VertexId};

/// Errors produced by the library. Every variant names the offending entity
/// where one exists.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid embedding:\n{0}")]
    InvalidEmbedding(ValidationReport),

    #[error("graph is not bipartite: edge {edge} joins two {color} vertices")]
    NotBipartite { edge: EdgeId, color: Color },

    #[error(
        "periphery is not a simple cycle (vertex {vertex} repeats or the boundary is degenerate)"
    )]
    PeripheryNotCycle { vertex: VertexId },

    #[error("not a simple cycle of the graph: {0}")]
    NotSimpleCycle(String),

    #[error("cycle orientation disagrees with the face orientation at edge {edge}")]
    InconsistentOrientation { edge: EdgeId },

    #[error("not a handle: {0}")]
    NotAHandle(String),

    #[error("handle edge {edge} does not lie on the periphery")]
    HandleNotOnPeriphery { edge: EdgeId },

    #[error("graph has no perfect matching")]
    NoPerfectMatching,

    #[error("face flipping did not terminate after {flips} flips; input is likely not weakly elementary")]
    NonTermination { flips: usize },

    #[error("graph is not elementary: {0}")]
    NotElementary(String),

    #[error("no reducible face found in a graph with {faces} finite faces")]
    NoReducibleFace { faces: usize },

    #[error("invalid face order: {0}")]
    InvalidOrder(String),

    #[error("infinite face is not forcing (component with faces {faces:?})")]
    InfiniteFaceNotForcing { faces: Vec<FaceId> },

    #[error("code {code} is not in the coding list: {reason}")]
    CodeNotInList { code: String, reason: String },

    #[error("invalid binary code {0:?}")]
    InvalidCode(String),

    #[error("internal contract violation: {0}")]
    InternalContractViolation(String),

    #[error("graph is not weakly elementary: {0}")]
    NotWeaklyElementary(String),

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("Θ relation is not transitive: {0}")]
    ThetaNotTransitive(String),

    #[error("oracle cap exceeded: more than {cap} perfect matchings")]
    CapExceeded { cap: usize },

    #[error("unknown instance {0:?}")]
    UnknownInstance(String),

    #[error("invalid hexagon spec: {0}")]
    InvalidHexSpec(String),

    #[error("hexagons do not form a connected patch: cell {0:?} is unreachable")]
    DisconnectedSpec((i32, i32)),
}

pub type Result<T> = std::result::Result<T, Error>;

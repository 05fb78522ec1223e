//! Handles, reducible faces and reducible face decompositions.
//!
//! An elementary plane bipartite graph with more than two vertices is built
//! from an even cycle by repeatedly attaching an odd path along the outside.
//! Reading the construction backwards, a face is reducible when it meets the
//! periphery in a single odd handle whose removal leaves an elementary graph.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matching::is_elementary;
use crate::plane_graph::{Color, FaceId, PlaneBipartiteGraph, VertexId};

/// End colors of a handle read along the clockwise periphery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum HandleOrientation {
    WhiteToBlack,
    BlackToWhite,
}

impl HandleOrientation {
    /// Digit the new face takes in matchings with neither end edge of the
    /// handle matched; these are the extensions of the previous graph's
    /// matchings.
    pub fn negative_digit(self) -> bool {
        self == HandleOrientation::BlackToWhite
    }

    pub fn short(self) -> &'static str {
        match self {
            HandleOrientation::WhiteToBlack => "WB",
            HandleOrientation::BlackToWhite => "BW",
        }
    }
}

impl fmt::Display for HandleOrientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// One attachment of the decomposition: face `face` is created by adding the
/// odd path `handle` to the previous graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RfdStep {
    pub face: FaceId,
    /// Vertices of the handle in clockwise periphery order.
    pub handle: Vec<VertexId>,
    /// The rest of the face boundary, from the last handle vertex back to
    /// the first, following the face's clockwise walk.
    pub co_handle: Vec<VertexId>,
    pub orientation: HandleOrientation,
    /// Finite faces of the previous graph sharing an edge with `face`.
    pub adjacency: BTreeSet<FaceId>,
}

impl RfdStep {
    pub fn handle_edge_count(&self) -> usize {
        self.handle.len() - 1
    }

    pub fn co_handle_edge_count(&self) -> usize {
        self.co_handle.len() - 1
    }
}

/// A reducible face decomposition `G_1 ⊂ G_2 ⊂ … ⊂ G_n = G`.
#[derive(Clone, Debug)]
pub struct RfdSequence {
    pub base_face: FaceId,
    /// `steps[i]` turns `graphs[i]` into `graphs[i + 1]`.
    pub steps: Vec<RfdStep>,
    /// `G_1, …, G_n`.
    pub graphs: Vec<PlaneBipartiteGraph>,
}

impl RfdSequence {
    /// Face ids in digit order `s_1, …, s_n`.
    pub fn face_order(&self) -> Vec<FaceId> {
        std::iter::once(self.base_face)
            .chain(self.steps.iter().map(|s| s.face))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.steps.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn graph(&self) -> &PlaneBipartiteGraph {
        self.graphs
            .last()
            .expect("a decomposition has at least one graph")
    }

    /// Position of each face id in the digit order.
    pub fn digit_of(&self, face: FaceId) -> Option<usize> {
        self.face_order().iter().position(|&f| f == face)
    }

    /// Text dump: one line for the base face, then one per step.
    pub fn describe(&self) -> String {
        let mut out = format!("s{} base cycle\n", self.base_face);
        for step in &self.steps {
            let handle: Vec<String> = step.handle.iter().map(|v| v.to_string()).collect();
            let adj: Vec<String> = step.adjacency.iter().map(|f| format!("s{f}")).collect();
            out.push_str(&format!(
                "s{} handle {} {} adjacent {}\n",
                step.face,
                handle.join("-"),
                step.orientation,
                adj.join(",")
            ));
        }
        out
    }

    /// Checks the structural invariants of every step: the handle and
    /// co-handle are odd and together form the face boundary, and deleting
    /// the handle from each graph gives the previous one.
    pub fn check(&self) -> Result<()> {
        for (i, step) in self.steps.iter().enumerate() {
            let (before, after) = (&self.graphs[i], &self.graphs[i + 1]);
            let fail = |msg: String| {
                Err(Error::InternalContractViolation(format!(
                    "face {}: {msg}",
                    step.face
                )))
            };
            if step.handle_edge_count() % 2 == 0 || step.co_handle_edge_count() % 2 == 0 {
                return fail("handle or co-handle has even length".into());
            }
            if step.handle.first() != step.co_handle.last()
                || step.handle.last() != step.co_handle.first()
            {
                return fail("handle and co-handle do not share their ends".into());
            }
            let mut boundary: Vec<VertexId> = step.handle.clone();
            boundary.extend(&step.co_handle[1..step.co_handle.len() - 1]);
            let mut walk = after.face_walk(step.face).to_vec();
            walk.sort_unstable();
            boundary.sort_unstable();
            if walk != boundary {
                return fail("handle and co-handle do not cover the face boundary".into());
            }
            if after.delete_handle(&step.handle)? != *before {
                return fail("deleting the handle does not give the previous graph".into());
            }
        }
        Ok(())
    }
}

/// Maximal runs of the clockwise periphery between vertices of degree at
/// least 3. Empty when the graph is a single cycle.
pub fn handles_on_periphery(g: &PlaneBipartiteGraph) -> Result<Vec<Vec<VertexId>>> {
    let cycle = g.periphery()?;
    let p = cycle.vertices();
    let n = p.len();
    let Some(start) = (0..n).find(|&i| g.degree(p[i]) >= 3) else {
        return Ok(Vec::new());
    };
    let mut handles = Vec::new();
    let mut current = vec![p[start]];
    for k in 1..=n {
        let v = p[(start + k) % n];
        current.push(v);
        if g.degree(v) >= 3 {
            handles.push(std::mem::replace(&mut current, vec![v]));
        }
    }
    Ok(handles)
}

/// The clockwise run of periphery vertices shared with face `s`, if the
/// shared part is a single path.
fn common_periphery_path(g: &PlaneBipartiteGraph, s: FaceId) -> Option<Vec<VertexId>> {
    let cycle = g.periphery().ok()?;
    let p = cycle.vertices();
    let n = p.len();
    let on_s: Vec<bool> = (0..n)
        .map(|i| g.dart_face(p[i], p[(i + 1) % n]) == Some(s))
        .collect();
    let count = on_s.iter().filter(|&&b| b).count();
    if count == 0 || count == n {
        return None;
    }
    // start of the run: an s-edge whose predecessor is not an s-edge
    let starts: Vec<usize> = (0..n)
        .filter(|&i| on_s[i] && !on_s[(i + n - 1) % n])
        .collect();
    if starts.len() != 1 {
        return None;
    }
    let start = starts[0];
    Some((0..=count).map(|k| p[(start + k) % n]).collect())
}

fn reduce_face(g: &PlaneBipartiteGraph, s: FaceId) -> Option<(RfdStep, PlaneBipartiteGraph)> {
    if s == g.infinite_face() || !g.has_face(s) || g.finite_face_count() < 2 {
        return None;
    }
    let handle = common_periphery_path(g, s)?;
    if (handle.len() - 1) % 2 == 0 {
        return None;
    }
    let reduced = g.delete_handle(&handle).ok()?;
    if !is_elementary(&reduced) {
        return None;
    }
    let walk = g.face_walk(s);
    let m = walk.len();
    let last = *handle.last().unwrap();
    let at = walk.iter().position(|&v| v == last)?;
    let mut co_handle = vec![last];
    let mut k = at;
    while walk[k] != handle[0] {
        k = (k + 1) % m;
        co_handle.push(walk[k]);
        if co_handle.len() > m {
            return None;
        }
    }
    let adjacency = co_handle
        .windows(2)
        .filter_map(|w| {
            let f = g.dart_face(w[1], w[0])?;
            (f != g.infinite_face() && f != s).then_some(f)
        })
        .collect();
    let orientation = if g.color(handle[0]) == Color::White {
        HandleOrientation::WhiteToBlack
    } else {
        HandleOrientation::BlackToWhite
    };
    Some((
        RfdStep {
            face: s,
            handle,
            co_handle,
            orientation,
            adjacency,
        },
        reduced,
    ))
}

/// The step removing `s`, if `s` is a reducible face of `g`.
pub fn is_reducible_face(g: &PlaneBipartiteGraph, s: FaceId) -> Option<RfdStep> {
    reduce_face(g, s).map(|(step, _)| step)
}

/// Builds a decomposition by peeling reducible faces from the outside.
///
/// Without `order`, each stage removes the reducible face with the smallest
/// id. With `order = [s_1, …, s_n]`, stage `i` must be able to remove `s_i`.
pub fn find_rfd(g: &PlaneBipartiteGraph, order: Option<&[FaceId]>) -> Result<RfdSequence> {
    if g.vertex_count() <= 2 {
        return Err(Error::NotElementary(
            "graph has at most two vertices".into(),
        ));
    }
    if !is_elementary(g) {
        return Err(Error::NotElementary(
            "graph has forbidden edges or no perfect matching".into(),
        ));
    }
    let finite: BTreeSet<FaceId> = g.finite_faces().collect();
    if let Some(order) = order {
        let given: BTreeSet<FaceId> = order.iter().copied().collect();
        if given.len() != order.len() || given != finite {
            return Err(Error::InvalidOrder(format!(
                "{order:?} is not an ordering of the finite faces {finite:?}"
            )));
        }
    }
    let mut current = g.clone();
    let mut steps = Vec::new();
    let mut graphs = vec![g.clone()];
    while current.finite_face_count() > 1 {
        let count = current.finite_face_count();
        let (step, reduced) = match order {
            Some(order) => {
                let s = order[count - 1];
                reduce_face(&current, s).ok_or_else(|| {
                    Error::InvalidOrder(format!(
                        "face {s} is not reducible when {count} faces remain"
                    ))
                })?
            }
            None => current
                .finite_faces()
                .find_map(|s| reduce_face(&current, s))
                .ok_or(Error::NoReducibleFace { faces: count })?,
        };
        steps.push(step);
        graphs.push(reduced.clone());
        current = reduced;
    }
    let base_face = current.finite_faces().next().ok_or_else(|| {
        Error::InternalContractViolation("decomposition ended without a finite face".into())
    })?;
    if current.vertices().any(|v| current.degree(v) != 2) {
        return Err(Error::InternalContractViolation(format!(
            "base graph with face {base_face} is not a cycle"
        )));
    }
    steps.reverse();
    graphs.reverse();
    Ok(RfdSequence {
        base_face,
        steps,
        graphs,
    })
}

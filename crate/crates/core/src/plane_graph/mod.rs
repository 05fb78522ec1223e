//! Plane bipartite graphs given as combinatorial embeddings.
//!
//! A graph is stored as vertex colors, an edge list and a list of facial
//! walks. Finite faces are walked clockwise as drawn; the infinite face is
//! walked so that every edge is traversed exactly once in each direction over
//! all faces, which makes the clockwise periphery the reversal of the stored
//! infinite walk.
//!
//! The rotation system (cyclic neighbor order at each vertex) is derived from
//! the walks and is the internal source of truth: declared faces are checked
//! against the faces traced from it.
//!
//! Ids are never renumbered. Subgraphs produced by [`PlaneBipartiteGraph::delete_handle`]
//! or by the elementary decomposition keep the ids of the graph they came
//! from, so matchings and face labels can be compared across the whole
//! reducible face decomposition without translation tables.

pub mod document;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use document::{parse_graph, to_document};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn opposite(self) -> Color {
        match self {
            Color::White => Color::Black,
            Color::Black => Color::White,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Color::White => f.write_str("white"),
            Color::Black => f.write_str("black"),
        }
    }
}

/// A closed vertex sequence with a traversal direction.
///
/// The sequence is stored rotated to its lexicographically smallest rotation,
/// so two values are equal exactly when they describe the same directed
/// cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedCycle {
    vertices: Vec<VertexId>,
}

impl DirectedCycle {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        DirectedCycle {
            vertices: normalize_walk(vertices),
        }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        DirectedCycle::new(v)
    }

    /// Consecutive `(tail, head)` pairs, including the closing pair.
    pub fn darts(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

impl fmt::Display for DirectedCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(" "))
    }
}

/// Rotates a closed walk to its lexicographically smallest rotation.
pub(crate) fn normalize_walk(walk: Vec<VertexId>) -> Vec<VertexId> {
    let n = walk.len();
    if n == 0 {
        return walk;
    }
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|k| walk[(a + k) % n])
                .cmp((0..n).map(|k| walk[(b + k) % n]))
        })
        .unwrap_or(0);
    (0..n).map(|k| walk[(best + k) % n]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ViolationCode {
    Empty,
    MissingInfiniteFace,
    UnknownVertex,
    SelfLoop,
    DuplicateEdge,
    ImproperColoring,
    ShortWalk,
    NonAdjacentWalkStep,
    DartRepeated,
    DartUncovered,
    RotationNotCycle,
    FaceMismatch,
    EulerViolation,
    Disconnected,
    LowDegree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub code: ViolationCode,
    pub location: String,
}

/// Outcome of validating a graph; empty iff every invariant holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, code: ViolationCode, location: impl Into<String>) {
        self.violations.push(Violation {
            code,
            location: location.into(),
        });
    }

    fn has(&self, code: ViolationCode) -> bool {
        self.violations.iter().any(|v| v.code == code)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return writeln!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{:?}: {}", v.code, v.location)?;
        }
        Ok(())
    }
}

/// Raw, unvalidated graph data indexed by id. `None` marks an id that is not
/// part of this graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphParts {
    pub colors: Vec<Option<Color>>,
    pub edges: Vec<Option<(VertexId, VertexId)>>,
    pub faces: Vec<Option<Vec<VertexId>>>,
    pub infinite_face: FaceId,
}

impl GraphParts {
    pub fn validate(&self) -> ValidationReport {
        match analyze(self) {
            Ok(_) => ValidationReport::default(),
            Err(r) => r,
        }
    }
}

#[derive(Clone, Debug)]
struct Derived {
    incident: Vec<Vec<EdgeId>>,
    rotation: Vec<Vec<VertexId>>,
    edge_lookup: HashMap<(VertexId, VertexId), EdgeId>,
    dart_face: HashMap<(VertexId, VertexId), FaceId>,
}

fn edge_key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn analyze(parts: &GraphParts) -> std::result::Result<Derived, ValidationReport> {
    let mut r = ValidationReport::default();
    let vb = parts.colors.len();
    let present = |v: VertexId| v < vb && parts.colors[v].is_some();
    let vertex_count = parts.colors.iter().filter(|c| c.is_some()).count();
    if vertex_count == 0 {
        r.push(ViolationCode::Empty, "graph has no vertices");
        return Err(r);
    }

    let mut edge_lookup = HashMap::new();
    let mut incident = vec![Vec::new(); vb];
    for (e, slot) in parts.edges.iter().enumerate() {
        let Some((u, v)) = *slot else { continue };
        if !present(u) || !present(v) {
            r.push(ViolationCode::UnknownVertex, format!("edge {e} ({u},{v})"));
            continue;
        }
        if u == v {
            r.push(ViolationCode::SelfLoop, format!("edge {e} at vertex {u}"));
            continue;
        }
        if let Some(prev) = edge_lookup.insert(edge_key(u, v), e) {
            r.push(
                ViolationCode::DuplicateEdge,
                format!("edges {prev} and {e} both join {u} and {v}"),
            );
            continue;
        }
        if parts.colors[u] == parts.colors[v] {
            r.push(
                ViolationCode::ImproperColoring,
                format!("edge {e} ({u},{v})"),
            );
        }
        incident[u].push(e);
        incident[v].push(e);
    }

    if parts
        .faces
        .get(parts.infinite_face)
        .is_none_or(|f| f.is_none())
    {
        r.push(
            ViolationCode::MissingInfiniteFace,
            format!("face {}", parts.infinite_face),
        );
    }

    let mut dart_face = HashMap::new();
    let mut succ: HashMap<(VertexId, VertexId), VertexId> = HashMap::new();
    for (f, slot) in parts.faces.iter().enumerate() {
        let Some(walk) = slot else { continue };
        let n = walk.len();
        if n < 2 {
            r.push(ViolationCode::ShortWalk, format!("face {f}"));
            continue;
        }
        for i in 0..n {
            let (a, b) = (walk[i], walk[(i + 1) % n]);
            if !present(a) {
                r.push(ViolationCode::UnknownVertex, format!("face {f} vertex {a}"));
                continue;
            }
            if !edge_lookup.contains_key(&edge_key(a, b)) {
                r.push(
                    ViolationCode::NonAdjacentWalkStep,
                    format!("face {f} step {a}->{b}"),
                );
                continue;
            }
            if let Some(other) = dart_face.insert((a, b), f) {
                r.push(
                    ViolationCode::DartRepeated,
                    format!("dart {a}->{b} in faces {other} and {f}"),
                );
            }
            let prev = walk[(i + n - 1) % n];
            succ.insert((a, prev), b);
        }
    }
    if !r.is_valid() {
        return Err(r);
    }

    for (e, slot) in parts.edges.iter().enumerate() {
        let Some((u, v)) = *slot else { continue };
        for (a, b) in [(u, v), (v, u)] {
            if !dart_face.contains_key(&(a, b)) {
                r.push(
                    ViolationCode::DartUncovered,
                    format!("edge {e}: dart {a}->{b} lies on no face"),
                );
            }
        }
    }
    if !r.is_valid() {
        return Err(r);
    }

    let mut rotation = vec![Vec::new(); vb];
    for v in (0..vb).filter(|&v| present(v)) {
        let degree = incident[v].len();
        let Some(start) = incident[v]
            .iter()
            .map(|&e| other_end(parts.edges[e].unwrap(), v))
            .min()
        else {
            continue;
        };
        let mut order = vec![start];
        let mut cur = start;
        loop {
            let next = succ[&(v, cur)];
            if next == start {
                break;
            }
            if order.len() >= degree {
                break;
            }
            order.push(next);
            cur = next;
        }
        let distinct: BTreeSet<_> = order.iter().collect();
        if order.len() != degree || distinct.len() != degree {
            r.push(
                ViolationCode::RotationNotCycle,
                format!("vertex {v}: faces around it do not form a single rotation"),
            );
        }
        rotation[v] = order;
    }
    if !r.is_valid() {
        return Err(r);
    }

    let traced: BTreeSet<Vec<VertexId>> = trace_faces(&rotation).into_iter().collect();
    let declared: BTreeSet<Vec<VertexId>> = parts
        .faces
        .iter()
        .flatten()
        .map(|w| normalize_walk(w.clone()))
        .collect();
    if traced != declared {
        r.push(
            ViolationCode::FaceMismatch,
            format!(
                "{} declared faces, {} traced from the rotation system",
                declared.len(),
                traced.len()
            ),
        );
    }

    let e_count = edge_lookup.len() as i64;
    let f_count = parts.faces.iter().flatten().count() as i64;
    let euler = vertex_count as i64 - e_count + f_count;
    if euler != 2 {
        r.push(
            ViolationCode::EulerViolation,
            format!("|V|-|E|+|F| = {vertex_count}-{e_count}+{f_count} = {euler}"),
        );
    }

    let first = (0..vb).find(|&v| present(v)).unwrap();
    let mut seen = FixedBitSet::with_capacity(vb);
    seen.insert(first);
    let mut queue = VecDeque::from([first]);
    while let Some(v) = queue.pop_front() {
        for &w in &rotation[v] {
            if !seen.put(w) {
                queue.push_back(w);
            }
        }
    }
    if seen.count_ones(..) != vertex_count {
        let missing = (0..vb).find(|&v| present(v) && !seen.contains(v)).unwrap();
        r.push(
            ViolationCode::Disconnected,
            format!("vertex {missing} unreachable from vertex {first}"),
        );
    }

    let is_k2 = vertex_count == 2 && e_count == 1;
    if !is_k2 {
        for v in (0..vb).filter(|&v| present(v)) {
            if incident[v].len() < 2 {
                r.push(
                    ViolationCode::LowDegree,
                    format!("vertex {v} has degree {}", incident[v].len()),
                );
            }
        }
    }

    if r.is_valid() {
        Ok(Derived {
            incident,
            rotation,
            edge_lookup,
            dart_face,
        })
    } else {
        Err(r)
    }
}

fn other_end((a, b): (VertexId, VertexId), v: VertexId) -> VertexId {
    if a == v {
        b
    } else {
        a
    }
}

/// Traces every face of a rotation system. Arriving at `v` from `u`, the walk
/// continues to the successor of `u` in the rotation at `v`.
pub(crate) fn trace_faces(rotation: &[Vec<VertexId>]) -> Vec<Vec<VertexId>> {
    let mut visited: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let mut faces = Vec::new();
    for (v, order) in rotation.iter().enumerate() {
        let mut darts: Vec<VertexId> = order.clone();
        darts.sort_unstable();
        for w in darts {
            if visited.contains(&(v, w)) {
                continue;
            }
            let mut walk = Vec::new();
            let (mut a, mut b) = (v, w);
            while visited.insert((a, b)) {
                walk.push(a);
                let around = &rotation[b];
                let pos = around.iter().position(|&x| x == a).unwrap();
                let next = around[(pos + 1) % around.len()];
                a = b;
                b = next;
            }
            faces.push(normalize_walk(walk));
        }
    }
    faces
}

/// A plane bipartite graph with a validated combinatorial embedding.
///
/// Immutable after construction.
#[derive(Clone, Debug)]
pub struct PlaneBipartiteGraph {
    parts: GraphParts,
    derived: Derived,
}

impl PartialEq for PlaneBipartiteGraph {
    fn eq(&self, other: &Self) -> bool {
        self.parts.infinite_face == other.parts.infinite_face
            && self
                .vertices()
                .map(|v| (v, self.color(v)))
                .eq(other.vertices().map(|v| (v, other.color(v))))
            && self.edges().eq(other.edges())
            && self
                .faces()
                .map(|f| (f, self.face_walk(f)))
                .eq(other.faces().map(|f| (f, other.face_walk(f))))
    }
}

impl Eq for PlaneBipartiteGraph {}

impl PlaneBipartiteGraph {
    /// Validates the parts and builds the graph. Walks are normalized to
    /// their smallest rotation.
    pub fn from_parts(mut parts: GraphParts) -> Result<Self> {
        for walk in parts.faces.iter_mut().flatten() {
            *walk = normalize_walk(std::mem::take(walk));
        }
        match analyze(&parts) {
            Ok(derived) => Ok(PlaneBipartiteGraph { parts, derived }),
            Err(report) => {
                if report.has(ViolationCode::ImproperColoring) {
                    let clash = parts.edges.iter().enumerate().find_map(|(e, slot)| {
                        let (a, b) = (*slot)?;
                        let ca = parts.colors.get(a).copied().flatten()?;
                        (parts.colors.get(b).copied().flatten() == Some(ca)).then_some((e, ca))
                    });
                    if let Some((edge, color)) = clash {
                        return Err(Error::NotBipartite { edge, color });
                    }
                }
                Err(Error::InvalidEmbedding(report))
            }
        }
    }

    pub fn parts(&self) -> &GraphParts {
        &self.parts
    }

    /// Upper bound (exclusive) on vertex ids.
    pub fn vertex_bound(&self) -> usize {
        self.parts.colors.len()
    }

    pub fn edge_bound(&self) -> usize {
        self.parts.edges.len()
    }

    pub fn face_bound(&self) -> usize {
        self.parts.faces.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.parts
            .colors
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|_| v))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices().count()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.parts.colors.get(v).is_some_and(|c| c.is_some())
    }

    pub fn color(&self, v: VertexId) -> Color {
        self.parts.colors[v].expect("vertex not in graph")
    }

    /// Present edges as `(id, u, v)`, ascending by id.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.parts
            .edges
            .iter()
            .enumerate()
            .filter_map(|(e, s)| s.map(|(u, v)| (e, u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.parts.edges.get(e).is_some_and(|s| s.is_some())
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.parts.edges[e].expect("edge not in graph")
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.derived.edge_lookup.get(&edge_key(u, v)).copied()
    }

    /// Incident edges of `v`, ascending by id.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.derived.incident[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.derived.incident[v].len()
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        other_end(self.endpoints(e), v)
    }

    /// Neighbors of `v` in rotation order.
    pub fn rotation(&self, v: VertexId) -> &[VertexId] {
        &self.derived.rotation[v]
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        self.parts
            .faces
            .iter()
            .enumerate()
            .filter_map(|(f, w)| w.as_ref().map(|_| f))
    }

    pub fn face_count(&self) -> usize {
        self.faces().count()
    }

    pub fn finite_faces(&self) -> impl Iterator<Item = FaceId> + '_ {
        let inf = self.parts.infinite_face;
        self.faces().filter(move |&f| f != inf)
    }

    pub fn finite_face_count(&self) -> usize {
        self.finite_faces().count()
    }

    pub fn has_face(&self, f: FaceId) -> bool {
        self.parts.faces.get(f).is_some_and(|w| w.is_some())
    }

    pub fn infinite_face(&self) -> FaceId {
        self.parts.infinite_face
    }

    /// Stored walk of a face: clockwise for finite faces.
    pub fn face_walk(&self, f: FaceId) -> &[VertexId] {
        self.parts.faces[f].as_deref().expect("face not in graph")
    }

    /// Edges on the boundary of a face, in walk order.
    pub fn face_edges(&self, f: FaceId) -> Vec<EdgeId> {
        let w = self.face_walk(f);
        let n = w.len();
        (0..n)
            .map(|i| self.edge_between(w[i], w[(i + 1) % n]).unwrap())
            .collect()
    }

    /// The face whose walk traverses `u -> v`.
    pub fn dart_face(&self, u: VertexId, v: VertexId) -> Option<FaceId> {
        self.derived.dart_face.get(&(u, v)).copied()
    }

    /// The two faces on either side of an edge.
    pub fn edge_faces(&self, e: EdgeId) -> (FaceId, FaceId) {
        let (u, v) = self.endpoints(e);
        (
            self.derived.dart_face[&(u, v)],
            self.derived.dart_face[&(v, u)],
        )
    }

    pub fn is_k2(&self) -> bool {
        self.vertex_count() == 2 && self.edge_count() == 1
    }

    pub fn validate(&self) -> ValidationReport {
        self.parts.validate()
    }

    /// The boundary of the infinite face as a simple cycle directed
    /// clockwise, i.e. the reversal of the stored infinite walk.
    pub fn periphery(&self) -> Result<DirectedCycle> {
        let walk = self.face_walk(self.parts.infinite_face);
        let mut seen = BTreeSet::new();
        for &v in walk {
            if !seen.insert(v) {
                return Err(Error::PeripheryNotCycle { vertex: v });
            }
        }
        if walk.len() < 3 {
            return Err(Error::PeripheryNotCycle { vertex: walk[0] });
        }
        let mut rev = walk.to_vec();
        rev.reverse();
        Ok(DirectedCycle::new(rev))
    }

    /// Edge ids of a cycle, checking it is a simple cycle of this graph.
    pub fn cycle_edges(&self, c: &DirectedCycle) -> Result<Vec<EdgeId>> {
        if c.len() < 3 {
            return Err(Error::NotSimpleCycle(format!(
                "{c} has fewer than 3 vertices"
            )));
        }
        let mut seen = BTreeSet::new();
        for &v in c.vertices() {
            if !self.has_vertex(v) {
                return Err(Error::NotSimpleCycle(format!("vertex {v} not in graph")));
            }
            if !seen.insert(v) {
                return Err(Error::NotSimpleCycle(format!("vertex {v} repeats in {c}")));
            }
        }
        c.darts()
            .map(|(a, b)| {
                self.edge_between(a, b)
                    .ok_or_else(|| Error::NotSimpleCycle(format!("{a} and {b} are not adjacent")))
            })
            .collect()
    }

    /// Finite faces enclosed by a simple cycle.
    ///
    /// Walks the dual graph from the infinite face without crossing the
    /// cycle; everything not reached lies inside.
    pub fn interior_faces(&self, c: &DirectedCycle) -> Result<BTreeSet<FaceId>> {
        let cycle_edges: BTreeSet<EdgeId> = self.cycle_edges(c)?.into_iter().collect();
        let mut outside = FixedBitSet::with_capacity(self.face_bound());
        let inf = self.parts.infinite_face;
        outside.insert(inf);
        let mut queue = VecDeque::from([inf]);
        while let Some(f) = queue.pop_front() {
            for e in self.face_edges(f) {
                if cycle_edges.contains(&e) {
                    continue;
                }
                let (a, b) = self.edge_faces(e);
                for g in [a, b] {
                    if !outside.put(g) {
                        queue.push_back(g);
                    }
                }
            }
        }
        Ok(self.faces().filter(|&f| !outside.contains(f)).collect())
    }

    /// Returns the cycle directed clockwise: every edge is traversed in the
    /// direction of the clockwise walk of the face on its interior side.
    pub fn clockwise(&self, c: &DirectedCycle) -> Result<DirectedCycle> {
        let interior = self.interior_faces(c)?;
        let mut agree = None;
        for (a, b) in c.darts() {
            let forward = self.derived.dart_face[&(a, b)];
            let this = interior.contains(&forward);
            match agree {
                None => agree = Some(this),
                Some(prev) if prev != this => {
                    return Err(Error::InconsistentOrientation {
                        edge: self.edge_between(a, b).unwrap(),
                    })
                }
                _ => {}
            }
        }
        Ok(if agree == Some(true) {
            c.clone()
        } else {
            c.reversed()
        })
    }

    /// Removes the internal vertices and edges of a handle lying on the
    /// periphery. The old infinite face and the finite face bounded by the
    /// handle merge into the new infinite face; every other face keeps its
    /// id and walk.
    pub fn delete_handle(&self, path: &[VertexId]) -> Result<PlaneBipartiteGraph> {
        let edges = self.handle_edges(path)?;
        let inf = self.parts.infinite_face;
        for &e in &edges {
            let (a, b) = self.edge_faces(e);
            if a != inf && b != inf {
                return Err(Error::HandleNotOnPeriphery { edge: e });
            }
        }
        let (a, b) = self.edge_faces(edges[0]);
        let bounded = if a == inf { b } else { a };

        let mut colors = self.parts.colors.clone();
        for &v in &path[1..path.len() - 1] {
            colors[v] = None;
        }
        let mut edge_slots = self.parts.edges.clone();
        for &e in &edges {
            edge_slots[e] = None;
        }
        let rotation = filtered_rotation(&self.derived.rotation, &colors, &edge_slots, self);
        let traced = trace_faces(&rotation);

        let mut faces: Vec<Option<Vec<VertexId>>> = vec![None; self.face_bound()];
        let mut unmatched = Vec::new();
        let by_walk: HashMap<&[VertexId], FaceId> =
            self.faces().map(|f| (self.face_walk(f), f)).collect();
        for walk in traced {
            match by_walk.get(walk.as_slice()) {
                Some(&f) if f != inf => faces[f] = Some(walk),
                _ => unmatched.push(walk),
            }
        }
        if unmatched.len() != 1 {
            return Err(Error::InternalContractViolation(format!(
                "deleting handle produced {} new faces",
                unmatched.len()
            )));
        }
        let lost: Vec<FaceId> = self.faces().filter(|&f| faces[f].is_none()).collect();
        let mut expected = vec![inf, bounded];
        expected.sort_unstable();
        if lost != expected {
            return Err(Error::InternalContractViolation(format!(
                "deleting handle merged faces {lost:?}, expected {expected:?}"
            )));
        }
        faces[inf] = unmatched.pop();
        PlaneBipartiteGraph::from_parts(GraphParts {
            colors,
            edges: edge_slots,
            faces,
            infinite_face: inf,
        })
    }

    fn handle_edges(&self, path: &[VertexId]) -> Result<Vec<EdgeId>> {
        if path.len() < 2 {
            return Err(Error::NotAHandle("path needs at least one edge".into()));
        }
        let distinct: BTreeSet<_> = path.iter().collect();
        if distinct.len() != path.len() {
            return Err(Error::NotAHandle("path repeats a vertex".into()));
        }
        let mut edges = Vec::with_capacity(path.len() - 1);
        for w in path.windows(2) {
            if !self.has_vertex(w[0]) || !self.has_vertex(w[1]) {
                return Err(Error::NotAHandle(format!(
                    "vertex {} or {} not in graph",
                    w[0], w[1]
                )));
            }
            let e = self.edge_between(w[0], w[1]).ok_or_else(|| {
                Error::NotAHandle(format!("{} and {} are not adjacent", w[0], w[1]))
            })?;
            edges.push(e);
        }
        for &v in &path[1..path.len() - 1] {
            if self.degree(v) != 2 {
                return Err(Error::NotAHandle(format!(
                    "internal vertex {v} has degree {}",
                    self.degree(v)
                )));
            }
        }
        let ends_branch = self.degree(path[0]) >= 3 && self.degree(*path.last().unwrap()) >= 3;
        // An even cycle has no branch vertices; there the handle is any arc
        // leaving a single edge behind.
        let cycle_arc = self.finite_face_count() == 1
            && self.vertices().all(|v| self.degree(v) == 2)
            && edges.len() + 1 == self.edge_count();
        if !ends_branch && !cycle_arc {
            return Err(Error::NotAHandle(format!(
                "end vertices {} and {} must both have degree at least 3",
                path[0],
                path.last().unwrap()
            )));
        }
        Ok(edges)
    }

    /// Builds the subgraph on the given vertices and edges with its rotation
    /// system restricted from this one, returning its traced faces.
    pub(crate) fn restricted_faces(
        &self,
        keep_vertices: &FixedBitSet,
        keep_edges: &FixedBitSet,
    ) -> (
        Vec<Option<Color>>,
        Vec<Option<(VertexId, VertexId)>>,
        Vec<Vec<VertexId>>,
    ) {
        let colors: Vec<Option<Color>> = self
            .parts
            .colors
            .iter()
            .enumerate()
            .map(|(v, c)| if keep_vertices.contains(v) { *c } else { None })
            .collect();
        let edges: Vec<Option<(VertexId, VertexId)>> = self
            .parts
            .edges
            .iter()
            .enumerate()
            .map(|(e, s)| match s {
                Some((a, b))
                    if keep_edges.contains(e) && colors[*a].is_some() && colors[*b].is_some() =>
                {
                    Some((*a, *b))
                }
                _ => None,
            })
            .collect();
        let rotation = filtered_rotation(&self.derived.rotation, &colors, &edges, self);
        let traced = trace_faces(&rotation);
        (colors, edges, traced)
    }
}

fn filtered_rotation(
    rotation: &[Vec<VertexId>],
    colors: &[Option<Color>],
    edges: &[Option<(VertexId, VertexId)>],
    g: &PlaneBipartiteGraph,
) -> Vec<Vec<VertexId>> {
    rotation
        .iter()
        .enumerate()
        .map(|(v, order)| {
            if colors[v].is_none() {
                return Vec::new();
            }
            order
                .iter()
                .copied()
                .filter(|&w| {
                    colors[w].is_some()
                        && g.edge_between(v, w).is_some_and(|e| edges[e].is_some())
                })
                .collect()
        })
        .collect()
}

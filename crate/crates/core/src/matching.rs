//! Perfect matchings: existence, exhaustive enumeration, forbidden edges,
//! elementary components, extremal matchings and alternating cycles.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::plane_graph::{
    Color, DirectedCycle, EdgeId, FaceId, GraphParts, PlaneBipartiteGraph, VertexId,
};

/// A perfect matching stored as a bit set over the edge ids of the graph it
/// belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    edges: FixedBitSet,
}

impl PerfectMatching {
    pub fn from_edges(edge_bound: usize, edges: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut set = FixedBitSet::with_capacity(edge_bound);
        for e in edges {
            set.insert(e);
        }
        PerfectMatching { edges: set }
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(e)
    }

    /// Matched edge ids, ascending.
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.ones()
    }

    pub fn edge_list(&self) -> Vec<EdgeId> {
        self.edges.ones().collect()
    }

    pub fn len(&self) -> usize {
        self.edges.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_clear()
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.edges
    }

    /// `self ⊕ edges`.
    pub fn flipped(&self, edges: &[EdgeId]) -> PerfectMatching {
        let mut out = self.clone();
        for &e in edges {
            out.edges.toggle(e);
        }
        out
    }

    pub fn symmetric_difference(&self, other: &PerfectMatching) -> Vec<EdgeId> {
        self.edges.symmetric_difference(&other.edges).collect()
    }

    /// Keeps only the edges of `g`; used to restrict a matching of a graph to
    /// one of its components.
    pub fn restricted_to(&self, g: &PlaneBipartiteGraph) -> PerfectMatching {
        PerfectMatching::from_edges(
            self.edges.len(),
            self.edges.ones().filter(|&e| g.has_edge(e)),
        )
    }

    /// Union of matchings of edge-disjoint subgraphs.
    pub fn union<'a>(
        parts: impl IntoIterator<Item = &'a PerfectMatching>,
        edge_bound: usize,
    ) -> Self {
        let mut set = FixedBitSet::with_capacity(edge_bound);
        for p in parts {
            set.union_with(&p.edges);
        }
        PerfectMatching { edges: set }
    }

    /// True iff every vertex of `g` is covered by exactly one matched edge of
    /// `g` and no other edges are matched.
    pub fn is_perfect_in(&self, g: &PlaneBipartiteGraph) -> bool {
        if self.edges.ones().any(|e| !g.has_edge(e)) {
            return false;
        }
        g.vertices()
            .all(|v| g.incident(v).iter().filter(|&&e| self.contains(e)).count() == 1)
    }

    /// The matched edge at `v`, if any.
    pub fn mate_edge(&self, g: &PlaneBipartiteGraph, v: VertexId) -> Option<EdgeId> {
        g.incident(v).iter().copied().find(|&e| self.contains(e))
    }
}

impl fmt::Display for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.edges.ones().map(|e| e.to_string()).collect();
        f.write_str(&ids.join(" "))
    }
}

/// Vertex and edge masks selecting a subgraph of a host graph.
#[derive(Clone, Debug)]
struct View<'a> {
    g: &'a PlaneBipartiteGraph,
    vertices: FixedBitSet,
    edges: FixedBitSet,
}

impl<'a> View<'a> {
    fn whole(g: &'a PlaneBipartiteGraph) -> Self {
        let mut vertices = FixedBitSet::with_capacity(g.vertex_bound());
        vertices.extend(g.vertices());
        let mut edges = FixedBitSet::with_capacity(g.edge_bound());
        edges.extend(g.edges().map(|(e, _, _)| e));
        View { g, vertices, edges }
    }

    fn without_vertices(mut self, removed: impl IntoIterator<Item = VertexId>) -> Self {
        for v in removed {
            self.vertices.set(v, false);
        }
        self
    }

    fn usable(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        if !self.edges.contains(e) {
            return None;
        }
        let w = self.g.other_end(e, v);
        self.vertices.contains(w).then_some(w)
    }

    /// Augmenting-path search from every white vertex; returns the mate edge
    /// of each vertex when a perfect matching of the view exists.
    fn perfect_matching(&self) -> Option<PerfectMatching> {
        let g = self.g;
        let whites: Vec<VertexId> = self
            .vertices
            .ones()
            .filter(|&v| g.color(v) == Color::White)
            .collect();
        if 2 * whites.len() != self.vertices.count_ones(..) {
            return None;
        }
        let mut mate: Vec<Option<EdgeId>> = vec![None; g.vertex_bound()];
        for &w in &whites {
            let mut seen = FixedBitSet::with_capacity(g.vertex_bound());
            if !self.augment(w, &mut mate, &mut seen) {
                return None;
            }
        }
        Some(PerfectMatching::from_edges(
            g.edge_bound(),
            whites.iter().map(|&w| mate[w].unwrap()),
        ))
    }

    fn augment(
        &self,
        white: VertexId,
        mate: &mut [Option<EdgeId>],
        seen: &mut FixedBitSet,
    ) -> bool {
        for &e in self.g.incident(white) {
            let Some(black) = self.usable(e, white) else {
                continue;
            };
            if seen.put(black) {
                continue;
            }
            let free = match mate[black] {
                None => true,
                Some(prev) => {
                    let other = self.g.other_end(prev, black);
                    self.augment(other, mate, seen)
                }
            };
            if free {
                mate[white] = Some(e);
                mate[black] = Some(e);
                return true;
            }
        }
        false
    }

    fn enumerate(&self, limit: Option<usize>) -> Vec<PerfectMatching> {
        let mut out = Vec::new();
        if limit == Some(0) {
            return out;
        }
        let mut covered = FixedBitSet::with_capacity(self.g.vertex_bound());
        let mut chosen = Vec::new();
        self.backtrack(&mut covered, &mut chosen, &mut out, limit);
        out
    }

    fn backtrack(
        &self,
        covered: &mut FixedBitSet,
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<PerfectMatching>,
        limit: Option<usize>,
    ) -> bool {
        let mut next = None;
        for v in self.vertices.ones() {
            if covered.contains(v) {
                continue;
            }
            let free = self
                .g
                .incident(v)
                .iter()
                .any(|&e| self.usable(e, v).is_some_and(|w| !covered.contains(w)));
            if !free {
                return false;
            }
            if next.is_none() {
                next = Some(v);
            }
        }
        let Some(v) = next else {
            out.push(PerfectMatching::from_edges(
                self.g.edge_bound(),
                chosen.iter().copied(),
            ));
            return limit.is_some_and(|l| out.len() >= l);
        };
        for &e in self.g.incident(v) {
            let Some(w) = self.usable(e, v) else { continue };
            if covered.contains(w) {
                continue;
            }
            covered.insert(v);
            covered.insert(w);
            chosen.push(e);
            let stop = self.backtrack(covered, chosen, out, limit);
            chosen.pop();
            covered.set(v, false);
            covered.set(w, false);
            if stop {
                return true;
            }
        }
        false
    }
}

/// Some perfect matching of `g`, or `None` when there is none.
pub fn find_perfect_matching(g: &PlaneBipartiteGraph) -> Option<PerfectMatching> {
    View::whole(g).perfect_matching()
}

/// All perfect matchings in a fixed order: branch on the lowest uncovered
/// vertex, trying its edges by ascending id. Stops after `limit` results.
pub fn enumerate_matchings(g: &PlaneBipartiteGraph, limit: Option<usize>) -> Vec<PerfectMatching> {
    View::whole(g).enumerate(limit)
}

/// Enumerates all perfect matchings, failing if there are more than `cap`.
pub fn enumerate_capped(g: &PlaneBipartiteGraph, cap: usize) -> Result<Vec<PerfectMatching>> {
    let all = enumerate_matchings(g, Some(cap.saturating_add(1)));
    if all.len() > cap {
        return Err(Error::CapExceeded { cap });
    }
    Ok(all)
}

/// Edges contained in no perfect matching.
pub fn forbidden_edges(g: &PlaneBipartiteGraph) -> Result<BTreeSet<EdgeId>> {
    let m = find_perfect_matching(g).ok_or(Error::NoPerfectMatching)?;
    Ok(g.edges()
        .filter(|&(e, u, v)| {
            !m.contains(e)
                && View::whole(g)
                    .without_vertices([u, v])
                    .perfect_matching()
                    .is_none()
        })
        .map(|(e, _, _)| e)
        .collect())
}

/// Connected with a perfect matching and no forbidden edges.
pub fn is_elementary(g: &PlaneBipartiteGraph) -> bool {
    forbidden_edges(g).is_ok_and(|f| f.is_empty())
}

/// One elementary component together with the ids of faces it has that the
/// host graph does not.
#[derive(Clone, Debug)]
pub struct Component {
    pub graph: PlaneBipartiteGraph,
    pub new_faces: Vec<FaceId>,
}

impl Component {
    /// A component with at most two vertices is a single edge and carries
    /// no finite face.
    pub fn is_trivial(&self) -> bool {
        self.graph.vertex_count() <= 2
    }
}

#[derive(Clone, Debug)]
pub struct ElementaryDecomposition {
    pub forbidden: BTreeSet<EdgeId>,
    pub components: Vec<Component>,
    pub weakly_elementary: bool,
    pub notes: Vec<String>,
}

impl ElementaryDecomposition {
    /// Finite faces of the host graph that are not faces of any component,
    /// i.e. faces with a forbidden edge on their boundary.
    pub fn excluded_faces(&self, g: &PlaneBipartiteGraph) -> Vec<FaceId> {
        let kept: BTreeSet<FaceId> = self
            .components
            .iter()
            .flat_map(|c| c.graph.finite_faces().collect::<Vec<_>>())
            .collect();
        g.finite_faces().filter(|f| !kept.contains(f)).collect()
    }
}

/// Removes forbidden edges and splits the rest into elementary components,
/// each embedded by restricting the rotation system of `g`.
///
/// A face of a component that coincides with a face of `g` keeps that id;
/// the face containing the unbounded region gets the infinite face id of
/// `g`; any other face is new, gets a fresh id past `g.face_bound()`, and
/// makes `g` fail to be weakly elementary.
pub fn elementary_decomposition(g: &PlaneBipartiteGraph) -> Result<ElementaryDecomposition> {
    let forbidden = forbidden_edges(g)?;
    let mut kept = FixedBitSet::with_capacity(g.edge_bound());
    kept.extend(
        g.edges()
            .map(|(e, _, _)| e)
            .filter(|e| !forbidden.contains(e)),
    );

    let mut label = vec![usize::MAX; g.vertex_bound()];
    let mut groups: Vec<FixedBitSet> = Vec::new();
    for start in g.vertices() {
        if label[start] != usize::MAX {
            continue;
        }
        let id = groups.len();
        let mut set = FixedBitSet::with_capacity(g.vertex_bound());
        label[start] = id;
        set.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                if !kept.contains(e) {
                    continue;
                }
                let w = g.other_end(e, v);
                if label[w] == usize::MAX {
                    label[w] = id;
                    set.insert(w);
                    queue.push_back(w);
                }
            }
        }
        groups.push(set);
    }

    let walk_ids: HashMap<&[VertexId], FaceId> = g.faces().map(|f| (g.face_walk(f), f)).collect();
    let mut next_fresh = g.face_bound();
    let mut components = Vec::new();
    let mut notes = Vec::new();
    for (idx, vertices) in groups.iter().enumerate() {
        let mut edges = FixedBitSet::with_capacity(g.edge_bound());
        edges.extend(kept.ones().filter(|&e| label[g.endpoints(e).0] == idx));
        let (colors, edge_slots, traced) = g.restricted_faces(vertices, &edges);
        let mut faces: BTreeMap<FaceId, Vec<VertexId>> = BTreeMap::new();
        let mut new_faces = Vec::new();
        for walk in traced {
            let id = if region_contains_infinite(g, &edges, &walk) {
                g.infinite_face()
            } else if let Some(&f) = walk_ids.get(walk.as_slice()) {
                f
            } else {
                let f = next_fresh;
                next_fresh += 1;
                new_faces.push(f);
                f
            };
            if faces.insert(id, walk).is_some() {
                return Err(Error::InternalContractViolation(format!(
                    "component {idx} produced two faces with id {id}"
                )));
            }
        }
        if !new_faces.is_empty() {
            let min_v = vertices.minimum().unwrap_or(0);
            notes.push(format!(
                "component containing vertex {min_v} has {} face(s) not present in the host graph",
                new_faces.len()
            ));
        }
        let bound = faces.keys().next_back().map_or(0, |&f| f + 1);
        let mut face_slots = vec![None; bound];
        for (f, w) in faces {
            face_slots[f] = Some(w);
        }
        let graph = PlaneBipartiteGraph::from_parts(GraphParts {
            colors,
            edges: edge_slots,
            faces: face_slots,
            infinite_face: g.infinite_face(),
        })?;
        components.push(Component { graph, new_faces });
    }
    let weakly_elementary = components.iter().all(|c| c.new_faces.is_empty());
    Ok(ElementaryDecomposition {
        forbidden,
        components,
        weakly_elementary,
        notes,
    })
}

/// Whether the region of the plane bounded by a traced component face
/// contains the infinite face of `g`. The region is grown in the dual of `g`
/// from the faces on the walk's side of each dart, crossing only edges that
/// are not part of the component.
fn region_contains_infinite(
    g: &PlaneBipartiteGraph,
    component_edges: &FixedBitSet,
    walk: &[VertexId],
) -> bool {
    let n = walk.len();
    let mut seen = FixedBitSet::with_capacity(g.face_bound());
    let mut queue = VecDeque::new();
    for i in 0..n {
        let f = g
            .dart_face(walk[i], walk[(i + 1) % n])
            .expect("component dart lies in host");
        if !seen.put(f) {
            queue.push_back(f);
        }
    }
    while let Some(f) = queue.pop_front() {
        for e in g.face_edges(f) {
            if component_edges.contains(e) {
                continue;
            }
            let (a, b) = g.edge_faces(e);
            for h in [a, b] {
                if !seen.put(h) {
                    queue.push_back(h);
                }
            }
        }
    }
    seen.contains(g.infinite_face())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum CycleType {
    Proper,
    Improper,
    NotAlternating,
}

/// Classifies a cycle already directed clockwise.
fn classify_clockwise(
    g: &PlaneBipartiteGraph,
    darts: &[(VertexId, VertexId)],
    m: &PerfectMatching,
) -> CycleType {
    let n = darts.len();
    if n < 2 || n % 2 == 1 {
        return CycleType::NotAlternating;
    }
    let in_m: Vec<bool> = darts
        .iter()
        .map(|&(a, b)| g.edge_between(a, b).is_some_and(|e| m.contains(e)))
        .collect();
    if (0..n).any(|i| in_m[i] == in_m[(i + 1) % n]) {
        return CycleType::NotAlternating;
    }
    let first = if in_m[0] { 0 } else { 1 };
    if g.color(darts[first].0) == Color::White {
        CycleType::Proper
    } else {
        CycleType::Improper
    }
}

/// Proper / improper / not alternating, judged along the clockwise
/// orientation of `c`.
pub fn alternating_cycle_type(
    g: &PlaneBipartiteGraph,
    c: &DirectedCycle,
    m: &PerfectMatching,
) -> Result<CycleType> {
    let cw = g.clockwise(c)?;
    let darts: Vec<_> = cw.darts().collect();
    Ok(classify_clockwise(g, &darts, m))
}

/// Type of the boundary of a finite face. Finite walks are stored clockwise,
/// so no orientation work is needed; walks that revisit a vertex are never
/// alternating cycles.
pub fn face_cycle_type(g: &PlaneBipartiteGraph, f: FaceId, m: &PerfectMatching) -> CycleType {
    let walk = g.face_walk(f);
    let distinct: BTreeSet<_> = walk.iter().collect();
    if distinct.len() != walk.len() {
        return CycleType::NotAlternating;
    }
    let n = walk.len();
    let darts: Vec<_> = (0..n).map(|i| (walk[i], walk[(i + 1) % n])).collect();
    classify_clockwise(g, &darts, m)
}

fn flip_to_extreme(g: &PlaneBipartiteGraph, wanted: CycleType) -> Result<PerfectMatching> {
    let mut m = find_perfect_matching(g).ok_or(Error::NoPerfectMatching)?;
    let guard = g.vertex_count() * g.face_count() * 1000;
    let faces: Vec<FaceId> = g.finite_faces().collect();
    let mut flips = 0;
    'outer: loop {
        for &f in &faces {
            if face_cycle_type(g, f, &m) == wanted {
                flips += 1;
                if flips > guard {
                    return Err(Error::NonTermination { flips });
                }
                m = m.flipped(&g.face_edges(f));
                continue 'outer;
            }
        }
        return Ok(m);
    }
}

/// The matching with no proper alternating face: the minimum of the
/// distributive lattice on perfect matchings.
pub fn minimum_matching(g: &PlaneBipartiteGraph) -> Result<PerfectMatching> {
    flip_to_extreme(g, CycleType::Proper)
}

/// The matching with no improper alternating face: the lattice maximum.
pub fn maximum_matching(g: &PlaneBipartiteGraph) -> Result<PerfectMatching> {
    flip_to_extreme(g, CycleType::Improper)
}

/// Splits `m1 ⊕ m2` into its vertex-disjoint cycles, each directed
/// clockwise, ordered by smallest vertex.
pub fn symmetric_difference_cycles(
    g: &PlaneBipartiteGraph,
    m1: &PerfectMatching,
    m2: &PerfectMatching,
) -> Vec<DirectedCycle> {
    let diff = m1.symmetric_difference(m2);
    let mut nbrs: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for &e in &diff {
        let (u, v) = g.endpoints(e);
        nbrs.entry(u).or_default().push(v);
        nbrs.entry(v).or_default().push(u);
    }
    let mut starts: Vec<VertexId> = nbrs.keys().copied().collect();
    starts.sort_unstable();
    let mut done = BTreeSet::new();
    let mut cycles = Vec::new();
    for s in starts {
        if done.contains(&s) {
            continue;
        }
        let mut walk = vec![s];
        done.insert(s);
        let mut prev = s;
        let mut cur = nbrs[&s][0];
        while cur != s {
            walk.push(cur);
            done.insert(cur);
            let next = nbrs[&cur].iter().copied().find(|&x| x != prev).unwrap();
            prev = cur;
            cur = next;
        }
        let c = DirectedCycle::new(walk);
        cycles.push(
            g.clockwise(&c).expect(
                "components of a symmetric difference of perfect matchings are simple cycles",
            ),
        );
    }
    cycles.sort_by_key(|c| c.vertices()[0]);
    cycles
}

/// The infinite face is forcing when the periphery is a cycle and the graph
/// left after deleting the periphery vertices is empty or has exactly one
/// perfect matching.
pub fn is_forcing_infinite_face(g: &PlaneBipartiteGraph) -> Result<bool> {
    let periphery = g.periphery()?;
    let inner = View::whole(g).without_vertices(periphery.vertices().iter().copied());
    if inner.vertices.is_clear() {
        return Ok(true);
    }
    Ok(inner.enumerate(Some(2)).len() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane_graph::normalize_walk;

    fn same_cycle(a: &[VertexId], b: &[VertexId]) -> bool {
        normalize_walk(a.to_vec()) == normalize_walk(b.to_vec())
    }
    use crate::plane_graph::parse_graph;

    const HEXAGON: &str = r#"{"vertices":[{"id":0,"color":"white"},{"id":1,"color":"black"},{"id":2,"color":"white"},{"id":3,"color":"black"},{"id":4,"color":"white"},{"id":5,"color":"black"}],"edges":[[0,1],[1,2],[2,3],[3,4],[4,5],[5,0]],"faces":[{"id":0,"walk":[0,5,4,3,2,1]},{"id":1,"walk":[0,1,2,3,4,5]}],"infinite_face":0}"#;

    fn hexagon() -> PlaneBipartiteGraph {
        parse_graph(HEXAGON).unwrap()
    }

    #[test]
    fn hexagon_has_two_matchings() {
        let g = hexagon();
        let all = enumerate_matchings(&g, None);
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].edge_list(), vec![0, 2, 4]);
        assert_eq!(all[1].edge_list(), vec![1, 3, 5]);
        assert!(all.iter().all(|m| m.is_perfect_in(&g)));
        assert_eq!(enumerate_matchings(&g, Some(1)).len(), 1);
        assert!(find_perfect_matching(&g).unwrap().is_perfect_in(&g));
    }

    #[test]
    fn hexagon_face_is_proper_for_exactly_one_matching() {
        let g = hexagon();
        let c = DirectedCycle::new(g.face_walk(1).to_vec());
        let types: Vec<_> = enumerate_matchings(&g, None)
            .iter()
            .map(|m| alternating_cycle_type(&g, &c, m).unwrap())
            .collect();
        // edges 0,2,4 start at white vertices 0,2,4 along the clockwise walk
        assert_eq!(types, vec![CycleType::Proper, CycleType::Improper]);
        let rev = c.reversed();
        assert_eq!(
            alternating_cycle_type(&g, &rev, &enumerate_matchings(&g, None)[0]).unwrap(),
            CycleType::Proper
        );
    }

    #[test]
    fn hexagon_extremes() {
        let g = hexagon();
        assert_eq!(minimum_matching(&g).unwrap().edge_list(), vec![1, 3, 5]);
        assert_eq!(maximum_matching(&g).unwrap().edge_list(), vec![0, 2, 4]);
        assert!(forbidden_edges(&g).unwrap().is_empty());
        assert!(is_forcing_infinite_face(&g).unwrap());
    }

    #[test]
    fn symmetric_difference_of_hexagon_matchings_is_the_hexagon() {
        let g = hexagon();
        let all = enumerate_matchings(&g, None);
        assert!(symmetric_difference_cycles(&g, &all[0], &all[0]).is_empty());
        let cycles = symmetric_difference_cycles(&g, &all[0], &all[1]);
        assert_eq!(cycles.len(), 1);
        assert!(same_cycle(cycles[0].vertices(), g.face_walk(1)));
    }

    #[test]
    fn elementary_graph_is_its_own_component() {
        let g = hexagon();
        let d = elementary_decomposition(&g).unwrap();
        assert!(d.weakly_elementary);
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].graph, g);
        assert!(d.excluded_faces(&g).is_empty());
    }
}

//! Brute-force resonance graph and the lattice of perfect matchings.
//!
//! Everything here starts from the full list of perfect matchings, so it is
//! exponential in the size of the graph and guarded by a node cap. It serves
//! as ground truth for the coder.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::coder::BinaryCode;
use crate::error::{Error, Result};
use crate::matching::{
    alternating_cycle_type, enumerate_capped, symmetric_difference_cycles, CycleType,
    PerfectMatching,
};
use crate::plane_graph::{DirectedCycle, FaceId, PlaneBipartiteGraph};

pub const DEFAULT_ORACLE_CAP: usize = 100_000;

/// A directed resonance edge: `from ⊕ to` is the boundary of `face`, and
/// that boundary is proper `from`-alternating.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResonanceEdge {
    pub from: usize,
    pub to: usize,
    pub face: FaceId,
}

#[derive(Clone, Debug)]
pub struct ResonanceDigraph {
    pub matchings: Vec<PerfectMatching>,
    pub edges: Vec<ResonanceEdge>,
    index: HashMap<PerfectMatching, usize>,
    /// Per node: `(neighbor, edge index)` for every incident edge.
    adjacency: Vec<Vec<(usize, usize)>>,
    /// Lower triangle of the distance matrix; `u16::MAX` when unreachable.
    distances: Vec<u16>,
}

/// Enumerates all perfect matchings (at most `cap`) and joins two of them
/// whenever their symmetric difference is exactly the edge set of a finite
/// face.
pub fn build_resonance(g: &PlaneBipartiteGraph, cap: usize) -> Result<ResonanceDigraph> {
    let matchings = enumerate_capped(g, cap)?;
    if matchings.is_empty() {
        return Err(Error::NoPerfectMatching);
    }
    let index: HashMap<PerfectMatching, usize> = matchings
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();

    let mut face_of: HashMap<FixedBitSet, FaceId> = HashMap::new();
    let mut face_sizes = FixedBitSet::with_capacity(g.edge_count() + 1);
    for f in g.finite_faces() {
        let mut bits = FixedBitSet::with_capacity(g.edge_bound());
        bits.extend(g.face_edges(f));
        face_sizes.insert(bits.count_ones(..));
        face_of.insert(bits, f);
    }

    let n = matchings.len();
    let mut edges = Vec::new();
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (matchings[i].bits(), matchings[j].bits());
            let count = a.symmetric_difference_count(b);
            if !face_sizes.contains(count) {
                continue;
            }
            let mut diff = a.clone();
            diff.symmetric_difference_with(b);
            let Some(&face) = face_of.get(&diff) else {
                continue;
            };
            let cycle = DirectedCycle::new(g.face_walk(face).to_vec());
            let (from, to) = match alternating_cycle_type(g, &cycle, &matchings[i])? {
                CycleType::Proper => (i, j),
                CycleType::Improper => (j, i),
                CycleType::NotAlternating => {
                    return Err(Error::InternalContractViolation(format!(
                        "matchings {i} and {j} differ on face {face} which is not alternating"
                    )))
                }
            };
            adjacency[i].push((j, edges.len()));
            adjacency[j].push((i, edges.len()));
            edges.push(ResonanceEdge { from, to, face });
        }
    }

    let mut distances = vec![u16::MAX; n * (n + 1) / 2];
    for s in 0..n {
        let mut dist = vec![u16::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adjacency[v] {
                if dist[w] == u16::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        for (t, &d) in dist.iter().enumerate().take(s + 1) {
            distances[s * (s + 1) / 2 + t] = d;
        }
    }

    Ok(ResonanceDigraph {
        matchings,
        edges,
        index,
        adjacency,
        distances,
    })
}

impl ResonanceDigraph {
    pub fn node_count(&self) -> usize {
        self.matchings.len()
    }

    pub fn node_of(&self, m: &PerfectMatching) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Incident `(neighbor, edge index)` pairs.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.adjacency[v]
            .iter()
            .filter(|&&(_, e)| self.edges[e].from == v)
            .count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.adjacency[v].len() - self.out_degree(v)
    }

    /// Undirected distance, or `None` if the nodes are in different
    /// components.
    pub fn distance(&self, a: usize, b: usize) -> Option<u16> {
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        let d = self.distances[hi * (hi + 1) / 2 + lo];
        (d != u16::MAX).then_some(d)
    }

    pub fn is_connected(&self) -> bool {
        (0..self.node_count()).all(|v| self.distance(0, v).is_some())
    }

    pub fn diameter(&self) -> Option<u16> {
        let n = self.node_count();
        let mut best = 0;
        for a in 0..n {
            for b in 0..a {
                best = best.max(self.distance(a, b)?);
            }
        }
        Some(best)
    }

    pub fn sinks(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&v| self.out_degree(v) == 0)
            .collect()
    }

    pub fn sources(&self) -> Vec<usize> {
        (0..self.node_count())
            .filter(|&v| self.in_degree(v) == 0)
            .collect()
    }

    /// DOT text with node labels `code` (when given) and matching index, and
    /// edge labels `s<face>`.
    pub fn to_dot(&self, codes: Option<&[BinaryCode]>) -> String {
        let mut out = String::from("digraph resonance {\n");
        for v in 0..self.node_count() {
            let label = match codes {
                Some(c) => format!("{}\\nM{v}", c[v]),
                None => format!("M{v}"),
            };
            let _ = writeln!(out, "  n{v} [label=\"{label}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(out, "  n{} -> n{} [label=\"s{}\"];", e.from, e.to, e.face);
        }
        out.push_str("}\n");
        out
    }
}

/// For each finite face: proper minus improper `m1`-alternating cycles of
/// `m1 ⊕ m2` enclosing it.
pub fn psi(
    g: &PlaneBipartiteGraph,
    m1: &PerfectMatching,
    m2: &PerfectMatching,
) -> Result<BTreeMap<FaceId, i32>> {
    let mut out: BTreeMap<FaceId, i32> = g.finite_faces().map(|f| (f, 0)).collect();
    for c in symmetric_difference_cycles(g, m1, m2) {
        let sign = match alternating_cycle_type(g, &c, m1)? {
            CycleType::Proper => 1,
            CycleType::Improper => -1,
            CycleType::NotAlternating => {
                return Err(Error::InternalContractViolation(format!(
                    "cycle {c} of a symmetric difference is not alternating"
                )))
            }
        };
        for f in g.interior_faces(&c)? {
            *out.get_mut(&f).unwrap() += sign;
        }
    }
    Ok(out)
}

/// The order `a ≤ b` iff there is a directed path from `b` to `a`, with
/// meet and join tables.
#[derive(Clone, Debug)]
pub struct LatticeView {
    /// `below[v]`: nodes reachable from `v`, including `v`.
    pub below: Vec<FixedBitSet>,
    /// `above[v]`: nodes from which `v` is reachable, including `v`.
    pub above: Vec<FixedBitSet>,
    pub minimum: usize,
    pub maximum: usize,
    pub height: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
}

impl LatticeView {
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(a)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.below.len() + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.below.len() + b] as usize
    }

    /// `b` covers `a`: `a < b` with nothing strictly between.
    pub fn covers(&self, b: usize, a: usize) -> bool {
        if a == b || !self.le(a, b) {
            return false;
        }
        let mut between = self.below[b].clone();
        between.intersect_with(&self.above[a]);
        between.count_ones(..) == 2
    }
}

fn greatest(candidates: &FixedBitSet, down: &[FixedBitSet]) -> Option<usize> {
    let mut found = candidates
        .ones()
        .filter(|&m| candidates.is_subset(&down[m]));
    let first = found.next()?;
    found.next().is_none().then_some(first)
}

/// Builds the order, checks that meets and joins exist for every pair and
/// that both distributive laws hold on every triple.
pub fn lattice(d: &ResonanceDigraph) -> Result<LatticeView> {
    let n = d.node_count();
    if !d.is_connected() {
        return Err(Error::NotALattice("resonance graph is disconnected".into()));
    }
    let (sinks, sources) = (d.sinks(), d.sources());
    if sinks.len() != 1 || sources.len() != 1 {
        return Err(Error::NotALattice(format!(
            "{} sinks and {} sources",
            sinks.len(),
            sources.len()
        )));
    }

    let mut below = vec![FixedBitSet::with_capacity(n); n];
    for (s, set) in below.iter_mut().enumerate() {
        set.insert(s);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in d.neighbors(v) {
                if d.edges[e].from == v && !set.put(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..a {
            if below[a].contains(b) && below[b].contains(a) {
                return Err(Error::NotALattice(format!(
                    "nodes {a} and {b} lie on a directed cycle"
                )));
            }
        }
    }
    let mut above = vec![FixedBitSet::with_capacity(n); n];
    for (v, set) in below.iter().enumerate() {
        for w in set.ones() {
            above[w].insert(v);
        }
    }

    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for a in 0..n {
        for b in 0..n {
            let mut lower = below[a].clone();
            lower.intersect_with(&below[b]);
            let m = greatest(&lower, &below).ok_or_else(|| {
                Error::NotALattice(format!("nodes {a} and {b} have no unique meet"))
            })?;
            let mut upper = above[a].clone();
            upper.intersect_with(&above[b]);
            let j = greatest(&upper, &above).ok_or_else(|| {
                Error::NotALattice(format!("nodes {a} and {b} have no unique join"))
            })?;
            meet[a * n + b] = m as u32;
            join[a * n + b] = j as u32;
        }
    }
    let mj = |a: usize, b: usize| meet[a * n + b] as usize;
    let jn = |a: usize, b: usize| join[a * n + b] as usize;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if mj(x, jn(y, z)) != jn(mj(x, y), mj(x, z))
                    || jn(x, mj(y, z)) != mj(jn(x, y), jn(x, z))
                {
                    return Err(Error::NotALattice(format!(
                        "distributive law fails on nodes {x}, {y}, {z}"
                    )));
                }
            }
        }
    }

    // longest path: process nodes by decreasing size of their down-set
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| below[v].count_ones(..));
    let mut level = vec![0usize; n];
    for &v in &order {
        for &(w, e) in d.neighbors(v) {
            if d.edges[e].from == v {
                level[v] = level[v].max(level[w] + 1);
            }
        }
    }
    Ok(LatticeView {
        minimum: sinks[0],
        maximum: sources[0],
        height: level[sources[0]],
        below,
        above,
        meet,
        join,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::matching::{maximum_matching, minimum_matching};

    #[test]
    fn hexagon_graph_is_one_edge_from_max_to_min() {
        let g = corpus::chain(1).unwrap();
        let d = build_resonance(&g, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(d.node_count(), 2);
        assert_eq!(d.edges.len(), 1);
        let e = d.edges[0];
        assert_eq!(d.matchings[e.from], maximum_matching(&g).unwrap());
        assert_eq!(d.matchings[e.to], minimum_matching(&g).unwrap());
        let l = lattice(&d).unwrap();
        assert_eq!(l.height, 1);
        assert!(l.covers(e.from, e.to));
        let p = psi(&g, &d.matchings[e.from], &d.matchings[e.to]).unwrap();
        assert_eq!(p.into_values().collect::<Vec<_>>(), vec![1]);
        let zero = psi(&g, &d.matchings[0], &d.matchings[0]).unwrap();
        assert!(zero.values().all(|&v| v == 0));
    }

    #[test]
    fn cap_is_enforced() {
        let g = corpus::chain(3).unwrap();
        assert!(matches!(
            build_resonance(&g, 3),
            Err(Error::CapExceeded { cap: 3 })
        ));
        assert_eq!(build_resonance(&g, 4).unwrap().node_count(), 4);
    }

    #[test]
    fn dot_output_labels_faces() {
        let g = corpus::chain(1).unwrap();
        let d = build_resonance(&g, 10).unwrap();
        let dot = d.to_dot(None);
        assert!(dot.starts_with("digraph resonance {\n"));
        assert!(dot.contains("[label=\"s1\"]"));
    }

    #[test]
    fn coronene_matchings_form_a_lattice() {
        let g = corpus::coronene().unwrap();
        let d = build_resonance(&g, DEFAULT_ORACLE_CAP).unwrap();
        assert!(d.is_connected());
        lattice(&d).unwrap();
    }
}

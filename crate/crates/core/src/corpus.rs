//! Builders for the standard instances: benzenoids from hexagon positions
//! and a few hand-placed graphs with forbidden edges.
//!
//! Coordinates are integers in drawing units: `X = x / (√3/2)` and `Y = 2y`
//! for a hexagon lattice of unit circumradius, pointy side up. The hexagon
//! with axial coordinates `(q, r)` is centred at `(2q + r, -3r)`, so `r`
//! grows downward. Vertex colors follow the lattice: a vertex is white iff
//! `Y mod 3 == 2`, which makes every top corner white.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::plane_graph::{
    normalize_walk, trace_faces, Color, FaceId, GraphParts, PlaneBipartiteGraph, VertexId,
};

/// Corner offsets of a hexagon from its centre, clockwise from the top.
const CORNERS: [(i64, i64); 6] = [(0, 2), (1, 1), (1, -1), (0, -2), (-1, -1), (-1, 1)];

const AXIAL_NEIGHBORS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// Hexagon cells in axial coordinates. The i-th cell becomes face `i + 1`;
/// the infinite face is always face 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HexSpec {
    cells: Vec<(i32, i32)>,
}

impl HexSpec {
    pub fn new(cells: Vec<(i32, i32)>) -> Result<Self> {
        let Some(&first) = cells.first() else {
            return Err(Error::InvalidHexSpec("no hexagons".into()));
        };
        let set: HashSet<(i32, i32)> = cells.iter().copied().collect();
        if set.len() != cells.len() {
            return Err(Error::InvalidHexSpec("repeated cell".into()));
        }
        let mut seen = HashSet::from([first]);
        let mut queue = VecDeque::from([first]);
        while let Some((q, r)) = queue.pop_front() {
            for (dq, dr) in AXIAL_NEIGHBORS {
                let n = (q + dq, r + dr);
                if set.contains(&n) && seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        if let Some(&lost) = cells.iter().find(|c| !seen.contains(c)) {
            return Err(Error::DisconnectedSpec(lost));
        }
        Ok(HexSpec { cells })
    }

    pub fn cells(&self) -> &[(i32, i32)] {
        &self.cells
    }
}

fn lattice_color(y: i64) -> Color {
    if y.rem_euclid(3) == 2 {
        Color::White
    } else {
        Color::Black
    }
}

fn hex_center((q, r): (i32, i32)) -> (i64, i64) {
    (2 * q as i64 + r as i64, -3 * r as i64)
}

fn hex_corners(center: (i64, i64)) -> [(i64, i64); 6] {
    CORNERS.map(|(dx, dy)| (center.0 + dx, center.1 + dy))
}

/// A straight-line drawing: points, colors, edges, and vertex sets of the
/// faces that should receive ids `1..`, in order.
struct Drawing {
    points: Vec<(i64, i64)>,
    colors: Vec<Color>,
    edges: Vec<(VertexId, VertexId)>,
    named_faces: Vec<BTreeSet<VertexId>>,
}

impl Drawing {
    /// Collects hexagons and extra edges given by coordinates. Vertex ids
    /// follow lexicographic `(X, Y)` order, edge ids lexicographic endpoint
    /// order.
    fn from_coordinates(
        hexagons: &[[(i64, i64); 6]],
        extra_edges: &[((i64, i64), (i64, i64))],
        color_of: impl Fn((i64, i64)) -> Color,
    ) -> Drawing {
        let mut pts: BTreeSet<(i64, i64)> = hexagons.iter().flatten().copied().collect();
        for &(a, b) in extra_edges {
            pts.insert(a);
            pts.insert(b);
        }
        let points: Vec<(i64, i64)> = pts.into_iter().collect();
        let id: HashMap<(i64, i64), VertexId> =
            points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut edges = BTreeSet::new();
        let mut add = |a: (i64, i64), b: (i64, i64)| {
            let (u, v) = (id[&a], id[&b]);
            edges.insert((u.min(v), u.max(v)));
        };
        for hex in hexagons {
            for i in 0..6 {
                add(hex[i], hex[(i + 1) % 6]);
            }
        }
        for &(a, b) in extra_edges {
            add(a, b);
        }
        Drawing {
            colors: points.iter().map(|&p| color_of(p)).collect(),
            named_faces: hexagons
                .iter()
                .map(|h| h.iter().map(|p| id[p]).collect())
                .collect(),
            points,
            edges: edges.into_iter().collect(),
        }
    }

    /// Embeds the drawing. Returns the graph and the ids of finite faces
    /// that were not named.
    fn embed(&self) -> Result<(PlaneBipartiteGraph, Vec<FaceId>)> {
        let n = self.points.len();
        let mut rotation: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            rotation[u].push(v);
            rotation[v].push(u);
        }
        let angle = |from: VertexId, to: VertexId| {
            let (x0, y0) = self.points[from];
            let (x1, y1) = self.points[to];
            let dx = (x1 - x0) as f64 * 3f64.sqrt() / 2.0;
            let dy = (y1 - y0) as f64 / 2.0;
            dy.atan2(dx)
        };
        for (v, around) in rotation.iter_mut().enumerate() {
            around.sort_by(|&a, &b| angle(v, a).total_cmp(&angle(v, b)));
        }
        let traced = trace_faces(&rotation);

        let area = |walk: &[VertexId]| -> i64 {
            let m = walk.len();
            (0..m)
                .map(|i| {
                    let (x0, y0) = self.points[walk[i]];
                    let (x1, y1) = self.points[walk[(i + 1) % m]];
                    x0 * y1 - x1 * y0
                })
                .sum()
        };
        let mut outer = None;
        let mut named: BTreeMap<FaceId, Vec<VertexId>> = BTreeMap::new();
        let mut others = Vec::new();
        for walk in traced {
            if area(&walk) > 0 {
                if outer.replace(walk).is_some() {
                    return Err(Error::InternalContractViolation(
                        "drawing has two counterclockwise faces".into(),
                    ));
                }
                continue;
            }
            let set: BTreeSet<VertexId> = walk.iter().copied().collect();
            match self.named_faces.iter().position(|f| *f == set) {
                Some(i) => {
                    named.insert(i + 1, walk);
                }
                None => others.push(walk),
            }
        }
        if named.len() != self.named_faces.len() {
            return Err(Error::InvalidHexSpec(
                "a hexagon is not a face of the drawing".into(),
            ));
        }
        let outer = outer
            .ok_or_else(|| Error::InternalContractViolation("drawing has no outer face".into()))?;
        others.sort();
        let mut faces = vec![Some(normalize_walk(outer))];
        faces.extend(named.into_values().map(Some));
        let first_extra = faces.len();
        faces.extend(others.into_iter().map(Some));
        let extra: Vec<FaceId> = (first_extra..faces.len()).collect();
        let graph = PlaneBipartiteGraph::from_parts(GraphParts {
            colors: self.colors.iter().map(|&c| Some(c)).collect(),
            edges: self.edges.iter().map(|&e| Some(e)).collect(),
            faces,
            infinite_face: 0,
        })?;
        Ok((graph, extra))
    }
}

/// The benzenoid graph with one unit hexagon per cell.
pub fn benzenoid(spec: &HexSpec) -> Result<PlaneBipartiteGraph> {
    let hexagons: Vec<_> = spec
        .cells()
        .iter()
        .map(|&c| hex_corners(hex_center(c)))
        .collect();
    let drawing = Drawing::from_coordinates(&hexagons, &[], |(_, y)| lattice_color(y));
    let (graph, extra) = drawing.embed()?;
    if !extra.is_empty() {
        return Err(Error::InvalidHexSpec(format!(
            "hexagons enclose {} non-hexagonal face(s)",
            extra.len()
        )));
    }
    Ok(graph)
}

/// A named instance together with the face order its figure uses, if any.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub graph: PlaneBipartiteGraph,
    pub order: Option<Vec<FaceId>>,
}

pub const INSTANCE_NAMES: &[&str] = &[
    "hexagon",
    "naphthalene",
    "chain(k)",
    "parallelogram(a,b)",
    "figure1",
    "figure3",
    "coronene",
    "dumbbell",
    "bridged",
];

fn chain_cells(k: usize) -> Vec<(i32, i32)> {
    (0..k as i32).map(|q| (q, 0)).collect()
}

pub fn chain(k: usize) -> Result<PlaneBipartiteGraph> {
    benzenoid(&HexSpec::new(chain_cells(k))?)
}

/// Linearly annelated rows of `a` hexagons stacked `b` high, each row
/// shifted half a hexagon.
pub fn parallelogram(a: usize, b: usize) -> Result<PlaneBipartiteGraph> {
    let cells = (0..b as i32)
        .flat_map(|r| (0..a as i32).map(move |q| (q, r)))
        .collect();
    benzenoid(&HexSpec::new(cells)?)
}

/// Five hexagons with faces 1..5 placed as in the worked example of the
/// coding algorithm.
pub fn figure1() -> Result<PlaneBipartiteGraph> {
    benzenoid(&HexSpec::new(vec![
        (0, 0),
        (0, 1),
        (1, 1),
        (2, 0),
        (-1, 2),
    ])?)
}

/// Perylene: two naphthalene units (faces 1, 2 and 3, 4) joined through the
/// central face 5, whose two joining edges are forbidden.
pub fn figure3() -> Result<PlaneBipartiteGraph> {
    benzenoid(&HexSpec::new(vec![
        (0, 0),
        (1, 0),
        (-1, 2),
        (0, 2),
        (0, 1),
    ])?)
}

/// Six hexagons around a central one; the central hexagon is face 4.
pub fn coronene() -> Result<PlaneBipartiteGraph> {
    benzenoid(&HexSpec::new(vec![
        (-1, 0),
        (-1, 1),
        (0, -1),
        (0, 0),
        (0, 1),
        (1, -1),
        (1, 0),
    ])?)
}

/// Two hexagons joined by a three-edge path. The middle edge of the path is
/// matched in every perfect matching and the other two are forbidden, so
/// the elementary components are both hexagons and a single edge.
pub fn dumbbell() -> Result<PlaneBipartiteGraph> {
    let left = hex_corners((0, 0));
    let right = hex_corners((7, 0));
    let x = (3, -1);
    let y = (5, -1);
    let right_set: HashSet<(i64, i64)> = right.iter().copied().collect();
    let drawing =
        Drawing::from_coordinates(&[left, right], &[((1, -1), x), (x, y), (y, (6, -1))], |p| {
            if p == x {
                Color::Black
            } else if p == y {
                Color::White
            } else if right_set.contains(&p) {
                lattice_color(p.1).opposite()
            } else {
                lattice_color(p.1)
            }
        });
    Ok(drawing.embed()?.0)
}

/// Two hexagons joined by two forbidden edges that close a third finite
/// face between them.
pub fn bridged() -> Result<PlaneBipartiteGraph> {
    let left = hex_corners((0, 0));
    let right = hex_corners((6, 0));
    let drawing = Drawing::from_coordinates(
        &[left, right],
        &[((0, 2), (5, 1)), ((1, -1), (6, -2))],
        |(_, y)| lattice_color(y),
    );
    Ok(drawing.embed()?.0)
}

fn parse_args(name: &str, prefix: &str) -> Option<Vec<usize>> {
    let rest = name.strip_prefix(prefix)?;
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| rest.strip_prefix(':'))?;
    inner.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// Looks up an instance by name. `chain(k)` and `parallelogram(a,b)` also
/// accept the forms `chain:k` and `parallelogram:a,b`.
pub fn named(name: &str) -> Result<Instance> {
    let unknown = || Error::UnknownInstance(name.to_string());
    let (graph, order) = match name {
        "hexagon" => (chain(1)?, None),
        "naphthalene" => (chain(2)?, None),
        "figure1" => (figure1()?, Some(vec![1, 2, 3, 4, 5])),
        "figure3" => (figure3()?, Some(vec![1, 2, 3, 4])),
        "coronene" => (coronene()?, None),
        "dumbbell" => (dumbbell()?, None),
        "bridged" => (bridged()?, None),
        _ => {
            if let Some(args) = parse_args(name, "chain") {
                match args[..] {
                    [k] if k >= 1 => (chain(k)?, None),
                    _ => return Err(unknown()),
                }
            } else if let Some(args) = parse_args(name, "parallelogram") {
                match args[..] {
                    [a, b] if a >= 1 && b >= 1 => (parallelogram(a, b)?, None),
                    _ => return Err(unknown()),
                }
            } else {
                return Err(unknown());
            }
        }
    };
    Ok(Instance {
        name: name.to_string(),
        graph,
        order,
    })
}

//! JSON plane-graph documents.
//!
//! ```json
//! {"vertices":[{"id":0,"color":"white"}],"edges":[[0,1]],
//!  "faces":[{"id":0,"walk":[0,1]}],"infinite_face":0}
//! ```
//!
//! An edge written as a pair takes its position as id. Graphs with gaps in
//! the edge id space are written with explicit `{"id":..,"ends":[u,v]}`
//! entries instead.

use serde::{Deserialize, Serialize};

use super::{Color, GraphParts, PlaneBipartiteGraph, VertexId};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    vertices: Vec<VertexEntry>,
    edges: Vec<EdgeEntry>,
    faces: Vec<FaceEntry>,
    infinite_face: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexEntry {
    id: usize,
    color: Color,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EdgeEntry {
    Pair([VertexId; 2]),
    Explicit { id: usize, ends: [VertexId; 2] },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaceEntry {
    id: usize,
    walk: Vec<VertexId>,
}

fn place<T: Clone>(slots: &mut Vec<Option<T>>, id: usize, value: T, what: &str) -> Result<()> {
    if id >= slots.len() {
        slots.resize(id + 1, None);
    }
    if slots[id].is_some() {
        return Err(Error::Parse(format!("duplicate {what} id {id}")));
    }
    slots[id] = Some(value);
    Ok(())
}

/// Parses and validates a plane-graph document.
pub fn parse_graph(text: &str) -> Result<PlaneBipartiteGraph> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut parts = GraphParts {
        infinite_face: doc.infinite_face,
        ..GraphParts::default()
    };
    for v in doc.vertices {
        place(&mut parts.colors, v.id, v.color, "vertex")?;
    }
    for (pos, entry) in doc.edges.into_iter().enumerate() {
        let (id, [u, v]) = match entry {
            EdgeEntry::Pair(ends) => (pos, ends),
            EdgeEntry::Explicit { id, ends } => (id, ends),
        };
        place(&mut parts.edges, id, (u, v), "edge")?;
    }
    for f in doc.faces {
        if f.walk.is_empty() {
            return Err(Error::Parse(format!("face {} has an empty walk", f.id)));
        }
        place(&mut parts.faces, f.id, f.walk, "face")?;
    }
    PlaneBipartiteGraph::from_parts(parts)
}

/// Canonical document text: entries sorted by id, compact JSON, one
/// trailing newline.
pub fn to_document(g: &PlaneBipartiteGraph) -> String {
    let dense = g.edge_count() == g.edge_bound();
    let doc = Document {
        vertices: g
            .vertices()
            .map(|id| VertexEntry {
                id,
                color: g.color(id),
            })
            .collect(),
        edges: g
            .edges()
            .map(|(id, u, v)| {
                if dense {
                    EdgeEntry::Pair([u, v])
                } else {
                    EdgeEntry::Explicit { id, ends: [u, v] }
                }
            })
            .collect(),
        faces: g
            .faces()
            .map(|id| FaceEntry {
                id,
                walk: g.face_walk(id).to_vec(),
            })
            .collect(),
        infinite_face: g.infinite_face(),
    };
    let mut out = serde_json::to_string(&doc).expect("document serialization cannot fail");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEXAGON: &str = r#"{"vertices":[{"id":0,"color":"white"},{"id":1,"color":"black"},{"id":2,"color":"white"},{"id":3,"color":"black"},{"id":4,"color":"white"},{"id":5,"color":"black"}],"edges":[[0,1],[1,2],[2,3],[3,4],[4,5],[5,0]],"faces":[{"id":0,"walk":[0,5,4,3,2,1]},{"id":1,"walk":[0,1,2,3,4,5]}],"infinite_face":0}
"#;

    #[test]
    fn hexagon_round_trips_byte_exact() {
        let g = parse_graph(HEXAGON).unwrap();
        assert_eq!(g.finite_face_count(), 1);
        assert_eq!(to_document(&g), HEXAGON);
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(
            parse_graph("{\"vertices\":"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            parse_graph(&HEXAGON.replace("\"white\"", "\"red\"")),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let text = HEXAGON.replace(
            "{\"id\":1,\"color\":\"black\"}",
            "{\"id\":0,\"color\":\"black\"}",
        );
        assert!(matches!(parse_graph(&text), Err(Error::Parse(_))));
    }

    #[test]
    fn same_colored_neighbors_are_not_bipartite() {
        let text = HEXAGON.replace(
            "{\"id\":1,\"color\":\"black\"}",
            "{\"id\":1,\"color\":\"white\"}",
        );
        assert!(matches!(
            parse_graph(&text),
            Err(Error::NotBipartite { .. })
        ));
    }

    #[test]
    fn sparse_edge_ids_use_explicit_entries() {
        let g = parse_graph(HEXAGON).unwrap();
        let sub = g.delete_handle(&[0, 1, 2, 3, 4, 5]).unwrap();
        let text = to_document(&sub);
        assert!(text.contains("\"ends\":[5,0]"));
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, sub);
    }
}

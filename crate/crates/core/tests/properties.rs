use std::collections::BTreeSet;

use proptest::prelude::*;

use rescode_core::coder::{decode, generate_coding, phi_code, phi_vector};
use rescode_core::corpus::{self, benzenoid, HexSpec};
use rescode_core::matching::{enumerate_matchings, is_elementary, is_forcing_infinite_face};
use rescode_core::plane_graph::{parse_graph, to_document};
use rescode_core::resonance::build_resonance;
use rescode_core::rfd::find_rfd;
use rescode_core::verify::verify_graph;
use rescode_core::{DirectedCycle, PlaneBipartiteGraph};

const STEPS: [(i32, i32); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// Grows a patch of hexagons by attaching each new cell next to an earlier one.
fn patch(max: usize) -> impl Strategy<Value = Vec<(i32, i32)>> {
    prop::collection::vec((any::<prop::sample::Index>(), 0..6usize), 0..max).prop_map(|moves| {
        let mut cells = vec![(0, 0)];
        for (at, dir) in moves {
            let (q, r) = cells[at.index(cells.len())];
            let next = (q + STEPS[dir].0, r + STEPS[dir].1);
            if !cells.contains(&next) {
                cells.push(next);
            }
        }
        cells
    })
}

fn graph_of(cells: Vec<(i32, i32)>) -> Option<PlaneBipartiteGraph> {
    benzenoid(&HexSpec::new(cells).ok()?).ok()
}

fn elementary_patch(max: usize) -> impl Strategy<Value = PlaneBipartiteGraph> {
    patch(max)
        .prop_filter_map("holes or no perfect matching", graph_of)
        .prop_filter("not elementary", is_elementary)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn benzenoids_are_valid_plane_graphs(cells in patch(8)) {
        let n = cells.len();
        if let Some(g) = graph_of(cells) {
            prop_assert!(g.validate().is_valid());
            prop_assert_eq!(g.finite_face_count(), n);
            prop_assert_eq!(g.vertex_count() + g.face_count(), g.edge_count() + 2);
        }
    }

    #[test]
    fn document_round_trip(cells in patch(6)) {
        if let Some(g) = graph_of(cells) {
            let text = to_document(&g);
            let back = parse_graph(&text).unwrap();
            prop_assert_eq!(&back, &g);
            prop_assert_eq!(to_document(&back), text);
        }
    }

    #[test]
    fn faces_partition_the_interior(cells in patch(6)) {
        if let Some(g) = graph_of(cells) {
            let all: BTreeSet<_> = g.finite_faces().collect();
            let outer = g.periphery().unwrap();
            prop_assert_eq!(g.interior_faces(&outer).unwrap(), all);
            for f in g.finite_faces() {
                let c = DirectedCycle::new(g.face_walk(f).to_vec());
                prop_assert_eq!(g.interior_faces(&c).unwrap(), BTreeSet::from([f]));
            }
        }
    }

    #[test]
    fn clockwise_is_idempotent(cells in patch(6)) {
        if let Some(g) = graph_of(cells) {
            for f in g.finite_faces() {
                let c = DirectedCycle::new(g.face_walk(f).to_vec());
                let cw = g.clockwise(&c).unwrap();
                prop_assert_eq!(&g.clockwise(&c.reversed()).unwrap(), &cw);
                prop_assert_eq!(&g.clockwise(&cw).unwrap(), &cw);
            }
            let outer = g.periphery().unwrap();
            prop_assert_eq!(g.clockwise(&outer.reversed()).unwrap(), outer);
        }
    }

    #[test]
    fn handle_deletion_undoes_each_step(g in elementary_patch(6)) {
        let rfd = find_rfd(&g, None).unwrap();
        prop_assert_eq!(rfd.len(), g.finite_face_count());
        for (i, step) in rfd.steps.iter().enumerate() {
            let smaller = rfd.graphs[i + 1].delete_handle(&step.handle).unwrap();
            prop_assert_eq!(smaller.finite_face_count() + 1, rfd.graphs[i + 1].finite_face_count());
            prop_assert_eq!(&smaller, &rfd.graphs[i]);
        }
    }

    #[test]
    fn decode_inverts_the_coding(g in elementary_patch(6)) {
        prop_assume!(is_forcing_infinite_face(&g).unwrap());
        let rfd = find_rfd(&g, None).unwrap();
        let list = generate_coding(&rfd).unwrap();
        let all = enumerate_matchings(&g, None);
        prop_assert_eq!(list.len(), all.len());
        let order = rfd.face_order();
        let mut seen = BTreeSet::new();
        for c in &list.codes {
            let m = decode(&rfd, c).unwrap();
            prop_assert!(m.is_perfect_in(&g));
            let back = phi_code(&phi_vector(&g, &m).unwrap(), &order);
            prop_assert_eq!(back.as_ref(), Some(c));
            seen.insert(m);
        }
        prop_assert_eq!(seen.len(), all.len());
    }

    #[test]
    fn elementary_benzenoids_verify(g in elementary_patch(5)) {
        let r = verify_graph(&g, None, 10_000).unwrap();
        prop_assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn chain_resonance_graph_is_a_path(k in 1usize..10) {
        let d = build_resonance(&corpus::chain(k).unwrap(), 1000).unwrap();
        prop_assert_eq!(d.node_count(), k + 1);
        prop_assert!(d.is_connected());
        prop_assert!((0..d.node_count()).all(|v| d.neighbors(v).len() <= 2));
        prop_assert_eq!(d.diameter(), Some(k as u16));
    }
}

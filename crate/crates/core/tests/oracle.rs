use std::collections::BTreeSet;

use rescode_core::coder::{
    code_weakly_elementary, coding_stages, decode, generate_coding, phi_code, phi_vector,
    BinaryCode,
};
use rescode_core::corpus::{self, named};
use rescode_core::matching::{
    enumerate_matchings, face_cycle_type, forbidden_edges, is_forcing_infinite_face,
    minimum_matching, CycleType,
};
use rescode_core::resonance::{build_resonance, DEFAULT_ORACLE_CAP};
use rescode_core::rfd::find_rfd;
use rescode_core::verify::verify_graph;
use rescode_core::Error;

fn set(codes: &[&str]) -> BTreeSet<String> {
    codes.iter().map(|s| s.to_string()).collect()
}

fn strings(codes: &[BinaryCode]) -> Vec<String> {
    codes.iter().map(|c| c.to_string()).collect()
}

const FIGURE1_CODES: [&str; 14] = [
    "00000", "10000", "00100", "10100", "00110", "10110", "00001", "10001", "00101", "10101",
    "11101", "00111", "10111", "11111",
];

#[test]
fn figure1_codes_and_stages() {
    let inst = named("figure1").unwrap();
    let rfd = find_rfd(&inst.graph, inst.order.as_deref()).unwrap();
    assert_eq!(rfd.face_order(), vec![1, 2, 3, 4, 5]);
    let list = generate_coding(&rfd).unwrap();
    assert_eq!(list.code_set(), set(&FIGURE1_CODES));
    assert_eq!(list.len(), 14);

    let stages = coding_stages(&rfd);
    let as_set = |i: usize| {
        stages[i]
            .iter()
            .map(|c| c.to_string())
            .collect::<BTreeSet<_>>()
    };
    assert_eq!(as_set(0), set(&["0", "1"]));
    assert_eq!(as_set(1), set(&["00", "10", "11"]));
    assert_eq!(as_set(2), set(&["000", "100", "001", "101", "111"]));
    assert_eq!(
        as_set(3),
        set(&["0000", "1000", "0010", "1010", "1110", "0011", "1011", "1111"])
    );
    assert_eq!(strings(&stages[4]), strings(&list.codes));
}

#[test]
fn figure1_sink_is_all_zeros() {
    let inst = named("figure1").unwrap();
    let rfd = find_rfd(&inst.graph, inst.order.as_deref()).unwrap();
    let m = decode(&rfd, &"00000".parse().unwrap()).unwrap();
    assert_eq!(m, minimum_matching(&inst.graph).unwrap());
}

#[test]
fn figure1_first_face_is_proper_above_the_sink() {
    let inst = named("figure1").unwrap();
    let rfd = find_rfd(&inst.graph, inst.order.as_deref()).unwrap();
    let g = &inst.graph;
    let up = decode(&rfd, &"10000".parse().unwrap()).unwrap();
    let down = decode(&rfd, &"00000".parse().unwrap()).unwrap();
    assert_eq!(face_cycle_type(g, 1, &up), CycleType::Proper);
    assert_eq!(face_cycle_type(g, 1, &down), CycleType::Improper);
}

#[test]
fn figure1_has_no_forbidden_edges_and_a_forcing_infinite_face() {
    let g = named("figure1").unwrap().graph;
    assert!(forbidden_edges(&g).unwrap().is_empty());
    assert!(is_forcing_infinite_face(&g).unwrap());
    assert_eq!(g.periphery().unwrap().len(), 22);
}

#[test]
fn figure3_concatenated_coding() {
    let inst = named("figure3").unwrap();
    let g = inst.graph;
    let cc = code_weakly_elementary(&g, inst.order.as_deref()).unwrap();
    assert_eq!(cc.d(), 4);
    assert_eq!(cc.face_order(), vec![1, 2, 3, 4]);
    assert_eq!(cc.excluded_faces, vec![5]);
    let list = cc.coding_list();
    assert_eq!(
        list.code_set(),
        set(&["0000", "0001", "0011", "0100", "0101", "0111", "1100", "1101", "1111"])
    );
    let d = build_resonance(&g, DEFAULT_ORACLE_CAP).unwrap();
    assert_eq!(d.node_count(), 9);
    for code in &list.codes {
        let m = cc.decode(code).unwrap();
        assert!(d.node_of(&m).is_some(), "{code}");
    }
}

#[test]
fn figure3_isometric_dimension_is_below_face_count() {
    let g = named("figure3").unwrap().graph;
    let r = verify_graph(&g, None, DEFAULT_ORACLE_CAP).unwrap();
    assert!(r.passed(), "{}", r.to_text());
    assert_eq!(r.quantities.idim, Some(4));
    assert_eq!(r.quantities.n, 5);
    assert!(r.check("cartesian_product").unwrap().passed);
}

#[test]
fn forcing_instances_match_oracle() {
    let mut names: Vec<String> = ["hexagon", "naphthalene", "figure1"]
        .map(String::from)
        .to_vec();
    names.extend((1..=8).map(|k| format!("chain({k})")));
    for name in names {
        let inst = named(&name).unwrap();
        let g = &inst.graph;
        let rfd = find_rfd(g, inst.order.as_deref()).unwrap();
        let list = generate_coding(&rfd).unwrap();
        let order = rfd.face_order();
        let all = enumerate_matchings(g, None);
        let oracle: BTreeSet<String> = all
            .iter()
            .map(|m| {
                phi_code(&phi_vector(g, m).unwrap(), &order)
                    .unwrap()
                    .to_string()
            })
            .collect();
        assert_eq!(list.code_set(), oracle, "{name}");
        assert_eq!(list.len(), all.len(), "{name}");
        let decoded: BTreeSet<_> = list
            .codes
            .iter()
            .map(|c| decode(&rfd, c).unwrap())
            .collect();
        assert_eq!(decoded.len(), all.len(), "{name}");
        for c in &list.codes {
            let m = decode(&rfd, c).unwrap();
            assert_eq!(
                phi_code(&phi_vector(g, &m).unwrap(), &order).as_ref(),
                Some(c),
                "{name}"
            );
        }
    }
}

#[test]
fn chain_has_k_plus_one_matchings() {
    for k in 1..=8 {
        let g = corpus::chain(k).unwrap();
        let d = build_resonance(&g, DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(d.node_count(), k + 1);
        assert_eq!(d.edges.len(), k);
    }
}

#[test]
fn coronene_is_the_strict_case() {
    let g = named("coronene").unwrap().graph;
    assert!(!is_forcing_infinite_face(&g).unwrap());
    let rfd = find_rfd(&g, None).unwrap();
    assert!(matches!(
        generate_coding(&rfd),
        Err(Error::InfiniteFaceNotForcing { .. })
    ));
    let r = verify_graph(&g, None, DEFAULT_ORACLE_CAP).unwrap();
    assert!(r.passed(), "{}", r.to_text());
    assert!(r.quantities.idim.unwrap() >= 8);
    assert_eq!(r.quantities.n, 7);
    assert!(r.check("idim_equals_n_iff_forcing").unwrap().passed);
}

#[test]
fn every_corpus_instance_verifies() {
    for name in [
        "hexagon",
        "naphthalene",
        "chain(5)",
        "parallelogram(2,3)",
        "figure1",
        "figure3",
        "coronene",
        "dumbbell",
        "bridged",
    ] {
        let inst = named(name).unwrap();
        let r = verify_graph(&inst.graph, inst.order.as_deref(), DEFAULT_ORACLE_CAP).unwrap();
        assert!(r.passed(), "{name}\n{}", r.to_text());
    }
}

#[test]
fn dumbbell_periphery_is_not_a_cycle() {
    let g = named("dumbbell").unwrap().graph;
    assert!(matches!(
        g.periphery(),
        Err(Error::PeripheryNotCycle { .. })
    ));
    let cc = code_weakly_elementary(&g, None).unwrap();
    assert_eq!(cc.fixed_edges.len(), 1);
    assert_eq!(cc.coding_list().code_set(), set(&["00", "01", "10", "11"]));
}

#[test]
fn naphthalene_rejects_codes_outside_the_list() {
    let g = named("naphthalene").unwrap().graph;
    let rfd = find_rfd(&g, None).unwrap();
    let list = generate_coding(&rfd).unwrap();
    let missing = ["00", "01", "10", "11"]
        .iter()
        .find(|c| !list.code_set().contains(**c))
        .unwrap();
    assert!(matches!(
        decode(&rfd, &missing.parse().unwrap()),
        Err(Error::CodeNotInList { .. })
    ));
    assert!(decode(&rfd, &"0".parse().unwrap()).is_err());
}

#[test]
fn majority_of_three_codes() {
    let p = |s: &str| s.parse::<BinaryCode>().unwrap();
    assert_eq!(
        BinaryCode::majority(&p("00101"), &p("10101"), &p("00111")).to_string(),
        "00101"
    );
}

#[test]
fn handle_deletion_and_non_handles() {
    let g = named("figure1").unwrap().graph;
    let rfd = find_rfd(&g, Some(&[1, 2, 3, 4, 5])).unwrap();
    let s5 = rfd.steps.iter().find(|s| s.face == 5).unwrap();
    let smaller = g.delete_handle(&s5.handle).unwrap();
    assert_eq!(smaller.finite_face_count(), 4);
    assert!(!smaller.has_face(5));

    // An edge shared by two finite faces is interior.
    let shared = g
        .face_edges(1)
        .into_iter()
        .find(|e| g.face_edges(2).contains(e))
        .unwrap();
    let (u, v) = g.endpoints(shared);
    assert!(matches!(
        g.delete_handle(&[u, v]),
        Err(Error::NotAHandle(_) | Error::HandleNotOnPeriphery { .. })
    ));
}

//! Binary coding of perfect matchings along a reducible face decomposition.
//!
//! Digit `i` of a code is the number of cycles of `M ⊕ M_min` enclosing face
//! `s_i`. When the infinite face is forcing, every such number is 0 or 1 and
//! the set of codes can be generated one face at a time without ever
//! building a matching: attaching a handle either keeps the new face at its
//! "negative" value, or sets it to the other value, which is only possible
//! when every adjacent earlier face already has that value too.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matching::{
    elementary_decomposition, face_cycle_type, is_forcing_infinite_face, minimum_matching,
    symmetric_difference_cycles, CycleType, PerfectMatching,
};
use crate::plane_graph::{EdgeId, FaceId, PlaneBipartiteGraph};
use crate::rfd::{find_rfd, RfdSequence, RfdStep};

/// A string of binary digits; the leftmost digit belongs to the first face
/// of the decomposition.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryCode(pub Vec<bool>);

impl BinaryCode {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digit(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn with(&self, digit: bool) -> BinaryCode {
        let mut v = self.0.clone();
        v.push(digit);
        BinaryCode(v)
    }

    pub fn hamming(&self, other: &BinaryCode) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    /// Digitwise majority of three codes of equal length.
    pub fn majority(a: &BinaryCode, b: &BinaryCode, c: &BinaryCode) -> BinaryCode {
        BinaryCode(
            (0..a.len())
                .map(|i| (a.0[i] as u8 + b.0[i] as u8 + c.0[i] as u8) >= 2)
                .collect(),
        )
    }

    pub fn concat(parts: &[&BinaryCode]) -> BinaryCode {
        BinaryCode(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }
}

impl fmt::Display for BinaryCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.0 {
            f.write_str(if d { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BinaryCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidCode(s.to_string())),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BinaryCode)
    }
}

/// Codes in generation order together with the face each digit belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodingList {
    pub face_order: Vec<FaceId>,
    pub codes: Vec<BinaryCode>,
}

impl CodingList {
    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn code_set(&self) -> BTreeSet<String> {
        self.codes.iter().map(|c| c.to_string()).collect()
    }

    /// `faces: s1,s2,...` followed by one code per line.
    pub fn to_text(&self) -> String {
        let faces: Vec<String> = self.face_order.iter().map(|f| format!("s{f}")).collect();
        let mut out = format!("faces: {}\n", faces.join(","));
        for c in &self.codes {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }
}

fn digit_positions(rfd: &RfdSequence, step: &RfdStep) -> Vec<usize> {
    let order = rfd.face_order();
    step.adjacency
        .iter()
        .map(|f| {
            order
                .iter()
                .position(|g| g == f)
                .expect("adjacent face precedes its step")
        })
        .collect()
}

/// Every intermediate list `L_1, …, L_n`.
pub fn coding_stages(rfd: &RfdSequence) -> Vec<Vec<BinaryCode>> {
    let mut stages = vec![vec![BinaryCode(vec![false]), BinaryCode(vec![true])]];
    for step in &rfd.steps {
        let prev = stages.last().unwrap();
        let neg = step.orientation.negative_digit();
        let pos = !neg;
        let adj = digit_positions(rfd, step);
        let mut next: Vec<BinaryCode> = prev.iter().map(|x| x.with(neg)).collect();
        next.extend(
            prev.iter()
                .filter(|x| adj.iter().all(|&j| x.digit(j) == pos))
                .map(|x| x.with(pos)),
        );
        stages.push(next);
    }
    stages
}

/// The coding list of an elementary graph whose infinite face is forcing.
pub fn generate_coding(rfd: &RfdSequence) -> Result<CodingList> {
    let g = rfd.graph();
    if !is_forcing_infinite_face(g)? {
        return Err(Error::InfiniteFaceNotForcing {
            faces: g.finite_faces().collect(),
        });
    }
    Ok(CodingList {
        face_order: rfd.face_order(),
        codes: coding_stages(rfd).pop().unwrap(),
    })
}

/// `φ_M(f)` for every finite face, counting cycles of `m ⊕ minimum` that
/// enclose `f`.
pub fn phi_relative(
    g: &PlaneBipartiteGraph,
    m: &PerfectMatching,
    minimum: &PerfectMatching,
) -> BTreeMap<FaceId, i32> {
    let mut phi: BTreeMap<FaceId, i32> = g.finite_faces().map(|f| (f, 0)).collect();
    for c in symmetric_difference_cycles(g, m, minimum) {
        let inside = g
            .interior_faces(&c)
            .expect("symmetric difference cycles are simple");
        for f in inside {
            *phi.get_mut(&f).unwrap() += 1;
        }
    }
    phi
}

pub fn phi_vector(g: &PlaneBipartiteGraph, m: &PerfectMatching) -> Result<BTreeMap<FaceId, i32>> {
    let minimum = minimum_matching(g)?;
    Ok(phi_relative(g, m, &minimum))
}

/// Reads `φ` in digit order as a binary code, or `None` if some entry is
/// not 0 or 1.
pub fn phi_code(phi: &BTreeMap<FaceId, i32>, order: &[FaceId]) -> Option<BinaryCode> {
    order
        .iter()
        .map(|f| match phi.get(f) {
            Some(0) => Some(false),
            Some(1) => Some(true),
            _ => None,
        })
        .collect::<Option<Vec<bool>>>()
        .map(BinaryCode)
}

/// Checks membership of `code` in the final coding list by replaying the
/// generation rule digit by digit.
fn check_member(rfd: &RfdSequence, code: &BinaryCode) -> Result<()> {
    if code.len() != rfd.len() {
        return Err(Error::CodeNotInList {
            code: code.to_string(),
            reason: format!("expected {} digits, got {}", rfd.len(), code.len()),
        });
    }
    let order = rfd.face_order();
    for (i, step) in rfd.steps.iter().enumerate() {
        let digit = code.digit(i + 1);
        if digit == step.orientation.negative_digit() {
            continue;
        }
        for j in digit_positions(rfd, step) {
            if code.digit(j) != digit {
                return Err(Error::CodeNotInList {
                    code: code.to_string(),
                    reason: format!(
                        "digit {} of s{} requires the same digit for adjacent face s{}",
                        digit as u8, step.face, order[j]
                    ),
                });
            }
        }
    }
    Ok(())
}

/// The perfect matching with the given code.
///
/// The base cycle gets the matching whose face is improper for digit 0 and
/// proper for digit 1. Each step matches the handle interior along the
/// handle; when the digit differs from the step's negative value the new
/// face is then alternating and gets flipped.
pub fn decode(rfd: &RfdSequence, code: &BinaryCode) -> Result<PerfectMatching> {
    check_member(rfd, code)?;
    let base = &rfd.graphs[0];
    let walk = base.face_walk(rfd.base_face);
    let n = walk.len();
    let edge_bound = base.edge_bound();
    let even: Vec<EdgeId> = (0..n)
        .step_by(2)
        .map(|i| base.edge_between(walk[i], walk[(i + 1) % n]).unwrap())
        .collect();
    let mut m = PerfectMatching::from_edges(edge_bound, even);
    let want = if code.digit(0) {
        CycleType::Proper
    } else {
        CycleType::Improper
    };
    if face_cycle_type(base, rfd.base_face, &m) != want {
        m = m.flipped(&base.face_edges(rfd.base_face));
    }

    for (i, step) in rfd.steps.iter().enumerate() {
        let g = &rfd.graphs[i + 1];
        let h = &step.handle;
        let inner: Vec<EdgeId> = (1..h.len() - 2)
            .step_by(2)
            .map(|k| g.edge_between(h[k], h[k + 1]).unwrap())
            .collect();
        m = m.flipped(&inner);
        let digit = code.digit(i + 1);
        if digit != step.orientation.negative_digit() {
            // moving from the negative value up to 1 crosses an improper
            // face; moving down to 0 crosses a proper one
            let needed = if digit {
                CycleType::Improper
            } else {
                CycleType::Proper
            };
            let found = face_cycle_type(g, step.face, &m);
            if found != needed {
                return Err(Error::InternalContractViolation(format!(
                    "face {} is {found:?} before its flip, expected {needed:?}",
                    step.face
                )));
            }
            m = m.flipped(&g.face_edges(step.face));
        }
    }
    Ok(m)
}

/// Coding of one elementary component.
#[derive(Clone, Debug)]
pub struct ComponentCode {
    pub rfd: RfdSequence,
    pub coding: CodingList,
}

/// Coding of a weakly elementary graph as the concatenation of independent
/// codings of its elementary components.
#[derive(Clone, Debug)]
pub struct ComponentCoding {
    /// Components with more than two vertices, in digit order.
    pub components: Vec<ComponentCode>,
    /// Edges forming components of exactly two vertices; matched in every
    /// perfect matching.
    pub fixed_edges: Vec<EdgeId>,
    /// Finite faces of the graph with a forbidden edge on their boundary.
    pub excluded_faces: Vec<FaceId>,
    pub edge_bound: usize,
}

impl ComponentCoding {
    pub fn face_order(&self) -> Vec<FaceId> {
        self.components
            .iter()
            .flat_map(|c| c.coding.face_order.iter().copied())
            .collect()
    }

    /// Total code length.
    pub fn d(&self) -> usize {
        self.components.iter().map(|c| c.rfd.len()).sum()
    }

    /// All concatenated codes; the first component varies slowest.
    pub fn codes(&self) -> Vec<BinaryCode> {
        let mut out = vec![BinaryCode::default()];
        for comp in &self.components {
            out = out
                .iter()
                .flat_map(|prefix| {
                    comp.coding
                        .codes
                        .iter()
                        .map(move |c| BinaryCode::concat(&[prefix, c]))
                })
                .collect();
        }
        out
    }

    pub fn coding_list(&self) -> CodingList {
        CodingList {
            face_order: self.face_order(),
            codes: self.codes(),
        }
    }

    pub fn decode(&self, code: &BinaryCode) -> Result<PerfectMatching> {
        if code.len() != self.d() {
            return Err(Error::CodeNotInList {
                code: code.to_string(),
                reason: format!("expected {} digits, got {}", self.d(), code.len()),
            });
        }
        let mut parts = Vec::new();
        let mut at = 0;
        for comp in &self.components {
            let n = comp.rfd.len();
            let piece = BinaryCode(code.0[at..at + n].to_vec());
            parts.push(decode(&comp.rfd, &piece)?);
            at += n;
        }
        parts.push(PerfectMatching::from_edges(
            self.edge_bound,
            self.fixed_edges.iter().copied(),
        ));
        Ok(PerfectMatching::union(&parts, self.edge_bound))
    }
}

/// Codes a weakly elementary graph component by component. `order`, if
/// given, lists faces in the desired digit order; each component uses the
/// faces of `order` that belong to it, and components follow the position
/// of their first listed face.
pub fn code_weakly_elementary(
    g: &PlaneBipartiteGraph,
    order: Option<&[FaceId]>,
) -> Result<ComponentCoding> {
    let dec = elementary_decomposition(g)?;
    if !dec.weakly_elementary {
        return Err(Error::NotWeaklyElementary(dec.notes.join("; ")));
    }
    let excluded_faces = dec.excluded_faces(g);
    if let Some(order) = order {
        if let Some(f) = order
            .iter()
            .find(|f| excluded_faces.contains(f) || !g.has_face(**f))
        {
            return Err(Error::InvalidOrder(format!(
                "face {f} does not belong to an elementary component"
            )));
        }
    }
    let mut fixed_edges = Vec::new();
    let mut components = Vec::new();
    for comp in &dec.components {
        if comp.is_trivial() {
            fixed_edges.extend(comp.graph.edges().map(|(e, _, _)| e));
            continue;
        }
        let own: BTreeSet<FaceId> = comp.graph.finite_faces().collect();
        let comp_order: Option<Vec<FaceId>> =
            order.map(|o| o.iter().copied().filter(|f| own.contains(f)).collect());
        let rfd = find_rfd(&comp.graph, comp_order.as_deref())?;
        let coding = generate_coding(&rfd)?;
        components.push(ComponentCode { rfd, coding });
    }
    let rank = |c: &ComponentCode| -> (usize, FaceId) {
        let first = *c.coding.face_order.iter().min().unwrap();
        match order {
            Some(o) => (
                c.coding
                    .face_order
                    .iter()
                    .filter_map(|f| o.iter().position(|g| g == f))
                    .min()
                    .unwrap_or(usize::MAX),
                first,
            ),
            None => (0, first),
        }
    };
    components.sort_by_key(rank);
    Ok(ComponentCoding {
        components,
        fixed_edges,
        excluded_faces,
        edge_bound: g.edge_bound(),
    })
}

//! Checks tying the coder to the brute-force resonance graph.
//!
//! Every check is a total scan over matchings, pairs or triples. A failing
//! check carries a witness naming the matchings, faces or codes involved.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::coder::{
    code_weakly_elementary, decode, generate_coding, phi_code, phi_relative, BinaryCode, CodingList,
};
use crate::error::{Error, Result};
use crate::matching::{
    elementary_decomposition, enumerate_matchings, face_cycle_type, forbidden_edges, is_elementary,
    is_forcing_infinite_face, maximum_matching, minimum_matching, symmetric_difference_cycles,
    CycleType, PerfectMatching,
};
use crate::plane_graph::{DirectedCycle, FaceId, PlaneBipartiteGraph};
use crate::resonance::{build_resonance, lattice, psi, LatticeView, ResonanceDigraph};
use crate::rfd::{find_rfd, RfdSequence};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckResult {
    pub fn pass(name: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(name: &str, witness: impl Into<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: false,
            witness: Some(witness.into()),
        }
    }

    fn from_witness(name: &str, witness: Option<String>) -> Self {
        match witness {
            None => CheckResult::pass(name),
            Some(w) => CheckResult::fail(name, w),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Quantities {
    pub vertices: usize,
    pub edges: usize,
    /// Finite faces of the graph.
    pub n: usize,
    /// Code length: finite faces of elementary components with more than
    /// two vertices.
    pub d: usize,
    pub matchings: usize,
    pub components: usize,
    pub forbidden_edges: usize,
    pub forcing: Option<bool>,
    pub idim: Option<usize>,
    pub theta_classes: Option<usize>,
    pub diameter: Option<usize>,
    pub height: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerificationReport {
    pub quantities: Quantities,
    pub checks: Vec<CheckResult>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let q = &self.quantities;
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |x| x.to_string());
        let mut out = String::new();
        let _ = writeln!(
            out,
            "vertices {}  edges {}  finite faces {}  code length {}  matchings {}",
            q.vertices, q.edges, q.n, q.d, q.matchings
        );
        let _ = writeln!(
            out,
            "components {}  forbidden edges {}  forcing {}",
            q.components,
            q.forbidden_edges,
            q.forcing.map_or("-".to_string(), |b| b.to_string())
        );
        let _ = writeln!(
            out,
            "idim {}  theta classes {}  diameter {}  height {}",
            opt(q.idim),
            opt(q.theta_classes),
            opt(q.diameter),
            opt(q.height)
        );
        for c in &self.checks {
            let _ = write!(out, "{} {}", if c.passed { "PASS" } else { "FAIL" }, c.name);
            if let Some(w) = &c.witness {
                let _ = write!(out, ": {w}");
            }
            out.push('\n');
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(
            out,
            "{}",
            if self.passed() {
                "all checks passed"
            } else {
                "verification failed"
            }
        );
        out
    }
}

/// Edges of the resonance graph grouped into classes of the Djoković–Winkler
/// relation. Classes are returned sorted by smallest edge index.
pub fn theta_classes(d: &ResonanceDigraph) -> Result<Vec<Vec<usize>>> {
    if !d.is_connected() {
        return Err(Error::ThetaNotTransitive(
            "resonance graph is disconnected".into(),
        ));
    }
    let m = d.edges.len();
    let dist = |a: usize, b: usize| d.distance(a, b).unwrap() as i64;
    let related = |e: usize, f: usize| {
        let (x, y) = (d.edges[e].from, d.edges[e].to);
        let (u, v) = (d.edges[f].from, d.edges[f].to);
        dist(x, u) + dist(y, v) != dist(x, v) + dist(y, u)
    };
    let mut parent: Vec<usize> = (0..m).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in 0..m {
        for f in e + 1..m {
            if related(e, f) {
                let (a, b) = (root(&mut parent, e), root(&mut parent, f));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in 0..m {
        let r = root(&mut parent, e);
        classes.entry(r).or_default().push(e);
    }
    for class in classes.values() {
        for (i, &e) in class.iter().enumerate() {
            for &f in &class[i + 1..] {
                if !related(e, f) {
                    return Err(Error::ThetaNotTransitive(format!(
                        "edges {e} and {f} share a class but are not in relation"
                    )));
                }
            }
        }
    }
    Ok(classes.into_values().collect())
}

/// Hamming distance between codes equals graph distance for every pair of
/// nodes. `codes[v]` is the code of node `v`.
pub fn check_isometric(codes: &[BinaryCode], d: &ResonanceDigraph) -> CheckResult {
    let n = d.node_count();
    for a in 0..n {
        for b in 0..a {
            let h = codes[a].hamming(&codes[b]);
            let dist = d.distance(a, b).map(|x| x as usize);
            if dist != Some(h) {
                return CheckResult::fail(
                    "hamming_equals_distance",
                    format!(
                        "matchings {a} ({}) and {b} ({}): hamming {h}, distance {dist:?}",
                        codes[a], codes[b]
                    ),
                );
            }
        }
    }
    CheckResult::pass("hamming_equals_distance")
}

/// Every triple of nodes has exactly one vertex lying on shortest paths
/// between each pair.
pub fn check_median(d: &ResonanceDigraph) -> CheckResult {
    let n = d.node_count();
    if !d.is_connected() {
        return CheckResult::fail("median", "resonance graph is disconnected");
    }
    let dist = |a: usize, b: usize| d.distance(a, b).unwrap();
    let between = |x: usize, w: usize, y: usize| dist(x, w) + dist(w, y) == dist(x, y);
    for x in 0..n {
        for y in x..n {
            for z in y..n {
                let medians = (0..n)
                    .filter(|&w| between(x, w, y) && between(y, w, z) && between(x, w, z))
                    .count();
                if medians != 1 {
                    return CheckResult::fail(
                        "median",
                        format!("matchings {x}, {y}, {z} have {medians} medians"),
                    );
                }
            }
        }
    }
    CheckResult::pass("median")
}

/// The digitwise majority of any three codes is again a code.
pub fn check_majority_closure(codes: &[BinaryCode]) -> CheckResult {
    let set: HashSet<&BinaryCode> = codes.iter().collect();
    for (i, a) in codes.iter().enumerate() {
        for (j, b) in codes.iter().enumerate().skip(i) {
            for c in codes.iter().skip(j) {
                let m = BinaryCode::majority(a, b, c);
                if !set.contains(&m) {
                    return CheckResult::fail(
                        "code_majority_closure",
                        format!("majority({a}, {b}, {c}) = {m} is not a code"),
                    );
                }
            }
        }
    }
    CheckResult::pass("code_majority_closure")
}

/// Maps each code through `decoder` to a node of `d`, checking that this is
/// a bijection. Returns the code of every node.
pub fn codes_by_node(
    list: &CodingList,
    d: &ResonanceDigraph,
    decoder: impl Fn(&BinaryCode) -> Result<PerfectMatching>,
) -> std::result::Result<Vec<BinaryCode>, CheckResult> {
    let name = "decode_is_bijection";
    if list.len() != d.node_count() {
        return Err(CheckResult::fail(
            name,
            format!("{} codes for {} matchings", list.len(), d.node_count()),
        ));
    }
    let mut by_node: Vec<Option<BinaryCode>> = vec![None; d.node_count()];
    for code in &list.codes {
        let m = decoder(code).map_err(|e| CheckResult::fail(name, format!("code {code}: {e}")))?;
        let Some(v) = d.node_of(&m) else {
            return Err(CheckResult::fail(
                name,
                format!("code {code} decodes to a non-matching {m}"),
            ));
        };
        if let Some(prev) = by_node[v].replace(code.clone()) {
            return Err(CheckResult::fail(
                name,
                format!("codes {prev} and {code} both decode to matching {v}"),
            ));
        }
    }
    Ok(by_node.into_iter().map(|c| c.unwrap()).collect())
}

fn idim_and_witness(d: &ResonanceDigraph) -> std::result::Result<usize, String> {
    theta_classes(d).map(|c| c.len()).map_err(|e| e.to_string())
}

/// `idim = n` exactly when the infinite face is forcing, `idim ≥ n`, and
/// `idim` equals both the lattice height and the diameter.
pub fn check_idim_forcing(g: &PlaneBipartiteGraph, d: &ResonanceDigraph) -> CheckResult {
    let name = "idim_equals_n_iff_forcing";
    let n = g.finite_face_count();
    let idim = match idim_and_witness(d) {
        Ok(x) => x,
        Err(w) => return CheckResult::fail(name, w),
    };
    let forcing = match is_forcing_infinite_face(g) {
        Ok(f) => f,
        Err(e) => return CheckResult::fail(name, e.to_string()),
    };
    let height = match lattice(d) {
        Ok(l) => l.height,
        Err(e) => return CheckResult::fail(name, e.to_string()),
    };
    let diameter = d.diameter().map(|x| x as usize);
    if idim < n {
        return CheckResult::fail(name, format!("idim {idim} < {n} finite faces"));
    }
    if (idim == n) != forcing {
        return CheckResult::fail(name, format!("idim {idim}, n {n}, forcing {forcing}"));
    }
    if Some(idim) != diameter || idim != height {
        return CheckResult::fail(
            name,
            format!("idim {idim}, height {height}, diameter {diameter:?}"),
        );
    }
    CheckResult::pass(name)
}

/// The resonance graph is the Cartesian product of the resonance graphs of
/// the elementary components, via restriction of matchings, and the
/// isometric dimensions add up.
pub fn check_product(g: &PlaneBipartiteGraph, d: &ResonanceDigraph, cap: usize) -> CheckResult {
    let name = "cartesian_product";
    let dec = match elementary_decomposition(g) {
        Ok(x) => x,
        Err(e) => return CheckResult::fail(name, e.to_string()),
    };
    let mut parts = Vec::new();
    for comp in dec.components.iter().filter(|c| !c.is_trivial()) {
        match build_resonance(&comp.graph, cap) {
            Ok(r) => parts.push((comp, r)),
            Err(e) => return CheckResult::fail(name, e.to_string()),
        }
    }
    let expected_nodes: usize = parts.iter().map(|(_, r)| r.node_count()).product();
    if expected_nodes != d.node_count() {
        return CheckResult::fail(
            name,
            format!(
                "product has {expected_nodes} nodes, resonance graph {}",
                d.node_count()
            ),
        );
    }
    let mut tuples = Vec::with_capacity(d.node_count());
    let mut seen = HashSet::new();
    for (v, m) in d.matchings.iter().enumerate() {
        let mut t = Vec::with_capacity(parts.len());
        for (comp, r) in &parts {
            match r.node_of(&m.restricted_to(&comp.graph)) {
                Some(x) => t.push(x),
                None => {
                    return CheckResult::fail(
                        name,
                        format!("matching {v} does not restrict to a matching of a component"),
                    )
                }
            }
        }
        if !seen.insert(t.clone()) {
            return CheckResult::fail(
                name,
                format!("matching {v} restricts like another matching"),
            );
        }
        tuples.push(t);
    }
    let expected_edges: usize = (0..parts.len())
        .map(|k| {
            parts
                .iter()
                .enumerate()
                .map(|(l, (_, r))| {
                    if l == k {
                        r.edges.len()
                    } else {
                        r.node_count()
                    }
                })
                .product::<usize>()
        })
        .sum();
    if parts.is_empty() && !d.edges.is_empty() {
        return CheckResult::fail(name, "edges without any component");
    }
    if expected_edges != d.edges.len() {
        return CheckResult::fail(
            name,
            format!(
                "product has {expected_edges} edges, resonance graph {}",
                d.edges.len()
            ),
        );
    }
    for (i, e) in d.edges.iter().enumerate() {
        let (a, b) = (&tuples[e.from], &tuples[e.to]);
        let differing: Vec<usize> = (0..a.len()).filter(|&k| a[k] != b[k]).collect();
        let ok = differing.len() == 1 && {
            let k = differing[0];
            let r = &parts[k].1;
            r.neighbors(a[k]).iter().any(|&(w, idx)| {
                w == b[k] && r.edges[idx].face == e.face && r.edges[idx].from == a[k]
            })
        };
        if !ok {
            return CheckResult::fail(
                name,
                format!("edge {i} ({} -> {}) is not a product edge", e.from, e.to),
            );
        }
    }
    let total = match idim_and_witness(d) {
        Ok(x) => x,
        Err(w) => return CheckResult::fail("idim_additive", w),
    };
    let mut sum = 0;
    for (_, r) in &parts {
        match idim_and_witness(r) {
            Ok(x) => sum += x,
            Err(w) => return CheckResult::fail("idim_additive", w),
        }
    }
    if total != sum {
        return CheckResult::fail(name, format!("idim {total} but components sum to {sum}"));
    }
    CheckResult::pass(name)
}

/// The four equivalent statements for an elementary graph, each evaluated
/// on its own.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalentStatements {
    /// `φ` is binary and embeds the resonance graph isometrically, with the
    /// lattice covers matching the digraph.
    pub binary_isometric: bool,
    /// No two cycles of any `M1 ⊕ M2` are nested.
    pub disjoint_interiors: bool,
    pub forcing: bool,
    /// Every step satisfies `M(G_i; P+) = M(G_i; P+, ∂s_i)` and the coder
    /// agrees with the oracle.
    pub peripheral_expansions: bool,
    pub witnesses: Vec<String>,
}

impl EquivalentStatements {
    pub fn agree(&self) -> bool {
        let v = [
            self.binary_isometric,
            self.disjoint_interiors,
            self.forcing,
            self.peripheral_expansions,
        ];
        v.iter().all(|&x| x == v[0])
    }
}

/// Matchings of every intermediate graph with both handle end edges matched
/// all make the new face alternating.
pub fn check_positive_sides(rfd: &RfdSequence, cap: usize) -> std::result::Result<(), String> {
    for (i, step) in rfd.steps.iter().enumerate() {
        let g = &rfd.graphs[i + 1];
        let first = g.edge_between(step.handle[0], step.handle[1]).unwrap();
        let all = enumerate_matchings(g, Some(cap + 1));
        if all.len() > cap {
            return Err(format!(
                "more than {cap} matchings in an intermediate graph"
            ));
        }
        for (k, m) in all.iter().enumerate() {
            if m.contains(first) && face_cycle_type(g, step.face, m) == CycleType::NotAlternating {
                return Err(format!(
                    "step adding s{}: matching {k} of the intermediate graph has the handle end edges \
                     but s{} is not resonant",
                    step.face, step.face
                ));
            }
        }
    }
    Ok(())
}

struct Oracle<'a> {
    g: &'a PlaneBipartiteGraph,
    d: ResonanceDigraph,
    lattice: Option<LatticeView>,
    phi: Vec<BTreeMap<FaceId, i32>>,
}

impl Oracle<'_> {
    fn phi_diff(&self, a: usize, b: usize) -> BTreeMap<FaceId, i32> {
        self.phi[a]
            .iter()
            .map(|(&f, &x)| (f, x - self.phi[b][&f]))
            .collect()
    }
}

fn equivalent_statements(
    o: &Oracle,
    rfd: &RfdSequence,
    coder_agrees: bool,
    cap: usize,
) -> Result<EquivalentStatements> {
    let g = o.g;
    let order = rfd.face_order();
    let mut witnesses = Vec::new();

    let codes: Option<Vec<BinaryCode>> = o.phi.iter().map(|p| phi_code(p, &order)).collect();
    let binary_isometric = match &codes {
        None => {
            let v = o
                .phi
                .iter()
                .position(|p| phi_code(p, &order).is_none())
                .unwrap();
            witnesses.push(format!(
                "isometry: phi of matching {v} is not binary: {:?}",
                o.phi[v]
            ));
            false
        }
        Some(c) => {
            let iso = check_isometric(c, &o.d);
            let hasse = check_hasse(o);
            if let Some(w) = iso.witness.or(hasse.witness) {
                witnesses.push(format!("isometry: {w}"));
                false
            } else {
                true
            }
        }
    };

    let mut disjoint_interiors = true;
    'pairs: for a in 0..o.d.node_count() {
        for b in a + 1..o.d.node_count() {
            let cycles = symmetric_difference_cycles(g, &o.d.matchings[a], &o.d.matchings[b]);
            let interiors: Vec<BTreeSet<FaceId>> = cycles
                .iter()
                .map(|c| g.interior_faces(c))
                .collect::<Result<_>>()?;
            for i in 0..interiors.len() {
                for j in i + 1..interiors.len() {
                    if !interiors[i].is_disjoint(&interiors[j]) {
                        witnesses.push(format!(
                            "nesting: matchings {a} and {b}: cycles {} and {} are nested",
                            cycles[i], cycles[j]
                        ));
                        disjoint_interiors = false;
                        break 'pairs;
                    }
                }
            }
        }
    }

    let forcing = is_forcing_infinite_face(g)?;
    let positive = check_positive_sides(rfd, cap);
    if let Err(w) = &positive {
        witnesses.push(format!("expansions: {w}"));
    }
    if !coder_agrees {
        witnesses
            .push("expansions: coder output differs from the oracle or the coder refused".into());
    }
    Ok(EquivalentStatements {
        binary_isometric,
        disjoint_interiors,
        forcing,
        peripheral_expansions: positive.is_ok() && coder_agrees,
        witnesses,
    })
}

/// Cover pairs of the lattice are exactly the directed resonance edges.
fn check_hasse(o: &Oracle) -> CheckResult {
    let name = "hasse_equals_digraph";
    let Some(l) = &o.lattice else {
        return CheckResult::fail(name, "no lattice");
    };
    let n = o.d.node_count();
    let mut arcs = HashSet::new();
    for e in &o.d.edges {
        arcs.insert((e.from, e.to));
    }
    for a in 0..n {
        for b in 0..n {
            if l.covers(a, b) != arcs.contains(&(a, b)) {
                return CheckResult::fail(
                    name,
                    format!(
                        "matching {a} over {b}: cover {}, arc {}",
                        l.covers(a, b),
                        arcs.contains(&(a, b))
                    ),
                );
            }
        }
    }
    CheckResult::pass(name)
}

fn structural_checks(o: &Oracle, report: &mut VerificationReport) -> Result<()> {
    let g = o.g;
    let d = &o.d;
    let n = d.node_count();

    let mut in_some = BTreeSet::new();
    for m in &d.matchings {
        in_some.extend(m.edges());
    }
    let forbidden = forbidden_edges(g)?;
    let never: BTreeSet<_> = g
        .edges()
        .map(|(e, _, _)| e)
        .filter(|e| !in_some.contains(e))
        .collect();
    report.checks.push(CheckResult::from_witness(
        "forbidden_edges_match_enumeration",
        (forbidden != never).then(|| format!("tested {forbidden:?}, enumerated {never:?}")),
    ));

    report.checks.push(match &o.lattice {
        Some(_) => CheckResult::pass("distributive_lattice"),
        None => CheckResult::fail("distributive_lattice", "see notes"),
    });
    report.checks.push(check_hasse(o));

    let min = d.node_of(&minimum_matching(g)?);
    let max = d.node_of(&maximum_matching(g)?);
    let (sinks, sources) = (d.sinks(), d.sources());
    report.checks.push(CheckResult::from_witness(
        "unique_sink_is_minimum",
        (sinks.len() != 1
            || Some(sinks[0]) != min
            || sources.len() != 1
            || Some(sources[0]) != max)
            .then(|| {
                format!("sinks {sinks:?} sources {sources:?} minimum {min:?} maximum {max:?}")
            }),
    ));

    let mut psi_mismatch = None;
    'outer: for a in 0..n {
        for b in 0..n {
            let p = psi(g, &d.matchings[a], &d.matchings[b])?;
            if p != o.phi_diff(a, b) {
                psi_mismatch = Some(format!(
                    "matchings {a} and {b}: psi {p:?}, phi difference {:?}",
                    o.phi_diff(a, b)
                ));
                break 'outer;
            }
        }
    }
    report.checks.push(CheckResult::from_witness(
        "phi_difference_equals_psi",
        psi_mismatch,
    ));

    let mut direction = None;
    for e in &d.edges {
        let diff = o.phi_diff(e.from, e.to);
        if diff.iter().any(|(&f, &x)| x != i32::from(f == e.face)) {
            direction = Some(format!(
                "edge {} -> {} labeled s{}: phi difference {diff:?}",
                e.from, e.to, e.face
            ));
            break;
        }
    }
    report.checks.push(CheckResult::from_witness(
        "edges_point_down_one_face",
        direction,
    ));

    report.checks.push(check_median(d));

    match theta_classes(d) {
        Ok(classes) => {
            report.checks.push(CheckResult::pass("theta_transitive"));
            report.quantities.theta_classes = Some(classes.len());
            report.quantities.idim = Some(classes.len());
        }
        Err(e) => report
            .checks
            .push(CheckResult::fail("theta_transitive", e.to_string())),
    }
    Ok(())
}

fn check_face_classes(o: &Oracle, report: &mut VerificationReport) {
    let g = o.g;
    let Ok(classes) = theta_classes(&o.d) else {
        return;
    };
    let mut witness = None;
    for s in g.finite_faces() {
        if crate::rfd::is_reducible_face(g, s).is_none() {
            continue;
        }
        let labeled: Vec<usize> = (0..o.d.edges.len())
            .filter(|&i| o.d.edges[i].face == s)
            .collect();
        if !classes.contains(&labeled) {
            witness = Some(format!("edges labeled s{s} do not form a theta class"));
            break;
        }
    }
    report.checks.push(CheckResult::from_witness(
        "reducible_face_labels_theta_class",
        witness,
    ));

    let mut resonant = None;
    let periphery = g.periphery().ok();
    for f in g.faces() {
        let hit = o.d.matchings.iter().any(|m| {
            if f == g.infinite_face() {
                periphery.as_ref().is_some_and(|c: &DirectedCycle| {
                    crate::matching::alternating_cycle_type(g, c, m)
                        .is_ok_and(|t| t != CycleType::NotAlternating)
                })
            } else {
                face_cycle_type(g, f, m) != CycleType::NotAlternating
            }
        });
        if !hit {
            resonant = Some(format!("face {f} is resonant in no perfect matching"));
            break;
        }
    }
    report
        .checks
        .push(CheckResult::from_witness("every_face_resonant", resonant));
}

/// Compares a coding list with the oracle: codes decode bijectively onto
/// the matchings, each decoded matching has `φ` equal to its code, Hamming
/// distance equals graph distance, and codes are closed under majority.
fn coder_checks(
    o: &Oracle,
    list: &CodingList,
    decoder: impl Fn(&BinaryCode) -> Result<PerfectMatching>,
    report: &mut VerificationReport,
) -> bool {
    let from_oracle: BTreeSet<String> = o
        .phi
        .iter()
        .map(|p| phi_code(p, &list.face_order).map_or_else(|| format!("{p:?}"), |c| c.to_string()))
        .collect();
    let sets_equal = list.code_set() == from_oracle;
    report.checks.push(CheckResult::from_witness(
        "coding_equals_phi_set",
        (!sets_equal).then(|| {
            let extra: Vec<_> = list.code_set().difference(&from_oracle).cloned().collect();
            let missing: Vec<_> = from_oracle.difference(&list.code_set()).cloned().collect();
            format!("only in coding {extra:?}, only in oracle {missing:?}")
        }),
    ));
    let by_node = match codes_by_node(list, &o.d, decoder) {
        Ok(c) => {
            report.checks.push(CheckResult::pass("decode_is_bijection"));
            c
        }
        Err(fail) => {
            report.checks.push(fail);
            return false;
        }
    };
    let mut round_trip = None;
    for (v, code) in by_node.iter().enumerate() {
        if phi_code(&o.phi[v], &list.face_order).as_ref() != Some(code) {
            round_trip = Some(format!(
                "code {code} decodes to matching {v} with phi {:?}",
                o.phi[v]
            ));
            break;
        }
    }
    let round_ok = round_trip.is_none();
    report.checks.push(CheckResult::from_witness(
        "phi_of_decode_is_identity",
        round_trip,
    ));
    let iso = check_isometric(&by_node, &o.d);
    let iso_ok = iso.passed;
    report.checks.push(iso);
    let maj = check_majority_closure(&list.codes);
    let maj_ok = maj.passed;
    report.checks.push(maj);
    sets_equal && round_ok && iso_ok && maj_ok
}

/// Runs every check that applies to `g`.
///
/// Fails with [`Error::NotWeaklyElementary`] when deleting forbidden edges
/// creates new faces, and with [`Error::CapExceeded`] when `g` has more than
/// `cap` perfect matchings.
pub fn verify_graph(
    g: &PlaneBipartiteGraph,
    order: Option<&[FaceId]>,
    cap: usize,
) -> Result<VerificationReport> {
    let dec = elementary_decomposition(g)?;
    if !dec.weakly_elementary {
        return Err(Error::NotWeaklyElementary(dec.notes.join("; ")));
    }
    let d = build_resonance(g, cap)?;
    let mut report = VerificationReport::default();
    report.notes.extend(dec.notes.iter().cloned());
    let lattice = match lattice(&d) {
        Ok(l) => Some(l),
        Err(e) => {
            report.notes.push(e.to_string());
            None
        }
    };
    let minimum = minimum_matching(g)?;
    let phi = d
        .matchings
        .iter()
        .map(|m| phi_relative(g, m, &minimum))
        .collect();
    let o = Oracle { g, d, lattice, phi };

    let q = &mut report.quantities;
    q.vertices = g.vertex_count();
    q.edges = g.edge_count();
    q.n = g.finite_face_count();
    q.matchings = o.d.node_count();
    q.components = dec.components.len();
    q.forbidden_edges = dec.forbidden.len();
    q.forcing = is_forcing_infinite_face(g).ok();
    q.diameter = o.d.diameter().map(|x| x as usize);
    q.height = o.lattice.as_ref().map(|l| l.height);
    q.d = dec
        .components
        .iter()
        .filter(|c| !c.is_trivial())
        .map(|c| c.graph.finite_face_count())
        .sum();

    structural_checks(&o, &mut report)?;

    let elementary = g.vertex_count() > 2 && is_elementary(g);
    if elementary {
        check_face_classes(&o, &mut report);
        let rfd = find_rfd(g, order)?;
        report.checks.push(CheckResult::from_witness(
            "rfd_invariants",
            rfd.check().err().map(|e| e.to_string()),
        ));
        let mut not_elementary = None;
        let mut forcing_lost = None;
        let forcing = is_forcing_infinite_face(g)?;
        for gi in &rfd.graphs {
            if !is_elementary(gi) {
                not_elementary = Some(format!(
                    "intermediate graph with {} faces",
                    gi.finite_face_count()
                ));
            }
            if forcing && !is_forcing_infinite_face(gi)? {
                forcing_lost = Some(format!(
                    "intermediate graph with {} faces",
                    gi.finite_face_count()
                ));
            }
        }
        report.checks.push(CheckResult::from_witness(
            "rfd_graphs_elementary",
            not_elementary,
        ));
        report.checks.push(CheckResult::from_witness(
            "rfd_graphs_keep_forcing",
            forcing_lost,
        ));
        report.checks.push(check_idim_forcing(g, &o.d));

        let coder_agrees = match generate_coding(&rfd) {
            Ok(list) => coder_checks(&o, &list, |c| decode(&rfd, c), &mut report),
            Err(Error::InfiniteFaceNotForcing { .. }) => {
                report.notes.push(
                    "infinite face is not forcing: no binary coding, coder checks skipped".into(),
                );
                false
            }
            Err(e) => return Err(e),
        };
        let eq = equivalent_statements(&o, &rfd, coder_agrees, cap)?;
        report.notes.push(
            "nested-cycle scan covers the cycles of M1 ⊕ M2 over all pairs of perfect matchings"
                .into(),
        );
        report.checks.push(CheckResult::from_witness(
            "equivalent_statements_agree",
            (!eq.agree()).then(|| {
                format!(
                    "binary/isometric {}, disjoint interiors {}, forcing {}, peripheral expansions {}; {}",
                    eq.binary_isometric,
                    eq.disjoint_interiors,
                    eq.forcing,
                    eq.peripheral_expansions,
                    eq.witnesses.join("; ")
                )
            }),
        ));
    } else {
        report.checks.push(check_product(g, &o.d, cap));
        match code_weakly_elementary(g, order) {
            Ok(cc) => {
                let list = cc.coding_list();
                coder_checks(&o, &list, |c| cc.decode(c), &mut report);
                let excluded = cc.excluded_faces.clone();
                if !excluded.is_empty() {
                    report.notes.push(format!("faces without a digit: {excluded:?}"));
                }
            }
            Err(Error::InfiniteFaceNotForcing { faces }) => report.notes.push(format!(
                "component with faces {faces:?} has a non-forcing infinite face; coder checks skipped"
            )),
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::resonance::DEFAULT_ORACLE_CAP;

    #[test]
    fn hexagon_report_passes() {
        let g = corpus::chain(1).unwrap();
        let r = verify_graph(&g, None, DEFAULT_ORACLE_CAP).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.quantities.idim, Some(1));
    }

    #[test]
    fn broken_codes_fail_isometry_with_witness() {
        let g = corpus::chain(1).unwrap();
        let d = build_resonance(&g, 10).unwrap();
        let codes = vec!["0".parse().unwrap(), "0".parse().unwrap()];
        let r = check_isometric(&codes, &d);
        assert!(!r.passed);
        assert!(r.witness.unwrap().contains("hamming 0"));
    }

    #[test]
    fn majority_closure_detects_missing_code() {
        let p = |s: &str| s.parse::<BinaryCode>().unwrap();
        assert!(check_majority_closure(&[p("00"), p("11")]).passed);
        assert!(!check_majority_closure(&[p("110"), p("011"), p("101")]).passed);
    }
}

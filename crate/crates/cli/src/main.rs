use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rescode_core::coder::{
    code_weakly_elementary, coding_stages, decode, generate_coding, BinaryCode, CodingList,
};
use rescode_core::corpus::{self, INSTANCE_NAMES};
use rescode_core::matching::{elementary_decomposition, is_elementary};
use rescode_core::plane_graph::document::{parse_graph, to_document};
use rescode_core::resonance::{build_resonance, DEFAULT_ORACLE_CAP};
use rescode_core::rfd::find_rfd;
use rescode_core::verify::{codes_by_node, verify_graph};
use rescode_core::{Error, FaceId, PlaneBipartiteGraph};

#[derive(Parser, Debug)]
#[command(
    name = "rescode",
    version,
    about = "Binary coding of perfect matchings of plane bipartite graphs"
)]
struct Cli {
    /// Named instance, e.g. figure1, coronene, chain(4).
    #[arg(long, global = true, conflicts_with = "input")]
    instance: Option<String>,

    /// Graph document (JSON).
    #[arg(long, global = true)]
    input: Option<PathBuf>,

    /// Face order for the decomposition, e.g. s1,s2,s5 or 1,2,5.
    #[arg(long, global = true, value_delimiter = ',')]
    order: Option<Vec<String>>,

    /// Maximum number of perfect matchings the brute-force oracle may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the embedding and report every violation.
    Validate,
    /// Forbidden edges and elementary components.
    Components,
    /// Reducible face decomposition.
    Rfd,
    /// Binary codes of all perfect matchings.
    Code {
        /// Also print the intermediate lists.
        #[arg(long)]
        stages: bool,
    },
    /// Perfect matching with the given code.
    Decode { code: String },
    /// Resonance digraph built by enumeration.
    Resonance,
    /// Compare the coder against the oracle and check the structural theorems.
    Verify,
    /// Coder and oracle wall times.
    Bench,
    /// Graph document of the input.
    Export,
}

/// An error together with the exit status it maps to.
struct Failure {
    status: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_)
            | Error::InvalidEmbedding(_)
            | Error::NotBipartite { .. }
            | Error::UnknownInstance(_)
            | Error::InvalidHexSpec(_)
            | Error::DisconnectedSpec(_) => 2,
            Error::NotWeaklyElementary(_) | Error::NonTermination { .. } => 3,
            Error::InfiniteFaceNotForcing { .. } => 4,
            Error::CapExceeded { .. } => 6,
            _ => 1,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn other(message: impl Into<String>) -> Failure {
    Failure {
        status: 1,
        message: message.into(),
    }
}

struct Output {
    text: String,
    status: u8,
}

impl From<String> for Output {
    fn from(text: String) -> Self {
        Output { text, status: 0 }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &out.text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.status)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.status)
        }
    }
}

fn load(cli: &Cli) -> Result<(PlaneBipartiteGraph, Option<Vec<FaceId>>), Failure> {
    let (g, default_order) = match (&cli.instance, &cli.input) {
        (Some(name), None) => {
            let inst = corpus::named(name)?;
            (inst.graph, inst.order)
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| other(format!("cannot read {}: {e}", path.display())))?;
            (parse_graph(&text)?, None)
        }
        _ => {
            return Err(Failure {
                status: 2,
                message: format!(
                    "give exactly one of --instance or --input; instances: {}",
                    INSTANCE_NAMES.join(", ")
                ),
            })
        }
    };
    let order = match &cli.order {
        Some(items) => Some(parse_order(items)?),
        None => default_order,
    };
    Ok((g, order))
}

fn parse_order(items: &[String]) -> Result<Vec<FaceId>, Failure> {
    items
        .iter()
        .map(|s| {
            let t = s.trim();
            t.strip_prefix('s')
                .unwrap_or(t)
                .parse()
                .map_err(|_| Failure::from(Error::InvalidOrder(format!("bad face id {t:?}"))))
        })
        .collect()
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    if let Command::Bench = cli.command {
        return bench(cli).map(Output::from);
    }
    if let Command::Validate = cli.command {
        return validate(cli);
    }
    let (g, order) = load(cli)?;
    let order = order.as_deref();
    let format = cli.format.unwrap_or(Format::Text);
    let text = match &cli.command {
        Command::Components => components(&g, format)?,
        Command::Rfd => rfd(&g, order, format)?,
        Command::Code { stages } => code(&g, order, *stages, format)?,
        Command::Decode { code } => decode_cmd(&g, order, code, format)?,
        Command::Resonance => resonance(&g, order, cap(cli), cli.format.unwrap_or(Format::Dot))?,
        Command::Verify => {
            let report = verify_graph(&g, order, cap(cli))?;
            let text = match format {
                Format::Json => report.to_json(),
                _ => report.to_text(),
            };
            return Ok(Output {
                text,
                status: if report.passed() { 0 } else { 5 },
            });
        }
        Command::Export => to_document(&g),
        Command::Validate | Command::Bench => unreachable!(),
    };
    Ok(text.into())
}

fn validate(cli: &Cli) -> Result<Output, Failure> {
    // Construction rejects invalid embeddings with the full violation list,
    // so a graph that loads is re-validated only for the report.
    let (g, _) = load(cli)?;
    let report = g.validate();
    let text = match cli.format {
        Some(Format::Json) => pretty(&json!({
            "valid": report.is_valid(),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "finite_faces": g.finite_face_count(),
            "violations": report.violations,
        })),
        _ => format!(
            "valid: {} vertices, {} edges, {} finite faces\n",
            g.vertex_count(),
            g.edge_count(),
            g.finite_face_count()
        ),
    };
    Ok(Output {
        text,
        status: if report.is_valid() { 0 } else { 2 },
    })
}

fn cap(cli: &Cli) -> usize {
    usize::try_from(cli.cap).unwrap_or(usize::MAX)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn face_list(faces: impl IntoIterator<Item = FaceId>) -> String {
    faces
        .into_iter()
        .map(|f| format!("s{f}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn components(g: &PlaneBipartiteGraph, format: Format) -> Result<String, Failure> {
    let dec = elementary_decomposition(g)?;
    let excluded = dec.excluded_faces(g);
    if format == Format::Json {
        let comps: Vec<Value> = dec
            .components
            .iter()
            .map(|c| {
                json!({
                    "vertices": c.graph.vertices().collect::<Vec<_>>(),
                    "edges": c.graph.edges().map(|(e, _, _)| e).collect::<Vec<_>>(),
                    "faces": c.graph.finite_faces().collect::<Vec<_>>(),
                    "new_faces": c.new_faces,
                })
            })
            .collect();
        return Ok(pretty(&json!({
            "weakly_elementary": dec.weakly_elementary,
            "forbidden_edges": dec.forbidden,
            "excluded_faces": excluded,
            "components": comps,
            "notes": dec.notes,
        })));
    }
    let mut out = format!(
        "forbidden edges: {}\nweakly elementary: {}\n",
        dec.forbidden
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        dec.weakly_elementary
    );
    if !excluded.is_empty() {
        out.push_str(&format!(
            "faces outside components: {}\n",
            face_list(excluded)
        ));
    }
    for (i, c) in dec.components.iter().enumerate() {
        out.push_str(&format!(
            "component {}: {} vertices, {} edges, faces {}\n",
            i + 1,
            c.graph.vertex_count(),
            c.graph.edge_count(),
            face_list(c.graph.finite_faces())
        ));
    }
    for n in &dec.notes {
        out.push_str(&format!("note: {n}\n"));
    }
    Ok(out)
}

fn rfd(
    g: &PlaneBipartiteGraph,
    order: Option<&[FaceId]>,
    format: Format,
) -> Result<String, Failure> {
    let seq = find_rfd(g, order)?;
    if format == Format::Json {
        return Ok(pretty(&json!({
            "base_face": seq.base_face,
            "face_order": seq.face_order(),
            "steps": seq.steps,
        })));
    }
    Ok(seq.describe())
}

/// Codes per elementary graph, or the concatenated component coding.
fn coding(g: &PlaneBipartiteGraph, order: Option<&[FaceId]>) -> Result<CodingList, Failure> {
    if g.vertex_count() > 2 && is_elementary(g) {
        Ok(generate_coding(&find_rfd(g, order)?)?)
    } else {
        Ok(code_weakly_elementary(g, order)?.coding_list())
    }
}

fn code(
    g: &PlaneBipartiteGraph,
    order: Option<&[FaceId]>,
    stages: bool,
    format: Format,
) -> Result<String, Failure> {
    let list = coding(g, order)?;
    let stage_lists = if stages {
        if !is_elementary(g) {
            return Err(other("--stages needs an elementary graph"));
        }
        Some(coding_stages(&find_rfd(g, order)?))
    } else {
        None
    };
    let strings = |v: &[BinaryCode]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
    if format == Format::Json {
        let mut v = json!({
            "faces": list.face_order,
            "d": list.face_order.len(),
            "codes": strings(&list.codes),
        });
        if let Some(s) = &stage_lists {
            v["stages"] = s.iter().map(|l| strings(l)).collect();
        }
        return Ok(pretty(&v));
    }
    let mut out = String::new();
    if let Some(s) = &stage_lists {
        for (i, l) in s.iter().enumerate() {
            out.push_str(&format!("# L{}: {}\n", i + 1, strings(l).join(" ")));
        }
    }
    out.push_str(&list.to_text());
    Ok(out)
}

fn decode_cmd(
    g: &PlaneBipartiteGraph,
    order: Option<&[FaceId]>,
    code: &str,
    format: Format,
) -> Result<String, Failure> {
    let code: BinaryCode = code.parse()?;
    let m = if g.vertex_count() > 2 && is_elementary(g) {
        decode(&find_rfd(g, order)?, &code)?
    } else {
        code_weakly_elementary(g, order)?.decode(&code)?
    };
    if format == Format::Json {
        let edges: Vec<Value> = m
            .edges()
            .map(|e| {
                let (u, v) = g.endpoints(e);
                json!({"id": e, "ends": [u, v]})
            })
            .collect();
        return Ok(pretty(&json!({"code": code.to_string(), "edges": edges})));
    }
    let mut out = String::new();
    for e in m.edges() {
        let (u, v) = g.endpoints(e);
        out.push_str(&format!("{e} {u} {v}\n"));
    }
    Ok(out)
}

fn resonance(
    g: &PlaneBipartiteGraph,
    order: Option<&[FaceId]>,
    cap: usize,
    format: Format,
) -> Result<String, Failure> {
    let d = build_resonance(g, cap)?;
    let codes = coding(g, order).ok().and_then(|list| {
        let decoder = |c: &BinaryCode| -> rescode_core::Result<_> {
            if g.vertex_count() > 2 && is_elementary(g) {
                decode(&find_rfd(g, order)?, c)
            } else {
                code_weakly_elementary(g, order)?.decode(c)
            }
        };
        codes_by_node(&list, &d, decoder).ok()
    });
    match format {
        Format::Dot => Ok(d.to_dot(codes.as_deref())),
        Format::Json => {
            let nodes: Vec<Value> = d
                .matchings
                .iter()
                .enumerate()
                .map(|(v, m)| {
                    json!({
                        "id": v,
                        "code": codes.as_ref().map(|c| c[v].to_string()),
                        "edges": m.edge_list(),
                    })
                })
                .collect();
            let edges: Vec<Value> = d
                .edges
                .iter()
                .map(|e| json!({"from": e.from, "to": e.to, "face": e.face}))
                .collect();
            Ok(pretty(&json!({"nodes": nodes, "edges": edges})))
        }
        Format::Text => Ok(format!(
            "{} matchings, {} edges, diameter {}\n",
            d.node_count(),
            d.edges.len(),
            d.diameter().map_or("-".into(), |x| x.to_string())
        )),
    }
}

fn bench(cli: &Cli) -> Result<String, Failure> {
    let targets: Vec<(String, PlaneBipartiteGraph, Option<Vec<FaceId>>)> =
        if cli.instance.is_some() || cli.input.is_some() {
            let (g, order) = load(cli)?;
            let name = cli
                .instance
                .clone()
                .unwrap_or_else(|| cli.input.as_ref().unwrap().display().to_string());
            vec![(name, g, order)]
        } else {
            let names = [
                "hexagon",
                "naphthalene",
                "chain(4)",
                "chain(8)",
                "figure1",
                "figure3",
                "parallelogram(3,3)",
            ];
            names
                .iter()
                .map(|n| corpus::named(n).map(|i| (i.name, i.graph, i.order)))
                .collect::<Result<_, _>>()?
        };
    let mut rows = Vec::new();
    for (name, g, order) in &targets {
        let t = Instant::now();
        let list = coding(g, order.as_deref())?;
        let coder = t.elapsed();
        let t = Instant::now();
        let d = build_resonance(g, cap(cli))?;
        let oracle = t.elapsed();
        rows.push((
            name.clone(),
            g.finite_face_count(),
            list.len(),
            d.node_count(),
            coder,
            oracle,
        ));
    }
    if cli.format == Some(Format::Json) {
        let v: Vec<Value> = rows
            .iter()
            .map(|(name, n, codes, m, c, o)| {
                json!({
                    "instance": name,
                    "finite_faces": n,
                    "codes": codes,
                    "matchings": m,
                    "coder_ms": c.as_secs_f64() * 1e3,
                    "oracle_ms": o.as_secs_f64() * 1e3,
                })
            })
            .collect();
        return Ok(pretty(&Value::Array(v)));
    }
    let mut out = format!(
        "{:<20} {:>5} {:>8} {:>10} {:>12} {:>12}\n",
        "instance", "faces", "codes", "matchings", "coder ms", "oracle ms"
    );
    for (name, n, codes, m, c, o) in rows {
        out.push_str(&format!(
            "{:<20} {:>5} {:>8} {:>10} {:>12.3} {:>12.3}\n",
            name,
            n,
            codes,
            m,
            c.as_secs_f64() * 1e3,
            o.as_secs_f64() * 1e3
        ));
    }
    Ok(out)
}

//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or runs past its time limit.

use std::collections::BTreeSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rescode_core::coder::{coding_stages, generate_coding};
use rescode_core::corpus::named;
use rescode_core::resonance::DEFAULT_ORACLE_CAP;
use rescode_core::rfd::find_rfd;
use rescode_core::verify::{verify_graph, VerificationReport};

type Outcome = Result<(), String>;

fn rescode(args: &[&str]) -> Result<String, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_rescode"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !o.status.success() {
        return Err(format!(
            "rescode {} exited with {:?}: {}",
            args.join(" "),
            o.status.code(),
            String::from_utf8_lossy(&o.stderr)
        ));
    }
    String::from_utf8(o.stdout).map_err(|e| e.to_string())
}

fn set(codes: &[&str]) -> BTreeSet<String> {
    codes.iter().map(|s| s.to_string()).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report(name: &str) -> Result<VerificationReport, String> {
    let inst = named(name).map_err(|e| e.to_string())?;
    verify_graph(&inst.graph, inst.order.as_deref(), DEFAULT_ORACLE_CAP)
        .map_err(|e| format!("{name}: {e}"))
}

fn require(r: &VerificationReport, instance: &str, checks: &[&str]) -> Outcome {
    for name in checks {
        match r.check(name) {
            Some(c) if c.passed => {}
            Some(c) => {
                return Err(format!(
                    "{instance}: {name} failed: {}",
                    c.witness.clone().unwrap_or_default()
                ))
            }
            None => return Err(format!("{instance}: {name} was not run")),
        }
    }
    Ok(())
}

fn figure1() -> Outcome {
    let text = rescode(&["code", "--instance", "figure1"])?;
    let mut lines = text.lines();
    ensure(lines.next() == Some("faces: s1,s2,s3,s4,s5"), || {
        "wrong header".into()
    })?;
    let codes: Vec<&str> = lines.collect();
    let expected = set(&[
        "00000", "10000", "00100", "10100", "00110", "10110", "00001", "10001", "00101", "10101",
        "11101", "00111", "10111", "11111",
    ]);
    ensure(codes.len() == 14, || format!("{} codes", codes.len()))?;
    ensure(set(&codes) == expected, || format!("codes {codes:?}"))?;

    let inst = named("figure1").map_err(|e| e.to_string())?;
    let rfd = find_rfd(&inst.graph, inst.order.as_deref()).map_err(|e| e.to_string())?;
    let stages = coding_stages(&rfd);
    let panels: [&[&str]; 4] = [
        &["0", "1"],
        &["00", "10", "11"],
        &["000", "100", "001", "101", "111"],
        &[
            "0000", "1000", "0010", "1010", "1110", "0011", "1011", "1111",
        ],
    ];
    for (i, panel) in panels.iter().enumerate() {
        let got: BTreeSet<String> = stages[i].iter().map(|c| c.to_string()).collect();
        ensure(got == set(panel), || format!("list {} is {got:?}", i + 1))?;
    }
    Ok(())
}

fn figure3() -> Outcome {
    let text = rescode(&["code", "--instance", "figure3"])?;
    let mut lines = text.lines();
    let header = lines.next().unwrap_or_default();
    ensure(header == "faces: s1,s2,s3,s4", || {
        format!("header {header:?}, expected d = 4")
    })?;
    let codes: Vec<&str> = lines.collect();
    let expected = set(&[
        "0000", "0001", "0011", "0100", "0101", "0111", "1100", "1101", "1111",
    ]);
    ensure(set(&codes) == expected && codes.len() == 9, || {
        format!("codes {codes:?}")
    })?;
    let r = report("figure3")?;
    ensure(r.quantities.idim == Some(4) && r.quantities.n == 5, || {
        format!("idim {:?}, n {}", r.quantities.idim, r.quantities.n)
    })?;
    require(&r, "figure3", &["cartesian_product"])?;
    ensure(r.passed(), || r.to_text())
}

fn forcing_corpus() -> Vec<String> {
    let mut names: Vec<String> = ["hexagon", "naphthalene", "figure1"]
        .map(String::from)
        .to_vec();
    names.extend((1..=8).map(|k| format!("chain({k})")));
    names
}

fn oracle_equivalence() -> Outcome {
    for name in forcing_corpus() {
        let inst = named(&name).map_err(|e| e.to_string())?;
        let rfd = find_rfd(&inst.graph, inst.order.as_deref()).map_err(|e| e.to_string())?;
        generate_coding(&rfd).map_err(|e| format!("{name}: {e}"))?;
        let r = report(&name)?;
        require(
            &r,
            &name,
            &[
                "coding_equals_phi_set",
                "decode_is_bijection",
                "phi_of_decode_is_identity",
            ],
        )?;
    }
    Ok(())
}

const ELEMENTARY: [&str; 8] = [
    "hexagon",
    "naphthalene",
    "chain(5)",
    "chain(8)",
    "parallelogram(2,2)",
    "parallelogram(3,3)",
    "figure1",
    "coronene",
];

fn idim_suite() -> Outcome {
    for name in ELEMENTARY {
        let r = report(name)?;
        require(
            &r,
            name,
            &["idim_equals_n_iff_forcing", "equivalent_statements_agree"],
        )?;
        let q = &r.quantities;
        ensure(q.idim == q.height && q.idim == q.diameter, || {
            format!(
                "{name}: idim {:?}, height {:?}, diameter {:?}",
                q.idim, q.height, q.diameter
            )
        })?;
        let forcing = q.forcing == Some(true);
        ensure((q.idim == Some(q.n)) == forcing, || {
            format!("{name}: idim {:?}, n {}", q.idim, q.n)
        })?;
    }
    let r = report("coronene")?;
    let q = &r.quantities;
    ensure(
        q.forcing == Some(false) && q.n == 7 && q.idim.is_some_and(|i| i >= 8),
        || {
            format!(
                "coronene: forcing {:?}, n {}, idim {:?}",
                q.forcing, q.n, q.idim
            )
        },
    )
}

fn structural() -> Outcome {
    let names = [
        "hexagon",
        "naphthalene",
        "chain(3)",
        "chain(8)",
        "parallelogram(2,3)",
        "parallelogram(3,3)",
        "figure1",
        "figure3",
        "coronene",
        "dumbbell",
        "bridged",
    ];
    for name in names {
        let r = report(name)?;
        require(
            &r,
            name,
            &[
                "hasse_equals_digraph",
                "unique_sink_is_minimum",
                "phi_difference_equals_psi",
                "median",
                "theta_transitive",
            ],
        )?;
        // Codes exist only where every component has a forcing infinite face.
        if name != "coronene" {
            require(
                &r,
                name,
                &["code_majority_closure", "hamming_equals_distance"],
            )?;
        }
        let q = &r.quantities;
        ensure(
            q.theta_classes.is_some() && q.theta_classes == q.diameter,
            || {
                format!(
                    "{name}: {:?} theta classes, diameter {:?}",
                    q.theta_classes, q.diameter
                )
            },
        )?;
        ensure(r.passed(), || r.to_text())?;
    }
    Ok(())
}

fn weakly_elementary() -> Outcome {
    for name in ["figure3", "bridged", "dumbbell"] {
        let r = report(name)?;
        require(
            &r,
            name,
            &[
                "cartesian_product",
                "coding_equals_phi_set",
                "decode_is_bijection",
            ],
        )?;
        ensure(r.quantities.components >= 2, || {
            format!("{name}: one component")
        })?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 6] = [
        ("figure1 code lists", 1, figure1),
        ("figure3 concatenated coding and idim 4 < 5", 1, figure3),
        (
            "coder equals oracle on forcing instances",
            10,
            oracle_equivalence,
        ),
        (
            "idim, forcing and the equivalent statements",
            30,
            idim_suite,
        ),
        ("structural invariants", 60, structural),
        (
            "weakly elementary product and idim additivity",
            5,
            weakly_elementary,
        ),
    ];
    let mut failed = false;
    for (i, (title, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let outcome = outcome.and_then(|()| {
            ensure(elapsed < limit, || {
                format!("took {elapsed:?}, limit {limit:?}")
            })
        });
        match outcome {
            Ok(()) => println!(
                "criterion {}: PASS {title} ({elapsed:.2?}, limit {limit:?})",
                i + 1
            ),
            Err(why) => {
                failed = true;
                println!(
                    "criterion {}: FAIL {title} ({elapsed:.2?}, limit {limit:?}): {why}",
                    i + 1
                );
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

//! Subcommand bodies and their JSON, CSV and DOT renderings.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use super::args::{
    parse_direction_file, Command, EnsembleArgs, FeasibilityArgs, GraphArgs, Representation, ScanArgs, VerifyArgs,
    WignerArgs, WitnessArgs,
};
use super::{provenance, Cli, Failure, Format};
use crate::collective::{commutator, gamma_element, projector_tensor_sum, witness, Direction, EnsembleOperator, EnsembleSpec};
use crate::contextuality::{
    compatibility_graph, compatibility_graph_dense, find_contexts, joint_feasibility, theorem_scan, verify_theorem,
    Certificate, ContextScenario,
};
use crate::su2::{wigner_d_element, wigner_d_matrix, HalfInt};

pub(super) fn produce(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Decompose(a) => decompose(a, pick(cli.format, Format::Json, &[Format::Json, Format::Csv])?),
        Command::Wigner(a) => wigner(a, pick(cli.format, Format::Json, &[Format::Json, Format::Csv])?),
        Command::CommutatorScan(a) => scan(a, pick(cli.format, Format::Csv, &[Format::Json, Format::Csv])?),
        Command::ContextGraph(a) => graph(a, pick(cli.format, Format::Dot, &[Format::Json, Format::Dot])?),
        Command::VerifyTheorem(a) => verify(a, pick(cli.format, Format::Json, &[Format::Json, Format::Csv])?),
        Command::Witness(a) => witness_cmd(a, pick(cli.format, Format::Json, &[Format::Json])?),
        Command::Feasibility(a) => feasibility(a, pick(cli.format, Format::Json, &[Format::Json])?),
    }
}

fn pick(requested: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let format = requested.unwrap_or(default);
    if allowed.contains(&format) {
        Ok(format)
    } else {
        Err(Failure::Usage(format!("format {format:?} is not available for this subcommand").to_lowercase()))
    }
}

fn config_of<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("argument structs serialize")
}

/// Pretty JSON with sorted keys and a trailing newline.
fn to_json(mut body: Value, command: &str, config: Value) -> String {
    body["provenance"] = provenance(command, config);
    let mut text = serde_json::to_string_pretty(&body).expect("values serialize");
    text.push('\n');
    text
}

/// Shortest round-trip scientific notation.
fn float(x: f64) -> String {
    format!("{x:e}")
}

/// RFC 4180 CSV preceded by one `#` comment line carrying the provenance.
fn to_csv(header: &[&str], rows: Vec<Vec<String>>, command: &str, config: Value) -> Result<String, Failure> {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::Output(e.to_string());
    writer.write_record(header).map_err(fail)?;
    for row in rows {
        writer.write_record(row).map_err(fail)?;
    }
    let body = writer.into_inner().map_err(|e| Failure::Output(e.to_string()))?;
    let body = String::from_utf8(body).map_err(|e| Failure::Output(e.to_string()))?;
    Ok(format!("# {}\r\n{body}", provenance(command, config)))
}

fn ensemble(args: &EnsembleArgs) -> Result<EnsembleSpec, Failure> {
    Ok(EnsembleSpec::new(args.n, args.spin)?)
}

/// Multiplicities fit JSON numbers up to `u64`; larger ones become strings.
fn big(value: &BigUint) -> Value {
    value.to_u64().map(Value::from).unwrap_or_else(|| Value::String(value.to_string()))
}

fn decompose(args: &EnsembleArgs, format: Format) -> Result<String, Failure> {
    let spec = ensemble(args)?;
    let table = spec.table();
    let config = config_of(args);
    match format {
        Format::Csv => {
            let rows = table.entries().iter().map(|(j, count)| vec![j.to_string(), count.to_string()]).collect();
            to_csv(&["j", "multiplicity"], rows, "decompose", config)
        }
        _ => {
            let map: BTreeMap<String, Value> = table.entries().iter().map(|(j, c)| (j.to_string(), big(c))).collect();
            let body = json!({
                "multiplicities": map,
                "hilbert_dimension": big(&table.hilbert_dimension()),
                "weighted_dimension": big(&table.weighted_dimension()),
                "dimension_check": table.dimension_identity_holds(),
            });
            Ok(to_json(body, "decompose", config))
        }
    }
}

fn wigner(args: &WignerArgs, format: Format) -> Result<String, Failure> {
    let config = config_of(args);
    let entries: Vec<(HalfInt, HalfInt, f64)> = match (args.m, args.mprime) {
        (Some(m), Some(mp)) => vec![(m, mp, wigner_d_element(args.j, m, mp, args.beta)?)],
        _ => {
            let d = wigner_d_matrix(args.j, args.beta)?;
            HalfInt::labels(args.j)
                .enumerate()
                .flat_map(|(r, m)| HalfInt::labels(args.j).enumerate().map(move |(c, mp)| (r, c, m, mp)))
                .map(|(r, c, m, mp)| (m, mp, d[(r, c)]))
                .collect()
        }
    };
    match format {
        Format::Csv => {
            let rows = entries.iter().map(|(m, mp, v)| vec![m.to_string(), mp.to_string(), float(*v)]).collect();
            to_csv(&["m", "mprime", "value"], rows, "wigner", config)
        }
        _ => {
            let body = if args.m.is_some() {
                json!({"j": args.j, "beta": args.beta, "m": entries[0].0, "mprime": entries[0].1, "value": entries[0].2})
            } else {
                let dim = args.j.multiplet_dim();
                let matrix: Vec<Vec<f64>> = entries.chunks(dim).map(|row| row.iter().map(|e| e.2).collect()).collect();
                let labels: Vec<HalfInt> = HalfInt::labels(args.j).collect();
                json!({"j": args.j, "beta": args.beta, "labels": labels, "matrix": matrix})
            };
            Ok(to_json(body, "wigner", config))
        }
    }
}

fn scan(args: &ScanArgs, format: Format) -> Result<String, Failure> {
    let spec = ensemble(&args.ensemble)?;
    let samples = match args.representation {
        Representation::Block => theorem_scan(&spec, args.m, args.mprime, &args.beta_grid.points)?,
        Representation::Dense => dense_scan(&spec, args.m, args.mprime, &args.beta_grid.points)?,
    };
    let mut config = config_of(args);
    config["beta_grid_points"] = json!(args.beta_grid.points.len());
    match format {
        Format::Csv => {
            let rows = samples.iter().map(|(b, n)| vec![float(*b), float(*n)]).collect();
            to_csv(&["beta", "frobenius_norm"], rows, "commutator-scan", config)
        }
        _ => {
            let rows: Vec<Value> = samples.iter().map(|(b, n)| json!({"beta": b, "frobenius_norm": n})).collect();
            Ok(to_json(json!({"samples": rows}), "commutator-scan", config))
        }
    }
}

/// Tensor-product projectors along z and along the XZ-plane direction at
/// each angle.
fn dense_scan(spec: &EnsembleSpec, m: HalfInt, mp: HalfInt, grid: &[f64]) -> crate::Result<Vec<(f64, f64)>> {
    use rayon::prelude::*;
    let fixed = projector_tensor_sum(spec, &Direction::Z, m)?;
    spec.check_outcome(mp)?;
    grid.par_iter()
        .map(|&beta| {
            if !(0.0..=std::f64::consts::PI).contains(&beta) {
                return Err(crate::Error::Domain(format!("grid angle {beta} outside [0, pi]")));
            }
            let rotated = projector_tensor_sum(spec, &Direction::in_xz_plane(beta), mp)?;
            Ok((beta, commutator(&fixed, &rotated)?.frobenius_norm()))
        })
        .collect()
}

fn graph(args: &GraphArgs, format: Format) -> Result<String, Failure> {
    let spec = ensemble(&args.ensemble)?;
    let mut directions = Vec::new();
    if let Some(path) = &args.directions {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        directions.extend(parse_direction_file(&text)?);
    }
    directions.extend(args.inline.iter().copied());
    if directions.is_empty() {
        return Err(Failure::Usage("give --directions or at least one --direction".into()));
    }
    let tol = args.tol.unwrap_or_else(|| spec.zero_tolerance());
    let g = match args.representation {
        Representation::Block => compatibility_graph(&spec, &directions, tol)?,
        Representation::Dense => compatibility_graph_dense(&spec, &directions, tol)?,
    };
    let mut config = config_of(args);
    config["resolved_directions"] = json!(directions.iter().map(Direction::components).collect::<Vec<_>>());
    config["tol"] = json!(tol);
    match format {
        Format::Dot => Ok(format!("// {}\n{}", provenance("context-graph", config), g.to_dot())),
        _ => {
            let label = |i: usize| g.nodes()[i].label();
            let nodes: Vec<Value> = g
                .nodes()
                .iter()
                .map(|n| json!({"id": n.label(), "direction_index": n.direction_index, "outcome": n.outcome}))
                .collect();
            let edges: Vec<[String; 2]> = g.edges().iter().map(|&(a, b)| [label(a), label(b)]).collect();
            let contexts: Vec<Value> =
                find_contexts(&g).iter().map(|t| json!({"a": label(t.a), "b": label(t.b), "c": label(t.c)})).collect();
            let body = json!({
                "nodes": nodes,
                "edges": edges,
                "cross_direction_edges": g.cross_direction_edges().count(),
                "contexts": contexts,
            });
            Ok(to_json(body, "context-graph", config))
        }
    }
}

fn verify(args: &VerifyArgs, format: Format) -> Result<String, Failure> {
    let spec = ensemble(&args.ensemble)?;
    let tol = args.tol.unwrap_or_else(|| spec.zero_tolerance());
    let report = verify_theorem(&spec, &args.beta_grid.points, tol)?;
    let mut config = config_of(args);
    config["tol"] = json!(tol);
    config["beta_grid_points"] = json!(args.beta_grid.points.len());
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    match format {
        Format::Csv => {
            let rows = report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        float(r.beta),
                        float(r.min_norm),
                        float(r.max_norm),
                        r.min_pair.0.to_string(),
                        r.min_pair.1.to_string(),
                        r.endpoint.to_string(),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            let header = ["beta", "min_norm", "max_norm", "min_m", "min_mprime", "endpoint", "pass"];
            to_csv(&header, rows, "verify-theorem", config)
        }
        _ => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| {
                    json!({
                        "beta": r.beta,
                        "min_norm": r.min_norm,
                        "max_norm": r.max_norm,
                        "min_pair": [r.min_pair.0, r.min_pair.1],
                        "endpoint": r.endpoint,
                        "pass": r.pass,
                    })
                })
                .collect();
            Ok(to_json(json!({"rows": rows, "tolerance": tol, "verdict": verdict}), "verify-theorem", config))
        }
    }
}

fn witness_cmd(args: &WitnessArgs, _format: Format) -> Result<String, Failure> {
    let j_values: Vec<HalfInt> = match (args.jmax, args.n, args.spin) {
        (Some(jmax), _, _) => (0..=jmax.as_spin()?.twice()).map(HalfInt::from_twice).collect(),
        (None, Some(n), Some(s)) => EnsembleSpec::new(n, s)?.table().j_values(),
        _ => return Err(Failure::Usage("give --jmax or --n with --spin".into())),
    };
    if !(0.0..=std::f64::consts::PI).contains(&args.beta) {
        return Err(crate::Error::Domain(format!("beta {} outside [0, pi]", args.beta)).into());
    }
    let mut config = config_of(args);
    config["j_values"] = json!(j_values);
    let body = match witness(args.m, args.outcome_n, args.beta, &j_values) {
        Some(w) => {
            let gamma = gamma_element(w.j, args.m, args.outcome_n, args.m, w.k, args.beta)?;
            json!({"found": true, "j": w.j, "k": w.k, "product": w.product, "gamma_m_k": gamma})
        }
        None => json!({"found": false}),
    };
    Ok(to_json(body, "witness", config))
}

fn feasibility(args: &FeasibilityArgs, _format: Format) -> Result<String, Failure> {
    let text = std::fs::read_to_string(&args.scenario)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.scenario.display())))?;
    let scenario = ContextScenario::from_json(&text)?;
    let result = joint_feasibility(&scenario, args.tol)?;
    let labels = |assignment: &[usize]| -> BTreeMap<String, String> {
        scenario
            .observables()
            .iter()
            .zip(assignment)
            .map(|(o, &i)| (o.id.clone(), o.outcomes[i].clone()))
            .collect()
    };
    let certificate = match &result.certificate {
        Certificate::Product { residual } => json!({"kind": "product", "residual": residual}),
        Certificate::Joint { support, residual } => json!({
            "kind": "joint",
            "residual": residual,
            "support": support
                .iter()
                .map(|a| json!({"assignment": labels(&a.assignment), "probability": a.probability}))
                .collect::<Vec<_>>(),
        }),
        Certificate::Separating { coefficients, value, bound } => {
            let per_context: BTreeMap<String, Vec<Value>> = coefficients
                .iter()
                .enumerate()
                .map(|(c, ys)| {
                    let members = &scenario.contexts()[c];
                    let radix: Vec<usize> = members.iter().map(|&o| scenario.observables()[o].outcomes.len()).collect();
                    let cells = ys
                        .iter()
                        .enumerate()
                        .map(|(cell, y)| {
                            let mut rest = cell;
                            let mut outcome = vec![String::new(); members.len()];
                            for (i, n) in radix.iter().enumerate().rev() {
                                outcome[i] = scenario.observables()[members[i]].outcomes[rest % n].clone();
                                rest /= n;
                            }
                            json!({"assignment": outcome, "coefficient": y})
                        })
                        .collect();
                    (c.to_string(), cells)
                })
                .collect();
            json!({"kind": "separating", "coefficients": per_context, "value": value, "bound": bound, "gap": value - bound})
        }
    };
    let body = json!({
        "feasible": result.feasible,
        "method": result.method,
        "tolerance": result.tolerance,
        "certificate": certificate,
    });
    Ok(to_json(body, "feasibility", config_of(args)))
}

use std::error::Error;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigUint;
use serde_json::{json, Value};
use zn::gensets::enumerate_gk;
use zn::graph::{self, compute_props, gen_probability};
use zn::numth::{factorize, FactoredInt};
use zn::oracle::{self, CheckConfig, DenseKind, OracleReport};
use zn::partition::{build_partition, ClassRow};
use zn::spectra::{self, Bound, SpectrumMode, SpectrumReport};

use crate::output::{self, Format, Style};
use crate::{Cli, Command, MatrixArg};

type Res<T> = Result<T, Box<dyn Error>>;

/// Runs the parsed command. `Ok(false)` means a verification failed.
pub fn run(cli: &Cli) -> Res<bool> {
    let g = &cli.global;
    let style = Style {
        precision: g.precision,
        meta: !g.no_meta,
    };
    let out = g.output.as_deref();
    match &cli.command {
        Command::Classes { n, members } => classes(*n, *members, g.format, style, out),
        Command::Gensets { n, k, expand } => gensets(*n, *k, *expand, g.format, style, out),
        Command::Props { n } => props(*n, g.format, style, out),
        Command::Graph { n, dot, h_graph } => {
            let path = dot.as_deref().or(out);
            graph_dot(*n, *h_graph, g.dense_limit, path)
        }
        Command::Spectrum {
            n,
            matrix,
            full,
            bounds,
        } => spectrum(
            *n,
            *matrix,
            *full,
            *bounds,
            g.dense_limit,
            g.format,
            style,
            out,
        ),
        Command::Tables { paper } => {
            if !paper {
                return Err("nothing to print; pass --paper for the reference tables".into());
            }
            tables(g.format, style, out)
        }
        Command::Verify { range, checks } => {
            let cfg = CheckConfig {
                tol: g.tol.resolve(),
                dense_limit: g.dense_limit,
            };
            let reports = oracle::run_checks(&checks.0, *range.start(), *range.end(), &cfg);
            verify_output(&reports, *range.start(), *range.end(), g.format, style, out)
        }
        Command::Bench { range, step } => {
            bench(range.clone(), *step, g.dense_limit, g.format, style, out)
        }
    }
}

fn no_dot(format: Format) -> Res<()> {
    if format == Format::Dot {
        Err("--format dot is only available through `graph`".into())
    } else {
        Ok(())
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn finish_json(style: Style, v: Value, out: Option<&Path>) -> Res<bool> {
    output::emit(out, &output::json_string(&style.finish_json(v)))?;
    Ok(true)
}

fn class_rows(rows: &[ClassRow], members: bool) -> (Vec<&'static str>, Vec<Vec<String>>) {
    let mut header = vec!["divisor", "binary", "size", "degree", "neighbors"];
    if members {
        header.push("members");
    }
    let body = rows
        .iter()
        .map(|r| {
            let mut row = vec![
                r.divisor.to_string(),
                r.binary.clone(),
                r.size.to_string(),
                r.degree.to_string(),
                join(&r.neighbors),
            ];
            if members {
                row.push(join(r.members.as_deref().unwrap_or(&[])));
            }
            row
        })
        .collect();
    (header, body)
}

fn classes_json(f: &FactoredInt, rows: &[ClassRow]) -> Value {
    json!({
        "n": f.value(),
        "radical": f.radical(),
        "omega": f.omega(),
        "classes": rows,
    })
}

fn classes(n: u64, members: bool, format: Format, style: Style, out: Option<&Path>) -> Res<bool> {
    no_dot(format)?;
    let f = factorize(n)?;
    let rows = build_partition(&f, members)?.table();
    match format {
        Format::Json => finish_json(style, classes_json(&f, &rows), out),
        Format::Csv | Format::Text => {
            let (header, body) = class_rows(&rows, members);
            let s = if format == Format::Csv {
                output::csv_string(&header, body)
            } else {
                output::text_table(&header, &body)
            };
            output::emit(out, &s)?;
            Ok(true)
        }
        Format::Dot => unreachable!("rejected above"),
    }
}

fn combo_size(f: &FactoredInt, combo: &[u64]) -> Res<String> {
    let p = build_partition(f, false)?;
    let size = combo
        .iter()
        .map(|&d| p.class(d).map_or(0, |c| c.size))
        .fold(BigUint::from(1u8), |acc, s| acc * s);
    Ok(size.to_string())
}

fn gensets(
    n: u64,
    k: Option<usize>,
    expand: bool,
    format: Format,
    style: Style,
    out: Option<&Path>,
) -> Res<bool> {
    no_dot(format)?;
    let f = factorize(n)?;
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (1..=f.omega().max(1) as usize).collect(),
    };
    let families = ks
        .iter()
        .map(|&k| enumerate_gk(&f, k, expand))
        .collect::<Result<Vec<_>, _>>()?;
    match format {
        Format::Json => finish_json(style, json!({ "n": n, "families": families }), out),
        Format::Csv => {
            let s = if expand {
                let rows = families.iter().flat_map(|fam| {
                    fam.sets
                        .iter()
                        .flatten()
                        .map(|s| vec![fam.k.to_string(), join(s)])
                });
                output::csv_string(&["k", "set"], rows)
            } else {
                let mut rows = Vec::new();
                for fam in &families {
                    for c in &fam.class_combos {
                        rows.push(vec![fam.k.to_string(), join(c), combo_size(&f, c)?]);
                    }
                }
                output::csv_string(&["k", "combo", "sets"], rows)
            };
            output::emit(out, &s)?;
            Ok(true)
        }
        Format::Text => {
            let mut s = String::new();
            for fam in &families {
                s += &format!("G_{} of Z_{n}: {} sets\n", fam.k, fam.count);
                for c in &fam.class_combos {
                    let classes: Vec<String> = c.iter().map(|d| format!("[{d}]")).collect();
                    s += &format!("  {}  ({} sets)\n", classes.join(" x "), combo_size(&f, c)?);
                }
                for set in fam.sets.iter().flatten() {
                    s += &format!(
                        "    {{{}}}\n",
                        set.iter()
                            .map(u64::to_string)
                            .collect::<Vec<_>>()
                            .join(", ")
                    );
                }
            }
            output::emit(out, &s)?;
            Ok(true)
        }
        Format::Dot => unreachable!("rejected above"),
    }
}

fn props(n: u64, format: Format, style: Style, out: Option<&Path>) -> Res<bool> {
    no_dot(format)?;
    let f = factorize(n)?;
    let p = compute_props(&f)?;
    let prob = gen_probability(&f)?;
    let prob = format!("{}/{}", prob.numer(), prob.denom());
    let mut v = serde_json::to_value(&p)?;
    v["probability"] = Value::from(prob.clone());
    if format == Format::Json {
        return finish_json(style, v, out);
    }
    let cycle = match &p.hamiltonian_cycle {
        Some(graph::CycleWitness::Consecutive { length }) => {
            format!("0, 1, ..., {}, 0", length - 1)
        }
        Some(graph::CycleWitness::Explicit { vertices }) => {
            let v: Vec<String> = vertices.iter().map(u64::to_string).collect();
            format!("{}, {}", v.join(", "), vertices[0])
        }
        None => "none".into(),
    };
    let rows = vec![
        vec!["n".into(), n.to_string()],
        vec!["diameter".into(), p.diameter.to_string()],
        vec!["regular".into(), p.is_regular.to_string()],
        vec!["bipartite".into(), p.is_bipartite.to_string()],
        vec!["hamiltonian_cycle".into(), cycle],
        vec!["eulerian".into(), p.is_eulerian.to_string()],
        vec!["planar".into(), p.is_planar.to_string()],
        vec!["clique_number".into(), p.clique_number.to_string()],
        vec!["chromatic_number".into(), p.chromatic_number.to_string()],
        vec![
            "independence_number".into(),
            p.independence_number.to_string(),
        ],
        vec!["edge_count".into(), p.edge_count.to_string()],
        vec!["probability".into(), prob],
    ];
    let s = if format == Format::Csv {
        output::csv_string(&["property", "value"], rows)
    } else {
        output::text_table(&["property", "value"], &rows)
    };
    output::emit(out, &s)?;
    Ok(true)
}

fn graph_dot(n: u64, h_graph: bool, dense_limit: u64, path: Option<&Path>) -> Res<bool> {
    let f = factorize(n)?;
    let dot = if h_graph {
        let partition = build_partition(&f, false)?;
        graph::build_h_graph(&f)?.to_dot(&partition)
    } else {
        graph::build_graph_with_limit(&f, dense_limit)?.to_dot()
    };
    output::emit(path, &dot)?;
    Ok(true)
}

fn bound_rows(style: Style, bounds: &[Bound], n: u64) -> Vec<Vec<String>> {
    bounds
        .iter()
        .map(|b| {
            vec![
                b.j.to_string(),
                style.num(b.lo),
                style.eig(b.numeric, n as f64),
                style.num(b.hi),
            ]
        })
        .collect()
}

const BOUND_HEADER: [&str; 4] = ["j", "lower", "numeric", "upper"];

#[allow(clippy::too_many_arguments)]
fn spectrum(
    n: u64,
    matrix: MatrixArg,
    full: bool,
    bounds: bool,
    dense_limit: u64,
    format: Format,
    style: Style,
    out: Option<&Path>,
) -> Res<bool> {
    no_dot(format)?;
    let f = factorize(n)?;
    let mode = if full {
        SpectrumMode::Full { dense_limit }
    } else {
        SpectrumMode::QuotientOnly
    };
    let mut report: SpectrumReport = match matrix {
        MatrixArg::Adj => spectra::adjacency_spectrum(&f, mode)?,
        MatrixArg::Lap => spectra::laplacian_spectrum(&f, mode)?,
        MatrixArg::Qtilde => {
            if full || bounds {
                return Err("--full and --bounds apply to --matrix adj and lap".into());
            }
            spectra::qtilde_eigenvalues(&f)?
        }
    };
    if bounds {
        report.bounds = Some(match matrix {
            MatrixArg::Adj => spectra::weyl_bounds_adjacency(&f)?,
            _ => spectra::weyl_bounds_laplacian(&f)?,
        });
    }
    match format {
        Format::Json => finish_json(style, serde_json::to_value(&report)?, out),
        Format::Csv => {
            let s = match &report.bounds {
                Some(b) => output::csv_string(&BOUND_HEADER, bound_rows(style, b, n)),
                None => output::csv_string(
                    &["value", "multiplicity", "provenance", "formula"],
                    eigen_rows(style, &report),
                ),
            };
            output::emit(out, &s)?;
            Ok(true)
        }
        Format::Text => {
            let mut s = format!("{} spectrum of E_{n}\n", report.matrix);
            s += &output::text_table(
                &["value", "multiplicity", "provenance", "formula"],
                &eigen_rows(style, &report),
            );
            if let Some(b) = &report.bounds {
                s += "\nWeyl intervals for the quotient eigenvalues\n";
                s += &output::text_table(&BOUND_HEADER, &bound_rows(style, b, n));
            }
            if let Some(r) = report.residual {
                s += &format!("\nmax deviation from the dense eigensolve: {r:e}\n");
            }
            output::emit(out, &s)?;
            Ok(true)
        }
        Format::Dot => unreachable!("rejected above"),
    }
}

fn eigen_rows(style: Style, report: &SpectrumReport) -> Vec<Vec<String>> {
    report
        .eigen
        .iter()
        .map(|e| {
            let provenance = serde_json::to_value(e.provenance)
                .ok()
                .and_then(|v| v.as_str().map(String::from));
            vec![
                style.eig(e.value, report.n as f64),
                e.multiplicity.to_string(),
                provenance.unwrap_or_default(),
                e.formula.unwrap_or("").to_string(),
            ]
        })
        .collect()
}

fn tables(format: Format, style: Style, out: Option<&Path>) -> Res<bool> {
    no_dot(format)?;
    let f30 = factorize(30)?;
    let f15 = factorize(15)?;
    let t1 = build_partition(&f30, false)?.table();
    let t2 = spectra::weyl_bounds_adjacency(&f15)?;
    let t3 = spectra::weyl_bounds_laplacian(&f15)?;
    let title1 = "Table 1: divisor classes of Z_30";
    let title2 = "Table 2: eigenvalues of Q_15 within [lambda_j(Q~) - 1, lambda_j(Q~)]";
    let title3 =
        "Table 3: eigenvalues of L_Q for n = 15 within [lambda_j(-Q~) + 8, lambda_j(-Q~) + 15]";
    let s = match format {
        Format::Json => {
            let v = json!({
                "table1": classes_json(&f30, &t1),
                "table2": { "n": 15, "matrix": "adjacency", "rows": t2 },
                "table3": { "n": 15, "matrix": "laplacian", "rows": t3 },
            });
            return finish_json(style, v, out);
        }
        Format::Csv => {
            let (h1, b1) = class_rows(&t1, false);
            format!(
                "# {title1}\n{}\n# {title2}\n{}\n# {title3}\n{}",
                output::csv_string(&h1, b1),
                output::csv_string(&BOUND_HEADER, bound_rows(style, &t2, 15)),
                output::csv_string(&BOUND_HEADER, bound_rows(style, &t3, 15)),
            )
        }
        Format::Text => {
            let (h1, b1) = class_rows(&t1, false);
            format!(
                "{title1}\n{}\n{title2}\n{}\n{title3}\n{}",
                output::text_table(&h1, &b1),
                output::text_table(&BOUND_HEADER, &bound_rows(style, &t2, 15)),
                output::text_table(&BOUND_HEADER, &bound_rows(style, &t3, 15)),
            )
        }
        Format::Dot => unreachable!("rejected above"),
    };
    output::emit(out, &s)?;
    Ok(true)
}

fn verify_output(
    reports: &[OracleReport],
    lo: u64,
    hi: u64,
    format: Format,
    style: Style,
    out: Option<&Path>,
) -> Res<bool> {
    no_dot(format)?;
    let passed = reports.iter().all(OracleReport::passed);
    match format {
        Format::Json => {
            let mut v = json!({ "lo": lo, "hi": hi, "passed": passed, "reports": reports });
            if !style.meta {
                for r in v["reports"].as_array_mut().expect("array").iter_mut() {
                    r.as_object_mut().expect("object").remove("elapsed_ms");
                }
            }
            finish_json(style, v, out)?;
        }
        Format::Csv => {
            let rows = reports.iter().map(|r| {
                let mut row = vec![
                    r.check.to_string(),
                    r.lo.to_string(),
                    r.hi.to_string(),
                    r.evaluated.to_string(),
                    r.passed().to_string(),
                    r.mismatches.len().to_string(),
                ];
                if style.meta {
                    row.push(r.elapsed_ms.to_string());
                }
                row
            });
            let mut header = vec!["check", "lo", "hi", "evaluated", "passed", "mismatches"];
            if style.meta {
                header.push("elapsed_ms");
            }
            output::emit(out, &output::csv_string(&header, rows))?;
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                s += &format!(
                    "{verdict}  {:<22} n in {}..={} ({} values",
                    r.check.name(),
                    r.lo,
                    r.hi,
                    r.evaluated
                );
                if style.meta {
                    s += &format!(", {} ms", r.elapsed_ms);
                }
                s += ")\n";
                for m in r.mismatches.iter().take(10) {
                    s += &format!(
                        "      n = {}: expected {}, got {}\n",
                        m.n, m.expected, m.actual
                    );
                }
                if r.mismatches.len() > 10 {
                    s += &format!("      ... {} more\n", r.mismatches.len() - 10);
                }
            }
            let ok = reports.iter().filter(|r| r.passed()).count();
            s += &format!("{ok}/{} checks passed\n", reports.len());
            output::emit(out, &s)?;
        }
        Format::Dot => unreachable!("rejected above"),
    }
    Ok(passed)
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn bench(
    range: std::ops::RangeInclusive<u64>,
    step: u64,
    dense_limit: u64,
    format: Format,
    style: Style,
    out: Option<&Path>,
) -> Res<bool> {
    no_dot(format)?;
    if step == 0 {
        return Err("--step must be positive".into());
    }
    let mut rows = Vec::new();
    for n in range.step_by(step as usize).filter(|&n| n >= 2) {
        let f = factorize(n)?;
        let t = Instant::now();
        spectra::adjacency_spectrum(&f, SpectrumMode::QuotientOnly)?;
        spectra::laplacian_spectrum(&f, SpectrumMode::QuotientOnly)?;
        let quotient_ms = millis(t);
        let dense_ms = if n <= dense_limit {
            let t = Instant::now();
            for kind in [DenseKind::Adjacency, DenseKind::Laplacian] {
                oracle::dense_eigenvalues(&oracle::dense_matrix_with_limit(n, kind, dense_limit)?)?;
            }
            Some(millis(t))
        } else {
            None
        };
        rows.push((n, 1u64 << f.omega(), quotient_ms, dense_ms));
    }
    match format {
        Format::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|&(n, order, q, d)| json!({ "n": n, "order": order, "quotient_ms": q, "dense_ms": d }))
                .collect();
            finish_json(style, json!({ "rows": v }), out)?;
        }
        Format::Csv | Format::Text => {
            let header = ["n", "order", "quotient_ms", "dense_ms", "speedup"];
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|&(n, order, q, d)| {
                    vec![
                        n.to_string(),
                        order.to_string(),
                        style.num(q),
                        d.map_or("-".into(), |d| style.num(d)),
                        d.map_or("-".into(), |d| style.num(d / q.max(1e-9))),
                    ]
                })
                .collect();
            let s = if format == Format::Csv {
                output::csv_string(&header, body)
            } else {
                output::text_table(&header, &body)
            };
            output::emit(out, &s)?;
        }
        Format::Dot => unreachable!("rejected above"),
    }
    Ok(true)
}

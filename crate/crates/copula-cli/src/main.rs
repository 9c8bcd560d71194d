mod inputs;
mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use copula_core::axioms::{validate_function, validate_imprecise_pair, ValidationReport};
use copula_core::defects::{corner_defects, drop_o, iterate_pair, lift_m};
use copula_core::feasibility::{
    check_extremality, gamma, l_functional_union, negative_witness, p_main, p_opposite,
    sandwich_greedy, sandwich_lp_oracle, Extended, PValue, SandwichMethod, Witness,
};
use copula_core::transform::{bilinear_eval, reflect_sigma, restrict, Axis, BilinearRep};
use copula_core::{fixtures, io, r, Error, GridFunction, Rational, RectUnion};
use inputs::{fixture, load_grid, load_mesh, parse_coords, parse_point, Fixture};
use serde_json::{json, Value};

/// Exit codes: 0 success, 1 mathematical negative (invalid grid, empty
/// interval, non-extremal bound, ...), 2 bad input.
#[derive(Parser)]
#[command(name = "copula", version)]
#[command(about = "Exact workbench for discrete copulas and imprecise copula intervals")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the copula and quasi-copula axioms of one grid function.
    Validate {
        grid: String,
        /// Write a heatmap image (.png, .ppm or .pgm by extension).
        #[arg(long, value_name = "FILE")]
        png: Option<PathBuf>,
    },
    /// Check that (lower, upper) is a valid imprecise copula pair.
    PairValidate { lower: String, upper: String },
    /// Evaluate the bilinear extension at a point of the unit square.
    Extend {
        grid: String,
        /// Point, e.g. 1/2,3/4.
        #[arg(long, value_name = "X,Y")]
        at: String,
    },
    /// Sample the bilinear extension on another mesh.
    Restrict {
        grid: String,
        /// Cell count (uniform), a mesh/grid file, or fixtures:NAME.
        #[arg(long, value_name = "N|FILE")]
        mesh: String,
        #[arg(long, value_name = "FILE")]
        png: Option<PathBuf>,
    },
    /// Reflect a grid across a symmetry axis of its mesh.
    Reflect {
        grid: String,
        #[arg(long, value_enum, ignore_case = true)]
        axis: AxisArg,
        #[arg(long, value_name = "FILE")]
        png: Option<PathBuf>,
    },
    /// Corner-defect fields of a grid function.
    Defect { grid: String },
    /// Raise by the main defect (m) or lower by the opposite one (o).
    Transform {
        grid: String,
        #[arg(long, value_enum, ignore_case = true)]
        op: OpArg,
        #[arg(long, value_name = "FILE")]
        png: Option<PathBuf>,
    },
    /// Alternate raising and lowering from an imprecise pair until stationary.
    Iterate {
        lower: String,
        upper: String,
        #[arg(long, default_value_t = 64)]
        max_steps: usize,
        /// Write every stage of the trace into this directory.
        #[arg(long, value_name = "DIR")]
        dump_trace: Option<PathBuf>,
    },
    /// Find a copula between lower and upper, or certify that none exists.
    Sandwich {
        lower: String,
        upper: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Greedy)]
        method: MethodArg,
        /// Heatmap of the copula found (feasible case only).
        #[arg(long, value_name = "FILE")]
        png: Option<PathBuf>,
    },
    /// Search for a rectangle multiset certifying an empty interval.
    Witness { lower: String, upper: String },
    /// Optimal completion ratios at one grid point, and the safe lift gamma.
    Pvalues {
        lower: String,
        upper: String,
        #[arg(long, value_name = "I,J")]
        point: String,
        /// Restrict to one anchor; both are reported when omitted.
        #[arg(long, value_enum, ignore_case = true)]
        anchor: Option<AnchorArg>,
    },
    /// Are the bounds pointwise attained by copulas inside the interval?
    Extremal { lower: String, upper: String },
    /// List the built-in grids, or print one.
    Fixtures {
        name: Option<String>,
        #[arg(long, value_name = "FILE")]
        png: Option<PathBuf>,
    },
    /// Re-derive every recorded artifact and report pass or fail per check.
    ReproducePaper,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxisArg {
    X,
    Y,
}

#[derive(Clone, Copy, ValueEnum)]
enum OpArg {
    M,
    O,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Greedy,
    Lp,
}

#[derive(Clone, Copy, ValueEnum)]
enum AnchorArg {
    M,
    O,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn core<T>(r: copula_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Write to stdout, exiting quietly if the reader went away (`| head`).
fn out(s: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(s.as_bytes()).and_then(|()| stdout.flush()).is_err() {
        std::process::exit(0);
    }
}

fn emit(fm: Format, json: &Value, text: &str) {
    match fm {
        Format::Json => out(&format!("{}\n", serde_json::to_string_pretty(json).unwrap())),
        Format::Text => out(&format!("{text}\n")),
    }
}

fn grid_value(f: &GridFunction) -> Value {
    serde_json::from_str(&io::write_json(f)).unwrap()
}

fn emit_grid(fm: Format, f: &GridFunction, png: &Option<PathBuf>) -> Result<(), String> {
    if let Some(path) = png {
        render::save_heatmap(f, path)?;
    }
    match fm {
        Format::Json => out(&io::write_json(f)),
        Format::Text => out(&io::write_text(f)),
    }
    Ok(())
}

fn matrix_text(values: &[Vec<Rational>]) -> String {
    let rendered: Vec<Vec<String>> =
        values.iter().map(|row| row.iter().map(Rational::to_string).collect()).collect();
    io::aligned_rows(&rendered).join("\n")
}

fn union_json(u: &RectUnion) -> Value {
    Value::Array(
        u.items()
            .iter()
            .map(|(r, c)| json!({"i1": r.i1, "i2": r.i2, "j1": r.j1, "j2": r.j2, "count": c}))
            .collect(),
    )
}

fn union_text(u: &RectUnion) -> String {
    u.items()
        .iter()
        .map(|(r, c)| format!("  x {}..{}, y {}..{}, count {c}", r.i1, r.i2, r.j1, r.j2))
        .collect::<Vec<_>>()
        .join("\n")
}

fn witness_text(w: &Witness) -> String {
    format!("witness value: {}\nrectangles:\n{}", w.l_value, union_text(&w.union))
}

fn pvalue_json(pv: &PValue) -> Value {
    json!({
        "value": pv.value.to_string(),
        "attaining": pv.attaining.as_ref().map(union_json),
    })
}

fn axiom_lines(r: &ValidationReport) -> String {
    let flag = |name: &str, ok: bool, fails: u64| {
        if ok {
            format!("{name}: yes")
        } else {
            format!("{name}: no ({fails} failing sites)")
        }
    };
    [
        flag("grounded", r.grounded, r.failure_counts[0]),
        flag("neutral margins", r.neutral, r.failure_counts[1]),
        flag("nondecreasing", r.increasing1, r.failure_counts[2]),
        flag("2-increasing", r.increasing2, r.failure_counts[3]),
        flag("boundary 2-increasing", r.quasi_increasing2, r.failure_counts[4]),
    ]
    .join("\n")
}

fn run(cli: Cli) -> Result<u8, String> {
    let fm = cli.format;
    match cli.command {
        Command::Validate { grid, png } => {
            let f = load_grid(&grid)?;
            if let Some(path) = &png {
                render::save_heatmap(&f, path)?;
            }
            let report = validate_function(&f);
            let (quasi, cop) = (report.is_discrete_quasi_copula(), report.is_discrete_copula());
            let mut v = serde_json::to_value(&report).unwrap();
            v["quasi_copula"] = json!(quasi);
            v["copula"] = json!(cop);
            let text =
                format!("quasi-copula: {}, copula: {}\n{}", yn(quasi), yn(cop), axiom_lines(&report));
            emit(fm, &v, &text);
            Ok(if quasi { 0 } else { 1 })
        }
        Command::PairValidate { lower, upper } => {
            let a = load_grid(&lower)?;
            let b = load_grid(&upper)?;
            let report = core(validate_imprecise_pair(&a, &b))?;
            let ok = report.is_imprecise_copula();
            let mut v = serde_json::to_value(&report).unwrap();
            v["imprecise_copula"] = json!(ok);
            let ic = |name: &str, flag: bool, fails: u64| {
                if flag {
                    format!("{name}: yes")
                } else {
                    format!("{name}: no ({fails} failing rectangles)")
                }
            };
            let text = format!(
                "imprecise copula: {}\norder lower <= upper: {}\n{}\n{}\n{}\n{}\nlower quasi-copula: {}\nupper quasi-copula: {}",
                yn(ok),
                yn(report.order_ok),
                ic("ic1", report.ic1, report.failure_counts[0]),
                ic("ic2", report.ic2, report.failure_counts[1]),
                ic("ic3", report.ic3, report.failure_counts[2]),
                ic("ic4", report.ic4, report.failure_counts[3]),
                yn(report.lower.is_discrete_quasi_copula()),
                yn(report.upper.is_discrete_quasi_copula()),
            );
            emit(fm, &v, &text);
            Ok(if ok { 0 } else { 1 })
        }
        Command::Extend { grid, at } => {
            let f = load_grid(&grid)?;
            let (x, y) = parse_coords(&at)?;
            let value = core(bilinear_eval(&BilinearRep::new(f), &x, &y))?;
            emit(
                fm,
                &json!({"x": x.to_string(), "y": y.to_string(), "value": value.to_string()}),
                &format!("F({x}, {y}) = {value}"),
            );
            Ok(0)
        }
        Command::Restrict { grid, mesh, png } => {
            let f = load_grid(&grid)?;
            let sub = load_mesh(&mesh)?;
            let g = restrict(&BilinearRep::new(f), &sub);
            emit_grid(fm, &g, &png)?;
            Ok(0)
        }
        Command::Reflect { grid, axis, png } => {
            let f = load_grid(&grid)?;
            let axis = match axis {
                AxisArg::X => Axis::X,
                AxisArg::Y => Axis::Y,
            };
            let g = core(reflect_sigma(&f, axis))?;
            emit_grid(fm, &g, &png)?;
            Ok(0)
        }
        Command::Defect { grid } => {
            let f = load_grid(&grid)?;
            let d = corner_defects(&f);
            let fields = [
                ("d_ne", &d.d_ne),
                ("d_sw", &d.d_sw),
                ("d_nw", &d.d_nw),
                ("d_se", &d.d_se),
                ("d_m", &d.d_m),
                ("d_o", &d.d_o),
            ];
            let v = Value::Object(
                fields.iter().map(|(name, g)| (name.to_string(), grid_value(g))).collect(),
            );
            let text = fields
                .iter()
                .map(|(name, g)| format!("{name}:\n{}", matrix_text(g.values())))
                .collect::<Vec<_>>()
                .join("\n\n");
            emit(fm, &v, &text);
            Ok(0)
        }
        Command::Transform { grid, op, png } => {
            let f = load_grid(&grid)?;
            let g = match op {
                OpArg::M => lift_m(&f),
                OpArg::O => drop_o(&f),
            };
            emit_grid(fm, &g, &png)?;
            Ok(0)
        }
        Command::Iterate { lower, upper, max_steps, dump_trace } => {
            let a = load_grid(&lower)?;
            let b = load_grid(&upper)?;
            let trace = core(iterate_pair(&a, &b, max_steps))?;
            if let Some(dir) = &dump_trace {
                fs::create_dir_all(dir).map_err(|e| format!("cannot create {}: {e}", dir.display()))?;
                for (k, (lo, hi)) in trace.pairs.iter().enumerate() {
                    for (side, g) in [("lower", lo), ("upper", hi)] {
                        let path = dir.join(format!("step-{k:03}-{side}.txt"));
                        fs::write(&path, io::write_text(g))
                            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
                    }
                }
            }
            let (fin_a, fin_b) = trace.last();
            let limit = trace.limit_is_copula();
            let v = json!({
                "steps": trace.steps,
                "converged": trace.converged,
                "limit_is_copula": limit,
                "final_lower": grid_value(fin_a),
                "final_upper": grid_value(fin_b),
            });
            let text = format!(
                "steps: {}\nconverged: {}\nlimit is a single copula: {}\n\nfinal lower:\n{}\nfinal upper:\n{}",
                trace.steps,
                yn(trace.converged),
                limit.map_or("unknown", yn),
                matrix_text(fin_a.values()),
                matrix_text(fin_b.values()),
            );
            emit(fm, &v, &text);
            Ok(if limit == Some(true) { 0 } else { 1 })
        }
        Command::Sandwich { lower, upper, method, png } => {
            let a = load_grid(&lower)?;
            let b = load_grid(&upper)?;
            let result = core(match method {
                MethodArg::Greedy => sandwich_greedy(&a, &b),
                MethodArg::Lp => sandwich_lp_oracle(&a, &b),
            })?;
            let method_name = match result.method {
                SandwichMethod::Greedy => "greedy",
                SandwichMethod::LpOracle => "lp-oracle",
            };
            match (result.copula(), result.witness()) {
                (Some(c), _) => {
                    if let Some(path) = &png {
                        render::save_heatmap(c, path)?;
                    }
                    let v = json!({
                        "outcome": "copula",
                        "method": method_name,
                        "copula": grid_value(c),
                    });
                    let text = format!(
                        "outcome: copula found ({method_name})\n{}",
                        matrix_text(c.values())
                    );
                    emit(fm, &v, &text);
                    Ok(0)
                }
                (None, Some(w)) => {
                    let v = json!({
                        "outcome": "infeasible",
                        "method": method_name,
                        "witness": serde_json::to_value(w).unwrap(),
                    });
                    let text = format!(
                        "outcome: interval is empty ({method_name})\n{}",
                        witness_text(w)
                    );
                    emit(fm, &v, &text);
                    Ok(1)
                }
                (None, None) => unreachable!("a sandwich result is a copula or a witness"),
            }
        }
        Command::Witness { lower, upper } => {
            let a = load_grid(&lower)?;
            let b = load_grid(&upper)?;
            match core(negative_witness(&a, &b))? {
                Some(w) => {
                    let v = json!({"witness": serde_json::to_value(&w).unwrap()});
                    emit(fm, &v, &witness_text(&w));
                    Ok(1)
                }
                None => {
                    emit(fm, &json!({"witness": null}), "no negative witness: the interval contains a copula");
                    Ok(0)
                }
            }
        }
        Command::Pvalues { lower, upper, point, anchor } => {
            let a = load_grid(&lower)?;
            let b = load_grid(&upper)?;
            let x = parse_point(&point)?;
            let (want_m, want_o) = match anchor {
                None => (true, true),
                Some(AnchorArg::M) => (true, false),
                Some(AnchorArg::O) => (false, true),
            };
            let mut v = json!({"point": [x.0, x.1]});
            let mut lines = Vec::new();
            let mut negative = false;
            if want_m {
                let pm = core(p_main(&a, &b, x))?;
                negative |= pm.value == Extended::MinusInfinity;
                lines.push(format!("P_M({}, {}) = {}", x.0, x.1, pm.value));
                v["p_main"] = pvalue_json(&pm);
            }
            if want_o {
                let po = core(p_opposite(&a, &b, x))?;
                let g = core(gamma(&a, &b, x))?;
                negative |= po.value == Extended::MinusInfinity;
                lines.push(format!("P_O({}, {}) = {}", x.0, x.1, po.value));
                lines.push(format!("gamma({}, {}) = {}", x.0, x.1, g));
                v["p_opposite"] = pvalue_json(&po);
                v["gamma"] = json!(g.to_string());
            }
            emit(fm, &v, &lines.join("\n"));
            Ok(u8::from(negative))
        }
        Command::Extremal { lower, upper } => {
            let a = load_grid(&lower)?;
            let b = load_grid(&upper)?;
            let report = match check_extremality(&a, &b) {
                Ok(rep) => rep,
                Err(Error::EmptyInterval) => {
                    emit(
                        fm,
                        &json!({"error": "empty interval"}),
                        "the interval contains no copula; extremality is undefined",
                    );
                    return Ok(1);
                }
                Err(e) => return Err(e.to_string()),
            };
            let ok = report.upper_extremal && report.lower_extremal;
            let v = serde_json::to_value(&report).unwrap();
            let mut text = format!(
                "upper bound extremal: {}\nlower bound extremal: {}",
                yn(report.upper_extremal),
                yn(report.lower_extremal),
            );
            for fp in &report.failing_points {
                let side = match fp.anchor {
                    copula_core::feasibility::Anchor::Main => "lower",
                    copula_core::feasibility::Anchor::Opposite => "upper",
                };
                text.push_str(&format!(
                    "\n  {} fails at ({}, {}): gap {}, ratio {}",
                    side, fp.point.0, fp.point.1, fp.gap, fp.p_value
                ));
            }
            emit(fm, &v, &text);
            Ok(u8::from(!ok))
        }
        Command::Fixtures { name, png } => match name {
            None => {
                let rows: [(&str, &str); 9] = [
                    ("ex7-A", "lower bound of a stationary seven-cell pair"),
                    ("ex7-B", "upper bound of a stationary seven-cell pair"),
                    ("ex10-A", "ten-cell quasi-copula with negative cells"),
                    ("ex10-DM", "main corner defect of ex10-A"),
                    ("ex10-B", "ex10-A raised by its main defect"),
                    ("ex10-V", "cell volumes of ex10-A (matrix, not a grid)"),
                    ("pi@N", "independence copula on the uniform NxN mesh"),
                    ("min@N", "upper Frechet-Hoeffding bound on the uniform NxN mesh"),
                    ("wbound@N", "lower Frechet-Hoeffding bound on the uniform NxN mesh"),
                ];
                let v = Value::Array(
                    rows.iter().map(|(n, d)| json!({"name": n, "description": d})).collect(),
                );
                let width = rows.iter().map(|(n, _)| n.len()).max().unwrap();
                let text = rows
                    .iter()
                    .map(|(n, d)| format!("{n:width$}  {d}"))
                    .collect::<Vec<_>>()
                    .join("\n");
                emit(fm, &v, &text);
                Ok(0)
            }
            Some(name) => match fixture(&name)? {
                Fixture::Grid(g) => {
                    emit_grid(fm, &g, &png)?;
                    Ok(0)
                }
                Fixture::Cells(cells) => {
                    if png.is_some() {
                        return Err("cell-volume matrices have no heatmap".into());
                    }
                    let rows: Vec<Vec<String>> = cells
                        .iter()
                        .map(|row| row.iter().map(Rational::to_string).collect())
                        .collect();
                    emit(fm, &json!({"cells": rows}), &matrix_text(&cells));
                    Ok(0)
                }
            },
        },
        Command::ReproducePaper => reproduce(fm),
    }
}

/// Every recorded artifact, re-derived from scratch. Kept in one place so the
/// list reads as a table of contents of the repository's claims.
fn reproduce(fm: Format) -> Result<u8, String> {
    let mut checks: Vec<(&'static str, bool)> = Vec::new();

    let a7 = fixtures::ex7_lower();
    let b7 = fixtures::ex7_upper();
    checks.push(("seven-cell raise reaches recorded upper bound", lift_m(&a7) == b7));
    checks.push(("seven-cell drop returns recorded lower bound", drop_o(&b7) == a7));
    let t7 = core(iterate_pair(&a7, &b7, 8))?;
    checks.push((
        "seven-cell pair is stationary and genuinely imprecise",
        t7.converged && t7.steps == 0 && t7.limit_is_copula() == Some(false),
    ));
    let in_interval = |c: &GridFunction, lo: &GridFunction, hi: &GridFunction| {
        validate_function(c).is_discrete_copula()
            && lo.le(c).unwrap_or(false)
            && c.le(hi).unwrap_or(false)
    };
    let g7 = core(sandwich_greedy(&a7, &b7))?;
    let o7 = core(sandwich_lp_oracle(&a7, &b7))?;
    checks.push((
        "seven-cell interval contains a copula",
        core(negative_witness(&a7, &b7))?.is_none()
            && g7.copula().is_some_and(|c| in_interval(c, &a7, &b7))
            && o7.copula().is_some_and(|c| in_interval(c, &a7, &b7)),
    ));

    let a10 = fixtures::ex10_lower();
    let b10 = fixtures::ex10_upper();
    checks.push(("ten-cell main defect matches recorded field", {
        corner_defects(&a10).d_m == fixtures::ex10_main_defect()
    }));
    checks.push(("ten-cell raise reaches recorded upper bound", lift_m(&a10) == b10));
    checks.push((
        "ten-cell volumes match recorded matrix",
        a10.cell_volume_matrix() == fixtures::ex10_cell_volumes(),
    ));
    checks.push((
        "ten-cell pair is a valid imprecise copula",
        core(validate_imprecise_pair(&a10, &b10))?.is_imprecise_copula(),
    ));
    checks.push((
        "ten-cell interval is empty (greedy)",
        core(sandwich_greedy(&a10, &b10))?.witness().is_some(),
    ));
    checks.push((
        "ten-cell interval is empty (lp oracle)",
        core(sandwich_lp_oracle(&a10, &b10))?.witness().is_some(),
    ));
    let w10 = core(negative_witness(&a10, &b10))?;
    checks.push((
        "ten-cell witness certifies emptiness",
        w10.as_ref().is_some_and(|w| {
            w.l_value.is_negative()
                && l_functional_union(&a10, &b10, &w.union).ok().as_ref() == Some(&w.l_value)
        }),
    ));
    checks.push((
        "ten-cell recorded region evaluates to -1/50",
        core(l_functional_union(&a10, &b10, &fixtures::ex10_witness_region()))? == r!(-1 / 50),
    ));
    checks.push((
        "ten-cell completion ratios match recorded values",
        core(p_opposite(&a10, &b10, (2, 2)))?.value == r!(-1 / 50)
            && core(p_main(&a10, &b10, (2, 2)))?.value == r!(1 / 50)
            && core(p_opposite(&a10, &b10, (1, 1)))?.value == r!(1 / 25)
            && core(p_main(&a10, &b10, (1, 1)))?.value == r!(-1 / 50)
            && core(p_opposite(&a10, &b10, (2, 3)))?.value == Extended::MinusInfinity
            && core(p_main(&a10, &b10, (2, 3)))?.value == Extended::MinusInfinity
            && core(gamma(&a10, &b10, (1, 1)))? == r!(1 / 50)
            && core(gamma(&a10, &b10, (2, 2)))? == r!(-1 / 50),
    ));
    let t10 = core(iterate_pair(&a10, &b10, 16))?;
    checks.push((
        "ten-cell iteration stalls after two steps",
        t10.converged && t10.steps == 2 && t10.limit_is_copula() == Some(false),
    ));

    let failed = checks.iter().filter(|(_, ok)| !ok).count();
    let v = json!({
        "checks": checks.iter().map(|(n, ok)| json!({"name": n, "ok": ok})).collect::<Vec<_>>(),
        "all_ok": failed == 0,
    });
    let mut lines: Vec<String> = checks
        .iter()
        .map(|(n, ok)| format!("{n}: {}", if *ok { "ok" } else { "FAIL" }))
        .collect();
    lines.push(if failed == 0 {
        format!("all {} checks passed", checks.len())
    } else {
        format!("{failed} of {} checks FAILED", checks.len())
    });
    emit(fm, &v, &lines.join("\n"));
    Ok(u8::from(failed != 0))
}

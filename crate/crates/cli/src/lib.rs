//! Front end for the `hartogs` binary: argument parsing, the domain DSL, and
//! report rendering. [`run`] does all the work and never touches the process
//! streams, so tests can drive it directly.

pub mod dsl;
pub mod report;

use std::io::Read;

use clap::{Parser, Subcommand};
use hartogs::cech::formula_route_spectrum;
use hartogs::envelope::EnvelopeError;
use hartogs::numeric::TorusSpec;
use hartogs::{classify_product_pair, cohomology, CohomologyError, HartogsFigure, PairTag, ReinhardtBoxDomain};
use serde_json::{json, Map, Value};

use dsl::{DslError, Expr};
use report::{to_value, VerifyOptions, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hartogs", version, about = "Cohomology and envelopes of generalized Hartogs figures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Form degree p.
    #[arg(long, global = true, default_value_t = 0, allow_negative_numbers = true)]
    pub p: i64,
    /// Cohomological degree q.
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    pub q: i64,
    /// Exponent window for the lattice oracle.
    #[arg(long, global = true, default_value_t = 16)]
    pub window: u32,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Nodes per axis for torus quadrature (power of two, at least 4).
    #[arg(long = "quadrature-nodes", global = true, default_value_t = 64)]
    pub quadrature_nodes: usize,
    /// Seed for the random test polynomials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Append a gnuplot table of density errors (verify and report).
    #[arg(long, global = true)]
    pub table: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a Stein pair `(Z0, Z)`.
    ClassifyPair { z0: String, z: String },
    /// Monomial spectra of a domain or of the pieces of a figure.
    Spectrum { expr: String },
    /// One cohomology group `H^{p,q}` of a figure.
    Cohomology { expr: String },
    /// Log image, log-convex hull and envelope of a two-dimensional figure.
    Envelope { expr: String },
    /// Internal cross-checks on a figure.
    Verify { expr: String },
    /// Everything, as one document.
    Report { expr: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: EXIT_OK, stdout, stderr: String::new() }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome { code, stdout: String::new(), stderr }
    }
}

fn read_source(arg: &str) -> Result<String, Outcome> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut buf = String::new();
    std::io::stdin()
        .read_to_string(&mut buf)
        .map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: cannot read stdin: {e}")))?;
    Ok(buf)
}

fn parse_expr(arg: &str) -> Result<Expr, Outcome> {
    let src = read_source(arg)?;
    dsl::parse_checked(&src).map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: {e}")))
}

fn figure(arg: &str) -> Result<(Expr, HartogsFigure), Outcome> {
    let expr = parse_expr(arg)?;
    let h = expr.to_figure().map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: {}", DslError::from(e))))?;
    Ok((expr, h))
}

fn domain(arg: &str) -> Result<ReinhardtBoxDomain, Outcome> {
    let expr = parse_expr(arg)?;
    expr.to_domain().map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: {}", DslError::from(e))))
}

fn cohomology_failure(e: &CohomologyError) -> Outcome {
    let code = match e {
        CohomologyError::Unsupported { .. } | CohomologyError::NoApplicableRule(..) => EXIT_UNSUPPORTED,
        _ => EXIT_INPUT,
    };
    Outcome::fail(code, format!("error: {e}"))
}

fn envelope_failure(e: &EnvelopeError) -> Outcome {
    Outcome::fail(EXIT_UNSUPPORTED, format!("error: {e}"))
}

fn emit(cli: &Cli, value: Value, text: String) -> String {
    if cli.json {
        report::render_json(&value)
    } else {
        text
    }
}

/// Execute one command. The exit code follows the 0/2/3/4 contract.
pub fn run(cli: &Cli) -> Outcome {
    match run_inner(cli) {
        Ok(o) | Err(o) => o,
    }
}

fn check_nodes(cli: &Cli) -> Result<(), Outcome> {
    TorusSpec::new(vec![1.0], cli.quadrature_nodes)
        .map(|_| ())
        .map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: --quadrature-nodes: {e}")))
}

fn checks_code(v: &report::Verification) -> i32 {
    if v.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn run_inner(cli: &Cli) -> Result<Outcome, Outcome> {
    if matches!(cli.command, Command::Verify { .. } | Command::Report { .. }) {
        check_nodes(cli)?;
    }
    match &cli.command {
        Command::ClassifyPair { z0, z } => {
            let (z0, z) = (domain(z0)?, domain(z)?);
            let class = classify_product_pair(&z0, &z).map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: {e}")))?;
            let mut text = format!("pair ({z0}, {z}): {}\n", class.tag);
            if let Some(q) = &class.complement {
                text += &format!("  complement spectrum: {q}\n");
            }
            if let Some(c) = &class.closure_of_restriction {
                text += &format!("  closure of restriction: {c}\n");
            }
            if let Some(d) = &class.intermediate {
                text += &format!("  intermediate domain: {d}\n");
            }
            text += &format!("  rule: {} {}\n", class.witness_rule.id(), class.witness_rule.statement());
            if let Some(r) = &class.reason {
                text += &format!("  reason: {r}\n");
            }
            let out = emit(cli, to_value(&class), text);
            if class.tag == PairTag::Unsupported {
                return Ok(Outcome { code: EXIT_UNSUPPORTED, stdout: out, stderr: String::new() });
            }
            Ok(Outcome::ok(out))
        }
        Command::Spectrum { expr } => {
            let expr = parse_expr(expr)?;
            if let Ok(d) = expr.to_domain() {
                let s = d.spectrum();
                return Ok(Outcome::ok(emit(cli, json!({ "domain": to_value(&s) }), format!("O({d}): {s}\n"))));
            }
            let h = expr.to_figure().map_err(|e| Outcome::fail(EXIT_INPUT, format!("error: {}", DslError::from(e))))?;
            let cover = h.cover();
            let (s1, s2, s12) = (cover.u1.spectrum(), cover.u2.spectrum(), cover.u12.spectrum());
            let h01 = cohomology(&h, 0, 1).map_err(|e| cohomology_failure(&e))?;
            let reduced = h01.reduced.spectrum();
            let text = format!("U1: {s1}\nU2: {s2}\nU12: {s12}\nreduced H^{{0,1}}: {reduced}\n");
            let value = json!({ "u1": to_value(&s1), "u2": to_value(&s2), "u12": to_value(&s12), "reduced_h01": to_value(&reduced) });
            Ok(Outcome::ok(emit(cli, value, text)))
        }
        Command::Cohomology { expr } => {
            let (_, h) = figure(expr)?;
            let rep = cohomology(&h, cli.p, cli.q).map_err(|e| cohomology_failure(&e))?;
            Ok(Outcome::ok(emit(cli, to_value(&rep), report::cohomology_text(&rep))))
        }
        Command::Envelope { expr } => {
            let (_, h) = figure(expr)?;
            let text = report::envelope_text(&h).map_err(|e| envelope_failure(&e))?;
            Ok(Outcome::ok(emit(cli, report::envelope_value(&h), text)))
        }
        Command::Verify { expr } => {
            let (_, h) = figure(expr)?;
            let v = report::verify(&h, &options(cli)).map_err(|e| cohomology_failure(&e))?;
            let value = json!({ "checks": to_value(&v.checks), "checks_passed": v.passed() });
            let mut text = report::verification_text(&v);
            if cli.table {
                text += &v.decay_table();
            }
            Ok(Outcome { code: checks_code(&v), stdout: emit(cli, value, text), stderr: String::new() })
        }
        Command::Report { expr } => {
            let (expr, h) = figure(expr)?;
            let (doc, text, v) = full_report(cli, &expr, &h)?;
            Ok(Outcome { code: checks_code(&v), stdout: emit(cli, doc, text), stderr: String::new() })
        }
    }
}

fn options(cli: &Cli) -> VerifyOptions {
    VerifyOptions { window: cli.window, nodes: cli.quadrature_nodes, seed: cli.seed }
}

fn full_report(cli: &Cli, expr: &Expr, h: &HartogsFigure) -> Result<(Value, String, report::Verification), Outcome> {
    let reports = report::all_reports(h).map_err(|e| cohomology_failure(&e))?;
    let v = report::verify(h, &options(cli)).map_err(|e| cohomology_failure(&e))?;
    let mut groups = Map::new();
    let mut text = format!("input: {expr}\n");
    for r in &reports {
        groups.insert(format!("{},{}", r.bidegree.0, r.bidegree.1), to_value(r));
        text += &report::cohomology_text(r);
    }
    let pairs = report::pair_classes(h);
    for side in ["x", "y"] {
        let tag = pairs[side]["tag"].as_str().unwrap_or("error");
        text += &format!("pair {side}: {tag}\n");
    }
    let envelope = if h.x().dim() == 1 && h.y().dim() == 1 {
        text += &report::envelope_text(h).map_err(|e| envelope_failure(&e))?;
        report::envelope_value(h)
    } else {
        text += "envelope: not computed above two dimensions\n";
        Value::Null
    };
    text += &report::verification_text(&v);
    if cli.table {
        text += &v.decay_table();
    }
    let formula = formula_route_spectrum(h).ok().map(|s| to_value(&s));
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "input": expr.to_string(),
        "cohomology": groups,
        "pairs": pairs,
        "envelope": envelope,
        "formula_route": formula,
        "verification": { "checks": to_value(&v.checks), "checks_passed": v.passed() },
        "settings": { "window": cli.window, "quadrature_nodes": cli.quadrature_nodes, "seed": cli.seed },
    });
    text += &format!("checks passed: {}\n", v.passed());
    Ok((doc, text, v))
}

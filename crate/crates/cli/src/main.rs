use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use afembed::decision::{cross_check, Decision, Verdict};
use afembed::dynamics::{make_section, parse_function, phi_push, CylFun, SectionPolicy};
use afembed::graph::{parse_graph, Graph};
use afembed::homology::{h0_class, im_boundary_depth, H0ClassRecord};
use afembed::ktheory::{
    cone_generated_by_indicators, indicator_projection, k0_class, nu, random_subset,
    truncation_rel, Projection,
};
use afembed::selftest::{run_selftest, SelftestConfig};
use afembed::Error;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

const EXIT_AFE: u8 = 0;
const EXIT_NOT_AFE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DISAGREE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "afembed",
    version,
    about = "AF-embeddability and H0/K0 invariants of graph shifts"
)]
struct Cli {
    /// Report timing_ms as 0 so output is byte-stable.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// AF-embeddability decision.
    #[command(subcommand)]
    Afe(AfeCommand),
    /// H0 and K0 computations on finite truncations.
    #[command(subcommand)]
    Invariants(InvariantsCommand),
    /// Seeded invariant battery over random graphs.
    Selftest(SelftestArgs),
}

#[derive(Subcommand)]
enum AfeCommand {
    /// Decide and cross-check a graph file.
    Check { file: PathBuf },
}

#[derive(Subcommand)]
enum InvariantsCommand {
    H0(H0Args),
    Ktheory(KtheoryArgs),
}

#[derive(Args)]
struct Truncation {
    file: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    depth: usize,
}

#[derive(Args)]
struct H0Args {
    #[command(flatten)]
    at: Truncation,
    /// `label=coeff,...` at the given depth; repeatable. Defaults to 1.
    #[arg(long = "function")]
    functions: Vec<String>,
}

#[derive(Args)]
struct KtheoryArgs {
    #[command(flatten)]
    at: Truncation,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random subsets V checked against the ν identity.
    #[arg(long, default_value_t = 5)]
    samples: usize,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 50)]
    count: usize,
    #[arg(long, default_value_t = 4)]
    max_vertices: usize,
    #[arg(long, default_value_t = 6)]
    max_edges: usize,
    #[arg(long, hide = true)]
    corrupt_graph_condition: bool,
}

#[derive(Serialize)]
struct Report {
    tool: &'static str,
    version: &'static str,
    input_digest: Option<String>,
    command: String,
    result: Option<Value>,
    error: Option<ErrorRecord>,
    timing_ms: u64,
}

#[derive(Serialize)]
struct ErrorRecord {
    kind: &'static str,
    message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    vertices: Vec<String>,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        let (kind, vertices) = match e {
            Error::Malformed { .. } => ("malformed", vec![]),
            Error::DuplicateIdentifier { .. } => ("duplicate-identifier", vec![]),
            Error::UnknownVertex { id, .. } => ("unknown-vertex", vec![id.clone()]),
            Error::Sinks(v) => ("sinks", v.clone()),
            Error::Sources(v) => ("sources", v.clone()),
            Error::InvalidPath(_) => ("invalid-path", vec![]),
            Error::DepthBelow { .. } => ("depth-below", vec![]),
            Error::Dimension(_) => ("dimension", vec![]),
            Error::GraphMismatch => ("graph-mismatch", vec![]),
            Error::InvalidArgument(_) => ("invalid-argument", vec![]),
            Error::NotProjection(_) => ("not-projection", vec![]),
            Error::NonIntegerTrace(_) => ("non-integer-trace", vec![]),
            Error::NotBijection(_) => ("not-bijection", vec![]),
            Error::AttemptsExhausted(_) => ("attempts-exhausted", vec![]),
            Error::Internal(_) => ("internal", vec![]),
        };
        ErrorRecord {
            kind,
            message: e.to_string(),
            vertices,
        }
    }
}

/// What a command produced: payload, exit code, one-line summary.
struct Outcome {
    result: Value,
    code: u8,
    summary: String,
}

enum Failure {
    Input(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report payloads serialize")
}

fn read_graph(path: &Path) -> Result<(Graph, String), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let digest = format!("{:x}", Sha256::digest(&bytes));
    let text = String::from_utf8(bytes)
        .map_err(|_| Failure::Io(format!("{}: not valid UTF-8", path.display())))?;
    Ok((parse_graph(&text)?, digest))
}

fn cmd_afe(g: &Graph) -> Result<Outcome, Failure> {
    let d: Decision = cross_check(g)?;
    let code = if !d.checks.agree {
        EXIT_DISAGREE
    } else if d.verdict == Verdict::NotAfe {
        EXIT_NOT_AFE
    } else {
        EXIT_AFE
    };
    let summary = match (&d.witness, d.checks.agree) {
        (_, false) => format!("methods disagree: {:?}", d.checks),
        (Some(w), _) => format!("{} (witness {w:?})", d.verdict.as_str()),
        (None, _) => d.verdict.as_str().to_string(),
    };
    Ok(Outcome {
        result: to_value(&d),
        code,
        summary,
    })
}

fn check_truncation(at: &Truncation) -> Result<(), Failure> {
    if at.n == 0 || at.depth < at.n {
        return Err(Error::InvalidArgument(format!(
            "need depth >= n >= 1, got n = {}, depth = {}",
            at.n, at.depth
        ))
        .into());
    }
    Ok(())
}

#[derive(Serialize)]
struct FunctionReport {
    input: String,
    class: H0ClassRecord,
    positive: bool,
    /// Depth at which `f − φⁿ(class)` was found in `Im ∂₁`, if within reach.
    lattice_depth: Option<usize>,
}

fn cmd_h0(g: &Graph, args: &H0Args) -> Result<Outcome, Failure> {
    check_truncation(&args.at)?;
    let (n, depth) = (args.at.n, args.at.depth);
    g.require_no_sinks_or_sources()?;
    let section = make_section(g, SectionPolicy::FirstEdge)?;
    let inputs = if args.functions.is_empty() {
        vec![String::from("1")]
    } else {
        args.functions.clone()
    };
    let mut reports = Vec::new();
    for text in &inputs {
        let f = if text == "1" {
            CylFun::constant(g, 1).refine(depth)?
        } else {
            parse_function(g, depth, text)?
        };
        let class = h0_class(&f, n)?;
        let diff = f.sub(&phi_push(&class.rep, &section, n)?)?;
        reports.push(FunctionReport {
            input: text.clone(),
            positive: class.is_positive(),
            class: class.to_record(),
            lattice_depth: im_boundary_depth(&diff, n, depth + 2)?,
        });
    }
    let basis: Vec<String> = g
        .path_table(depth - n)
        .paths()
        .iter()
        .map(|p| p.label(g))
        .collect();
    let summary = format!(
        "H0 at level {n}: Z^{} over paths of length {}",
        basis.len(),
        depth - n
    );
    Ok(Outcome {
        result: json!({
            "n": n,
            "depth": depth,
            "class_group": {"rank": basis.len(), "basis": basis, "cone": "componentwise"},
            "functions": reports,
        }),
        code: EXIT_AFE,
        summary,
    })
}

fn cmd_ktheory(g: &Graph, args: &KtheoryArgs) -> Result<Outcome, Failure> {
    check_truncation(&args.at)?;
    let (n, depth) = (args.at.n, args.at.depth);
    let rel = truncation_rel(g, n, depth)?;
    let classes: Vec<Value> = rel
        .labels()
        .into_iter()
        .enumerate()
        .map(|(c, members)| {
            json!({
                "index": c,
                "tail": rel.tail(c).label(g),
                "size": members.len(),
                "members": members,
            })
        })
        .collect();
    let identity = k0_class(&Projection::identity(&rel))?;
    let table = g.path_table(depth);
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut samples = Vec::new();
    let mut all_agree = true;
    for _ in 0..args.samples {
        let v = random_subset(&rel, &mut rng);
        let k0 = k0_class(&indicator_projection(&rel, &v)?)?;
        let via_nu = nu(&rel, &k0)?;
        let mut ind = CylFun::zero(g, depth);
        for &x in &v {
            ind = ind.add(&CylFun::indicator(g, table.get(x))?)?;
        }
        let direct = h0_class(&ind, n)?;
        let agree = via_nu == direct;
        all_agree &= agree;
        samples.push(json!({
            "subset": v.iter().map(|&x| table.get(x).label(g)).collect::<Vec<_>>(),
            "k0": k0,
            "nu": via_nu.to_record(),
            "h0": direct.to_record(),
            "agree": agree,
        }));
    }
    let cone = cone_generated_by_indicators(&rel)?;
    let summary = format!(
        "{} classes, identity trace {:?}, nu agreement {}",
        rel.classes().len(),
        identity.0,
        all_agree
    );
    Ok(Outcome {
        result: json!({
            "n": n,
            "depth": depth,
            "classes": classes,
            "identity_trace": identity,
            "samples": samples,
            "agree": all_agree,
            "cone_generated": cone,
        }),
        code: if all_agree && cone {
            EXIT_AFE
        } else {
            EXIT_DISAGREE
        },
        summary,
    })
}

fn cmd_selftest(args: &SelftestArgs) -> Result<Outcome, Failure> {
    let report = run_selftest(&SelftestConfig {
        seed: args.seed,
        count: args.count,
        max_vertices: args.max_vertices,
        max_edges: args.max_edges,
        corrupt_graph_condition: args.corrupt_graph_condition,
    })?;
    let summary = match &report.failure {
        None => format!(
            "{} graphs, {} checks, all passed",
            report.graphs_checked, report.checks_run
        ),
        Some(f) => format!(
            "check `{}` failed on graph {}; minimized:\n{}",
            f.check, f.graph_index, f.minimized
        ),
    };
    Ok(Outcome {
        code: if report.passed {
            EXIT_AFE
        } else {
            EXIT_DISAGREE
        },
        result: to_value(&report),
        summary,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut digest = None;
    let (name, outcome) = match &cli.command {
        Command::Afe(AfeCommand::Check { file }) => (
            "afe check",
            read_graph(file).and_then(|(g, d)| {
                digest = Some(d);
                cmd_afe(&g)
            }),
        ),
        Command::Invariants(InvariantsCommand::H0(args)) => (
            "invariants h0",
            read_graph(&args.at.file).and_then(|(g, d)| {
                digest = Some(d);
                cmd_h0(&g, args)
            }),
        ),
        Command::Invariants(InvariantsCommand::Ktheory(args)) => (
            "invariants ktheory",
            read_graph(&args.at.file).and_then(|(g, d)| {
                digest = Some(d);
                cmd_ktheory(&g, args)
            }),
        ),
        Command::Selftest(args) => ("selftest", cmd_selftest(args)),
    };
    let timing_ms = if cli.no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    let mut report = Report {
        tool: "afembed",
        version: env!("CARGO_PKG_VERSION"),
        input_digest: digest,
        command: name.to_string(),
        result: None,
        error: None,
        timing_ms,
    };
    let code = match outcome {
        Ok(o) => {
            eprintln!("{name}: {}", o.summary);
            report.result = Some(o.result);
            o.code
        }
        Err(Failure::Input(e)) => {
            eprintln!("{name}: error: {e}");
            // internal inconsistencies are bugs, not input problems
            let code = if matches!(e, Error::Internal(_)) {
                EXIT_DISAGREE
            } else {
                EXIT_INPUT
            };
            report.error = Some(ErrorRecord::from(&e));
            code
        }
        Err(Failure::Io(msg)) => {
            eprintln!("{name}: error: {msg}");
            report.error = Some(ErrorRecord {
                kind: "io",
                message: msg,
                vertices: vec![],
            });
            EXIT_INPUT
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    ExitCode::from(code)
}

//! `zdga`: analyze zero-divisor graphs of finite commutative rings and check
//! the partitionability theorems for global defensive alliances.
//!
//! Exit codes: 0 ok, 1 theorem mismatch, 2 parse error, 3 size cap exceeded,
//! 4 internal verification failure, 5 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use zdga::partition::DEFAULT_MAX_EXACT;
use zdga::report::{analyze, AnalyzeError, AnalyzeOptions, PsiValue};
use zdga::ring::{RingBuilder, RingError, DEFAULT_MAX_ORDER};
use zdga::theorems::{run_suite, SuiteOptions};
use zdga::{spec, ZeroDivisorGraph};

const EXIT_MISMATCH: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_CAP: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(name = "zdga", version, about = "Global defensive alliance partitions of zero-divisor graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute |Z(R)|, γ, γ_a, ψ_g and the ψ_g bounds for one ring.
    Analyze(AnalyzeArgs),
    /// Check every theorem family against the exact solver.
    VerifyTheorems(VerifyArgs),
    /// Emit the zero-divisor graph as DOT.
    Graph(GraphArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Ring spec, e.g. "Z9", "GF(4)xGF(4)", "Z3x(Z3(+)Z3)", "Z2[x]/(x^2)".
    spec: String,
    /// Write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the graph as DOT to this path.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Include the full partition certificate.
    #[arg(long)]
    certificate: bool,
    /// Largest ring order to materialize.
    #[arg(long, env = "ZDGA_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Largest vertex count for exact γ, γ_a and ψ_g.
    #[arg(long, default_value_t = DEFAULT_MAX_EXACT)]
    max_exact: usize,
    /// Cross-check ψ_g against exhaustive set-partition enumeration (|V| ≤ 10).
    #[arg(long)]
    oracle: bool,
    /// Omit timing so output is byte-stable.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest ring order among generated cases.
    #[arg(long, env = "ZDGA_MAX_ORDER", default_value_t = 64)]
    max_order: usize,
    /// Cases whose graphs exceed this many vertices are skipped.
    #[arg(long, default_value_t = DEFAULT_MAX_EXACT)]
    max_exact: usize,
    /// Write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Omit timing so output is byte-stable.
    #[arg(long)]
    no_timing: bool,
    /// Corrupt one prediction rule (harness self-test).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct GraphArgs {
    spec: String,
    /// Write DOT here instead of stdout.
    #[arg(long)]
    dot: Option<PathBuf>,
    #[arg(long, env = "ZDGA_MAX_ORDER", default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn ring_failure(e: RingError) -> Failure {
    let code = if matches!(e, RingError::SizeLimit { .. }) { EXIT_CAP } else { EXIT_PARSE };
    Failure::new(code, e.to_string())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8, Failure> {
    let opts = AnalyzeOptions {
        max_order: args.max_order,
        max_exact: args.max_exact,
        oracle: args.oracle,
        certificate: args.certificate,
        timing: !args.no_timing,
    };
    let report = analyze(&args.spec, &opts).map_err(|e| match e {
        AnalyzeError::Parse(p) => {
            Failure::new(EXIT_PARSE, format!("{}\n  {}\n  {}^", p, args.spec, " ".repeat(p.position())))
        }
        AnalyzeError::Ring(r) => ring_failure(r),
        other => Failure::new(EXIT_VERIFY, other.to_string()),
    })?;
    print!("{}", report.to_text());
    if let Some(cert) = &report.certificate {
        print!("{}", to_json(cert));
    }
    if let Some(path) = &args.json {
        write_file(path, &to_json(&report))?;
    }
    if let Some(path) = &args.dot {
        let ring = spec::build(&args.spec, &RingBuilder::with_max_order(args.max_order))
            .map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
        write_file(path, &ZeroDivisorGraph::build(&ring).to_dot())?;
    }
    if report.psi_g == PsiValue::NotComputedCap {
        eprintln!("psi_g not computed: |V| = {} exceeds --max-exact {}", report.vertices, args.max_exact);
        return Ok(EXIT_CAP);
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, Failure> {
    let opts = SuiteOptions {
        max_order: args.max_order,
        max_exact: args.max_exact,
        timing: !args.no_timing,
        inject_fault: args.inject_fault,
    };
    let report = run_suite(&opts);
    print!("{}", report.to_table());
    if let Some(path) = &args.json {
        write_file(path, &to_json(&report))?;
    }
    if report.all_match() {
        return Ok(0);
    }
    for case in report.failures() {
        let got = case.psi_g.map_or("-".to_string(), |v| v.to_string());
        println!(
            "MISMATCH {} {}: predicted psi_g {}, computed {}{}",
            case.theorem,
            case.spec,
            case.predicted_psi_g,
            got,
            case.gamma_a.map_or(String::new(), |g| format!(
                "; predicted gamma_a {}, computed {g}",
                case.predicted_gamma_a.map_or("-".to_string(), |p| p.to_string())
            )),
        );
        if let Some(ev) = &case.evidence {
            if let Some((lo, hi)) = ev.exhausted {
                println!("  no partition into r classes for {lo} <= r <= {hi} ({} search nodes)", ev.search_nodes);
            }
            let classes: Vec<String> =
                ev.certificate.classes.iter().map(|c| format!("{{{}}}", c.labels.join(", "))).collect();
            println!("  solver certificate: {}", classes.join(" | "));
        }
        if let Some(k) = case.construction.as_ref().filter(|k| !k.verified) {
            println!("  explicit construction rejected: {}", k.error.as_deref().unwrap_or("unknown"));
        }
        if let Some(note) = &case.note {
            println!("  {note}");
        }
    }
    Ok(EXIT_MISMATCH)
}

fn cmd_graph(args: GraphArgs) -> Result<u8, Failure> {
    let ring = spec::build(&args.spec, &RingBuilder::with_max_order(args.max_order)).map_err(|e| match e {
        spec::SpecError::Ring(r) => ring_failure(r),
        other => Failure::new(EXIT_PARSE, other.to_string()),
    })?;
    let g = ZeroDivisorGraph::build(&ring);
    if g.is_empty() {
        return Err(Failure::new(
            EXIT_PARSE,
            format!("{} has no nonzero zero-divisors; the graph is empty", ring.spec_text()),
        ));
    }
    let dot = g.to_dot();
    match &args.dot {
        Some(path) => write_file(path, &dot)?,
        None => print!("{dot}"),
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::VerifyTheorems(v) => cmd_verify(v),
        Command::Graph(g) => cmd_graph(g),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

//! `rbl`: generate colourings, run and replay the Book Algorithm, certify the
//! bound functions, and print Ramsey bound tables.
//!
//! Exit status: 0 on success, 2 when a check fails, 1 on usage or I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rbl_core::book::{self, BookError, BookParams, Trace};
use rbl_core::bounds::binomial::{verify_binomial_facts, BinomialSweep};
use rbl_core::bounds::claims::{verify_appendix_claims, Appendix, ClaimRow};
use rbl_core::cliques::max_clique;
use rbl_core::colouring::{random_colouring, Colour, Colouring};
use rbl_core::invariants::{check_trace, CheckError};
use rbl_core::rational::{self, Rational};
use rbl_core::tables::{bound_rows, EllRule};
use rbl_core::vertex_set::VertexSet;

#[derive(Parser, Debug)]
#[command(name = "rbl", version, about = "Book Algorithm laboratory")]
struct Cli {
    /// Worker threads; RBL_JOBS takes precedence. Never changes results.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a random colouring of K_n in RBC1 format.
    Gen {
        #[arg(long)]
        n: usize,
        /// Probability of red, as a decimal or fraction.
        #[arg(long, value_parser = parse_rational)]
        red_prob: Rational,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the Book Algorithm from X = [0, n/2), Y = [n/2, n) and write its trace.
    RunBook(RunBookArgs),
    /// Replay a trace against its colouring with exact arithmetic.
    CheckTrace {
        #[arg(long)]
        colouring: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Write the full report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify the claims of one group of bounds and write them as CSV.
    VerifyBounds {
        /// A, B or C for the maximizations, D for the binomial inequalities.
        #[arg(long)]
        appendix: String,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Erdős–Szekeres and improved bounds over a range of k, as CSV.
    Tables {
        /// Inclusive range `a:b`.
        #[arg(long, value_parser = parse_range)]
        k_range: (u64, u64),
        #[arg(long, default_value = "equal")]
        ell_rule: EllRule,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest monochromatic clique of one colour.
    Clique {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        colour: Colour,
        /// Stop once a clique this large is found.
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct RunBookArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long, value_parser = parse_rational)]
    mu: Rational,
    #[arg(long, value_parser = parse_rational)]
    epsilon: Option<Rational>,
    #[arg(long)]
    x_min: Option<usize>,
    #[arg(long)]
    w_min: Option<usize>,
    #[arg(long, value_parser = parse_rational)]
    p_floor: Option<Rational>,
    #[arg(long)]
    spine_budget: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(':').ok_or("expected a:b")?;
    let a: u64 = a.trim().parse().map_err(|e| format!("{a:?}: {e}"))?;
    let b: u64 = b.trim().parse().map_err(|e| format!("{b:?}: {e}"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 <= a <= b, got {a}:{b}"));
    }
    Ok((a, b))
}

enum Failure {
    Usage(String),
    Check(String),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

/// Writes through a temporary file in the destination directory, then renames.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => {
            std::io::stdout().write_all(contents)?;
            Ok(())
        }
    }
}

fn load_colouring(path: &Path) -> Result<Colouring, Failure> {
    Colouring::load(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn jobs(flag: Option<usize>) -> Result<usize, Failure> {
    let from_env = match std::env::var("RBL_JOBS") {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|e| Failure::Usage(format!("RBL_JOBS={v:?}: {e}")))?),
        Err(_) => None,
    };
    let n = from_env
        .or(flag)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if n == 0 {
        return Err(usage("jobs must be at least 1"));
    }
    Ok(n)
}

fn run_book(a: RunBookArgs) -> Result<(), Failure> {
    let c = load_colouring(&a.input)?;
    let mut params = BookParams::new(a.k, a.ell, a.mu);
    if let Some(e) = a.epsilon {
        params.epsilon = e;
    }
    if let Some(v) = a.x_min {
        params.x_min = v;
    }
    if let Some(v) = a.w_min {
        params.w_min = v;
    }
    if let Some(v) = a.p_floor {
        params.p_floor = v;
    }
    if let Some(v) = a.spine_budget {
        params.spine_budget = v;
    }
    let n = c.n();
    let x0 = VertexSet::range(n, 0, n / 2);
    let y0 = VertexSet::range(n, n / 2, n);
    let trace = book::run(&c, &x0, &y0, &params).map_err(|e| match e {
        BookError::InvalidParams(_) | BookError::BadInitialSets(_) => usage(e),
        other => Failure::Check(other.to_string()),
    })?;
    write_atomic(&a.out, trace.to_json().as_bytes())?;
    let s = &trace.summary;
    eprintln!(
        "halted: {} after {} steps; |A| = {}, |Y| = {}",
        s.halting_reason.describe(),
        trace.steps.len(),
        s.final_a.len(),
        s.final_y_size
    );
    Ok(())
}

fn check(colouring: &Path, trace_path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let c = load_colouring(colouring)?;
    let text = std::fs::read_to_string(trace_path).map_err(|e| Failure::Usage(format!("{}: {e}", trace_path.display())))?;
    let trace = Trace::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", trace_path.display())))?;
    let report = check_trace(&c, &trace).map_err(|e| match e {
        CheckError::Provenance(_) | CheckError::Schema(_) => Failure::Check(e.to_string()),
    })?;
    if let Some(p) = out {
        write_atomic(p, report.to_json().as_bytes())?;
    }
    for (id, r) in &report.checks {
        let at = r.first_violation.map_or(String::new(), |i| format!(" at step {i}"));
        eprintln!("check {id}: {:?}{at}", r.status);
    }
    if report.passed() {
        Ok(())
    } else {
        let fails: Vec<String> = report.failures().iter().map(|(id, _)| id.to_string()).collect();
        Err(Failure::Check(format!("failed checks: {}", fails.join(", "))))
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.9}"))
}

const BOUNDS_HEADER: [&str; 8] = [
    "claim_id",
    "region",
    "certified_max_or_gap",
    "claimed_constant",
    "maximizer_x",
    "maximizer_y",
    "status",
    "maximizer_gamma",
];

fn claim_record(r: &ClaimRow) -> [String; 8] {
    [
        r.claim_id.clone(),
        r.region.clone(),
        format!("{:.9}", r.value),
        format!("{}", r.claimed_constant),
        fmt_opt(r.maximizer_x),
        fmt_opt(r.maximizer_y),
        r.status.to_string(),
        fmt_opt(r.maximizer_gamma),
    ]
}

fn verify_bounds(appendix: &str, tol: f64, out: Option<&Path>) -> Result<(), Failure> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(usage(format!("--tol must be positive, got {tol}")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(BOUNDS_HEADER).map_err(usage)?;
    let passed = if appendix == "D" {
        let rep = verify_binomial_facts(&BinomialSweep::default());
        for (id, t) in &rep.facts {
            let ok = t.violations == 0 && t.checked > 0;
            let region = format!("checked={} skipped={}", t.checked, t.skipped);
            let rec = [
                format!("D:{id}"),
                region,
                t.violations.to_string(),
                "0".to_string(),
                String::new(),
                String::new(),
                if ok { "pass" } else { "fail" }.to_string(),
                String::new(),
            ];
            w.write_record(rec).map_err(usage)?;
        }
        rep.passed()
    } else {
        let which: Appendix = appendix
            .parse()
            .map_err(|_| usage(format!("unknown appendix {appendix:?}; expected A, B, C or D")))?;
        let rep = verify_appendix_claims(which, tol).map_err(usage)?;
        for r in &rep.rows {
            w.write_record(claim_record(r)).map_err(usage)?;
        }
        rep.passed()
    };
    let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
    emit(out, &bytes)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Check(format!("appendix {appendix}: some claims failed")))
    }
}

fn tables(range: (u64, u64), rule: EllRule, out: Option<&Path>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in bound_rows(range.0, range.1, rule) {
        w.serialize(row).map_err(usage)?;
    }
    let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
    emit(out, &bytes)
}

fn clique(input: &Path, colour: Colour, cap: Option<usize>) -> Result<(), Failure> {
    let c = load_colouring(input)?;
    let cap = cap.unwrap_or(c.n()).max(1);
    let s = max_clique(&c, colour, &c.all_vertices(), cap);
    let ids: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    println!("{colour} clique of size {}: {}", s.len(), ids.join(" "));
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let workers = jobs(cli.jobs)?;
    rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().map_err(usage)?;
    match cli.command {
        Command::Gen { n, red_prob, seed, out } => {
            let c = random_colouring(n, &red_prob, seed).map_err(usage)?;
            write_atomic(&out, c.to_rbc1().as_bytes())
        }
        Command::RunBook(a) => run_book(a),
        Command::CheckTrace { colouring, trace, out } => check(&colouring, &trace, out.as_deref()),
        Command::VerifyBounds { appendix, tol, out } => verify_bounds(&appendix, tol, out.as_deref()),
        Command::Tables { k_range, ell_rule, out } => tables(k_range, ell_rule, out.as_deref()),
        Command::Clique { input, colour, cap } => clique(&input, colour, cap),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(2)
        }
    }
}

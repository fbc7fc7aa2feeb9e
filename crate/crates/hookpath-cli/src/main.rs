use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hookpath::cache::{FloorCache, CACHE_ENV};
use hookpath::eulerian::{eulerian_bruteforce, initial_closed_form};
use hookpath::fibonacci::{fib_bruteforce, fib_closed_form, fib_stages, interval_classes, StepSource};
use hookpath::genfun::{genfun_for_class, series_coefficients, SequenceClass};
use hookpath::hook::{is_odd_prime, j_class};
use hookpath::paths::{count_paths, enumerate_paths};
use hookpath::stats::descent_set;
use hookpath::verify::{self, Report, Suite, VerifyConfig, DEFAULT_PATH_BUDGET};
use hookpath::{DescentRules, DiagramParams, Error, IntPolynomial};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hookpath",
    version,
    about = "Path statistics on the p-Bratteli diagram of hook partitions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over a bounded envelope.
    Verify(VerifyArgs),
    /// Print a single object.
    #[command(subcommand)]
    Show(Show),
}

fn parse_prime(s: &str) -> Result<u64, String> {
    let p: u64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if is_odd_prime(p) {
        Ok(p)
    } else {
        Err("p must be an odd prime".into())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_prime)]
    p: u64,
    /// Comma-separated classes.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    k: Vec<u32>,
    /// Defaults to 2k+6 for the largest k.
    #[arg(long)]
    max_floor: Option<u32>,
    /// `all` or a comma-separated list of diagram, paths, stats, eulerian, fibonacci, genfun.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    parallelism: Option<usize>,
    /// Run even when the estimated path count exceeds the budget.
    #[arg(long)]
    force: bool,
    /// Estimated path count above which --force is required.
    #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
    path_budget: u128,
}

#[derive(clap::Args)]
struct At {
    #[arg(long, value_parser = parse_prime)]
    p: u64,
    #[arg(long, default_value_t = 0)]
    k: u32,
    #[arg(long, default_value_t = 0)]
    l: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolyMethod {
    Inductive,
    Bruteforce,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum FibMethod {
    Recursive,
    Bruteforce,
    Closed,
}

#[derive(Subcommand)]
enum Show {
    /// The vertex at a floor, class (-1 for the pre-stage) and offset.
    Vertex {
        #[arg(long, value_parser = parse_prime)]
        p: u64,
        #[arg(long)]
        floor: u32,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        k: i32,
        #[arg(long, default_value_t = 0)]
        l: u64,
        #[arg(long)]
        json: bool,
    },
    /// Compressed paths ending at a class vertex, with their descent sets.
    Paths {
        #[command(flatten)]
        at: At,
        #[arg(long)]
        floor: u32,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// The Eulerian polynomial at a class vertex.
    Poly {
        #[command(flatten)]
        at: At,
        #[arg(long)]
        floor: u32,
        #[arg(long, value_enum, default_value = "inductive")]
        method: PolyMethod,
    },
    /// The Fibonacci number `M` at stage `s`.
    Fib {
        #[command(flatten)]
        at: At,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum, default_value = "recursive")]
        method: FibMethod,
    },
    /// Leading coefficients of the generating function of the sequence through `l`.
    Genfun {
        #[command(flatten)]
        at: At,
        #[arg(long, default_value_t = 7)]
        terms: usize,
    },
}

enum Failure {
    Usage(String),
    Resource(String),
    Hard(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Cache(_) | Error::Overflow(_) => Failure::Hard(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Hard(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(args) => verify_cmd(args),
        Command::Show(show) => show_cmd(show),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Resource(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_RESOURCE)
        }
        Err(Failure::Hard(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn verify_cmd(args: VerifyArgs) -> Result<u8, Failure> {
    let suites = Suite::parse_list(&args.suite)?;
    let k_max = args.k.iter().copied().max().unwrap_or(0);
    let max_floor = args.max_floor.unwrap_or(2 * k_max + 6);
    let mut config = VerifyConfig::new(args.p, args.k, max_floor, suites);
    config.parallelism = args.parallelism;
    config.cache_dir = FloorCache::from_env().map(|c| c.dir().to_path_buf());
    config.validate()?;
    let estimate = config.estimated_paths();
    if estimate > args.path_budget && !args.force {
        return Err(Failure::Resource(format!(
            "about {estimate} paths exceed the budget of {}; pass --force to run anyway",
            args.path_budget
        )));
    }
    let report = verify::run(&config)?;
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match args.format {
        Format::Json => sink.write_all(report.to_ndjson().as_bytes())?,
        Format::Csv => write_csv(&report, &mut sink)?,
        Format::Text => write_text(&report, &mut sink)?,
    }
    sink.flush()?;
    let hard: Vec<_> = report.hard_failures().collect();
    eprintln!(
        "{} checks, {} hard failures, {} discrepancies",
        report.rows.len(),
        hard.len(),
        report.discrepancies.len()
    );
    if config.cache_dir.is_none() {
        eprintln!("set {CACHE_ENV} to cache Eulerian tables between runs");
    }
    Ok(if hard.is_empty() { 0 } else { EXIT_FAIL })
}

fn write_csv(report: &Report, sink: &mut dyn Write) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink);
    for row in &report.rows {
        w.serialize(row).map_err(|e| Failure::Hard(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn write_text(report: &Report, sink: &mut dyn Write) -> io::Result<()> {
    for r in &report.rows {
        let mut at = String::new();
        if let Some(k) = r.k {
            at.push_str(&format!(" k={k}"));
        }
        if let Some(f) = r.floor {
            at.push_str(&format!(" floor={f}"));
        }
        if let Some(s) = r.s {
            at.push_str(&format!(" s={s}"));
        }
        let verdict = match (r.pass, r.severity) {
            (true, _) => "PASS",
            (false, verify::Severity::Hard) => "FAIL",
            (false, verify::Severity::Soft) => "DIFF",
        };
        writeln!(
            sink,
            "{verdict} {} {}{at} [{}/{}] {}",
            r.suite,
            r.check,
            r.cases - r.failures.min(r.cases),
            r.cases,
            r.detail
        )?;
    }
    for d in &report.discrepancies {
        writeln!(
            sink,
            "discrepancy {} p={} k={} s={} l={}: oracle {} vs {} ({})",
            d.check, d.p, d.k, d.s, d.l, d.oracle, d.closed_form, d.formula_case
        )?;
    }
    Ok(())
}

fn emit(json: bool, value: serde_json::Value, text: String) {
    if json {
        println!("{value}");
    } else {
        println!("{text}");
    }
}

fn poly_json(floor: u32, k: u32, l: u64, f: &IntPolynomial) -> serde_json::Value {
    json!({ "floor": floor, "k": k, "l": l, "coeffs": f })
}

fn show_cmd(show: Show) -> Result<u8, Failure> {
    match show {
        Show::Vertex { p, floor, k, l, json } => {
            let params = DiagramParams::new(p, floor)?;
            let v = params.vertex(floor, k, l)?;
            emit(json, serde_json::to_value(v).expect("vertex serializes"), v.to_string());
        }
        Show::Paths { at, floor, limit } => {
            let params = DiagramParams::new(at.p, floor)?;
            let v = params.vertex(floor, at.k as i32, at.l)?;
            let mut rows = Vec::new();
            for path in enumerate_paths(&v).take(limit) {
                let d = descent_set(&path)?;
                rows.push((path.start_index, path.m_seq, d));
            }
            if at.json {
                let list: Vec<_> = rows
                    .iter()
                    .map(|(i, m, d)| json!({ "start_index": i, "m": m, "descents": d }))
                    .collect();
                println!(
                    "{}",
                    json!({ "vertex": v, "total": count_paths(&v).to_string(), "paths": list })
                );
            } else {
                println!("{v}: {} paths", count_paths(&v));
                for (i, m, d) in rows {
                    println!("start {i} m {m:?} descents {d:?}");
                }
            }
        }
        Show::Poly { at, floor, method } => {
            let params = DiagramParams::new(at.p, floor)?;
            let v = params.vertex(floor, at.k as i32, at.l)?;
            let f = match method {
                PolyMethod::Bruteforce => eulerian_bruteforce(&v)?,
                PolyMethod::Table => initial_closed_form(at.p, at.k, floor, at.l)?.poly,
                PolyMethod::Inductive => {
                    let tables =
                        hookpath::cache::eulerian_tables(&params, at.k, floor, FloorCache::from_env().as_ref())?;
                    tables
                        .into_iter()
                        .find(|t| t.floor == floor)
                        .and_then(|t| t.by_l.get(&at.l).cloned())
                        .ok_or_else(|| Failure::Usage(format!("no class {} vertex {} on floor {floor}", at.k, at.l)))?
                }
            };
            emit(at.json, poly_json(floor, at.k, at.l, &f), f.to_string());
        }
        Show::Fib { at, s, method } => {
            let value = match method {
                FibMethod::Closed => fib_closed_form(at.p, at.k, s, at.l)?.value,
                FibMethod::Bruteforce => {
                    let floor = 2 * (at.k + s);
                    let params = DiagramParams::new(at.p, floor)?;
                    fib_bruteforce(&params.vertex(floor, at.k as i32, at.l)?)?
                }
                FibMethod::Recursive => {
                    if s == 0 {
                        return Err(Failure::Usage("s must be at least 1".into()));
                    }
                    let stages = fib_stages(at.p, at.k, s, &StepSource::Rules(DescentRules::ADJUDICATED))?;
                    stages[s as usize - 1]
                        .get(at.l as usize)
                        .cloned()
                        .ok_or_else(|| Failure::Usage(format!("l = {} is out of range", at.l)))?
                }
            };
            emit(
                at.json,
                json!({ "p": at.p, "k": at.k, "s": s, "l": at.l, "value": serde_json::Number::from_string_unchecked(value.to_string()) }),
                value.to_string(),
            );
        }
        Show::Genfun { at, terms } => {
            let (p, k) = (at.p, at.k);
            let class = match k {
                0 => SequenceClass::K0,
                1 => SequenceClass::K1 {
                    t: j_class(p, 1, at.l)?,
                },
                _ => {
                    let classes = interval_classes(p, k, k + 2)?;
                    let c = classes
                        .into_iter()
                        .find(|c| c.contains(at.l))
                        .ok_or_else(|| Failure::Usage(format!("l = {} is out of range", at.l)))?;
                    SequenceClass::Interval(c)
                }
            };
            let coeffs = series_coefficients(&genfun_for_class(p, k, &class)?, terms)?;
            let text: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            emit(
                at.json,
                json!({ "p": p, "k": k, "l": at.l, "first_stage": k + 2, "coeffs": text }),
                text.join(", "),
            );
        }
    }
    Ok(0)
}

//! `signaling`: command-line front end for the signaling scheme solver.
//!
//! Exit codes: 0 success, 2 input error, 3 instance too large or degenerate,
//! 1 anything else.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use signaling_core::benchmarks::{
    benchmarks, optimal_pure_revenue, random_corpus, revenue_upper_bound,
};
use signaling_core::instance_file::{
    instance_to_json, parse_instance, parse_prior, parse_psi, psi_to_json,
};
use signaling_core::model::{build_psi, from_divisible, to_divisible, AuctionInstance};
use signaling_core::optimizer::{optimal_mixed, Method};
use signaling_core::rational::fmt_exact;
use signaling_core::transforms::rev_lower_bound_certificate;
use signaling_core::{benchmarks::gap_instance, Error};

use report::{Benchmarks, Certificate, Gap, RunReport};

#[derive(Parser)]
#[command(name = "signaling", version, about = "Revenue-optimal signaling for probabilistic second-price auctions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Optimal mixed signaling scheme via linear programming.
    Solve {
        file: PathBuf,
        /// naive, reduced or equalbid
        #[arg(long, default_value = "equalbid")]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Benchmarks B and Btilde, the revenue upper bound and the B/2 certificate.
    Benchmark {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Optimal pure scheme by enumerating partitions of the types.
    Pure {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Build the mixed-vs-pure gap instance for even k and compare optima.
    Gap {
        #[arg(allow_negative_numbers = true)]
        k: i64,
        /// Write the instance file here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Convert between the probabilistic and divisible-goods views.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
        /// Prior for from-divisible (uniform if omitted).
        #[arg(long)]
        prior: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that an instance file parses and is well formed.
    Validate { file: PathBuf },
    /// Solve a seeded random corpus and export one CSV row per instance.
    Batch {
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 4)]
        max_m: usize,
        #[arg(long, default_value_t = 9)]
        max_value: u64,
        #[arg(long)]
        csv: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    ToDivisible,
    FromDivisible,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Capability(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Input(_) => 2,
            Failure::Capability(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Capability(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let message = err.to_string();
        match err {
            Error::Parse { .. }
            | Error::BadPrior(_)
            | Error::BadK(_)
            | Error::InvalidInstance(_) => Failure::Input(message),
            Error::TooLarge(_) | Error::Degenerate(_) => Failure::Capability(message),
            _ => Failure::Internal(message),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> CliResult<AuctionInstance> {
    parse_instance(&read(path)?).map_err(|e| {
        let mut failure = Failure::from(e);
        if let Failure::Input(m) = &mut failure {
            *m = format!("{}: {m}", path.display());
        }
        failure
    })
}

fn emit(report: &RunReport, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("serializable report"));
    } else {
        print!("{}", report.to_table());
    }
}

fn solve(file: &Path, method: Method, json: bool) -> CliResult<()> {
    let start = Instant::now();
    let psi = build_psi(&load_instance(file)?);
    let optimum = optimal_mixed(&psi, method)?;
    let mut report = RunReport::new("solve", psi);
    if report.psi.n() >= 2 {
        report.benchmarks = Some(Benchmarks {
            report: benchmarks(&report.psi)?,
            upper_bound: revenue_upper_bound(&report.psi),
        });
    }
    report.method = Some(method);
    report.revenue = Some(optimum.revenue);
    report.scheme = Some(optimum.scheme);
    report.duration = start.elapsed();
    emit(&report, json);
    Ok(())
}

fn benchmark(file: &Path, json: bool) -> CliResult<()> {
    let start = Instant::now();
    let psi = build_psi(&load_instance(file)?);
    let bench = benchmarks(&psi)?;
    let (revenue, scheme) = rev_lower_bound_certificate(&psi)?;
    let mut report = RunReport::new("benchmark", psi);
    report.benchmarks = Some(Benchmarks { report: bench, upper_bound: revenue_upper_bound(&report.psi) });
    report.certificate = Some(Certificate { revenue, scheme });
    report.duration = start.elapsed();
    emit(&report, json);
    Ok(())
}

fn pure(file: &Path, json: bool) -> CliResult<()> {
    let start = Instant::now();
    let psi = build_psi(&load_instance(file)?);
    let result = optimal_pure_revenue(&psi)?;
    let mut report = RunReport::new("pure", psi);
    report.pure = Some(result);
    report.duration = start.elapsed();
    emit(&report, json);
    Ok(())
}

fn gap(k: i64, out: Option<&Path>, json: bool) -> CliResult<()> {
    let start = Instant::now();
    let instance = gap_instance(k)?;
    if let Some(path) = out {
        write(path, &format!("{:#}\n", instance_to_json(&instance)))?;
    }
    let psi = build_psi(&instance);
    let mixed = optimal_mixed(&psi, Method::EqualBid)?;
    let pure = optimal_pure_revenue(&psi)?;
    let ratio = &mixed.revenue / &pure.revenue;
    let mut report = RunReport::new("gap", psi);
    report.method = Some(Method::EqualBid);
    report.revenue = Some(mixed.revenue);
    report.scheme = Some(mixed.scheme);
    report.pure = Some(pure);
    report.gap = Some(Gap { k, ratio });
    report.duration = start.elapsed();
    emit(&report, json);
    Ok(())
}

fn convert(file: &Path, direction: Direction, prior: Option<&Path>, out: Option<&Path>) -> CliResult<()> {
    let text = read(file)?;
    let value = match direction {
        Direction::ToDivisible => psi_to_json(&to_divisible(&parse_instance(&text)?)),
        Direction::FromDivisible => {
            let psi = parse_psi(&text)?;
            let prior = prior.map(|p| read(p).and_then(|t| Ok(parse_prior(&t)?))).transpose()?;
            instance_to_json(&from_divisible(&psi, prior.as_deref())?)
        }
    };
    let rendered = format!("{value:#}\n");
    match out {
        Some(path) => write(path, &rendered),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn validate(file: &Path) -> CliResult<()> {
    let instance = load_instance(file)?;
    println!("valid: n = {}, m = {}", instance.n(), instance.m());
    Ok(())
}

fn batch(count: u64, max_n: usize, max_m: usize, max_value: u64, csv_path: &Path) -> CliResult<()> {
    let corpus = random_corpus(count, max_n, max_m, max_value)?;
    let mut writer = csv::Writer::from_path(csv_path)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", csv_path.display())))?;
    let io = |e: csv::Error| Failure::Internal(format!("csv: {e}"));
    writer.write_record(["seed", "n", "m", "mixed", "pure", "B", "Btilde", "bound"]).map_err(io)?;
    for (seed, instance) in &corpus {
        let psi = build_psi(instance);
        let mixed = optimal_mixed(&psi, Method::EqualBid)?;
        let pure = optimal_pure_revenue(&psi)?;
        let bench = benchmarks(&psi)?;
        writer
            .write_record([
                seed.to_string(),
                psi.n().to_string(),
                psi.m().to_string(),
                fmt_exact(&mixed.revenue),
                fmt_exact(&pure.revenue),
                fmt_exact(&bench.b),
                fmt_exact(&bench.b_tilde),
                fmt_exact(&revenue_upper_bound(&psi)),
            ])
            .map_err(io)?;
    }
    writer.flush().map_err(|e| Failure::Internal(format!("csv: {e}")))?;
    println!("wrote {} rows to {}", corpus.len(), csv_path.display());
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Solve { file, method, json } => solve(&file, method, json),
        Command::Benchmark { file, json } => benchmark(&file, json),
        Command::Pure { file, json } => pure(&file, json),
        Command::Gap { k, out, json } => gap(k, out.as_deref(), json),
        Command::Convert { file, direction, prior, out } => {
            convert(&file, direction, prior.as_deref(), out.as_deref())
        }
        Command::Validate { file } => validate(&file),
        Command::Batch { count, max_n, max_m, max_value, csv } => {
            batch(count, max_n, max_m, max_value, &csv)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

//! `kreinpoly` command-line front end.
//!
//! Exit codes: 0 success, 1 failure (batch record errors, benchmark
//! mismatch, self-test failures, internal errors), 2 invalid input or
//! precondition violation, 3 no applicable route.  Diagnostics go to
//! standard error as one JSON object per line.

mod output;
mod selftest;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kreinpoly::bench::benchmark;
use kreinpoly::jobs::{parse_job_file, run_task, Job, Param, ResultRecord, Task};
use kreinpoly::krein::Route;
use kreinpoly::Error;
use rayon::prelude::*;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "kreinpoly", version, about = "Krein-like functionals of Laguerre, Hermite and Jacobi polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one functional ∫ ω^β x^s p_{m1}…p_{mr} dx.
    Eval(EvalArgs),
    /// Evaluate one moment of the density ω p_n².
    Moment(MomentArgs),
    /// Run a JSON job file.
    Batch(BatchArgs),
    /// Time the closed-form routes against the quadrature oracle.
    Bench(BenchArgs),
    /// Run the built-in consistency suites.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// laguerre, hermite or jacobi.
    #[arg(long)]
    family: String,
    /// Weight parameter α ("p/q", integer or decimal).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Second Jacobi parameter γ.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Comma-separated degrees m1,m2,…
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<usize>,
    /// Kernel exponent.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Weight power β > 0.
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    /// auto, lauricella, ode, algebraic or oracle.
    #[arg(long)]
    route: Option<String>,
    /// exact or float (decimal inputs select float).
    #[arg(long)]
    backend: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args, Debug)]
struct MomentArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Polynomial degree.
    #[arg(long)]
    n: usize,
    /// power, krein, log, exponential or weight_log.
    #[arg(long, default_value = "power")]
    kind: String,
    /// Exponent of the power moment.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Order / weight exponent of the other kinds.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Exponential rate.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Divide by the norm h_n.
    #[arg(long)]
    normalized: bool,
    #[arg(long)]
    backend: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args, Debug)]
struct BatchArgs {
    /// Job file ("schema": "kreinpoly/1").
    jobfile: PathBuf,
    /// Output file (standard output if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker count.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Overrides --parallel.
    #[arg(long)]
    threads: Option<usize>,
    /// Report micros = 0 so output is reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<usize>,
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, allow_hyphen_values = true)]
    beta: String,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long)]
    backend: Option<String>,
    /// plain (table) or json.
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Perturb one route's value to exercise the mismatch check.
    #[arg(long, hide = true)]
    corrupt_route: Option<String>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
    seed: u64,
    /// Print the generated cases instead of running them.
    #[arg(long)]
    list: bool,
}

fn exit_code(kind: &str) -> u8 {
    match kind {
        "precondition" | "invalid_parameter" | "degree_cap" | "parse" | "job" => 2,
        "route_inapplicable" | "no_route" => 3,
        _ => 1,
    }
}

fn diagnose(kind: &str, message: &str) -> ExitCode {
    eprintln!("{}", serde_json::json!({ "error": kind, "message": message }));
    ExitCode::from(exit_code(kind))
}

fn fail(e: &Error) -> ExitCode {
    diagnose(e.kind(), &e.to_string())
}

fn fail_io(e: io::Error) -> ExitCode {
    // a closed pipe (`| head`) is not worth a diagnostic
    if e.kind() == io::ErrorKind::BrokenPipe {
        return ExitCode::SUCCESS;
    }
    diagnose("io", &e.to_string())
}

fn done(res: io::Result<()>) -> ExitCode {
    res.map_or_else(fail_io, |()| ExitCode::SUCCESS)
}

fn text(x: &Option<String>) -> Option<Param> {
    x.clone().map(Param::Text)
}

fn base_job(f: &FamilyArgs, degrees: Vec<usize>) -> Job {
    Job { family: f.family.clone(), alpha: text(&f.alpha), gamma: text(&f.gamma), degrees, ..Job::default() }
}

fn functional_job(f: &FamilyArgs, degrees: &[usize], s: &str, beta: &str, route: &Option<String>, backend: &Option<String>) -> Job {
    Job {
        s: Some(Param::Text(s.into())),
        beta: Some(Param::Text(beta.into())),
        route: route.clone(),
        backend: backend.clone(),
        ..base_job(f, degrees.to_vec())
    }
}

/// Flag-level mistakes are input errors, reported as such.
fn flag_task(job: &Job) -> Result<Task, Error> {
    job.to_task(0).map_err(|e| match e {
        Error::Job(m) => Error::InvalidParameter(m.trim_start_matches("job 0: ").to_string()),
        e => e,
    })
}

fn run_single(job: Job, format: Format) -> ExitCode {
    let task = match flag_task(&job) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let rec = run_task(0, &task, true);
    if let Some(err) = &rec.error {
        return diagnose(&err.kind, &err.message);
    }
    let mut out = io::stdout().lock();
    done(output::write_records(&mut out, &[rec], format).and_then(|()| out.flush()))
}

fn cmd_eval(a: EvalArgs) -> ExitCode {
    run_single(functional_job(&a.family, &a.degrees, &a.s, &a.beta, &a.route, &a.backend), a.format)
}

fn cmd_moment(a: MomentArgs) -> ExitCode {
    let job = Job {
        kind: Some(a.kind.clone()),
        s: text(&a.s),
        k: text(&a.k),
        a: text(&a.a),
        normalized: a.normalized.then_some(true),
        backend: a.backend.clone(),
        ..base_job(&a.family, vec![a.n])
    };
    run_single(job, a.format)
}

fn run_batch(tasks: &[Task], workers: usize, timing: bool) -> Result<Vec<ResultRecord>, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    // indexed collect keeps input order whatever the scheduling
    Ok(pool.install(|| tasks.par_iter().enumerate().map(|(i, t)| run_task(i, t, timing)).collect()))
}

fn cmd_batch(a: BatchArgs) -> ExitCode {
    let text = match fs::read_to_string(&a.jobfile) {
        Ok(t) => t,
        Err(e) => return diagnose("io", &format!("{}: {e}", a.jobfile.display())),
    };
    let tasks = match parse_job_file(&text) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };
    let records = match run_batch(&tasks, a.threads.unwrap_or(a.parallel), !a.no_timing) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    for r in &records {
        if let Some(err) = &r.error {
            let d = serde_json::json!({ "index": r.index, "error": err.kind, "message": err.message });
            eprintln!("{d}");
        }
    }
    let written = match &a.out {
        Some(path) => fs::File::create(path).and_then(|f| {
            let mut w = io::BufWriter::new(f);
            output::write_records(&mut w, &records, a.format)?;
            w.flush()
        }),
        None => {
            let mut out = io::stdout().lock();
            output::write_records(&mut out, &records, a.format).and_then(|()| out.flush())
        }
    };
    if let Err(e) = written {
        return fail_io(e);
    }
    if records.iter().all(ResultRecord::is_ok) { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

fn cmd_bench(a: BenchArgs) -> ExitCode {
    let job = functional_job(&a.family, &a.degrees, &a.s, &a.beta, &None, &a.backend);
    let req = match flag_task(&job) {
        Ok(Task::Functional(r)) => r,
        Ok(_) => unreachable!("functional job"),
        Err(e) => return fail(&e),
    };
    let corrupt = match a.corrupt_route.as_deref().map(str::parse::<Route>).transpose() {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    let report = match benchmark(&req, a.trials.max(1), corrupt) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let mut out = io::stdout().lock();
    done(output::write_bench(&mut out, &report, a.format).and_then(|()| out.flush()))
}

fn cmd_selftest(a: SelftestArgs) -> ExitCode {
    let cases = selftest::cases(a.seed);
    if a.list {
        let mut out = io::stdout().lock();
        for c in &cases {
            if let Err(e) = writeln!(out, "{c}") {
                return fail_io(e);
            }
        }
        return ExitCode::SUCCESS;
    }
    let summary = selftest::run(&cases);
    println!("{summary}");
    if summary.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Moment(a) => cmd_moment(a),
        Command::Batch(a) => cmd_batch(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Selftest(a) => cmd_selftest(a),
    }
}

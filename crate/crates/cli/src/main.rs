// SPDX-License-Identifier: MIT OR Apache-2.0

//! `fpseg` command line: detect, simulate, bench and trace.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use fpseg::bench::{run_bench, BenchConfig, BenchRow};
use fpseg::report::{parse_values, run, RunReport, SolveRequest};
use fpseg::sim::{simulate, Placement, SimSpec};
use fpseg::{Method, TimeSeries, TraceLevel};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "fpseg",
    version,
    about = "Exact changepoint detection for a change in mean"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment one or more series and print a JSON report.
    Detect(DetectArgs),
    /// Write a simulated piecewise-constant series plus a truth sidecar.
    Simulate(SimulateArgs),
    /// Time solvers over a grid of simulated series; CSV output.
    Bench(BenchArgs),
    /// Candidate-set sizes per step for the pruning solvers; CSV output.
    Trace(TraceArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// Penalty per changepoint. Defaults to 2σ² log n for penalised methods.
    #[arg(long)]
    beta: Option<f64>,
    /// Largest number of changepoints (required by sns, snip, pdpa).
    #[arg(long)]
    kmax: Option<usize>,
    /// Noise standard deviation.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    /// Inequality-pruning constant for pelt and snip.
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
}

#[derive(Args)]
struct DetectArgs {
    /// Input files: one number per line, optionally headed by `value`.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "fpop", value_parser = parse_method)]
    method: Method,
    #[command(flatten)]
    model: ModelArgs,
    /// Include per-step candidate counts in the report.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of files solved concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    changes: usize,
    /// Mean shift per change, in units of σ.
    #[arg(long, default_value_t = 5.0)]
    jump: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// `equal` or `uniform-random`.
    #[arg(long, default_value = "equal")]
    placement: Placement,
    /// Values file; the true changepoints go to `<out>.truth.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long = "n", value_delimiter = ',', default_value = "200000")]
    n_list: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000,5000")]
    changes: Vec<usize>,
    #[arg(long = "method", value_delimiter = ',', default_value = "fpop,pelt,binseg", value_parser = parse_method)]
    methods: Vec<Method>,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 5.0)]
    jump: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TraceArgs {
    input: PathBuf,
    /// Any of pelt, fpop, snip, pdpa.
    #[arg(long = "method", value_delimiter = ',', default_value = "pelt,fpop", value_parser = parse_method)]
    methods: Vec<Method>,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: fpseg::Error| e.to_string())
}

/// Failures split by exit code.
enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Detect(a) => detect(a),
        Command::Simulate(a) => simulate_cmd(a),
        Command::Bench(a) => bench(a),
        Command::Trace(a) => trace(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn request(method: Method, model: &ModelArgs, trace: TraceLevel) -> CliResult<SolveRequest> {
    if method.needs_kmax() && model.kmax.is_none() {
        return Err(Failure::Usage(format!(
            "--kmax is required for method {method}"
        )));
    }
    if !(model.sigma.is_finite() && model.sigma > 0.0) {
        return Err(Failure::Usage("--sigma must be positive".into()));
    }
    if model.beta.is_some_and(|b| !(b.is_finite() && b >= 0.0)) {
        return Err(Failure::Usage(
            "--beta must be a non-negative number".into(),
        ));
    }
    Ok(SolveRequest {
        method,
        beta: model.beta,
        kmax: model.kmax,
        sigma: model.sigma,
        kappa: model.kappa,
        trace,
    })
}

fn read_series(path: &Path) -> anyhow::Result<TimeSeries> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let values = parse_values(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(TimeSeries::new(values)?)
}

fn solve_file(path: &Path, req: &SolveRequest) -> anyhow::Result<RunReport> {
    let series = read_series(path)?;
    let (report, _) = run(&series, req).with_context(|| format!("solving {}", path.display()))?;
    Ok(report)
}

fn emit(out: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, body).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn detect(args: DetectArgs) -> CliResult {
    let level = if args.trace {
        TraceLevel::Counts
    } else {
        TraceLevel::Off
    };
    let req = request(args.method, &args.model, level)?;
    let reports = solve_all(&args.inputs, &req, args.jobs.max(1))?;
    let mut body = if let [single] = reports.as_slice() {
        serde_json::to_string_pretty(single)
    } else {
        serde_json::to_string_pretty(&reports)
    }
    .map_err(anyhow::Error::from)?;
    body.push('\n');
    emit(args.out.as_deref(), &body)?;
    Ok(())
}

/// Solves every file, `jobs` at a time, keeping input order.
fn solve_all(paths: &[PathBuf], req: &SolveRequest, jobs: usize) -> anyhow::Result<Vec<RunReport>> {
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<anyhow::Result<RunReport>>>> =
        paths.iter().map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..jobs.min(paths.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = paths.get(i) else { break };
                let outcome = solve_file(path, req);
                *slots[i].lock().unwrap() = Some(outcome);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| {
            slot.into_inner()
                .unwrap()
                .unwrap_or_else(|| Err(anyhow!("file was not processed")))
        })
        .collect()
}

#[derive(Serialize)]
struct Truth<'a> {
    n: usize,
    n_changes: usize,
    jump_size: f64,
    sigma: f64,
    seed: u64,
    placement: &'a str,
    changepoints: &'a [usize],
}

fn truth_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".truth.json");
    PathBuf::from(name)
}

fn simulate_cmd(args: SimulateArgs) -> CliResult {
    let spec = SimSpec {
        n: args.n,
        n_changes: args.changes,
        jump_size: args.jump,
        sigma: args.sigma,
        seed: args.seed,
        placement: args.placement,
    };
    spec.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    let sim = simulate(&spec).map_err(anyhow::Error::from)?;
    let mut body = String::with_capacity(sim.values.len() * 20);
    for v in &sim.values {
        body.push_str(&v.to_string());
        body.push('\n');
    }
    emit(Some(&args.out), &body)?;
    let truth = Truth {
        n: spec.n,
        n_changes: spec.n_changes,
        jump_size: spec.jump_size,
        sigma: spec.sigma,
        seed: spec.seed,
        placement: match spec.placement {
            Placement::Equal => "equal",
            Placement::UniformRandom => "uniform-random",
        },
        changepoints: &sim.changepoints,
    };
    let mut json = serde_json::to_string_pretty(&truth).map_err(anyhow::Error::from)?;
    json.push('\n');
    emit(Some(&truth_path(&args.out)), &json)?;
    Ok(())
}

fn csv_writer(out: Option<&Path>) -> anyhow::Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(io::BufWriter::new(
            fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink))
}

fn bench_record(row: &BenchRow) -> [String; 6] {
    let na = || "NA".to_string();
    [
        row.n.to_string(),
        row.n_changes.to_string(),
        row.method.to_string(),
        row.rep.to_string(),
        row.seconds.map_or_else(na, |s| format!("{s:.6}")),
        row.k_detected.map_or_else(na, |k| k.to_string()),
    ]
}

fn bench(args: BenchArgs) -> CliResult {
    if args.beta.is_some_and(|b| !(b.is_finite() && b >= 0.0)) {
        return Err(Failure::Usage(
            "--beta must be a non-negative number".into(),
        ));
    }
    let cfg = BenchConfig {
        n_list: args.n_list,
        changes_list: args.changes,
        methods: args.methods,
        reps: args.reps,
        seed: args.seed,
        beta: args.beta,
        jump_size: args.jump,
        sigma: args.sigma,
        ..BenchConfig::default()
    };
    let mut w = csv_writer(args.out.as_deref())?;
    w.write_record(["n", "n_changes", "method", "rep", "seconds", "k_detected"])
        .map_err(anyhow::Error::from)?;
    w.flush().map_err(anyhow::Error::from)?;
    let mut failed = None;
    run_bench(&cfg, |row| {
        if let Some(e) = &row.error {
            eprintln!(
                "{} n={} changes={} rep={}: {e}",
                row.method, row.n, row.n_changes, row.rep
            );
        }
        // Rows are flushed as they finish so long grids can be watched.
        let written = w
            .write_record(bench_record(row))
            .and_then(|()| Ok(w.flush()?));
        if let Err(e) = written {
            failed.get_or_insert(e);
        }
    });
    match failed {
        Some(e) => Err(anyhow::Error::from(e).into()),
        None => Ok(()),
    }
}

fn trace(args: TraceArgs) -> CliResult {
    if let Some(m) = args.methods.iter().find(|m| !m.prunes()) {
        return Err(Failure::Usage(format!(
            "method {m} keeps no candidate trace; use pelt, fpop, snip or pdpa"
        )));
    }
    let reqs = args
        .methods
        .iter()
        .map(|&m| request(m, &args.model, TraceLevel::Counts))
        .collect::<CliResult<Vec<_>>>()?;
    let series = read_series(&args.input)?;
    let mut w = csv_writer(args.out.as_deref())?;
    w.write_record(["t", "k", "method", "candidate_count"])
        .map_err(anyhow::Error::from)?;
    for req in &reqs {
        let (_, trace) = run(&series, req).map_err(anyhow::Error::from)?;
        for c in &trace.counts {
            let k = c.k.map(|k| k.to_string()).unwrap_or_default();
            w.write_record([
                c.t.to_string(),
                k,
                req.method.to_string(),
                c.count.to_string(),
            ])
            .map_err(anyhow::Error::from)?;
        }
    }
    w.flush().map_err(anyhow::Error::from)?;
    Ok(())
}

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qcongest::graph::write_edge_list;
use qcongest::harness::{cmd_gadget, cmd_run, cmd_scaling, cmd_verify, ExperimentConfig, GadgetInputs, GadgetRequest};
use qcongest::lowerbound::{build_two_party_schedule, validate_schedule};

#[derive(Parser)]
#[command(name = "qcongest", version, about = "Quantum CONGEST diameter experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid and emit the result table.
    Run(RunArgs),
    /// Fit round-count scaling exponents from a result table.
    Scaling {
        /// Result table produced by `run`.
        csv: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a (stretched) gadget graph and report its gap verdict.
    Gadget(GadgetArgs),
    /// Build and validate a two-party simulation schedule.
    Schedule(ScheduleArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON experiment config; the built-in smoke grid when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Root seed, overriding the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Where to write the CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Directory for per-task JSONL message traces.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Failure probability; 1/n² when absent.
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct GadgetArgs {
    #[arg(long)]
    n: usize,
    /// Stretch length; 0 keeps the plain gadget.
    #[arg(long, default_value_t = 0)]
    d: u32,
    #[arg(long, requires = "y", conflicts_with = "random")]
    x: Option<String>,
    #[arg(long, requires = "x")]
    y: Option<String>,
    /// Draw random inputs from this seed.
    #[arg(long)]
    random: Option<u64>,
    /// Write the graph as an edge list.
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long)]
    r: u64,
    #[arg(long)]
    d: usize,
    /// Qubits per message register.
    #[arg(long, default_value_t = 8)]
    bw: u64,
    /// Qubits per private register.
    #[arg(long, default_value_t = 64)]
    s_mem: u64,
    /// Where to write the schedule JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: RunArgs) -> Result<bool> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::smoke(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(jobs) = args.jobs {
        config.jobs = jobs;
    }
    if args.delta.is_some() {
        config.delta = args.delta;
    }
    if args.out.is_some() {
        config.output = args.out.clone();
    }
    if args.trace.is_some() {
        config.trace = args.trace.clone();
    }
    let output = cmd_run(&config)?;
    if config.output.is_none() {
        print!("{}", output.csv);
    }
    let failed = output.rows.iter().filter(|r| !r.ok).count();
    eprintln!("{} rows, {failed} incorrect", output.rows.len());
    Ok(failed == 0)
}

fn gadget(args: GadgetArgs) -> Result<bool> {
    let inputs = match (args.x, args.y, args.random) {
        (Some(x), Some(y), None) => GadgetInputs::Explicit { x, y },
        (None, None, Some(seed)) => GadgetInputs::Random { seed },
        _ => bail!("give either --x and --y or --random"),
    };
    let report = cmd_gadget(&GadgetRequest { n: args.n, d: args.d, inputs })?;
    if let Some(path) = &args.edges {
        emit(Some(path), &write_edge_list(&report.graph))?;
    }
    if args.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", report.to_text());
    }
    Ok(report.gap_holds)
}

fn schedule(args: ScheduleArgs) -> Result<bool> {
    if args.r == 0 || args.d == 0 {
        bail!("r and d must be positive");
    }
    let sched = build_two_party_schedule(args.r, args.d);
    let report = validate_schedule(&sched, args.bw, args.s_mem);
    emit(args.out.as_ref(), &format!("{}\n", sched.to_json()))?;
    eprintln!(
        "r={} d={}: {} cells, {} messages (closed form {}), max payload {} of bound {}",
        report.r, report.d, report.cells, report.messages, report.closed_form, report.max_payload, report.payload_bound
    );
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    Ok(report.ok() && report.messages == report.closed_form)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Scaling { csv, out } => fs::read_to_string(&csv)
            .with_context(|| format!("reading {}", csv.display()))
            .and_then(|text| Ok(cmd_scaling(&text)?))
            .and_then(|summary| emit(out.as_ref(), &summary.to_text()).map(|_| true)),
        Command::Verify { out } => {
            let report = cmd_verify();
            emit(out.as_ref(), &report.to_text()).map(|_| report.all_ok())
        }
        Command::Gadget(args) => gadget(args),
        Command::Schedule(args) => schedule(args),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

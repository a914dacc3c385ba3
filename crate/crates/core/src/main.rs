use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use photon_purify::cli::{
    cmd_run, cmd_sweep, cmd_verify, load_config, resolve_seed, CliError, OutputFormat, RunConfig,
    RunOverrides, SweepConfig, VerifyOptions,
};

/// Heralded single-photon generation from two zero/one-photon superpositions.
#[derive(Parser)]
#[command(name = "photon-purify", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve and simulate one instance of the two-stage circuit.
    Run(RunArgs),
    /// Evaluate a grid of inputs and write one row per point.
    Sweep(SweepArgs),
    /// Run the invariant suites with a seeded generator.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    p1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phase1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phase2: Option<f64>,
    #[arg(long)]
    cutoff: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON sweep config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    cutoff: Option<u32>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Output table path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the success-probability comparison plot here.
    #[arg(long)]
    plot: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Falls back to PHOTON_PURIFY_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Corrupt the unitaries of the norm check (exercises the failure path).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let mut config: RunConfig = match &args.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    config.apply(&RunOverrides {
        p1: args.p1,
        p2: args.p2,
        phase1: args.phase1,
        phase2: args.phase2,
        cutoff: args.cutoff,
        format: args.format,
    });
    let report = cmd_run(&config)?;
    emit(&report.render(config.output_format));
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<(), CliError> {
    let mut config: SweepConfig = match &args.config {
        Some(path) => load_config(path)?,
        None => SweepConfig::default(),
    };
    if let Some(c) = args.cutoff {
        config.cutoff = c;
    }
    if let Some(f) = args.format {
        config.output_format = f;
    }
    if args.out.is_some() {
        config.out = args.out;
    }
    if args.plot.is_some() {
        config.plot = args.plot;
    }
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let rows = cmd_sweep(&config, &mut lock)?;
    lock.flush().ok();
    if let Some(path) = &config.out {
        eprintln!("wrote {} rows to {}", rows.len(), path.display());
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), CliError> {
    let report = cmd_verify(VerifyOptions {
        seed: resolve_seed(args.seed)?,
        trials: args.trials,
        inject_fault: args.inject_fault,
    })?;
    emit(&report.to_string());
    report.into_result().map(|_| ())
}

// A closed pipe (e.g. `| head`) is not an error worth reporting.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

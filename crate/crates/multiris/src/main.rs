use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use multiris::commands;
use multiris::config::{self, FileConfig, GainOverrides, ModelArg, SweepOverrides};
use multiris::verify::{self, Mutation, VerifyOptions};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Physics-compliant multi-RIS channel model: oracle checks, Monte Carlo
/// gain experiments and relative-difference sweeps.
#[derive(Parser)]
#[command(name = "multiris", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the cross-model oracle suites; exits 1 if any invariant fails.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Random instances per suite.
        #[arg(long, default_value_t = 100)]
        instances: usize,
        /// Inject a deliberate fault (the run is then expected to fail).
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
    /// Average optimal channel gain of one scenario, as CSV.
    Gain(GainArgs),
    /// Relative difference between the two models over an (L, N_I) grid, as CSV.
    DeltaSweep(SweepArgs),
}

#[derive(Args)]
struct GainArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of surfaces.
    #[arg(long = "L")]
    ris_count: Option<usize>,
    /// Elements per surface.
    #[arg(long = "NI")]
    elements: Option<usize>,
    /// Reference impedance in ohms.
    #[arg(long)]
    z0: Option<f64>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed; a time-derived seed is used (and echoed) if absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file (standard output if absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Worker threads (0 = one per core). Defaults to $MULTIRIS_THREADS.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated surface counts.
    #[arg(long = "L", value_delimiter = ',')]
    ris_counts: Option<Vec<usize>>,
    /// Comma-separated element counts.
    #[arg(long = "NI", value_delimiter = ',')]
    elements: Option<Vec<usize>>,
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed (required here or in the config file).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
}

fn fail(code: u8, err: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {err}");
    ExitCode::from(code)
}

fn load(path: Option<&Path>) -> Result<FileConfig, config::ConfigError> {
    path.map_or_else(|| Ok(FileConfig::default()), FileConfig::load)
}

fn emit(bytes: &[u8], output: Option<&Path>) -> ExitCode {
    let result = match output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn run_verify(seed: u64, instances: usize, mutation: Option<Mutation>) -> ExitCode {
    let reports = verify::run_all(&VerifyOptions {
        seed,
        instances,
        mutation,
    });
    println!("multiris {} verify (seed {seed})", commands::VERSION);
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.name).collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        fail(EXIT_VIOLATION, format!("invariant violated: {}", failed.join(", ")))
    }
}

fn run_gain(args: GainArgs) -> ExitCode {
    let file = match load(args.config.as_deref()) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let overrides = GainOverrides {
        ris_count: args.ris_count,
        elements: args.elements,
        z0: args.z0,
        model: args.model,
        trials: args.trials,
        seed: args.seed,
        output: args.output,
        workers: args.workers,
    };
    let cfg = match config::resolve_gain(file, overrides) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let (seed, note) = match cfg.seed {
        Some(s) => (s, None),
        None => {
            let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_nanos());
            (nanos as u64, Some("time-derived"))
        }
    };
    match commands::gain_report(&cfg, seed, note) {
        Ok(bytes) => emit(&bytes, cfg.output.as_deref()),
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn run_sweep(args: SweepArgs) -> ExitCode {
    let file = match load(args.config.as_deref()) {
        Ok(f) => f,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    let overrides = SweepOverrides {
        ris_counts: args.ris_counts,
        elements: args.elements,
        trials: args.trials,
        seed: args.seed,
        output: args.output,
        workers: args.workers,
    };
    let cfg = match config::resolve_sweep(file, overrides) {
        Ok(c) => c,
        Err(e) => return fail(EXIT_USAGE, e),
    };
    match commands::sweep_report(&cfg) {
        Ok(bytes) => emit(&bytes, cfg.output.as_deref()),
        Err(e) => fail(EXIT_USAGE, e),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match cli.command {
        Command::Verify {
            seed,
            instances,
            mutate,
        } => run_verify(seed, instances, mutate),
        Command::Gain(args) => run_gain(args),
        Command::DeltaSweep(args) => run_sweep(args),
    }
}

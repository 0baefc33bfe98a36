//! Thin CLI over the library: load a config file, apply flag overrides, run
//! the experiment. Exit codes: 0 success, 1 runtime failure, 2 usage or
//! validation error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use d2d_market::config::{load_config, ExperimentSpec, OutputFormat};
use d2d_market::experiment::run_experiment;

#[derive(Parser)]
#[command(name = "d2d-market", version, about = "D2D data-market simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config file (flat key = value format)
    #[arg(long)]
    config: PathBuf,

    /// Override the config's base seed
    #[arg(long)]
    seed: Option<u64>,

    /// Override the config's Monte Carlo repetition count
    #[arg(long)]
    runs: Option<u32>,

    /// Override the summary output path
    #[arg(long)]
    out: Option<PathBuf>,

    /// Override the output format
    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Write one clock-trace CSV per auction run
    #[arg(long)]
    emit_trace: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

fn effective_spec(args: &RunArgs) -> d2d_market::Result<ExperimentSpec> {
    let mut spec = load_config(&args.config)?;
    if let Some(seed) = args.seed {
        spec.config.seed = seed;
    }
    if let Some(runs) = args.runs {
        spec.config.runs = runs;
    }
    if let Some(out) = &args.out {
        spec.output_path = out.clone();
    }
    if let Some(format) = args.format {
        spec.output_format = format.into();
    }
    if args.emit_trace {
        spec.emit_trace = true;
    }
    spec.config.validate()?;
    Ok(spec)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let spec = match effective_spec(&args) {
                Ok(spec) => spec,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(e.exit_code() as u8);
                }
            };
            match run_experiment(&spec) {
                Ok(()) => {
                    println!("wrote {}", spec.output_path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}

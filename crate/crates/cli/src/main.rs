//! Command-line front end: run presets or config files, sweep seeds, and
//! inspect the built-in presets.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ethical_layer::plot::plot;
use ethical_layer::presets::{preset, PRESET_NAMES};
use ethical_layer::runner::{output_stem, run, sweep};
use ethical_layer::{Execution, Scenario};

/// Environment variable naming the default output root.
const OUT_ENV: &str = "ETHICAL_LAYER_OUT";

#[derive(Debug, Parser)]
#[command(name = "ethical-layer", version, about = "Ethical-layer governor simulator")]
struct Cli {
    /// Run every computation on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate one scenario and write its trace and report.
    Run(RunArgs),
    /// Run a two-human preset over seeds 0..N and tally who was saved.
    Sweep(SweepArgs),
    /// Inspect the built-in presets.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
}

#[derive(Debug, Args)]
struct OutArg {
    /// Output directory.
    #[arg(long, env = OUT_ENV, default_value = "out")]
    out: PathBuf,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Built-in preset name.
    #[arg(long)]
    preset: Option<String>,
    /// Scenario JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    source: Source,
    /// Overrides the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutArg,
    /// Also write an SVG plot next to the trace.
    #[arg(long)]
    plot: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    preset: String,
    /// Number of seeds, starting at 0.
    #[arg(long)]
    seeds: u64,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Debug, Subcommand)]
enum PresetsAction {
    /// Print the preset names.
    List,
    /// Print a preset's canonical config.
    Dump { name: String },
}

fn load_scenario(source: &Source) -> Result<Scenario> {
    match (&source.preset, &source.config) {
        (Some(name), None) => Ok(preset(name)?),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            Scenario::load(&text).with_context(|| format!("loading {}", path.display()))
        }
        _ => bail!("exactly one of --preset or --config is required"),
    }
}

fn cmd_run(args: RunArgs, exec: Execution) -> Result<()> {
    let mut scenario = load_scenario(&args.source)?;
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    let result = run(&scenario, &args.out.out, exec)?;
    if args.plot {
        let svg = args.out.out.join(format!("{}.svg", output_stem(&scenario)));
        plot(&result.trace_path, &result.report_path, &svg)?;
        eprintln!("wrote {}", svg.display());
    }
    eprintln!("wrote {}", result.trace_path.display());
    eprintln!("wrote {}", result.report_path.display());
    writeln!(io::stdout(), "{}", serde_json::to_string_pretty(&result)?)?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs, exec: Execution) -> Result<()> {
    if args.seeds == 0 {
        bail!("--seeds must be at least 1");
    }
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let result = sweep(&args.preset, &seeds, exec)?;
    fs::create_dir_all(&args.out.out)
        .with_context(|| format!("creating {}", args.out.out.display()))?;
    let path = args.out.out.join(format!("{}.sweep.json", args.preset));
    let body = serde_json::to_string_pretty(&result)? + "\n";
    fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
    eprintln!("wrote {}", path.display());
    let mut out = io::stdout().lock();
    for (id, n) in &result.tally {
        writeln!(out, "{id}\t{n}")?;
    }
    Ok(())
}

fn cmd_presets(action: PresetsAction) -> Result<()> {
    match action {
        PresetsAction::List => {
            let mut out = io::stdout().lock();
            for name in PRESET_NAMES {
                writeln!(out, "{name}")?;
            }
        }
        PresetsAction::Dump { name } => writeln!(io::stdout(), "{}", preset(&name)?.to_json())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args, exec),
        Command::Sweep(args) => cmd_sweep(args, exec),
        Command::Presets { action } => cmd_presets(action),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use regupath_core::experiment::{presets, run_experiment, run_paths, theory_problem, ExperimentConfig};
use regupath_core::{run_delta_sequence, Error};

/// Tikhonov regularization with heuristic parameter choice.
#[derive(Parser)]
#[command(name = "regupath", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the alpha paths, apply the configured rules and write the bundle.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the noise seed of the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the output directory of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute and write the alpha paths only.
    Path {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Study the Hanke-Raus choice along decreasing noise levels.
    Theory {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated, strictly decreasing noise levels.
        #[arg(long, value_delimiter = ',', required = true)]
        deltas: Vec<f64>,
        /// Seed of the fixed noise direction.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a shipped configuration as JSON.
    Preset {
        /// One of example1, example2_smooth, example2_piecewise, linear_benchmark,
        /// constructed_source.
        name: String,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) => 2,
        e if e.is_divergence() => 3,
        _ => 1,
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("REGUPATH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("REGUPATH_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn load(config: &Path, seed: Option<u64>, out: Option<PathBuf>) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(seed) = seed {
        cfg.noise.seed = seed;
    }
    if let Some(out) = out {
        cfg.output_dir = out;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Run { config, seed, out } => {
            let cfg = load(&config, seed, out)?;
            let bundle = run_experiment(&cfg)?;
            bundle.write(&cfg.output_dir)?;
            for run in &bundle.runs {
                for o in &run.outcomes {
                    println!(
                        "{} {}: alpha_star={:.6e} l2_error={:.6e}",
                        run.label, o.rule, o.alpha_star, o.l2_error
                    );
                }
            }
            println!("wrote {}", cfg.output_dir.display());
        }
        Command::Path { config, seed, out } => {
            let cfg = load(&config, seed, out)?;
            let bundle = run_paths(&cfg)?;
            bundle.write(&cfg.output_dir)?;
            for run in &bundle.runs {
                println!("{}: {} grid values", run.label, run.path.len());
            }
            println!("wrote {}", cfg.output_dir.display());
        }
        Command::Theory { config, deltas, seed, out } => {
            let cfg = load(&config, None, out)?;
            let problem = theory_problem(&cfg)?;
            let report = run_delta_sequence(&problem, &deltas, seed.unwrap_or(cfg.noise.seed))?;
            std::fs::create_dir_all(&cfg.output_dir)?;
            std::fs::write(cfg.output_dir.join("config.json"), cfg.to_json())?;
            std::fs::write(cfg.output_dir.join("theory_table.csv"), report.table_csv()?)?;
            std::fs::write(cfg.output_dir.join("theory_summary.csv"), report.summary_csv()?)?;
            print!("{}", report.table_csv()?);
            println!("wrote {}", cfg.output_dir.display());
        }
        Command::Preset { name } => {
            let cfg = presets::by_name(&name).ok_or_else(|| {
                Error::Config(vec![format!(
                    "unknown preset {name:?}; expected one of {}",
                    presets::PRESET_NAMES.join(", ")
                )])
            })?;
            print!("{}", cfg.to_json());
        }
    }
    Ok(())
}

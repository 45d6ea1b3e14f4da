use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use seqbart::bench::{curves_from_table, read_csv, render_svg, run_experiment, ExperimentConfig};
use seqbart::testbed::get_simulator;

#[derive(Parser)]
#[command(version, about = "Sequential design for global minimization with BART surrogates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a replicated benchmark described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        workers: Option<usize>,
        /// Overrides `base_seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Evaluate a test function at a point of the unit cube.
    Simulate {
        #[arg(long)]
        function: String,
        /// Comma-separated coordinates in [0, 1].
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Draw mean/median running-best curves from a results CSV.
    Plot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run { config, workers, seed } => run(config, workers, seed),
        Command::Simulate { function, point } => {
            let result = get_simulator(&function).and_then(|sim| {
                let x = point
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| seqbart::Error::InvalidArgument(format!("bad point `{point}`: {e}")))?;
                sim.evaluate(&x)
            });
            report(result.map(|y| println!("{y}")))
        }
        Command::Plot { input, output } => report(
            read_csv(&input)
                .and_then(|t| curves_from_table(&t))
                .and_then(|c| render_svg(&c, &output)),
        ),
    }
}

fn report(r: seqbart::Result<()>) -> ExitCode {
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(path: PathBuf, workers: Option<usize>, seed: Option<u64>) -> ExitCode {
    let mut config = match ExperimentConfig::load(&path) {
        Ok(c) => c,
        Err(e) => return report(Err(e)),
    };
    if workers.is_some() {
        config.workers = workers;
    }
    if let Some(s) = seed {
        config.base_seed = s;
    }
    let outcome = match run_experiment(&config) {
        Ok(o) => o,
        Err(e) => return report(Err(e)),
    };
    let svg = outcome.csv_path.with_extension("svg");
    if let Err(e) = outcome.curves().and_then(|c| {
        for curve in &c {
            println!(
                "{:<8} final mean {:.6}  median {:.6}",
                curve.method,
                curve.final_mean(),
                curve.final_median()
            );
        }
        render_svg(&c, &svg)
    }) {
        return report(Err(e));
    }
    println!("wrote {} and {}", outcome.csv_path.display(), svg.display());
    if outcome.failures.is_empty() {
        return ExitCode::SUCCESS;
    }
    for f in &outcome.failures {
        eprintln!(
            "warning: {} replicate {} (seed {}) failed: {}",
            f.method.name(),
            f.replicate,
            f.seed,
            f.message
        );
    }
    eprintln!("{} replicate run(s) failed", outcome.failures.len());
    ExitCode::from(2)
}

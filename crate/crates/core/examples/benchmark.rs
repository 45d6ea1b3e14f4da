//! Replicated benchmark from a config file, with CSV and SVG output.
//!
//!     cargo run --release --example benchmark -- configs/gramacy1d.conf

use seqbart::bench::{curves_from_table, read_csv, render_svg, run_experiment, ExperimentConfig};

fn main() -> seqbart::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "configs/smoke.conf".into());
    let config = ExperimentConfig::load(path.as_ref())?;
    let outcome = run_experiment(&config)?;
    for f in &outcome.failures {
        eprintln!("replicate {} of {} failed: {}", f.replicate, f.method.name(), f.message);
    }

    // curves can be rebuilt from the CSV alone
    let curves = curves_from_table(&read_csv(&outcome.csv_path)?)?;
    for c in &curves {
        println!(
            "{:<8} final mean {:+.5}  median {:+.5}",
            c.method,
            c.final_mean(),
            c.final_median()
        );
    }
    let svg = outcome.csv_path.with_extension("svg");
    render_svg(&curves, &svg)?;
    println!("wrote {} and {}", outcome.csv_path.display(), svg.display());
    Ok(())
}

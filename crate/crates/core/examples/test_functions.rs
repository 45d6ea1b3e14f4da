//! The built-in test functions: evaluate by name, convert to native
//! coordinates, and locate minima on a grid.

use seqbart::testbed::{get_simulator, GRAMACY_MIN_Y, RONKKONEN_MIN_Y, SIMULATOR_NAMES, SPIKE_MIN_Y};

fn main() -> seqbart::Result<()> {
    for name in SIMULATOR_NAMES {
        let sim = get_simulator(name)?;
        let centre = vec![0.5; sim.dim()];
        println!(
            "{name:<12} d={}  f(centre)={:+.6}  centre in native units {:?}",
            sim.dim(),
            sim.evaluate(&centre)?,
            sim.native_domain().to_native(&centre)
        );
    }

    // a coarse grid already gets close to the one-dimensional minimum
    let sim = get_simulator("gramacy1d")?;
    let (x, y) = (0..=10_000)
        .map(|i| i as f64 / 10_000.0)
        .map(|x| (x, sim.evaluate(&[x]).unwrap()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    println!("\ngramacy1d grid minimum {y:.6} at x={x:.4} (true {GRAMACY_MIN_Y:.6})");
    println!("ronkkonen2d minimum {RONKKONEN_MIN_Y}, spike4d minimum {SPIKE_MIN_Y}");

    match get_simulator("tidal") {
        Err(e) => println!("\n{e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}

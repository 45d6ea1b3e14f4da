//! BART-EI sequential design on the one-dimensional test function,
//! printing each iteration as it happens. Pass `gp` to use the GP baseline.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqbart::seqopt::{sequential_optimize_with, SeqConfig};
use seqbart::testbed::{get_simulator, GRAMACY_MIN_Y};

fn main() -> seqbart::Result<()> {
    let sim = get_simulator("gramacy1d")?;
    let config = match std::env::args().nth(1).as_deref() {
        Some("gp") => SeqConfig::gp(10, 15, 1000),
        _ => SeqConfig::bart(10, 15, 1000),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let trace = sequential_optimize_with(sim.as_ref(), &config, &mut rng, &mut |r| {
        println!(
            "iter {:>2}  x={:.4}  EI={:.2e}  y={:+.5}  best={:+.5}",
            r.iteration,
            r.selection.x[0],
            r.selection.ei,
            r.y,
            r.f_min_before.min(r.y)
        );
    })?;
    println!(
        "{} evaluations, best {:.6} (global minimum {GRAMACY_MIN_Y:.6})",
        trace.n_evaluations,
        trace.best()
    );
    Ok(())
}

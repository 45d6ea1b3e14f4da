//! Running-best curves of sequential BART-EI and the one-shot maximin
//! baseline on the same budget, from the same seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqbart::seqopt::{one_shot_baseline, sequential_optimize, SeqConfig};
use seqbart::testbed::get_simulator;

fn main() -> seqbart::Result<()> {
    let sim = get_simulator("ronkkonen2d")?;
    let (n0, n_new) = (20, 15);
    let seq = sequential_optimize(
        sim.as_ref(),
        &SeqConfig::bart(n0, n_new, 2000),
        &mut ChaCha8Rng::seed_from_u64(4),
    )?;
    let one = one_shot_baseline(sim.as_ref(), n0, n_new, &mut ChaCha8Rng::seed_from_u64(4))?;
    println!("   n   sequential  one-shot");
    for (k, (a, b)) in seq.best_by_iteration().iter().zip(one.best_by_iteration()).enumerate() {
        println!("  {:>2}   {a:+.5}    {b:+.5}", n0 + k);
    }
    println!(
        "simulator calls: sequential {}, one-shot {}",
        seq.n_evaluations, one.n_evaluations
    );
    Ok(())
}

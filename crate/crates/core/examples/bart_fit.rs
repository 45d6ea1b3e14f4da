//! Fit the sum-of-trees model to a handful of evaluations and look at the
//! posterior at new inputs. Pass a path to also dump per-sweep sigma and
//! tree depth.

use std::fs::File;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqbart::bart::{fit_bart_traced, BartConfig, BartPriors};
use seqbart::design::{random_lhd, DesignMatrix, Placement};
use seqbart::testbed::gramacy_lee_1d;

fn main() -> seqbart::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = random_lhd(25, 1, &mut rng, Placement::UniformInStratum)?;
    let y: Vec<f64> = x.rows().map(|r| gramacy_lee_1d(r[0]).unwrap()).collect();
    let grid: Vec<Vec<f64>> = (0..=10).map(|i| vec![i as f64 / 10.0]).collect();
    let candidates = DesignMatrix::from_rows(1, &grid)?;

    let mut sink = std::env::args().nth(1).map(|p| File::create(p).expect("trace file"));
    let post = fit_bart_traced(
        &x,
        &y,
        &candidates,
        &BartPriors::default(),
        &BartConfig::default(),
        &mut rng,
        sink.as_mut().map(|f| f as &mut dyn std::io::Write),
    )?;

    println!("{} posterior draws", post.n_draws());
    println!("    x     truth      mean     5%      95%");
    for (c, row) in grid.iter().enumerate() {
        let mut draws = post.candidate_draws(c);
        draws.sort_by(f64::total_cmp);
        let q = |p: f64| draws[((draws.len() - 1) as f64 * p).round() as usize];
        println!(
            "  {:.1}  {:+.4}  {:+.4}  {:+.4}  {:+.4}",
            row[0],
            gramacy_lee_1d(row[0])?,
            post.mean_cand()[c],
            q(0.05),
            q(0.95)
        );
    }
    let sigma = post.sigma_draws();
    println!(
        "posterior mean sigma {:.4}",
        sigma.iter().sum::<f64>() / sigma.len() as f64
    );
    Ok(())
}

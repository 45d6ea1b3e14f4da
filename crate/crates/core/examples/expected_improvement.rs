//! Monte-Carlo expected improvement from posterior draws against the
//! closed form for a normal prediction, and candidate selection.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use seqbart::bart::BartPosterior;
use seqbart::design::DesignMatrix;
use seqbart::gp::ei_closed_form;
use seqbart::seqopt::{mc_expected_improvement, select_next_point, CandidatePredictions};

fn main() -> seqbart::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (y_hat, s) = (0.0, 1.0);
    let normal = Normal::new(y_hat, s).unwrap();
    let draws: Vec<f64> = (0..200_000).map(|_| normal.sample(&mut rng)).collect();
    println!("  f_min   Monte Carlo  closed form");
    for f_min in [-2.0, -1.0, 0.0, 1.0] {
        println!(
            "  {f_min:+.1}    {:.5}      {:.5}",
            mc_expected_improvement(&draws, f_min)?,
            ei_closed_form(f_min, y_hat, s)
        );
    }

    // three candidates: confident and mediocre, uncertain, confident and good
    let per_candidate = [[0.4, 0.5, 0.6, 0.5], [-0.6, 1.4, 0.9, -0.2], [0.1, 0.15, 0.05, 0.1]];
    let h_cand: Vec<Vec<f64>> = (0..4).map(|d| per_candidate.iter().map(|c| c[d]).collect()).collect();
    let post = BartPosterior::from_draws(vec![vec![0.0]; 4], h_cand, vec![0.1; 4])?;
    let candidates = DesignMatrix::from_rows(1, &[vec![0.2], vec![0.5], vec![0.8]])?;
    let sel = select_next_point(CandidatePredictions::Draws(&post), &candidates, 0.2)?;
    println!("\nEI per candidate {:.4?} -> pick x={:?}", sel.ei_all, sel.x);
    Ok(())
}

//! Run the tree sampler with no data so only the prior drives it, and
//! compare the terminal-node counts with the prior's implied mass.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqbart::bart::{
    log_tree_prior, mcmc_sweep, BartState, CutpointGrid, MoveProbs, RankedPoints, RegressionTree, ScaledPriors,
    SplitRule, SweepScratch, TrainingData,
};

fn main() -> seqbart::Result<()> {
    let grid = CutpointGrid::uniform(2, 1000)?;
    let data = TrainingData {
        points: RankedPoints::empty(2),
        y: Vec::new(),
    };
    let priors = ScaledPriors {
        sigma_mu: 0.05,
        nu: 3.0,
        lambda: 0.01,
        tree_alpha: 0.95,
        tree_beta: 2.0,
    };
    let mut state = BartState::new(1, &data, 1.0).with_fixed_sigma();
    let mut scratch = SweepScratch::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    let sweeps = 100_000;
    let mut counts = [0usize; 5];
    for _ in 0..sweeps {
        mcmc_sweep(
            &mut state,
            &data,
            &priors,
            &grid,
            &MoveProbs::default(),
            &mut scratch,
            &mut rng,
        );
        counts[(state.trees()[0].n_leaves() - 1).min(4)] += 1;
    }
    println!("leaves  frequency");
    for (k, c) in counts.iter().enumerate() {
        let label = if k == 4 { ">=5".to_string() } else { (k + 1).to_string() };
        println!("  {label:>3}    {:.4}", *c as f64 / sweeps as f64);
    }

    let mut one_split = RegressionTree::stump(0.0);
    one_split.split_leaf(0, SplitRule { axis: 0, cut: 499 }, 0.0, 0.0);
    println!(
        "\nlog prior of a single split: {:.6}",
        log_tree_prior(&one_split, 0.95, 2.0)
    );
    Ok(())
}

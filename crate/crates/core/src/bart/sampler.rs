//! Backfitting MCMC over an ensemble of trees.

use std::io::Write;

use rand::Rng;

use super::conjugate::{draw_leaf_values, draw_sigma_from_sse, log_marginal_from_stats, LeafStats};
use super::moves::{propose_tree_move, MoveContext, MoveProbs, TreeMove};
use super::tree::{CutpointGrid, RankedPoints, RegressionTree};

/// Prior quantities on the scaled response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledPriors {
    pub sigma_mu: f64,
    pub nu: f64,
    pub lambda: f64,
    pub tree_alpha: f64,
    pub tree_beta: f64,
}

/// Training inputs (as grid ranks) and scaled responses.
#[derive(Debug, Clone)]
pub struct TrainingData {
    pub points: RankedPoints,
    pub y: Vec<f64>,
}

/// Current trees, their fitted values at the training points and the error scale.
#[derive(Debug, Clone)]
pub struct BartState {
    trees: Vec<RegressionTree>,
    fits: Vec<Vec<f64>>,
    residuals: Vec<f64>,
    sigma: f64,
    fixed_sigma: bool,
}

impl BartState {
    /// `m` single-leaf trees predicting zero.
    pub fn new(m: usize, data: &TrainingData, sigma: f64) -> Self {
        let n = data.y.len();
        Self {
            trees: vec![RegressionTree::stump(0.0); m],
            fits: vec![vec![0.0; n]; m],
            residuals: data.y.clone(),
            sigma,
            fixed_sigma: false,
        }
    }

    /// Holds `sigma` at its current value instead of drawing it each sweep.
    pub fn with_fixed_sigma(mut self) -> Self {
        self.fixed_sigma = true;
        self
    }

    pub fn trees(&self) -> &[RegressionTree] {
        &self.trees
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Scaled response minus the ensemble fit at each training point.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    /// Ensemble fit at each training point.
    pub fn h_train(&self) -> Vec<f64> {
        let n = self.residuals.len();
        let mut h = vec![0.0; n];
        for f in &self.fits {
            for (a, b) in h.iter_mut().zip(f) {
                *a += b;
            }
        }
        h
    }

    pub fn mean_depth(&self) -> f64 {
        self.trees.iter().map(|t| t.max_depth() as f64).sum::<f64>() / self.trees.len() as f64
    }
}

/// Acceptance counts for one sweep.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepStats {
    pub proposed: usize,
    pub accepted: usize,
}

/// Reusable buffers so a sweep does not allocate per tree.
#[derive(Debug, Default)]
pub struct SweepScratch {
    partial: Vec<f64>,
    assign: Vec<usize>,
    assign_new: Vec<usize>,
    stats: Vec<LeafStats>,
    stats_new: Vec<LeafStats>,
}

fn collect_stats(tree: &RegressionTree, assign: &[usize], r: &[f64], out: &mut Vec<LeafStats>) {
    out.clear();
    out.resize(tree.nodes().len(), LeafStats::default());
    for (&leaf, &v) in assign.iter().zip(r) {
        out[leaf].push(v);
    }
}

fn tree_log_likelihood(tree: &RegressionTree, stats: &[LeafStats], sigma2: f64, sigma_mu2: f64) -> f64 {
    tree.leaves()
        .map(|l| log_marginal_from_stats(&stats[l], sigma2, sigma_mu2))
        .sum()
}

/// One backfitting pass: every tree gets one Metropolis-Hastings structure
/// move against its partial residual and fresh leaf values, then `sigma` is
/// redrawn from the full residuals.
#[allow(clippy::too_many_arguments)]
pub fn mcmc_sweep<R: Rng + ?Sized>(
    state: &mut BartState,
    data: &TrainingData,
    priors: &ScaledPriors,
    grid: &CutpointGrid,
    probs: &MoveProbs,
    scratch: &mut SweepScratch,
    rng: &mut R,
) -> SweepStats {
    let ctx = MoveContext {
        grid,
        points: &data.points,
        probs: *probs,
        alpha: priors.tree_alpha,
        beta: priors.tree_beta,
    };
    let n = data.y.len();
    let mut stats = SweepStats::default();
    let sigma2 = state.sigma * state.sigma;
    let sigma_mu2 = priors.sigma_mu * priors.sigma_mu;

    for j in 0..state.trees.len() {
        let fit = &mut state.fits[j];
        scratch.partial.clear();
        scratch
            .partial
            .extend(state.residuals.iter().zip(fit.iter()).map(|(e, f)| e + f));

        let tree = &mut state.trees[j];
        tree.route(&data.points, &mut scratch.assign);
        collect_stats(tree, &scratch.assign, &scratch.partial, &mut scratch.stats);

        if let Some(mv) = probs.pick(tree, rng) {
            if let Ok(prop) = propose_tree_move(tree, mv, &ctx, &scratch.assign, rng) {
                stats.proposed += 1;
                if prop.log_prior_ratio.is_finite() {
                    prop.tree.route(&data.points, &mut scratch.assign_new);
                    collect_stats(
                        &prop.tree,
                        &scratch.assign_new,
                        &scratch.partial,
                        &mut scratch.stats_new,
                    );
                    let nonempty = n == 0
                        || matches!(mv, TreeMove::Grow | TreeMove::Prune)
                        || prop.tree.leaves().all(|l| scratch.stats_new[l].n > 0);
                    if nonempty {
                        let log_ratio = tree_log_likelihood(&prop.tree, &scratch.stats_new, sigma2, sigma_mu2)
                            - tree_log_likelihood(tree, &scratch.stats, sigma2, sigma_mu2)
                            + prop.log_prior_ratio
                            + prop.log_proposal_ratio;
                        if rng.random::<f64>().ln() < log_ratio {
                            *tree = prop.tree;
                            std::mem::swap(&mut scratch.assign, &mut scratch.assign_new);
                            std::mem::swap(&mut scratch.stats, &mut scratch.stats_new);
                            stats.accepted += 1;
                        }
                    }
                }
            }
        }

        draw_leaf_values(tree, &scratch.stats, state.sigma, priors.sigma_mu, rng);
        for (i, f) in fit.iter_mut().enumerate().take(n) {
            let v = tree.leaf_value(scratch.assign[i]).unwrap();
            *f = v;
            state.residuals[i] = scratch.partial[i] - v;
        }
    }

    if !state.fixed_sigma {
        let sse: f64 = state.residuals.iter().map(|e| e * e).sum();
        state.sigma = draw_sigma_from_sse(sse, n, priors.nu, priors.lambda, rng);
    }
    stats
}

/// Writes `sweep,sigma,mean_depth` for diagnostics.
pub fn write_trace_line(sink: &mut dyn Write, sweep: usize, state: &BartState) -> std::io::Result<()> {
    writeln!(sink, "{sweep},{},{}", state.sigma, state.mean_depth())
}

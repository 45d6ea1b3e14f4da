//! Bayesian sum-of-trees surrogate for deterministic simulators.
//!
//! The response is rescaled to `[-0.5, 0.5]`, a sum of `m` regression trees
//! plus Gaussian error is fitted by backfitting MCMC, and retained draws of the
//! ensemble are recorded at the training points and at a fixed candidate set
//! in the same pass. There is no prediction at new inputs after fitting.

mod conjugate;
mod moves;
mod sampler;
mod tree;

use std::io::Write;

use rand::Rng;

pub use conjugate::{
    draw_leaf_values, draw_sigma, leaf_posterior, node_log_marginal_likelihood, sigma_prior_scale, LeafStats,
};
pub use moves::{is_legal, propose_tree_move, MoveContext, MoveProbs, NoMove, Proposal, TreeMove};
pub use sampler::{mcmc_sweep, BartState, ScaledPriors, SweepScratch, SweepStats, TrainingData};
pub use tree::{
    ensemble_predict, log_tree_prior, split_probability, tree_predict, CutRange, CutpointGrid, NodeKind, RankedPoints,
    RegressionTree, SplitRule, TreeNode,
};

use crate::design::DesignMatrix;
use crate::error::{invalid, Error, Result};
use crate::stats::sample_sd;

/// Prior settings tuned for near-deterministic responses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BartPriors {
    /// Leaf shrinkage multiplier.
    pub k: f64,
    /// Number of trees.
    pub m: usize,
    /// Degrees of freedom of the `sigma^2` prior.
    pub nu: f64,
    /// Prior probability that `sigma < anchor_fraction * sd(y)`.
    pub q: f64,
    pub anchor_fraction: f64,
    pub tree_alpha: f64,
    pub tree_beta: f64,
}

impl Default for BartPriors {
    fn default() -> Self {
        Self {
            k: 1.0,
            m: 100,
            nu: 3.0,
            q: 0.90,
            anchor_fraction: 0.20,
            tree_alpha: 0.95,
            tree_beta: 2.0,
        }
    }
}

impl BartPriors {
    /// Leaf standard deviation `1 / (2 k sqrt(m))` on the scaled response.
    pub fn sigma_mu(&self) -> f64 {
        1.0 / (2.0 * self.k * (self.m as f64).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || !(self.k > 0.0) {
            return Err(invalid("BART needs m >= 1 and k > 0"));
        }
        if !(self.tree_alpha > 0.0 && self.tree_alpha < 1.0) || !(self.tree_beta >= 0.0) {
            return Err(invalid("tree prior needs 0 < alpha < 1 and beta >= 0"));
        }
        Ok(())
    }

    /// Priors on the scaled response given the scaled training responses.
    pub fn scaled(&self, y_scaled: &[f64]) -> Result<ScaledPriors> {
        Ok(ScaledPriors {
            sigma_mu: self.sigma_mu(),
            nu: self.nu,
            lambda: sigma_prior_scale(sample_sd(y_scaled), self.nu, self.q, self.anchor_fraction)?,
            tree_alpha: self.tree_alpha,
            tree_beta: self.tree_beta,
        })
    }
}

/// MCMC run length and proposal mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BartConfig {
    /// Total sweeps, burn-in included.
    pub n_iter: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub moves: MoveProbs,
    pub cutpoints_per_axis: usize,
}

impl Default for BartConfig {
    fn default() -> Self {
        Self {
            n_iter: 6000,
            burn_in: 2000,
            thin: 20,
            moves: MoveProbs::default(),
            cutpoints_per_axis: 1000,
        }
    }
}

impl BartConfig {
    /// Number of retained draws.
    pub fn n_draws(&self) -> usize {
        self.n_iter.saturating_sub(self.burn_in) / self.thin.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.thin == 0 || self.n_iter <= self.burn_in || self.n_draws() == 0 {
            return Err(invalid("MCMC needs thin >= 1 and at least one retained draw"));
        }
        if self.cutpoints_per_axis == 0 {
            return Err(invalid("need at least one cutpoint per axis"));
        }
        self.moves.validate()
    }
}

/// Affine map of the observed responses onto `[-0.5, 0.5]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseScaling {
    pub y_min_obs: f64,
    pub y_max_obs: f64,
}

impl ResponseScaling {
    pub fn fit(y: &[f64]) -> Result<Self> {
        if y.iter().any(|v| !v.is_finite()) {
            return Err(invalid("responses must be finite"));
        }
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(hi > lo) {
            return Err(invalid("responses have zero range; scaling undefined"));
        }
        Ok(Self {
            y_min_obs: lo,
            y_max_obs: hi,
        })
    }

    pub fn slope(&self) -> f64 {
        self.y_max_obs - self.y_min_obs
    }

    pub fn to_scaled(&self, y: f64) -> f64 {
        (y - self.y_min_obs) / self.slope() - 0.5
    }

    pub fn to_original(&self, s: f64) -> f64 {
        (s + 0.5) * self.slope() + self.y_min_obs
    }
}

/// Retained posterior draws, all on the original response scale.
#[derive(Debug, Clone, PartialEq)]
pub struct BartPosterior {
    n_train: usize,
    n_cand: usize,
    h_train: Vec<f64>,
    h_cand: Vec<f64>,
    sigma_draws: Vec<f64>,
}

impl BartPosterior {
    pub fn n_draws(&self) -> usize {
        self.sigma_draws.len()
    }

    pub fn n_train(&self) -> usize {
        self.n_train
    }

    pub fn n_candidates(&self) -> usize {
        self.n_cand
    }

    /// Ensemble values at the training points for draw `i`.
    pub fn h_train(&self, i: usize) -> &[f64] {
        &self.h_train[i * self.n_train..(i + 1) * self.n_train]
    }

    /// Ensemble values at the candidate points for draw `i`.
    pub fn h_cand(&self, i: usize) -> &[f64] {
        &self.h_cand[i * self.n_cand..(i + 1) * self.n_cand]
    }

    /// All draws at candidate `c`.
    pub fn candidate_draws(&self, c: usize) -> Vec<f64> {
        (0..self.n_draws()).map(|i| self.h_cand[i * self.n_cand + c]).collect()
    }

    pub fn sigma_draws(&self) -> &[f64] {
        &self.sigma_draws
    }

    /// Posterior mean at each training point.
    pub fn mean_train(&self) -> Vec<f64> {
        column_means(&self.h_train, self.n_train, self.n_draws())
    }

    /// Posterior mean at each candidate point.
    pub fn mean_cand(&self) -> Vec<f64> {
        column_means(&self.h_cand, self.n_cand, self.n_draws())
    }

    /// Assembles a posterior from externally produced draws (e.g. tests or
    /// other samplers). Matrices are row-major with one row per draw.
    pub fn from_draws(h_train: Vec<Vec<f64>>, h_cand: Vec<Vec<f64>>, sigma_draws: Vec<f64>) -> Result<Self> {
        let n = sigma_draws.len();
        if h_train.len() != n || h_cand.len() != n || n == 0 {
            return Err(invalid("draw matrices must share a nonzero draw count"));
        }
        let n_train = h_train[0].len();
        let n_cand = h_cand[0].len();
        if h_train.iter().any(|r| r.len() != n_train) || h_cand.iter().any(|r| r.len() != n_cand) {
            return Err(invalid("ragged draw matrix"));
        }
        let all = h_train.iter().chain(&h_cand).flatten().chain(&sigma_draws);
        if all.into_iter().any(|v| !v.is_finite()) {
            return Err(invalid("posterior draws must be finite"));
        }
        Ok(Self {
            n_train,
            n_cand,
            h_train: h_train.concat(),
            h_cand: h_cand.concat(),
            sigma_draws,
        })
    }
}

fn column_means(flat: &[f64], cols: usize, rows: usize) -> Vec<f64> {
    let mut out = vec![0.0; cols];
    for row in flat.chunks_exact(cols.max(1)).take(rows) {
        for (o, v) in out.iter_mut().zip(row) {
            *o += v;
        }
    }
    out.iter_mut().for_each(|o| *o /= rows as f64);
    out
}

/// Fits the ensemble and records retained draws at `x` and `candidates`.
pub fn fit_bart<R: Rng + ?Sized>(
    x: &DesignMatrix,
    y: &[f64],
    candidates: &DesignMatrix,
    priors: &BartPriors,
    config: &BartConfig,
    rng: &mut R,
) -> Result<BartPosterior> {
    fit_bart_traced(x, y, candidates, priors, config, rng, None)
}

/// [`fit_bart`] that also writes one `sweep,sigma,mean_depth` line per sweep to `trace`.
pub fn fit_bart_traced<R: Rng + ?Sized>(
    x: &DesignMatrix,
    y: &[f64],
    candidates: &DesignMatrix,
    priors: &BartPriors,
    config: &BartConfig,
    rng: &mut R,
    mut trace: Option<&mut dyn Write>,
) -> Result<BartPosterior> {
    priors.validate()?;
    config.validate()?;
    if x.n() < 2 || x.n() != y.len() {
        return Err(invalid(format!(
            "need at least two training points with matching responses (got {} inputs, {} responses)",
            x.n(),
            y.len()
        )));
    }
    if candidates.is_empty() || candidates.d() != x.d() {
        return Err(invalid("candidate set must be nonempty with the training dimension"));
    }
    let scaling = ResponseScaling::fit(y)?;
    let y_scaled: Vec<f64> = y.iter().map(|&v| scaling.to_scaled(v)).collect();
    let scaled_priors = priors.scaled(&y_scaled)?;

    let grid = CutpointGrid::uniform(x.d(), config.cutpoints_per_axis)?;
    let data = TrainingData {
        points: RankedPoints::new(x, &grid),
        y: y_scaled,
    };
    let cand_points = RankedPoints::new(candidates, &grid);
    let (n, n_cand, n_draws) = (x.n(), candidates.n(), config.n_draws());

    let mut state = BartState::new(priors.m, &data, sample_sd(&data.y).max(1e-3));
    let mut scratch = SweepScratch::default();
    let mut h_train = Vec::with_capacity(n_draws * n);
    let mut h_cand = Vec::with_capacity(n_draws * n_cand);
    let mut sigma_draws = Vec::with_capacity(n_draws);
    let mut cand_buf = vec![0.0; n_cand];

    let last = config.burn_in + n_draws * config.thin;
    for sweep in 1..=last {
        mcmc_sweep(
            &mut state,
            &data,
            &scaled_priors,
            &grid,
            &config.moves,
            &mut scratch,
            rng,
        );
        if let Some(sink) = trace.as_deref_mut() {
            sampler::write_trace_line(sink, sweep, &state).map_err(|source| Error::Io {
                path: "<bart trace>".into(),
                source,
            })?;
        }
        if sweep > config.burn_in && (sweep - config.burn_in).is_multiple_of(config.thin) {
            h_train.extend(state.h_train().into_iter().map(|s| scaling.to_original(s)));
            cand_buf.iter_mut().for_each(|v| *v = 0.0);
            for t in state.trees() {
                t.accumulate(&cand_points, &mut cand_buf);
            }
            h_cand.extend(cand_buf.iter().map(|&s| scaling.to_original(s)));
            sigma_draws.push(state.sigma() * scaling.slope());
        }
    }

    Ok(BartPosterior {
        n_train: n,
        n_cand,
        h_train,
        h_cand,
        sigma_draws,
    })
}

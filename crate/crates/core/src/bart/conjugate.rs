//! Conjugate pieces of the sampler: leaf marginal likelihood, leaf draws and
//! the error-variance update.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::tree::RegressionTree;
use crate::error::{invalid, Result};
use crate::stats::chi_squared_quantile;

/// Sufficient statistics of the residuals falling in one node.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LeafStats {
    pub n: usize,
    pub sum: f64,
    pub sum_sq: f64,
}

impl LeafStats {
    pub fn from_residuals(r: &[f64]) -> Self {
        let mut s = Self::default();
        for &v in r {
            s.push(v);
        }
        s
    }

    #[inline]
    pub fn push(&mut self, r: f64) {
        self.n += 1;
        self.sum += r;
        self.sum_sq += r * r;
    }
}

/// Log marginal density of a node's residuals with its mean integrated out
/// against a `Normal(0, sigma_mu^2)` prior.
pub fn node_log_marginal_likelihood(residuals: &[f64], sigma: f64, sigma_mu: f64) -> Result<f64> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if residuals.is_empty() {
        return Err(invalid("node marginal likelihood needs at least one residual"));
    }
    Ok(log_marginal_from_stats(
        &LeafStats::from_residuals(residuals),
        sigma * sigma,
        sigma_mu * sigma_mu,
    ))
}

/// Same quantity from sufficient statistics; an empty node contributes zero.
#[inline]
pub(crate) fn log_marginal_from_stats(s: &LeafStats, sigma2: f64, sigma_mu2: f64) -> f64 {
    if s.n == 0 {
        return 0.0;
    }
    let n = s.n as f64;
    let denom = sigma2 + n * sigma_mu2;
    -0.5 * n * (std::f64::consts::TAU * sigma2).ln() + 0.5 * (sigma2 / denom).ln() - s.sum_sq / (2.0 * sigma2)
        + sigma_mu2 * s.sum * s.sum / (2.0 * sigma2 * denom)
}

/// Posterior mean and variance of a leaf value.
pub fn leaf_posterior(stats: &LeafStats, sigma: f64, sigma_mu: f64) -> (f64, f64) {
    let (s2, m2) = (sigma * sigma, sigma_mu * sigma_mu);
    let denom = s2 + stats.n as f64 * m2;
    (m2 * stats.sum / denom, s2 * m2 / denom)
}

/// Redraws every leaf of `tree` from its conjugate posterior. `stats` is indexed
/// by node id; leaves with no residuals draw from the prior.
pub fn draw_leaf_values<R: Rng + ?Sized>(
    tree: &mut RegressionTree,
    stats: &[LeafStats],
    sigma: f64,
    sigma_mu: f64,
    rng: &mut R,
) {
    let leaves: Vec<usize> = tree.leaves().collect();
    for id in leaves {
        let (mean, var) = leaf_posterior(&stats[id], sigma, sigma_mu);
        let z: f64 = rng.sample(StandardNormal);
        tree.set_leaf_value(id, mean + var.sqrt() * z);
    }
}

/// Draws `sigma` given the residuals of the full ensemble: `sigma^2` is scaled
/// inverse chi-squared with `nu + n` degrees of freedom and scale
/// `(nu lambda + sum e^2) / (nu + n)`.
pub fn draw_sigma<R: Rng + ?Sized>(residuals: &[f64], nu: f64, lambda: f64, rng: &mut R) -> f64 {
    let sse: f64 = residuals.iter().map(|e| e * e).sum();
    draw_sigma_from_sse(sse, residuals.len(), nu, lambda, rng)
}

pub(crate) fn draw_sigma_from_sse<R: Rng + ?Sized>(sse: f64, n: usize, nu: f64, lambda: f64, rng: &mut R) -> f64 {
    let dof = nu + n as f64;
    let chi: f64 = ChiSquared::new(dof).expect("positive dof").sample(rng);
    ((nu * lambda + sse) / chi).sqrt()
}

/// Scale `lambda` of the `sigma^2 ~ nu lambda / chi^2_nu` prior that puts
/// probability `q` on `sigma < anchor_fraction * sd_y`.
pub fn sigma_prior_scale(sd_y: f64, nu: f64, q: f64, anchor_fraction: f64) -> Result<f64> {
    let ok = |v: f64| v.is_finite() && v > 0.0;
    if !ok(sd_y) || !ok(nu) || !ok(anchor_fraction) || !(q > 0.0 && q < 1.0) {
        return Err(invalid(format!(
            "sigma prior needs positive finite inputs and 0 < q < 1 (sd_y={sd_y}, nu={nu}, q={q}, anchor={anchor_fraction})"
        )));
    }
    let c = anchor_fraction * sd_y;
    Ok(c * c * chi_squared_quantile(nu, 1.0 - q) / nu)
}

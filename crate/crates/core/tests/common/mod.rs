//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seqbart::bart::{
    mcmc_sweep, BartState, CutpointGrid, MoveProbs, RankedPoints, ScaledPriors, SweepScratch, TrainingData,
};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// log of the integral over mu of prod N(r_i; mu, sigma^2) N(mu; 0, sigma_mu^2),
/// by composite Simpson on a wide window around the integrand's peak.
pub fn quadrature_log_marginal(r: &[f64], sigma: f64, sigma_mu: f64) -> f64 {
    let ln_norm = |x: f64, s: f64| -0.5 * (std::f64::consts::TAU * s * s).ln() - x * x / (2.0 * s * s);
    let g = |mu: f64| r.iter().map(|&ri| ln_norm(ri - mu, sigma)).sum::<f64>() + ln_norm(mu, sigma_mu);
    // locate the peak by golden-section search on the log integrand
    let (mut a, mut b) = (-50.0_f64, 50.0_f64);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if g(c) > g(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let peak = 0.5 * (a + b);
    let width = 1.0 / (r.len() as f64 / (sigma * sigma) + 1.0 / (sigma_mu * sigma_mu)).sqrt();
    let (lo, hi, steps) = (peak - 40.0 * width, peak + 40.0 * width, 20_000usize);
    let h = (hi - lo) / steps as f64;
    let g0 = g(peak);
    let mut acc = 0.0;
    for i in 0..=steps {
        let w = if i == 0 || i == steps {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * (g(lo + i as f64 * h) - g0).exp();
    }
    g0 + (acc * h / 3.0).ln()
}

/// CDF of sigma when sigma^2 = scale / chi^2_dof.
pub fn scaled_inv_chi2_sigma_cdf(s: f64, scale: f64, dof: f64) -> f64 {
    let chi = ChiSquared::new(dof).unwrap();
    1.0 - chi.cdf(scale / (s * s))
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Frequency of terminal-node counts 1, 2, 3, 4 and >= 5 when a single tree
/// is sampled with no data, so only the prior drives the chain.
pub fn prior_leaf_count_mass(sweeps: usize, seed: u64) -> [f64; 5] {
    let grid = CutpointGrid::uniform(2, 1000).unwrap();
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
    let mut r = rng(seed);
    let mut counts = [0usize; 5];
    for _ in 0..sweeps {
        mcmc_sweep(
            &mut state,
            &data,
            &priors,
            &grid,
            &MoveProbs::default(),
            &mut scratch,
            &mut r,
        );
        counts[(state.trees()[0].n_leaves() - 1).min(4)] += 1;
    }
    counts.map(|c| c as f64 / sweeps as f64)
}

/// Exact leaf-count distribution of the depth-based split prior, by
/// recursion over subtree sizes.
pub fn exact_leaf_count_mass(alpha: f64, beta: f64) -> [f64; 5] {
    const MAX: usize = 4;
    // p[depth][k] = probability a subtree rooted at `depth` has exactly k leaves (k <= MAX)
    // a tree with at most MAX leaves is at most MAX - 1 deep
    let depths = MAX + 1;
    let mut p = vec![vec![0.0; MAX + 1]; depths + 1];
    for depth in (0..depths).rev() {
        let split = alpha * (1.0 + depth as f64).powf(-beta);
        p[depth][1] = 1.0 - split;
        for k in 2..=MAX {
            let mut s = 0.0;
            for a in 1..k {
                s += p[depth + 1][a] * p[depth + 1][k - a];
            }
            p[depth][k] = split * s;
        }
    }
    let mut out = [0.0; 5];
    out[..MAX].copy_from_slice(&p[0][1..=MAX]);
    out[4] = 1.0 - out[..MAX].iter().sum::<f64>();
    out
}

pub fn normal_draws(n: usize, mean: f64, sd: f64, r: &mut impl Rng) -> Vec<f64> {
    (0..n)
        .map(|_| mean + sd * r.sample::<f64, _>(rand_distr::StandardNormal))
        .collect()
}

/// Local minima of `f` on an `m x m` grid over the unit square whose value
/// lies within `tol` of `level`.
pub fn grid_minima(f: impl Fn(f64, f64) -> f64, m: usize, level: f64, tol: f64) -> Vec<(f64, f64)> {
    let h = 1.0 / (m - 1) as f64;
    let vals: Vec<f64> = (0..m * m).map(|k| f((k / m) as f64 * h, (k % m) as f64 * h)).collect();
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let v = vals[i * m + j];
            if (v - level).abs() > tol {
                continue;
            }
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) != (0, 0) && a >= 0 && b >= 0 && a < m as i64 && b < m as i64 {
                        is_min &= vals[a as usize * m + b as usize] >= v;
                    }
                }
            }
            if is_min {
                out.push((i as f64 * h, j as f64 * h));
            }
        }
    }
    out
}

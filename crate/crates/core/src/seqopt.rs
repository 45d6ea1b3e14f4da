//! Expected-improvement driven sequential design and the one-shot baseline.
//!
//! The sequential loop starts from a maximin Latin hypercube of `n0 - 2` points
//! plus the two cube corners, then repeatedly draws a fresh random Latin
//! hypercube of candidates, refits the surrogate on everything observed so far,
//! and evaluates the simulator at the candidate with the largest expected
//! improvement below the best observed value.

use rand::Rng;

use crate::bart::{fit_bart, BartConfig, BartPosterior, BartPriors};
use crate::design::{augment_corners, default_sweeps, maximin_lhd, random_lhd, DesignMatrix, Placement};
use crate::error::{invalid, Error, Result};
use crate::gp::{ei_closed_form, gp_fit, gp_predict, GpOptions, PredictiveMoment};
use crate::testbed::Simulator;

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluatedPoint {
    pub x: Vec<f64>,
    pub y: f64,
    /// 0 for the initial design, `k` for the k-th sequential addition.
    pub iteration: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    /// `f_min_path[i]` is the best value among the first `i + 1` points.
    Sequential,
    /// `f_min_path[k]` is the best value of an independent `(n0 + k)`-point
    /// design, so the path need not be monotone.
    OneShot,
}

/// Result of one optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub method: String,
    pub seed: Option<u64>,
    pub kind: TraceKind,
    pub n0: usize,
    pub points: Vec<EvaluatedPoint>,
    pub f_min_path: Vec<f64>,
    /// One-shot only: the best point of each design, `iteration = k`.
    pub design_best: Vec<EvaluatedPoint>,
    pub n_evaluations: usize,
}

impl Trace {
    /// Best value observed in the run.
    pub fn best(&self) -> f64 {
        *self.f_min_path.last().unwrap_or(&f64::INFINITY)
    }

    /// Running best after `n0 + k` evaluations, for `k = 0..=n_new`.
    pub fn best_by_iteration(&self) -> Vec<f64> {
        match self.kind {
            TraceKind::Sequential => self.f_min_path[self.n0.saturating_sub(1)..].to_vec(),
            TraceKind::OneShot => self.f_min_path.clone(),
        }
    }

    /// Number of sequential additions (or designs beyond the first).
    pub fn n_new(&self) -> usize {
        self.best_by_iteration().len().saturating_sub(1)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Surrogate driving the sequential search.
#[derive(Debug, Clone, PartialEq)]
pub enum Surrogate {
    Bart { priors: BartPriors, config: BartConfig },
    Gp(GpOptions),
}

impl Surrogate {
    pub fn name(&self) -> &'static str {
        match self {
            Surrogate::Bart { .. } => "bart",
            Surrogate::Gp(_) => "gp",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeqConfig {
    pub n0: usize,
    pub n_new: usize,
    pub n_cand: usize,
    pub surrogate: Surrogate,
    /// Swap sweeps for the initial maximin design; `None` uses the default.
    pub maximin_sweeps: Option<usize>,
}

impl SeqConfig {
    pub fn bart(n0: usize, n_new: usize, n_cand: usize) -> Self {
        Self {
            n0,
            n_new,
            n_cand,
            surrogate: Surrogate::Bart {
                priors: BartPriors::default(),
                config: BartConfig::default(),
            },
            maximin_sweeps: None,
        }
    }

    pub fn gp(n0: usize, n_new: usize, n_cand: usize) -> Self {
        Self {
            surrogate: Surrogate::Gp(GpOptions::default()),
            ..Self::bart(n0, n_new, n_cand)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n0 < 3 {
            return Err(invalid("n0 must be at least 3 (two corners plus one design point)"));
        }
        if self.n_cand == 0 {
            return Err(invalid("candidate set must have at least one point"));
        }
        match &self.surrogate {
            Surrogate::Bart { priors, config } => {
                priors.validate()?;
                config.validate()
            }
            Surrogate::Gp(_) => Ok(()),
        }
    }
}

/// Average improvement below `f_min` over posterior draws.
pub fn mc_expected_improvement(draws: &[f64], f_min: f64) -> Result<f64> {
    if draws.is_empty() {
        return Err(invalid("expected improvement needs at least one draw"));
    }
    Ok(draws.iter().map(|h| (f_min - h).max(0.0)).sum::<f64>() / draws.len() as f64)
}

/// Surrogate output at a candidate set.
#[derive(Debug, Clone, Copy)]
pub enum CandidatePredictions<'a> {
    Draws(&'a BartPosterior),
    Moments(&'a [PredictiveMoment]),
}

impl CandidatePredictions<'_> {
    fn len(&self) -> usize {
        match self {
            CandidatePredictions::Draws(p) => p.n_candidates(),
            CandidatePredictions::Moments(m) => m.len(),
        }
    }

    /// Expected improvement at every candidate.
    pub fn expected_improvement(&self, f_min: f64) -> Vec<f64> {
        match self {
            CandidatePredictions::Draws(p) => {
                let mut acc = vec![0.0; p.n_candidates()];
                for i in 0..p.n_draws() {
                    for (a, h) in acc.iter_mut().zip(p.h_cand(i)) {
                        *a += (f_min - h).max(0.0);
                    }
                }
                let n = p.n_draws() as f64;
                acc.iter_mut().for_each(|a| *a /= n);
                acc
            }
            CandidatePredictions::Moments(m) => m.iter().map(|p| ei_closed_form(f_min, p.mean, p.sd)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub x: Vec<f64>,
    pub ei: f64,
    pub ei_all: Vec<f64>,
}

/// Candidate with the largest expected improvement; ties go to the lowest index.
pub fn select_next_point(
    predictions: CandidatePredictions<'_>,
    candidates: &DesignMatrix,
    f_min: f64,
) -> Result<Selection> {
    if candidates.is_empty() || predictions.len() != candidates.n() {
        return Err(invalid(format!(
            "predictions cover {} candidates but the set has {}",
            predictions.len(),
            candidates.n()
        )));
    }
    let ei_all = predictions.expected_improvement(f_min);
    let mut index = 0;
    for (i, &v) in ei_all.iter().enumerate() {
        if v > ei_all[index] {
            index = i;
        }
    }
    Ok(Selection {
        index,
        x: candidates.row(index).to_vec(),
        ei: ei_all[index],
        ei_all,
    })
}

/// What happened in one sequential iteration.
#[derive(Debug, Clone)]
pub struct IterationReport<'a> {
    pub iteration: usize,
    pub f_min_before: f64,
    pub selection: &'a Selection,
    pub y: f64,
}

struct Observed {
    x: DesignMatrix,
    ys: Vec<f64>,
    points: Vec<EvaluatedPoint>,
    f_min_path: Vec<f64>,
    f_min: f64,
}

impl Observed {
    fn new(d: usize, capacity: usize) -> Self {
        Self {
            x: DesignMatrix::empty(d),
            ys: Vec::with_capacity(capacity),
            points: Vec::with_capacity(capacity),
            f_min_path: Vec::with_capacity(capacity),
            f_min: f64::INFINITY,
        }
    }

    fn record(&mut self, row: &[f64], y: f64, iteration: usize) -> Result<()> {
        self.x.push(row)?;
        self.ys.push(y);
        self.f_min = self.f_min.min(y);
        self.f_min_path.push(self.f_min);
        self.points.push(EvaluatedPoint {
            x: row.to_vec(),
            y,
            iteration,
        });
        Ok(())
    }
}

fn evaluate(sim: &dyn Simulator, x: &[f64]) -> Result<f64> {
    sim.evaluate(x).map_err(|e| Error::Evaluation {
        x: x.to_vec(),
        source: Box::new(e),
    })
}

/// Initial design: maximin LHD of `n0 - 2` points plus the two corners.
pub fn initial_design<R: Rng + ?Sized>(
    n0: usize,
    d: usize,
    sweeps: Option<usize>,
    rng: &mut R,
) -> Result<DesignMatrix> {
    let core = n0 - 2;
    let lhd = if core >= 2 {
        maximin_lhd(core, d, rng, sweeps.unwrap_or(default_sweeps(core)))?
    } else {
        random_lhd(core, d, rng, Placement::UniformInStratum)?
    };
    Ok(augment_corners(&lhd))
}

pub fn sequential_optimize<R: Rng + ?Sized>(sim: &dyn Simulator, config: &SeqConfig, rng: &mut R) -> Result<Trace> {
    sequential_optimize_with(sim, config, rng, &mut |_| {})
}

/// [`sequential_optimize`] with a callback after every sequential evaluation.
pub fn sequential_optimize_with<R: Rng + ?Sized>(
    sim: &dyn Simulator,
    config: &SeqConfig,
    rng: &mut R,
    observer: &mut dyn FnMut(&IterationReport<'_>),
) -> Result<Trace> {
    config.validate()?;
    let d = sim.dim();
    let design = initial_design(config.n0, d, config.maximin_sweeps, rng)?;

    let mut obs = Observed::new(d, config.n0 + config.n_new);
    for row in design.rows() {
        let y = evaluate(sim, row)?;
        obs.record(row, y, 0)?;
    }

    for k in 1..=config.n_new {
        let candidates = random_lhd(config.n_cand, d, rng, Placement::UniformInStratum)?;
        let f_min = obs.f_min;
        let selection = match &config.surrogate {
            Surrogate::Bart { priors, config: mcmc } => {
                let post = fit_bart(&obs.x, &obs.ys, &candidates, priors, mcmc, rng)?;
                select_next_point(CandidatePredictions::Draws(&post), &candidates, f_min)?
            }
            Surrogate::Gp(options) => {
                let model = gp_fit(&obs.x, &obs.ys, options, rng)?;
                let moments: Vec<PredictiveMoment> = candidates.rows().map(|c| gp_predict(&model, c)).collect();
                select_next_point(CandidatePredictions::Moments(&moments), &candidates, f_min)?
            }
        };
        let y = evaluate(sim, &selection.x)?;
        obs.record(&selection.x, y, k)?;
        observer(&IterationReport {
            iteration: k,
            f_min_before: f_min,
            selection: &selection,
            y,
        });
    }

    let Observed { points, f_min_path, .. } = obs;
    let n_evaluations = points.len();
    Ok(Trace {
        method: config.surrogate.name().to_string(),
        seed: None,
        kind: TraceKind::Sequential,
        n0: config.n0,
        points,
        f_min_path,
        design_best: Vec::new(),
        n_evaluations,
    })
}

/// Best value of independent `(n0 + k)`-point maximin designs, `k = 0..=n_new`.
pub fn one_shot_baseline<R: Rng + ?Sized>(sim: &dyn Simulator, n0: usize, n_new: usize, rng: &mut R) -> Result<Trace> {
    if n0 < 2 {
        return Err(invalid("one-shot designs need at least two points"));
    }
    let d = sim.dim();
    let mut f_min_path = Vec::with_capacity(n_new + 1);
    let mut design_best = Vec::with_capacity(n_new + 1);
    let mut points = Vec::new();
    let mut n_evaluations = 0;
    for k in 0..=n_new {
        let n = n0 + k;
        let design = maximin_lhd(n, d, rng, default_sweeps(n))?;
        let mut evaluated = Vec::with_capacity(n);
        for row in design.rows() {
            evaluated.push(EvaluatedPoint {
                x: row.to_vec(),
                y: evaluate(sim, row)?,
                iteration: k,
            });
        }
        n_evaluations += n;
        let best = evaluated
            .iter()
            .min_by(|a, b| a.y.total_cmp(&b.y))
            .cloned()
            .expect("design is nonempty");
        f_min_path.push(best.y);
        design_best.push(best);
        points = evaluated;
    }
    Ok(Trace {
        method: "oneshot".to_string(),
        seed: None,
        kind: TraceKind::OneShot,
        n0,
        points,
        f_min_path,
        design_best,
        n_evaluations,
    })
}

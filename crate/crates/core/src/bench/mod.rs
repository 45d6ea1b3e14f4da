//! Replicated benchmarks: running the methods over seeded replicates,
//! summarizing running-best curves, and persisting them as CSV and SVG.

mod config;
mod plot;
mod table;

use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use config::{ExperimentConfig, Method};
pub use plot::{render_svg, svg_document};
pub use table::{read_csv, write_csv, ResultRow, ResultsTable};

use crate::error::{invalid, Error, Result};
use crate::seqopt::{one_shot_baseline, sequential_optimize, SeqConfig, Surrogate, Trace};
use crate::stats::{mean, median};
use crate::testbed::{get_simulator, Simulator};

/// `out[i] = min(ys[..=i])`.
pub fn running_best(ys: &[f64]) -> Result<Vec<f64>> {
    if ys.is_empty() {
        return Err(invalid("running_best needs at least one value"));
    }
    let mut best = f64::INFINITY;
    Ok(ys
        .iter()
        .map(|&y| {
            best = best.min(y);
            best
        })
        .collect())
}

/// Pointwise mean and median of the running best across replicates,
/// indexed by iteration `k = 0..=n_new`.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryCurve {
    pub method: String,
    pub n0: usize,
    pub mean: Vec<f64>,
    pub median: Vec<f64>,
}

impl SummaryCurve {
    pub fn from_paths(method: &str, n0: usize, paths: &[Vec<f64>]) -> Result<Self> {
        let len = paths
            .first()
            .map(Vec::len)
            .ok_or_else(|| invalid("no replicates to summarize"))?;
        if paths.iter().any(|p| p.len() != len) {
            return Err(invalid("replicate paths differ in length"));
        }
        let column = |k: usize| paths.iter().map(|p| p[k]).collect::<Vec<_>>();
        Ok(Self {
            method: method.to_string(),
            n0,
            mean: (0..len).map(|k| mean(&column(k))).collect(),
            median: (0..len).map(|k| median(&column(k))).collect(),
        })
    }

    pub fn final_median(&self) -> f64 {
        *self.median.last().unwrap_or(&f64::NAN)
    }

    pub fn final_mean(&self) -> f64 {
        *self.mean.last().unwrap_or(&f64::NAN)
    }
}

/// Summarizes traces of a single method.
pub fn summarize(traces: &[Trace]) -> Result<SummaryCurve> {
    let first = traces.first().ok_or_else(|| invalid("no traces to summarize"))?;
    let paths: Vec<Vec<f64>> = traces.iter().map(Trace::best_by_iteration).collect();
    SummaryCurve::from_paths(&first.method, first.n0, &paths)
}

/// One curve per method found in `table`, in order of first appearance.
/// `n0` is recovered from the evaluation count of iteration 0.
pub fn curves_from_table(table: &ResultsTable) -> Result<Vec<SummaryCurve>> {
    let paths = table.paths();
    let mut curves = Vec::new();
    let mut methods: Vec<&str> = Vec::new();
    for (m, _, _) in &paths {
        if !methods.contains(&m.as_str()) {
            methods.push(m);
        }
    }
    for m in methods {
        let n0 = table
            .rows
            .iter()
            .filter(|r| r.method == m && r.iteration == 0)
            .map(|r| r.n_evals)
            .max()
            .unwrap_or(0);
        let group: Vec<Vec<f64>> = paths
            .iter()
            .filter(|(pm, _, _)| pm == m)
            .map(|(_, _, p)| p.clone())
            .collect();
        curves.push(SummaryCurve::from_paths(m, n0, &group)?);
    }
    Ok(curves)
}

/// A replicate/method pair that produced no trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicateFailure {
    pub method: Method,
    pub replicate: usize,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub table: ResultsTable,
    /// Successful traces per method, in replicate order.
    pub traces: Vec<(Method, Vec<Trace>)>,
    pub failures: Vec<ReplicateFailure>,
    /// Where the CSV was written.
    pub csv_path: PathBuf,
}

impl ExperimentOutcome {
    pub fn traces_for(&self, method: Method) -> &[Trace] {
        self.traces
            .iter()
            .find(|(m, _)| *m == method)
            .map(|(_, t)| t.as_slice())
            .unwrap_or(&[])
    }

    pub fn curves(&self) -> Result<Vec<SummaryCurve>> {
        self.traces
            .iter()
            .filter(|(_, t)| !t.is_empty())
            .map(|(_, t)| summarize(t))
            .collect()
    }
}

/// Runs one method on replicate seed `seed`. Every method reseeds from
/// `seed`, so sequential methods draw the same initial design.
pub fn run_method(sim: &dyn Simulator, config: &ExperimentConfig, method: Method, seed: u64) -> Result<Trace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seq = |surrogate| SeqConfig {
        n0: config.n0,
        n_new: config.n_new,
        n_cand: config.n_cand,
        surrogate,
        maximin_sweeps: None,
    };
    let trace = match method {
        Method::Bart => sequential_optimize(
            sim,
            &seq(Surrogate::Bart {
                priors: config.bart_priors,
                config: config.bart_config,
            }),
            &mut rng,
        )?,
        Method::Gp => sequential_optimize(sim, &seq(Surrogate::Gp(config.gp.clone())), &mut rng)?,
        Method::OneShot => one_shot_baseline(sim, config.n0, config.n_new, &mut rng)?,
    };
    Ok(trace.with_seed(seed))
}

/// Runs every method on replicates `0..replicates` (seed `base_seed + r`),
/// writes `<output_dir>/<function>.csv` and returns the merged results.
/// Failed replicates are reported in `failures` and left out of the table.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome> {
    config.validate()?;
    let sim = get_simulator(&config.function)?;
    let sim: &dyn Simulator = sim.as_ref();

    let run_replicate = |r: usize| {
        let seed = config.base_seed.wrapping_add(r as u64);
        config
            .methods
            .iter()
            .map(|&m| (m, run_method(sim, config, m, seed)))
            .collect::<Vec<_>>()
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = config.workers {
        builder = builder.num_threads(w);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    // collect keeps replicate order whatever the completion order
    let results: Vec<Vec<(Method, Result<Trace>)>> =
        pool.install(|| (0..config.replicates).into_par_iter().map(run_replicate).collect());

    let mut table = ResultsTable::new(sim.dim());
    let mut traces: Vec<(Method, Vec<Trace>)> = config.methods.iter().map(|&m| (m, Vec::new())).collect();
    let mut failures = Vec::new();
    for (r, per_method) in results.into_iter().enumerate() {
        let seed = config.base_seed.wrapping_add(r as u64);
        for (m, res) in per_method {
            match res {
                Ok(trace) => {
                    table.push_trace(&trace, r, seed);
                    traces.iter_mut().find(|(tm, _)| *tm == m).unwrap().1.push(trace);
                }
                Err(e) => failures.push(ReplicateFailure {
                    method: m,
                    replicate: r,
                    seed,
                    message: e.to_string(),
                }),
            }
        }
    }

    std::fs::create_dir_all(&config.output_dir).map_err(|source| Error::Io {
        path: config.output_dir.clone(),
        source,
    })?;
    let csv_path = config.output_dir.join(format!("{}.csv", config.function));
    write_csv(&table, &csv_path)?;
    Ok(ExperimentOutcome {
        table,
        traces,
        failures,
        csv_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_best_examples() {
        assert_eq!(running_best(&[3.0, 1.0, 2.0]).unwrap(), vec![3.0, 1.0, 1.0]);
        assert_eq!(running_best(&[-1.0]).unwrap(), vec![-1.0]);
        assert_eq!(running_best(&[5.0, 4.0, 0.0]).unwrap(), vec![5.0, 4.0, 0.0]);
        assert!(running_best(&[]).is_err());
    }

    #[test]
    fn summary_examples() {
        let one = SummaryCurve::from_paths("bart", 3, &[vec![2.0, 1.0]]).unwrap();
        assert_eq!(one.mean, vec![2.0, 1.0]);
        assert_eq!(one.median, vec![2.0, 1.0]);

        let two = SummaryCurve::from_paths("bart", 3, &[vec![0.0], vec![2.0]]).unwrap();
        assert_eq!((two.mean[0], two.median[0]), (1.0, 1.0));

        let three = SummaryCurve::from_paths("bart", 3, &[vec![0.0], vec![0.0], vec![3.0]]).unwrap();
        assert_eq!((three.mean[0], three.median[0]), (1.0, 0.0));

        assert!(SummaryCurve::from_paths("bart", 3, &[vec![0.0], vec![0.0, 1.0]]).is_err());
        assert!(summarize(&[]).is_err());
    }
}

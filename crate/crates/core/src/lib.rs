//! Sequential design for global minimization of expensive deterministic
//! simulators.
//!
//! The main surrogate is a Bayesian sum-of-trees model ([`bart`]) fitted by
//! backfitting MCMC; its posterior draws at a random Latin hypercube of
//! candidate points feed a Monte-Carlo expected-improvement criterion
//! ([`seqopt`]). A plug-in Gaussian-process surrogate with closed-form
//! expected improvement ([`gp`]) and a one-shot maximin design serve as
//! baselines. [`bench`] runs replicated experiments over the closed-form
//! test functions in [`testbed`] and writes CSV tables and SVG plots.
//!
//! ```no_run
//! use rand::SeedableRng;
//! use rand_chacha::ChaCha8Rng;
//! use seqbart::seqopt::{sequential_optimize, SeqConfig};
//! use seqbart::testbed::get_simulator;
//!
//! let sim = get_simulator("gramacy1d").unwrap();
//! let config = SeqConfig::bart(10, 40, 1000);
//! let mut rng = ChaCha8Rng::seed_from_u64(1);
//! let trace = sequential_optimize(sim.as_ref(), &config, &mut rng).unwrap();
//! println!("best value found: {}", trace.best());
//! ```

// `!(a > b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bart;
pub mod bench;
pub mod design;
mod error;
pub mod gp;
pub mod seqopt;
pub mod stats;
pub mod testbed;

pub use error::{Error, Result};

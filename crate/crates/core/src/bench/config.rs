//! Flat `key = value` experiment configuration.

use std::path::{Path, PathBuf};

use crate::bart::{BartConfig, BartPriors};
use crate::error::{Error, Result};
use crate::gp::GpOptions;
use crate::testbed::get_simulator;

/// Methods a benchmark can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Bart,
    Gp,
    OneShot,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Bart => "bart",
            Method::Gp => "gp",
            Method::OneShot => "oneshot",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "bart" => Ok(Method::Bart),
            "gp" => Ok(Method::Gp),
            "oneshot" => Ok(Method::OneShot),
            other => Err(Error::Config(format!(
                "unknown method `{other}` (expected bart, gp or oneshot)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub function: String,
    pub methods: Vec<Method>,
    pub n0: usize,
    pub n_new: usize,
    pub n_cand: usize,
    pub replicates: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
    pub bart_priors: BartPriors,
    pub bart_config: BartConfig,
    pub gp: GpOptions,
    /// Replicates run concurrently; `None` uses all available cores.
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(function: &str, methods: &[Method], n0: usize, n_new: usize, n_cand: usize, replicates: usize) -> Self {
        Self {
            function: function.to_string(),
            methods: methods.to_vec(),
            n0,
            n_new,
            n_cand,
            replicates,
            base_seed: 1,
            output_dir: PathBuf::from("results"),
            bart_priors: BartPriors::default(),
            bart_config: BartConfig::default(),
            gp: GpOptions::default(),
            workers: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        get_simulator(&self.function).map_err(|e| Error::Config(e.to_string()))?;
        if self.methods.is_empty() {
            return cfg("at least one method is required".into());
        }
        if self.replicates == 0 {
            return cfg("replicates must be at least 1".into());
        }
        if self.n0 < 3 {
            return cfg("n0 must be at least 3".into());
        }
        if self.n_cand == 0 {
            return cfg("n_cand must be at least 1".into());
        }
        if self.workers == Some(0) {
            return cfg("workers must be at least 1".into());
        }
        self.bart_priors
            .validate()
            .and_then(|_| self.bart_config.validate())
            .map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::new("", &[], 0, 0, 0, 0);
        let mut seen_function = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Config(format!("line {}: invalid {what} `{value}`", lineno + 1));
            let int = || value.parse::<usize>().map_err(|_| bad(key));
            let real = || value.parse::<f64>().map_err(|_| bad(key));
            match key {
                "function" => {
                    c.function = value.to_string();
                    seen_function = true;
                }
                "methods" => {
                    c.methods = value
                        .split(',')
                        .filter(|s| !s.trim().is_empty())
                        .map(Method::parse)
                        .collect::<Result<_>>()?;
                }
                "n0" => c.n0 = int()?,
                "n_new" => c.n_new = int()?,
                "n_cand" => c.n_cand = int()?,
                "replicates" => c.replicates = int()?,
                "base_seed" => c.base_seed = value.parse().map_err(|_| bad(key))?,
                "output_dir" => c.output_dir = PathBuf::from(value),
                "workers" => c.workers = Some(int()?),
                "bart.m" => c.bart_priors.m = int()?,
                "bart.k" => c.bart_priors.k = real()?,
                "bart.n_iter" => c.bart_config.n_iter = int()?,
                "bart.burn_in" => c.bart_config.burn_in = int()?,
                "bart.thin" => c.bart_config.thin = int()?,
                "gp.nugget_floor" => c.gp.nugget_floor = real()?,
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        if !seen_function {
            return Err(Error::Config("missing `function`".into()));
        }
        c.validate()?;
        Ok(c)
    }
}

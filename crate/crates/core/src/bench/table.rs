//! Flat results table and its CSV form.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::error::{Error, Result};
use crate::seqopt::{Trace, TraceKind};

/// One evaluated point of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub method: String,
    pub replicate: usize,
    pub seed: u64,
    /// 0 for the initial design, `k` for the k-th addition (or the
    /// `(n0 + k)`-point design of the one-shot baseline).
    pub iteration: usize,
    pub n_evals: usize,
    pub x: Vec<f64>,
    pub y: f64,
    pub f_min: f64,
}

/// Rows of a benchmark in replicate, method, evaluation order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsTable {
    pub d: usize,
    pub rows: Vec<ResultRow>,
}

impl ResultsTable {
    pub fn new(d: usize) -> Self {
        Self { d, rows: Vec::new() }
    }

    /// Appends the rows of `trace`. Sequential traces give one row per
    /// evaluated point; one-shot traces give one row per design, holding
    /// that design's best point.
    pub fn push_trace(&mut self, trace: &Trace, replicate: usize, seed: u64) {
        let row = |iteration, n_evals, x: &[f64], y, f_min| ResultRow {
            method: trace.method.clone(),
            replicate,
            seed,
            iteration,
            n_evals,
            x: x.to_vec(),
            y,
            f_min,
        };
        match trace.kind {
            TraceKind::Sequential => {
                for (i, p) in trace.points.iter().enumerate() {
                    self.rows.push(row(p.iteration, i + 1, &p.x, p.y, trace.f_min_path[i]));
                }
            }
            TraceKind::OneShot => {
                for (k, p) in trace.design_best.iter().enumerate() {
                    self.rows.push(row(k, trace.n0 + k, &p.x, p.y, trace.f_min_path[k]));
                }
            }
        }
    }

    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = ["method", "replicate", "seed", "iteration", "n_evals"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        h.extend((1..=self.d).map(|i| format!("x_{i}")));
        h.push("y".into());
        h.push("f_min".into());
        h
    }

    /// Running best after each iteration for every (method, replicate),
    /// ordered by first appearance.
    pub fn paths(&self) -> Vec<(String, usize, Vec<f64>)> {
        let mut out: Vec<(String, usize, Vec<f64>)> = Vec::new();
        for r in &self.rows {
            let pos = match out.iter().position(|(m, rep, _)| *m == r.method && *rep == r.replicate) {
                Some(p) => p,
                None => {
                    out.push((r.method.clone(), r.replicate, Vec::new()));
                    out.len() - 1
                }
            };
            let path = &mut out[pos].2;
            if path.len() <= r.iteration {
                path.resize(r.iteration + 1, r.f_min);
            }
            // last row of an iteration carries its running best
            path[r.iteration] = r.f_min;
        }
        out
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `table` preceded by a `#` line holding the creation time.
pub fn write_csv(table: &ResultsTable, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    let stamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    writeln!(out, "# seqbart results, written at unix time {stamp}").map_err(io_err(path))?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(table.header()).map_err(csv_err(path))?;
        for r in &table.rows {
            let mut rec = vec![
                r.method.clone(),
                r.replicate.to_string(),
                r.seed.to_string(),
                r.iteration.to_string(),
                r.n_evals.to_string(),
            ];
            rec.extend(r.x.iter().map(|v| v.to_string()));
            rec.push(r.y.to_string());
            rec.push(r.f_min.to_string());
            w.write_record(&rec).map_err(csv_err(path))?;
        }
        w.flush().map_err(io_err(path))?;
    }
    out.flush().map_err(io_err(path))
}

pub fn read_csv(path: &Path) -> Result<ResultsTable> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut body = String::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(io_err(path))?;
        if !line.starts_with('#') {
            body.push_str(&line);
            body.push('\n');
        }
    }
    let mut rdr = csv::Reader::from_reader(body.as_bytes());
    let header = rdr.headers().map_err(csv_err(path))?.clone();
    let bad = |msg: String| Error::InvalidArgument(format!("{}: {msg}", path.display()));
    let d = header
        .len()
        .checked_sub(7)
        .ok_or_else(|| bad("too few columns".into()))?;
    let mut table = ResultsTable::new(d);
    if header.iter().collect::<Vec<_>>() != table.header() {
        return Err(bad("unexpected column layout".into()));
    }
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            field(i)
                .parse()
                .map_err(|_| bad(format!("row {}: bad number `{}`", line + 1, field(i))))
        };
        let int = |i: usize| -> Result<u64> {
            field(i)
                .parse()
                .map_err(|_| bad(format!("row {}: bad integer `{}`", line + 1, field(i))))
        };
        table.rows.push(ResultRow {
            method: field(0).to_string(),
            replicate: int(1)? as usize,
            seed: int(2)?,
            iteration: int(3)? as usize,
            n_evals: int(4)? as usize,
            x: (0..d).map(|a| num(5 + a)).collect::<Result<_>>()?,
            y: num(5 + d)?,
            f_min: num(6 + d)?,
        });
    }
    Ok(table)
}

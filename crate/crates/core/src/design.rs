//! Latin hypercube designs on the unit cube.
//!
//! A design with `n` points stratifies every axis into `n` equal intervals and
//! places exactly one point in each. [`maximin_lhd`] improves a random design
//! by within-column swaps that strictly increase the smallest interpoint
//! distance, and [`augment_corners`] appends the two extreme corners used to
//! seed the sequential search.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{invalid, Result};

/// `n` points in `[0,1]^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    d: usize,
    data: Vec<f64>,
}

impl DesignMatrix {
    pub fn empty(d: usize) -> Self {
        Self { d, data: Vec::new() }
    }

    pub fn from_rows(d: usize, rows: &[Vec<f64>]) -> Result<Self> {
        let mut m = Self::empty(d);
        for r in rows {
            m.push(r)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.d {
            return Err(invalid(format!(
                "row has dimension {}, design has {}",
                row.len(),
                self.d
            )));
        }
        if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(invalid(format!("coordinate {v} outside [0,1]")));
        }
        self.data.extend_from_slice(row);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.data.len().checked_div(self.d).unwrap_or(0)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.d.max(1))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.d + j]
    }

    fn swap_in_column(&mut self, a: usize, b: usize, j: usize) {
        self.data.swap(a * self.d + j, b * self.d + j);
    }

    /// True when every column places exactly one point in each of the `n` strata.
    pub fn is_latin_hypercube(&self) -> bool {
        let n = self.n();
        (0..self.d).all(|j| {
            let mut seen = vec![false; n];
            (0..n).all(|i| {
                let s = stratum(self.get(i, j), n);
                !std::mem::replace(&mut seen[s], true)
            })
        })
    }
}

fn stratum(x: f64, n: usize) -> usize {
    ((x * n as f64).floor() as usize).min(n - 1)
}

/// Where a point sits inside its stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Placement {
    #[default]
    UniformInStratum,
    StratumCenter,
}

/// Random Latin hypercube: each column is an independent uniform permutation of strata.
pub fn random_lhd<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R, placement: Placement) -> Result<DesignMatrix> {
    if n == 0 || d == 0 {
        return Err(invalid("latin hypercube needs n >= 1 and d >= 1"));
    }
    let mut data = vec![0.0; n * d];
    let mut perm: Vec<usize> = (0..n).collect();
    let nf = n as f64;
    for j in 0..d {
        perm.shuffle(rng);
        for (i, &s) in perm.iter().enumerate() {
            let offset = match placement {
                Placement::UniformInStratum => rng.random::<f64>(),
                Placement::StratumCenter => 0.5,
            };
            let mut x = (s as f64 + offset) / nf;
            // rounding can push the top of a stratum into the next one
            while x > 0.0 && stratum(x, n) > s {
                x = x.next_down();
            }
            data[i * d + j] = x;
        }
    }
    Ok(DesignMatrix { d, data })
}

/// Maximin LHD with uniform in-stratum placement. See [`maximin_lhd_with`].
pub fn maximin_lhd<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R, sweeps: usize) -> Result<DesignMatrix> {
    maximin_lhd_with(n, d, rng, sweeps, Placement::UniformInStratum)
}

/// Default number of improvement sweeps for an `n`-point design.
pub fn default_sweeps(n: usize) -> usize {
    2 * n
}

/// Starts from a random LHD and runs `sweeps` passes of column swaps.
///
/// Each pass visits every column and tries to swap the column value of a point
/// in the current closest pair with every other point, keeping the swap only
/// when the minimum pairwise distance strictly increases.
pub fn maximin_lhd_with<R: Rng + ?Sized>(
    n: usize,
    d: usize,
    rng: &mut R,
    sweeps: usize,
    placement: Placement,
) -> Result<DesignMatrix> {
    if n < 2 {
        return Err(invalid("maximin design needs at least two points"));
    }
    let mut design = random_lhd(n, d, rng, placement)?;
    let mut dist = PairDistances::new(&design);
    for _ in 0..sweeps {
        let mut improved = false;
        for j in 0..d {
            let (a, b) = dist.closest_pair();
            for crit in [a, b] {
                for other in 0..n {
                    if other == crit {
                        continue;
                    }
                    if dist.try_swap(&mut design, crit, other, j) {
                        improved = true;
                        break;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(design)
}

/// Squared-distance bookkeeping for swap evaluation.
struct PairDistances {
    n: usize,
    sq: Vec<f64>,
    min_sq: f64,
}

impl PairDistances {
    fn new(design: &DesignMatrix) -> Self {
        let n = design.n();
        let mut sq = vec![0.0; n * n];
        for a in 0..n {
            for b in a + 1..n {
                let v = sq_dist(design.row(a), design.row(b));
                sq[a * n + b] = v;
                sq[b * n + a] = v;
            }
        }
        let mut me = Self { n, sq, min_sq: 0.0 };
        me.min_sq = me.scan_min().0;
        me
    }

    fn scan_min(&self) -> (f64, usize, usize) {
        let mut best = (f64::INFINITY, 0, 1);
        for a in 0..self.n {
            for b in a + 1..self.n {
                let v = self.sq[a * self.n + b];
                if v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        best
    }

    fn closest_pair(&self) -> (usize, usize) {
        let (_, a, b) = self.scan_min();
        (a, b)
    }

    /// Every pair attaining the minimum must touch `a` or `b` for a swap of
    /// those two rows to be able to raise it.
    fn minimum_covered_by(&self, a: usize, b: usize) -> bool {
        for p in 0..self.n {
            if p == a || p == b {
                continue;
            }
            for q in p + 1..self.n {
                if q == a || q == b {
                    continue;
                }
                if self.sq[p * self.n + q] <= self.min_sq {
                    return false;
                }
            }
        }
        true
    }

    fn try_swap(&mut self, design: &mut DesignMatrix, a: usize, b: usize, j: usize) -> bool {
        if !self.minimum_covered_by(a, b) {
            return false;
        }
        design.swap_in_column(a, b, j);
        let n = self.n;
        let mut new_a = vec![0.0; n];
        let mut new_b = vec![0.0; n];
        for p in 0..n {
            if p != a {
                new_a[p] = sq_dist(design.row(a), design.row(p));
            }
            if p != b {
                new_b[p] = sq_dist(design.row(b), design.row(p));
            }
        }
        let changed_min = (0..n)
            .filter(|&p| p != a)
            .map(|p| new_a[p])
            .chain((0..n).filter(|&p| p != b).map(|p| new_b[p]))
            .fold(f64::INFINITY, f64::min);
        if changed_min <= self.min_sq {
            design.swap_in_column(a, b, j);
            return false;
        }
        for p in 0..n {
            if p != a {
                self.sq[a * n + p] = new_a[p];
                self.sq[p * n + a] = new_a[p];
            }
            if p != b {
                self.sq[b * n + p] = new_b[p];
                self.sq[p * n + b] = new_b[p];
            }
        }
        self.min_sq = self.scan_min().0;
        true
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Appends the all-zeros and all-ones corners.
pub fn augment_corners(design: &DesignMatrix) -> DesignMatrix {
    let mut out = design.clone();
    out.data.extend(std::iter::repeat_n(0.0, out.d));
    out.data.extend(std::iter::repeat_n(1.0, out.d));
    out
}

/// Smallest Euclidean distance over all pairs of points.
pub fn min_interpoint_distance(design: &DesignMatrix) -> Result<f64> {
    let n = design.n();
    if n < 2 {
        return Err(invalid("minimum distance needs at least two points"));
    }
    let mut best = f64::INFINITY;
    for a in 0..n {
        for b in a + 1..n {
            best = best.min(sq_dist(design.row(a), design.row(b)));
        }
    }
    Ok(best.sqrt())
}

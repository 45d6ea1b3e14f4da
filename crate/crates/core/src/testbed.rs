//! Closed-form test simulators exposed on the unit cube.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// A deterministic simulator over `[0,1]^d`.
pub trait Simulator: Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn evaluate(&self, x: &[f64]) -> Result<f64>;

    /// Native input box the unit cube is mapped onto.
    fn native_domain(&self) -> ScalingTransform {
        ScalingTransform::uniform(self.dim(), 0.0, 1.0).expect("valid unit box")
    }
}

/// Per-axis linear map between the unit cube and native coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingTransform {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ScalingTransform {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() || lower.iter().zip(&upper).any(|(l, u)| !(u > l)) {
            return Err(Error::InvalidArgument(
                "scaling bounds need upper > lower on every axis".into(),
            ));
        }
        Ok(Self { lower, upper })
    }

    pub fn uniform(d: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; d], vec![upper; d])
    }

    pub fn to_native(&self, unit: &[f64]) -> Vec<f64> {
        unit.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(u, (l, h))| l + (h - l) * u)
            .collect()
    }

    pub fn to_unit(&self, native: &[f64]) -> Vec<f64> {
        native
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .map(|(t, (l, h))| (t - l) / (h - l))
            .collect()
    }
}

fn check_domain(name: &str, x: &[f64], d: usize) -> Result<()> {
    if x.len() != d || x.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::Domain {
            function: name.to_string(),
            point: x.to_vec(),
        });
    }
    Ok(())
}

/// `sin(10 pi t) / (2t) + (t - 1)^4` with `t = 0.5 + 2x`.
pub fn gramacy_lee_1d(x: f64) -> Result<f64> {
    check_domain("gramacy1d", &[x], 1)?;
    let t = 0.5 + 2.0 * x;
    // sin(10 pi t) = sin(5 pi + 20 pi x) = -sin(20 pi x); reducing the
    // argument in units of pi keeps full relative accuracy near the roots
    Ok(-sin_pi(20.0 * x) / (2.0 * t) + (t - 1.0).powi(4))
}

/// `sin(pi v)` with exact argument reduction.
fn sin_pi(v: f64) -> f64 {
    let mut r = v % 2.0;
    if r > 1.0 {
        r -= 2.0;
    } else if r < -1.0 {
        r += 2.0;
    }
    if r > 0.5 {
        r = 1.0 - r;
    } else if r < -0.5 {
        r = -1.0 - r;
    }
    (PI * r).sin()
}

/// Location (unit scale) and value of the global minimum of [`gramacy_lee_1d`],
/// from a 10^6-point grid refined by golden-section search.
pub const GRAMACY_MIN_X: f64 = 0.024_281_722;
pub const GRAMACY_MIN_Y: f64 = -0.869_011_134_989_5;

/// Axis warp for the Rönkkönen function: a Bernstein polynomial with control points.
#[derive(Debug, Clone, PartialEq)]
pub struct RonkkonenParams {
    pub alpha: f64,
    pub control_points: [Vec<f64>; 2],
}

impl RonkkonenParams {
    pub fn standard() -> Self {
        Self {
            alpha: 0.8,
            control_points: [vec![0.0, 0.1, 0.2, 0.5, 1.0], vec![0.0, 0.5, 0.8, 0.9, 1.0]],
        }
    }
}

/// `sum_j C(n, j) P_j (1 - x)^(n - j) x^j` with `n = control_points.len() - 1`.
pub fn bernstein_warp(xi: f64, control_points: &[f64]) -> f64 {
    let n = control_points.len() - 1;
    let mut binom = 1.0;
    let mut acc = 0.0;
    for (j, p) in control_points.iter().enumerate() {
        acc += binom * p * (1.0 - xi).powi((n - j) as i32) * xi.powi(j as i32);
        binom = binom * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

pub fn ronkkonen_with(x: &[f64], params: &RonkkonenParams) -> Result<f64> {
    check_domain("ronkkonen2d", x, 2)?;
    let total: f64 = x
        .iter()
        .zip(&params.control_points)
        .map(|(&xi, p)| {
            let w = bernstein_warp(xi, p);
            (4.0 * PI * w).cos() + params.alpha * (8.0 * PI * w).cos()
        })
        .sum();
    Ok(0.25 * total)
}

pub fn ronkkonen_2d(x: &[f64]) -> Result<f64> {
    ronkkonen_with(x, &RonkkonenParams::standard())
}

/// Global minimum of [`ronkkonen_2d`]: each axis term bottoms out at
/// `cos(4 pi w) = -1/3.2`, giving `-0.95625` per axis.
pub const RONKKONEN_MIN_Y: f64 = -0.478_125;

/// `sum_i -sin(t_i) - 2 exp(-30 t_i^2)` with `t_i = -2 + 4 x_i`.
pub fn spike_4d(x: &[f64]) -> Result<f64> {
    check_domain("spike4d", x, 4)?;
    Ok(x.iter()
        .map(|&xi| {
            let t = -2.0 + 4.0 * xi;
            -t.sin() - 2.0 * (-30.0 * t * t).exp()
        })
        .sum())
}

pub const SPIKE_MIN_Y: f64 = -8.0;

struct Named {
    name: &'static str,
    dim: usize,
    f: fn(&[f64]) -> Result<f64>,
    native: (f64, f64),
}

impl Simulator for Named {
    fn name(&self) -> &str {
        self.name
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        (self.f)(x)
    }
    fn native_domain(&self) -> ScalingTransform {
        ScalingTransform::uniform(self.dim, self.native.0, self.native.1).expect("valid native box")
    }
}

fn gramacy_slice(x: &[f64]) -> Result<f64> {
    if x.len() != 1 {
        return Err(Error::Domain {
            function: "gramacy1d".into(),
            point: x.to_vec(),
        });
    }
    gramacy_lee_1d(x[0])
}

pub const SIMULATOR_NAMES: [&str; 3] = ["gramacy1d", "ronkkonen2d", "spike4d"];

/// Looks up a simulator by registry name.
pub fn get_simulator(name: &str) -> Result<Box<dyn Simulator>> {
    type Entry = (usize, fn(&[f64]) -> Result<f64>, (f64, f64));
    let (dim, f, native): Entry = match name {
        "gramacy1d" => (1, gramacy_slice, (0.5, 2.5)),
        "ronkkonen2d" => (2, ronkkonen_2d, (0.0, 1.0)),
        "spike4d" => (4, spike_4d, (-2.0, 2.0)),
        _ => {
            return Err(Error::NotFound {
                name: name.to_string(),
                valid: SIMULATOR_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    let name = SIMULATOR_NAMES.iter().find(|n| **n == name).unwrap();
    Ok(Box::new(Named { name, dim, f, native }))
}
